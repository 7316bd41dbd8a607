#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "mgn/diagnostics.hpp"
#include "mgn/spectral.hpp"

namespace mgn {

/// Shortest round-trip decimal form of t, as used in file names.
std::string time_label(double t);

/// Writes `snap_t<t>.csv` with columns x,zeta,w at 17 significant digits.
std::filesystem::path write_snapshot(const std::filesystem::path& dir, double t,
                                     const Field& zeta, const Field& w);

/// Writes `spec_t<t>.csv` with columns k,abs_zeta_hat over m = 0..n/2.
std::filesystem::path write_spectrum(const std::filesystem::path& dir, double t,
                                     const Field& zeta);

/// Columns of a numeric CSV file with a one-line header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

/// Incremental diag.csv writer; every row is flushed as it is written.
class DiagWriter {
 public:
  explicit DiagWriter(const std::filesystem::path& path);
  void write(const DiagnosticsRow& row);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Run metadata recorded in manifest.txt.
struct ManifestInfo {
  std::string command;
  std::string status;
  double wall_seconds = 0.0;
  /// Extra `key = value` lines (integrator statistics and the like).
  std::vector<std::pair<std::string, std::string>> entries;
};

/// Creates `dir` if needed. Throws IoError if it already holds a manifest
/// and `force` is false.
void prepare_run_directory(const std::filesystem::path& dir, bool force);

void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Writes manifest.txt with a CRC-32 line for every other regular file in `dir`.
void write_manifest(const std::filesystem::path& dir, const ManifestInfo& info);

/// Files whose CRC no longer matches the manifest (empty when intact).
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

inline constexpr const char* kManifestName = "manifest.txt";
inline constexpr const char* kDiagName = "diag.csv";
inline constexpr const char* kConfigName = "config.txt";

}  // namespace mgn
