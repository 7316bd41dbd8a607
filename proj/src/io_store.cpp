#include "mgn/io_store.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <sstream>

#include <boost/crc.hpp>

#include "mgn/errors.hpp"

#ifndef MGN_VERSION
#define MGN_VERSION "unknown"
#endif

namespace fs = std::filesystem;

namespace mgn {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::trunc) {
  std::ofstream out(path, std::ios::binary | std::ios::out | mode);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void check_written(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::uint32_t file_crc(const fs::path& path, std::uintmax_t& bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  boost::crc_32_type crc;
  std::vector<char> buf(1 << 16);
  bytes = 0;
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = in.gcount();
    crc.process_bytes(buf.data(), static_cast<std::size_t>(got));
    bytes += static_cast<std::uintmax_t>(got);
  }
  return crc.checksum();
}

std::vector<std::string> data_files(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == kManifestName) continue;
    names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

std::string time_label(double t) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t);
  if (ec != std::errc()) return fmt17(t);
  return std::string(buf, ptr);
}

fs::path write_snapshot(const fs::path& dir, double t, const Field& zeta, const Field& w) {
  const fs::path path = dir / ("snap_t" + time_label(t) + ".csv");
  auto out = open_out(path);
  out << "x,zeta,w\n";
  const Grid& g = zeta.grid();
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    out << fmt17(g.node(j)) << ',' << fmt17(zeta[j]) << ',' << fmt17(w[j]) << '\n';
  }
  check_written(out, path);
  return path;
}

fs::path write_spectrum(const fs::path& dir, double t, const Field& zeta) {
  const fs::path path = dir / ("spec_t" + time_label(t) + ".csv");
  auto out = open_out(path);
  out << "k,abs_zeta_hat\n";
  const auto c = normalized_spectrum(zeta);
  const Grid& g = zeta.grid();
  for (std::size_t m = 0; m < c.size(); ++m) {
    out << fmt17(g.wavenumber(m)) << ',' << fmt17(std::abs(c[m])) << '\n';
  }
  check_written(out, path);
  return path;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw IoError("no column '" + name + "'");
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV '" + path.string() + "'");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  table.columns.resize(table.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= table.columns.size()) {
        throw IoError(path.string() + ": too many columns on line " + std::to_string(row));
      }
      double v = 0.0;
      const char* first = cell.data();
      const char* last = first + cell.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) {
        throw IoError(path.string() + ": bad number '" + cell + "' on line " +
                      std::to_string(row));
      }
      table.columns[col++].push_back(v);
    }
    if (col != table.columns.size()) {
      throw IoError(path.string() + ": short row on line " + std::to_string(row));
    }
  }
  return table;
}

DiagWriter::DiagWriter(const fs::path& path) : path_(path), out_(open_out(path)) {
  out_ << kDiagnosticsHeader << '\n';
  check_written(out_, path_);
}

void DiagWriter::write(const DiagnosticsRow& row) {
  out_ << format_row(row) << '\n';
  check_written(out_, path_);
}

void prepare_run_directory(const fs::path& dir, bool force) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  if (fs::exists(dir / kManifestName) && !force) {
    throw IoError("'" + dir.string() +
                  "' already holds a run (manifest.txt); pass --force to overwrite");
  }
  if (force) {
    // Stale snapshots from an earlier run would otherwise leak into the new manifest.
    for (const auto& name : data_files(dir)) {
      const bool ours = name == kDiagName || name == kConfigName ||
                        name.rfind("snap_t", 0) == 0 || name.rfind("spec_t", 0) == 0 ||
                        name.rfind("stability", 0) == 0 || name.rfind("admissibility", 0) == 0;
      if (ours) fs::remove(dir / name);
    }
    fs::remove(dir / kManifestName);
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  check_written(out, path);
}

void write_manifest(const fs::path& dir, const ManifestInfo& info) {
  std::ostringstream m;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  m << "version = " << MGN_VERSION << '\n'
    << "command = " << info.command << '\n'
    << "status = " << info.status << '\n'
    << "created = " << stamp << '\n'
    << "wall_seconds = " << fmt17(info.wall_seconds) << '\n';
  for (const auto& [k, v] : info.entries) m << k << " = " << v << '\n';
  for (const auto& name : data_files(dir)) {
    std::uintmax_t bytes = 0;
    const auto crc = file_crc(dir / name, bytes);
    char hex[16];
    std::snprintf(hex, sizeof hex, "%08x", static_cast<unsigned>(crc));
    m << "file " << name << " crc32=" << hex << " bytes=" << bytes << '\n';
  }
  write_text_file(dir / kManifestName, m.str());
}

std::vector<std::string> verify_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestName);
  if (!in) throw IoError("no manifest in '" + dir.string() + "'");
  std::vector<std::string> bad;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("file ", 0) != 0) continue;
    std::istringstream ss(line.substr(5));
    std::string name, crc_field;
    ss >> name >> crc_field;
    std::uintmax_t bytes = 0;
    char hex[16];
    try {
      std::snprintf(hex, sizeof hex, "%08x",
                    static_cast<unsigned>(file_crc(dir / name, bytes)));
    } catch (const IoError&) {
      bad.push_back(name);
      continue;
    }
    if (crc_field != std::string("crc32=") + hex) bad.push_back(name);
  }
  return bad;
}

}  // namespace mgn
