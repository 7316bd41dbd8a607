#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "mgn/errors.hpp"
#include "mgn/io_store.hpp"

using namespace mgn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mgn_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("time labels") {
  CHECK(time_label(2.0) == "2");
  CHECK(time_label(0.5) == "0.5");
  CHECK(time_label(0.1) == "0.1");
}

TEST_CASE("snapshot round-trips bit-exactly") {
  const auto dir = scratch("snap");
  const Grid g(64, 4.0);
  std::mt19937_64 rng(1);
  const Field zeta = test::random_smooth(g, rng, 0.3);
  const Field w = test::random_smooth(g, rng, 1e-7);
  const auto path = write_snapshot(dir, 0.25, zeta, w);
  CHECK(path.filename() == "snap_t0.25.csv");
  const auto t = read_csv(path);
  CHECK(t.header == std::vector<std::string>{"x", "zeta", "w"});
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(t.column("x")[j] == g.node(j));
    CHECK(t.column("zeta")[j] == zeta[j]);
    CHECK(t.column("w")[j] == w[j]);
  }
  const auto rest = read_csv(write_snapshot(dir, 1.0, Field(g), Field(g)));
  for (double v : rest.column("zeta")) CHECK(v == 0.0);
  CHECK_THROWS_AS(rest.column("nope"), IoError);
}

TEST_CASE("spectrum files") {
  const auto dir = scratch("spec");
  const Grid g(64, 4.0);
  const double k = g.wavenumber(4);
  const Field s = Field::from_function(g, [&](double x) { return std::sin(k * x); });
  const auto t = read_csv(write_spectrum(dir, 3.0, s));
  CHECK(t.header == std::vector<std::string>{"k", "abs_zeta_hat"});
  REQUIRE(t.column("k").size() == 33);
  int nonzero = 0;
  for (std::size_t m = 0; m < 33; ++m) {
    if (t.column("abs_zeta_hat")[m] > 1e-12) ++nonzero;
  }
  CHECK(nonzero == 1);
  CHECK(t.column("abs_zeta_hat")[4] == doctest::Approx(0.5));
  CHECK(t.column("k")[4] == k);
  const auto rest = read_csv(write_spectrum(dir, 4.0, Field(g)));
  for (double v : rest.column("abs_zeta_hat")) CHECK(v == 0.0);
}

TEST_CASE("diag writer appends rows as they come") {
  const auto dir = scratch("diag");
  {
    DiagWriter w(dir / kDiagName);
    DiagnosticsRow r;
    r.t = 0.0;
    w.write(r);
    r.t = 0.5;
    r.H = 1.0 / 7.0;
    w.write(r);
    // Readable before the writer closes.
    const auto t = read_csv(dir / kDiagName);
    CHECK(t.column("t").size() == 2);
    CHECK(t.column("H")[1] == 1.0 / 7.0);
  }
}

TEST_CASE("manifest and overwrite protection") {
  const auto dir = scratch("manifest");
  prepare_run_directory(dir, false);
  write_text_file(dir / "config.txt", "gamma = 0.9\n");
  write_text_file(dir / "diag.csv", "t\n0\n");
  ManifestInfo info;
  info.command = "simulate";
  info.status = "completed";
  info.entries = {{"steps_accepted", "3"}};
  write_manifest(dir, info);
  CHECK(verify_manifest(dir).empty());

  std::ifstream in(dir / kManifestName);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text.find("file config.txt crc32=") != std::string::npos);
  CHECK(text.find("file diag.csv crc32=") != std::string::npos);
  CHECK(text.find("steps_accepted = 3") != std::string::npos);

  write_text_file(dir / "diag.csv", "t\n1\n");
  CHECK(verify_manifest(dir) == std::vector<std::string>{"diag.csv"});

  CHECK_THROWS_AS(prepare_run_directory(dir, false), IoError);
  write_text_file(dir / "snap_t9.csv", "x\n");
  prepare_run_directory(dir, true);
  CHECK_FALSE(fs::exists(dir / kManifestName));
  CHECK_FALSE(fs::exists(dir / "snap_t9.csv"));
}

TEST_CASE("I/O failures carry the path") {
  const Grid g(16, 1.0);
  try {
    write_snapshot("/nonexistent/dir", 1.0, Field(g), Field(g));
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir") != std::string::npos);
  }
  CHECK_THROWS_AS(read_csv("/nonexistent/file.csv"), IoError);
}
