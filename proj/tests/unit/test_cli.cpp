#include <cli.hpp>
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = abho::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "abho_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("flow CSV") {
  const Result r = call({"flow", "--t0", "0", "--t1", "1", "--steps", "4", "--y", "1,0", "--eta", "0,2", "--flux-b", "0.5"});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"s", "x1", "x2", "xi1", "xi2", "h", "L"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 7);
    CHECK(std::stod(rows[i][5]) == doctest::Approx(1.625).epsilon(1e-14));
    CHECK(std::stod(rows[i][6]) == doctest::Approx(1.5).epsilon(1e-14));
  }
  // 17 significant digits round-trip the flow exactly
  const abho::Config cfg{0.1, 0.5, 1.0, 1.0, 0.1, 0};
  const auto st = abho::flow(0.25, {{1, 0}, {0, 2}}, cfg);
  CHECK(std::stod(rows[2][1]) == st.x.x1);
  CHECK(std::stod(rows[2][4]) == st.xi.x2);
}

TEST_CASE("labelled scalar outputs") {
  const Result a = call({"action", "--t", "1", "--y", "1,0", "--eta", "0.2,1", "--flux-b", "0.1"});
  REQUIRE(a.code == 0);
  CHECK(a.out.find("S=") == 0);
  CHECK(a.out.find("\nell=0\n") != std::string::npos);
  CHECK(a.out.find("\nlift=") != std::string::npos);
  const Result z = call({"zmatrix", "--t", "1", "--y", "1,0", "--eta", "0.2,1"});
  REQUIRE(z.code == 0);
  CHECK(z.out.find("sqrt_det_z=0.54030230586813977-0.8414709848078965") != std::string::npos);
  const Result s = call({"spectral", "--t", "1", "--x", "0.5,1", "--y", "1,0"});
  REQUIRE(s.code == 0);
  CHECK(s.out.find("tail_estimate=") != std::string::npos);
  const Result m = call({"mehler", "--t", "1", "--x", "0.5,1", "--y", "1,0", "--damping-B", "10"});
  REQUIRE(m.code == 0);
  CHECK(m.out.find("eta_star=") == 0);
}

TEST_CASE("kernel grid cardinality, config file and thread determinism") {
  const fs::path dir = scratch_dir();
  const fs::path cfg_path = dir / "c.cfg";
  std::ofstream(cfg_path) << "# coarse run\nalpha=0.1\nflux_b=0.05\nomega=1\ndamping_B=20\ncutoff_eps=0.01\norder_N=0\n";
  const fs::path k1 = dir / "k1.csv", k2 = dir / "k2.csv";
  const std::vector<std::string> base{"kernel", "--config", cfg_path.string(), "--t", "1", "--y", "1,0",
                                      "--xgrid", "0.5,2.5,41,0.5,2.5,41"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  REQUIRE(call(with({"-o", k1.string(), "--threads", "1"})).code == 0);
  REQUIRE(call(with({"-o", k2.string(), "--threads", "4"})).code == 0);
  const std::string text = slurp(k1);
  CHECK(text == slurp(k2));
  const auto rows = read_csv(text);
  REQUIRE(rows.size() == 1682);
  CHECK(rows[0] == std::vector<std::string>{"x1", "x2", "re", "im", "abs", "est_error", "n_points"});
  CHECK(rows[1][0] == "0.5");
  CHECK(std::stod(rows[2][1]) == doctest::Approx(0.55).epsilon(1e-15));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stol(rows[i][6]) > 0);
}

TEST_CASE("exit codes") {
  const Result missing = call({"kernel", "--t", "1", "--y", "1,0"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--xgrid") != std::string::npos);
  CHECK(missing.err.find("Usage") != std::string::npos);
  CHECK(call({}).code == 2);
  CHECK(call({"nonsense"}).code == 2);
  CHECK(call({"flow", "--t0", "0", "--t1", "1", "--y", "1", "--eta", "0,2"}).code == 2);
  CHECK(call({"flow", "--t0", "0", "--t1", "1", "--y", "1,0", "--eta", "0,2", "--damping-B", "0"}).code == 2);
  CHECK(call({"flow", "--t0", "0", "--t1", "1", "--y", "1,0", "--eta", "0,2", "--order-N", "1"}).code == 2);
  const Result domain = call({"spectral", "--t", "3.14159", "--x", "0.5,1", "--y", "1,0"});
  CHECK(domain.code == 3);
  CHECK(domain.err.find("NonDecayingPhase") != std::string::npos);
  const Result manifold = call({"action", "--t", "1", "--y", "1,0", "--eta", "0,0.1", "--flux-b", "0.1"});
  CHECK(manifold.code == 3);
  CHECK(manifold.err.find("CollisionManifold") != std::string::npos);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("convergence sweep") {
  const Result r = call({"convergence", "--alphas", "0.1,0.05", "--t", "1", "--x", "0.5,1", "--y", "1,0",
                         "--damping-B", "10", "--b-ratio", "0.5"});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].size() == 10);
  CHECK(rows[1][1] == "0.050000000000000003");
  CHECK(std::stod(rows[1][8]) < 0.1);
  CHECK(std::stod(rows[2][9]) < 0.1);
}

TEST_CASE("figure data") {
  const fs::path dir = scratch_dir() / "fig";
  fs::create_directories(dir);
  const Result r = call({"figure", "-o", dir.string(), "--flux-b", "0.2", "--steps", "500"});
  REQUIRE(r.code == 0);
  const auto col = read_csv(slurp(dir / "trajectory_collision.csv"));
  const auto ell = read_csv(slurp(dir / "trajectory_ellipse.csv"));
  REQUIRE(col.size() == 502);
  REQUIRE(ell.size() == 502);
  CHECK(col[0] == ell[0]);
  const auto& last = col.back();
  CHECK(std::hypot(std::stod(last[1]), std::stod(last[2])) < 1e-6);
  CHECK(std::abs(std::stod(last[6])) < 1e-12);
  double rmin = 1e300;
  for (std::size_t i = 1; i < ell.size(); ++i) rmin = std::min(rmin, std::hypot(std::stod(ell[i][1]), std::stod(ell[i][2])));
  CHECK(rmin > 0.1);
  CHECK(std::abs(std::stod(ell.back()[1]) - 1.0) < 1e-12);
}
