#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "rpspline/cli.hpp"
#include "rpspline/io.hpp"
#include "rpspline/simulate.hpp"

namespace fs = std::filesystem;
using namespace rpspline;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "robust-pspline");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("rpspline_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name), std::ios::binary) << text;
    return file(name);
  }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream f(path);
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("fit: three-row linear data is reproduced with full weights") {
  TempDir tmp;
  const auto in = tmp.write("line.csv", "x,y\n0,1\n1,3\n2,5\n");
  const auto out = tmp.file("line.json");
  const Run r = run({"fit", "--input", in, "--p", "2", "--q", "1", "--lambda", "0", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("sigma_hat\t") != std::string::npos);
  CHECK(r.out.find("converged\ttrue") != std::string::npos);
  const auto rows = read_csv(tmp.file("line_plot.csv"));
  REQUIRE(rows.size() == 4u);
  CHECK(rows[0] == std::vector<std::string>{"x", "y", "fitted", "residual", "weight", "weight_bucket"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::abs(std::stod(rows[i][2]) - std::stod(rows[i][1])) <= 1e-8);
    CHECK(rows[i][5] == "high");
  }
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j.contains("beta"));
}

TEST_CASE("fit: unparseable rows are skipped with a warning") {
  TempDir tmp;
  std::string csv = "y,x\n";
  for (int i = 0; i < 30; ++i) {
    csv += (i == 7 ? std::string("NaN") : std::to_string(0.5 * i)) + "," + std::to_string(i / 29.0) + "\n";
  }
  const auto in = tmp.write("d.csv", csv);
  const Run r = run({"fit", "--input", in, "--out", tmp.file("d.json"), "--plot", tmp.file("p.csv")});
  CHECK(r.code == 0);
  CHECK(r.err.find("1 row skipped") != std::string::npos);
  CHECK(read_csv(tmp.file("p.csv")).size() == 30u);
}

TEST_CASE("fit: gross outliers land in the low weight bucket") {
  TempDir tmp;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  std::string csv = "age,wage\n";
  for (int i = 0; i < 200; ++i) {
    const double x = 18 + 47.0 * i / 199.0;
    double y = 2.0 + 0.03 * x - 0.0003 * x * x + 0.1 * z(rng);
    if (i % 40 == 5) y += 5.0;
    csv += std::to_string(x) + "," + std::to_string(y) + "\n";
  }
  const auto in = tmp.write("wage.csv", csv);
  const Run r = run({"fit", "--input", in, "--x", "age", "--y", "wage", "--out", tmp.file("w.json")});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(tmp.file("w_plot.csv"));
  REQUIRE(rows.size() == 201u);
  int high = 0;
  for (int i = 0; i < 200; ++i) {
    if (i % 40 == 5) CHECK(rows[i + 1][5] == "low");
    high += rows[i + 1][5] == "high";
  }
  CHECK(high >= 150);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"fit"}).code == cli::kExitUsage);
  CHECK(run({"fit", "--input", tmp.file("missing.csv")}).code == cli::kExitUsage);
  const auto in = tmp.write("a.csv", "x,y\n0,1\n1,2\n2,3\n3,4\n4,5\n5,7\n");
  CHECK(run({"fit", "--input", in, "--y", "nope", "--out", tmp.file("o.json")}).code == cli::kExitUsage);
  CHECK(run({"fit", "--input", in, "--loss", "cauchy", "--out", tmp.file("o.json")}).code == cli::kExitUsage);
  CHECK(run({"fit", "--input", in, "--lambda", "abc", "--out", tmp.file("o.json")}).code == cli::kExitUsage);
  CHECK(run({"fit", "--input", in, "--q", "4", "--out", tmp.file("o.json")}).code == cli::kExitUsage);
  CHECK(run({"simulate", "--reps", "0", "--out", tmp.file("s.json")}).code == cli::kExitUsage);
  CHECK(run({"simulate", "--laws", "cauchy", "--out", tmp.file("s.json")}).code == cli::kExitUsage);
  CHECK(run({"simulate", "--bogus"}).code == cli::kExitUsage);
  // squared residuals overflow, so every GCV evaluation is infinite
  const auto sing = tmp.write("s.csv", "x,y\n0,1e200\n1,-1e200\n2,1e200\n3,-1e200\n4,1e200\n5,-1e200\n6,1e200\n7,-1e200\n");
  const Run bad = run({"fit", "--input", sing, "--out", tmp.file("s.json")});
  CHECK(bad.code == cli::kExitNumerical);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("simulate: identical runs give byte-identical JSON") {
  TempDir tmp;
  const std::vector<std::string> base{"simulate", "--functions", "f1", "--laws", "gaussian",
                                      "--reps", "2", "--n", "50", "--seed", "7"};
  auto a = base, b = base, c = base;
  a.insert(a.end(), {"--out", tmp.file("a.json")});
  b.insert(b.end(), {"--out", tmp.file("b.json")});
  c.insert(c.end(), {"--out", tmp.file("c.json"), "--workers", "4", "--format", "markdown"});
  const Run ra = run(a);
  REQUIRE(ra.code == 0);
  CHECK(ra.out.rfind("seed\t7\n", 0) == 0);
  CHECK(ra.out.find("f1\tgaussian\t") != std::string::npos);
  REQUIRE(run(b).code == 0);
  const Run rc = run(c);
  REQUIRE(rc.code == 0);
  CHECK(rc.out.find("| f1 | gaussian |") != std::string::npos);
  CHECK(slurp(tmp.file("a.json")) == slurp(tmp.file("b.json")));
  CHECK(slurp(tmp.file("a.json")) == slurp(tmp.file("c.json")));
  const auto j = nlohmann::json::parse(slurp(tmp.file("a.json")));
  CHECK(j["cells"].size() == 2u);
  CHECK(j["config"]["seed"] == 7);
}

TEST_CASE("predict round trip") {
  TempDir tmp;
  std::string csv = "x,y\n";
  std::vector<double> xs;
  for (int i = 0; i < 80; ++i) {
    const double x = i / 79.0;
    xs.push_back(x);
    csv += std::to_string(x) + "," + std::to_string(std::sin(6 * x) + 0.1 * std::cos(50 * x)) + "\n";
  }
  const auto in = tmp.write("t.csv", csv);
  REQUIRE(run({"fit", "--input", in, "--out", tmp.file("m.json")}).code == 0);
  const Run p = run({"predict", "--model", tmp.file("m.json"), "--input", in});
  REQUIRE(p.code == 0);
  std::stringstream ss(p.out);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "x,fitted");
  const auto plot = read_csv(tmp.file("m_plot.csv"));
  for (std::size_t i = 1; i < plot.size(); ++i) {
    REQUIRE(std::getline(ss, line));
    const double fitted = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::abs(fitted - std::stod(plot[i][2])) <= 1e-10);
  }
  const auto out_of_range = tmp.write("far.csv", "x\n2.5\n");
  CHECK(run({"predict", "--model", tmp.file("m.json"), "--input", out_of_range}).code == cli::kExitUsage);
  const auto garbage = tmp.write("g.json", "{not json");
  CHECK(run({"predict", "--model", garbage, "--input", in}).code == cli::kExitUsage);
}

TEST_CASE("csv reader") {
  std::istringstream in("\xEF\xBB\xBFx,y\r\n1,2\r\n,3\r\n4,abc\r\n5,6\r\n");
  const io::XyData d = io::read_xy_csv(in, "x", "y");
  CHECK(d.xs == std::vector<double>{1, 5});
  CHECK(d.ys == std::vector<double>{2, 6});
  CHECK(d.skipped == 2u);
  CHECK(std::string(io::weight_bucket(1.0)) == "high");
  CHECK(std::string(io::weight_bucket(0.5)) == "mid");
  CHECK(std::string(io::weight_bucket(0.33)) == "low");
  CHECK(std::string(io::weight_bucket(0.0)) == "low");
}
