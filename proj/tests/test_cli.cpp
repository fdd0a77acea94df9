#include "selfrep/io.hpp"
#include "selfrep/matrix.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

using namespace selfrep;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("selfrep-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

int runCli(const std::string& args) {
  const std::string cmd = std::string(SELFREP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("solve on the identity writes the identity back") {
  TempDir dir;
  const fs::path in = dir.path / "d.csv";
  writeMatrixCsv(in, Matrix::Identity(3, 3));
  const fs::path out = dir.path / "out";
  REQUIRE(runCli("solve --norm f --constraint exact --noise none --in " + in.string() +
                 " --out-dir " + out.string()) == 0);
  CHECK(maxAbsDiff(readMatrixCsv(out / "C.csv"), Matrix::Identity(3, 3)) <= 1e-14);
  CHECK(fs::exists(out / "D0.csv"));
  CHECK(fs::exists(out / "E.csv"));
  const std::string report = readTextFile(out / "report.txt");
  CHECK(report.find("k = 3") != std::string::npos);
  CHECK(report.find("[timings]") != std::string::npos);
}

TEST_CASE("boundary relaxed nuclear solve flags the branch") {
  TempDir dir;
  const fs::path in = dir.path / "d.csv";
  writeMatrixCsv(in, Matrix::Identity(3, 3));
  const fs::path out = dir.path / "out";
  REQUIRE(runCli("solve --norm nuc --constraint relaxed --gamma 1 --in " + in.string() +
                 " --out-dir " + out.string()) == 0);
  CHECK(maxAbs(readMatrixCsv(out / "C.csv")) == 0.0);
  const std::string report = readTextFile(out / "report.txt");
  CHECK(report.find("branch boundary") != std::string::npos);
}

TEST_CASE("validation failures exit 2") {
  TempDir dir;
  const fs::path in = dir.path / "d.csv";
  writeMatrixCsv(in, Matrix::Identity(2, 2));
  // laplacian noise has no closed form: solve refuses it
  CHECK(runCli("solve --norm f --constraint exact --noise lap --lambda 1 --in " + in.string() +
               " --out-dir " + (dir.path / "o1").string()) == 2);
  // missing lambda
  CHECK(runCli("solve --norm f --constraint exact --noise gauss --in " + in.string() +
               " --out-dir " + (dir.path / "o2").string()) == 2);
  // missing input file
  CHECK(runCli("solve --norm f --constraint exact --noise none --in " +
               (dir.path / "none.csv").string() + " --out-dir " + (dir.path / "o3").string()) == 2);
  // unknown flag
  CHECK(runCli("solve --wat 1") == 2);
  // zero matrix is rejected at solver entry
  const fs::path zero = dir.path / "z.csv";
  writeTextFile(zero, "0,0\n0,0\n");
  CHECK(runCli("solve --norm f --constraint exact --noise none --in " + zero.string() +
               " --out-dir " + (dir.path / "o4").string()) == 2);
}

TEST_CASE("alm command writes a trace") {
  TempDir dir;
  const fs::path in = dir.path / "d.csv";
  Matrix d = Matrix::Identity(6, 6) * 3.0;
  writeMatrixCsv(in, d);
  const fs::path out = dir.path / "out";
  REQUIRE(runCli("alm --norm f --constraint exact --noise lap --lambda 1 --in " + in.string() +
                 " --out-dir " + out.string()) == 0);
  const std::string trace = readTextFile(out / "trace.csv");
  CHECK(trace.rfind("iter,residual,alpha,k,objective\n", 0) == 0);
  const std::string report = readTextFile(out / "report.txt");
  CHECK(report.find("converged = true") != std::string::npos);
}

TEST_CASE("equiv audit passes on a random exact noise-free instance") {
  TempDir dir;
  const fs::path out = dir.path / "out";
  REQUIRE(runCli("equiv --norm f --constraint exact --noise none --rows 12 --cols 10 "
                 "--rank 4 --seed 3 --out-dir " +
                 out.string()) == 0);
  const std::string report = readTextFile(out / "report.txt");
  CHECK(report.find("status = FAIL") == std::string::npos);
  CHECK(report.find("exact-none/pinv-vs-shape") != std::string::npos);
}

TEST_CASE("generate honors the subspace grammar") {
  TempDir dir;
  const fs::path out = dir.path / "out";
  REQUIRE(runCli("generate --ambient 8 --subspaces 2:5,2:7 --noise-model gauss:0.01 "
                 "--seed 11 --out-dir " +
                 out.string()) == 0);
  const Matrix data = readMatrixCsv(out / "data.csv");
  CHECK(data.rows() == 8);
  CHECK(data.cols() == 12);
  CHECK(readLabelsCsv(out / "labels.csv").size() == 12);
}

TEST_CASE("bench produces the grid csv") {
  TempDir dir;
  const fs::path out = dir.path / "out";
  REQUIRE(runCli("bench --sizes 8,12 --reps 1 --max-iter 40 --seed 1 --out-dir " +
                 out.string()) == 0);
  const std::string csv = readTextFile(out / "bench.csv");
  CHECK(csv.rfind("m,n,method,median_ms\n", 0) == 0);
  CHECK(csv.find("closed-form-noise-free") != std::string::npos);
  CHECK(csv.find("alm-laplacian") != std::string::npos);
}

TEST_SUITE_END();
