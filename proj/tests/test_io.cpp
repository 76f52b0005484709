// Apache License, Version 2.0, refer to LICENSE.txt
#include "doctest.h"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghsbp/evaluation.hpp"
#include "ghsbp/io.hpp"

using ghsbp::format_double;
using ghsbp::Matrix;

namespace {

namespace fs = std::filesystem;

// Fresh scratch directory under the build tree working directory.
fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "ghsbp_io_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

}  // namespace

TEST_CASE("format_double produces shortest round-tripping decimals") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-3.0) == "-3");
  CHECK(format_double(0.0) == "0");

  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345678901234.5, 2.5, 1e308,
                   5e-324, -0.0625, 0.40792747774941959}) {
    const std::string s = format_double(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CAPTURE(s);
    CHECK(back == v);
  }
}

TEST_CASE("matrix CSV round trip with comments and labels") {
  const fs::path path = scratch_dir() / "m.csv";
  const Matrix m = {{0.1, 1.0 / 3.0}, {1e-300, 12345678901234.5}};
  ghsbp::write_matrix_csv(path.string(), m, {"hello", "world"});

  const std::string text = slurp(path);
  CHECK(text.rfind("# hello\n# world\ns0,s1\n", 0) == 0);

  const Matrix back = ghsbp::read_matrix_csv(path.string());
  REQUIRE(back.size() == 2);
  REQUIRE(back[0].size() == 2);
  CHECK(back[0][0] == 0.1);
  CHECK(back[0][1] == 1.0 / 3.0);
  CHECK(back[1][0] == 1e-300);
  CHECK(back[1][1] == 12345678901234.5);

  const Matrix ragged = {{1.0, 2.0}, {3.0}};
  CHECK_THROWS_AS(ghsbp::write_matrix_csv((scratch_dir() / "r.csv").string(),
                                          ragged, {}),
                  std::invalid_argument);
  const Matrix empty;
  CHECK_THROWS_AS(ghsbp::write_matrix_csv((scratch_dir() / "e.csv").string(),
                                          empty, {}),
                  std::invalid_argument);
}

TEST_CASE("read_matrix_csv reports 1-based line numbers on bad input") {
  const fs::path bad = scratch_dir() / "bad.csv";
  spit(bad, "# comment\ns0,s1\n0.5,abc\n");
  try {
    (void)ghsbp::read_matrix_csv(bad.string());
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find(":3:") != std::string::npos);  // the offending line
    CHECK(msg.find(bad.string()) != std::string::npos);
  }

  const fs::path jag = scratch_dir() / "jag.csv";
  spit(jag, "s0,s1\n0.5,0.5\n0.25\n");
  CHECK_THROWS_AS((void)ghsbp::read_matrix_csv(jag.string()),
                  std::runtime_error);

  const fs::path nothing = scratch_dir() / "empty.csv";
  spit(nothing, "");
  CHECK_THROWS_AS((void)ghsbp::read_matrix_csv(nothing.string()),
                  std::runtime_error);

  CHECK_THROWS_AS((void)ghsbp::read_matrix_csv(
                      (scratch_dir() / "missing.csv").string()),
                  std::runtime_error);
}

TEST_CASE("sequence round trip, comment skipping, and errors") {
  const fs::path path = scratch_dir() / "seq.txt";
  const std::vector<std::int64_t> states = {0, 3, 1, 0, 12, 7};
  ghsbp::write_sequence(path.string(), states, {"a chain"});
  CHECK(slurp(path).rfind("# a chain\n0\n3\n", 0) == 0);
  CHECK(ghsbp::read_sequence(path.string()) == states);

  const fs::path gaps = scratch_dir() / "gaps.txt";
  spit(gaps, "# head\n\n4\n\n# mid\n9\n");
  CHECK(ghsbp::read_sequence(gaps.string()) ==
        std::vector<std::int64_t>{4, 9});

  const fs::path neg = scratch_dir() / "neg.txt";
  spit(neg, "3\n-1\n");
  try {
    (void)ghsbp::read_sequence(neg.string());
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }

  const fs::path junk = scratch_dir() / "junk.txt";
  spit(junk, "12x\n");
  CHECK_THROWS_AS((void)ghsbp::read_sequence(junk.string()),
                  std::runtime_error);

  const fs::path nothing = scratch_dir() / "none.txt";
  spit(nothing, "# only comments\n\n");
  CHECK_THROWS_AS((void)ghsbp::read_sequence(nothing.string()),
                  std::runtime_error);
}

TEST_CASE("reports CSV has the documented column layout") {
  ghsbp::EvalReport mle;
  mle.method = ghsbp::Method::MLE;
  mle.mae_times_100 = 1.5;
  mle.d = 4;
  mle.chain_length = 100;
  mle.seed = 7;

  ghsbp::EvalReport gh;
  gh.method = ghsbp::Method::GHSBP;
  gh.hyperparams_used = ghsbp::HyperTriple{3.0, 1.0, 10.0};
  gh.mae_times_100 = 0.25;
  gh.d = 4;
  gh.chain_length = 100;
  gh.seed = 7;

  const fs::path path = scratch_dir() / "reports.csv";
  ghsbp::write_reports_csv(path.string(), {mle, gh}, {"title"});

  CHECK(slurp(path) ==
        "# title\n"
        "method,alpha,beta,b0,mae_times_100,d,chain_length,seed\n"
        "MLE,,,,1.5,4,100,7\n"
        "GHSBP,3,1,10,0.25,4,100,7\n");
}

TEST_CASE("write_text emits one line per entry") {
  const fs::path path = scratch_dir() / "t.txt";
  ghsbp::write_text(path.string(), {"alpha: 1", "beta: 2"});
  CHECK(slurp(path) == "alpha: 1\nbeta: 2\n");
}
