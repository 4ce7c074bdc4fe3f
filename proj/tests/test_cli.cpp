#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "twm/error.hpp"

using namespace twm;

namespace {
int run(std::vector<const char*> args, std::string& out, std::string& err) {
  args.insert(args.begin(), "twm");
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(args.size()), args.data(), o, e);
  out = o.str();
  err = e.str();
  return code;
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("k = 0 counts primitive characters") {
    std::string out, err;
    REQUIRE(run({"kmoment", "--q", "101", "--k", "0", "--t", "0"}, out, err) == 0);
    CHECK(out.find("\"sum\": 99,") != std::string::npos);
    CHECK(err.find("threads:") != std::string::npos);
    CHECK(out.find("threads") == std::string::npos);
  }

  TEST_CASE("q ≡ 2 (mod 4) is rejected before any work") {
    std::string out, err;
    CHECK(run({"moment-compare", "--q", "102", "--t", "0", "--a", "1", "--b", "1"}, out, err) != 0);
    CHECK(err.find("2 (mod 4)") != std::string::npos);
    CHECK(out.empty());
    CHECK(run({"moment-compare", "--q", "101", "--a", "2", "--b", "4"}, out, err) != 0);
    CHECK(err.find("(a, b) = 1") != std::string::npos);
    CHECK(run({"kmoment", "--q", "101", "--out", "xml"}, out, err) != 0);
    CHECK(run({"bogus"}, out, err) != 0);
  }

  TEST_CASE("moment-compare emits one report, byte-stable across runs and thread counts") {
    std::string a, b, c, err;
    REQUIRE(run({"moment-compare", "--q", "101", "--t", "0", "--a", "1", "--b", "1", "--out", "json", "--threads", "1"}, a, err) == 0);
    REQUIRE(run({"moment-compare", "--q", "101", "--t", "0", "--a", "1", "--b", "1", "--out", "json", "--threads", "1"}, b, err) == 0);
    REQUIRE(run({"moment-compare", "--q", "101", "--t", "0", "--a", "1", "--b", "1", "--out", "json", "--threads", "3"}, c, err) == 0);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.find("\"form\": \"diagonal_limit\"") != std::string::npos);
    CHECK(a.find("\"provenance\"") != std::string::npos);
  }

  TEST_CASE("scan keeps going past invalid moduli") {
    std::string out, err;
    REQUIRE(run({"moment-scan", "--q", "101,102,103", "--t", "0"}, out, err) == 0);
    std::istringstream lines(out);
    std::string header, row;
    std::getline(lines, header);
    CHECK(header.rfind("status,q,", 0) == 0);
    CHECK(header.find("lhs_re,lhs_im") != std::string::npos);
    CHECK(header.find("provenance_build_id") != std::string::npos);
    int ok = 0, failed = 0;
    while (std::getline(lines, row)) (row.rfind("ok,", 0) == 0 ? ok : failed)++;
    CHECK(ok == 2);
    CHECK(failed == 1);
  }

  TEST_CASE("other subcommands") {
    std::string out, err;
    REQUIRE(run({"coeffs", "--limit", "200", "--count", "5"}, out, err) == 0);
    CHECK(out.find("\n2,-24,") != std::string::npos);
    REQUIRE(run({"chars", "--q", "8", "--out", "json"}, out, err) == 0);
    CHECK(out.find("\"primitive_count\": 2") != std::string::npos);
    REQUIRE(run({"lvalue", "--q", "7", "--s1-re", "2.5", "--s1-im", "0"}, out, err) == 0);
    CHECK(out.find("\"accepted\": true") != std::string::npos);
    REQUIRE(run({"weights", "--t", "1", "--count", "4", "--kind", "pair"}, out, err) == 0);
    CHECK(out.find("x,value_re,value_im,step_error") != std::string::npos);
    REQUIRE(run({"mollify", "--q", "101", "--k", "0.5"}, out, err) == 0);
    CHECK(out.find("\"prediction\"") != std::string::npos);
  }

  TEST_CASE("validation names the violated precondition") {
    cli::RunConfig c;
    c.subcommand = "mollify";
    c.q_list = {101};
    c.k = 0.0;
    CHECK_THROWS_WITH_AS(cli::validate(c), "--k must be positive", PreconditionError);
    c.k = 0.5;
    c.q_list = {200003};
    CHECK_THROWS_AS(cli::validate(c), PreconditionError);
  }
}
