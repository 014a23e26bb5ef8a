#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "hopi/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "hopi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = hopi::cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check exit codes") {
    CHECK(run({"check", "a(X).(0 | a(X).0)", "a(X).0 | a(X).0"}).code == hopi::cli::kEqual);
    CHECK(run({"check", "a!(0)", "b!(0)"}).code == hopi::cli::kDifferent);
    CHECK(run({"check", "--mode", "both", "a!(0) | 0", "a!(0)"}).code == hopi::cli::kEqual);
    CHECK(run({"oracle", "a!(0)", "b!(0)"}).code == hopi::cli::kDifferent);
    Run bad = run({"check", "a!(0", "0"});
    CHECK(bad.code == hopi::cli::kError);
    CHECK(bad.err.find("1:") != std::string::npos);
    CHECK(run({"check", "only-one"}).code == hopi::cli::kError);
    CHECK(run({"check", "--mode", "slow", "0", "0"}).code == hopi::cli::kError);
  }

  TEST_CASE("free variables on the command line") {
    CHECK(run({"--free", "X:proc", "check", "X | 0", "X"}).code == hopi::cli::kEqual);
    CHECK(run({"--free", "X:proc", "check", "X<0>", "0"}).code == hopi::cli::kError);
    CHECK(run({"--free", "F:proc->proc", "check", "F<0 | 0>", "F<0>"}).code == hopi::cli::kEqual);
  }

  TEST_CASE("json report") {
    Run r = run({"--json", "check", "--mode", "both", "a!(<Y>0)", "a!(<y>0)"});
    CHECK(r.code == hopi::cli::kDifferent);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "check");
    CHECK(j["equal"] == false);
    CHECK(j["inputs"].size() == 2);
    CHECK(j["normal_forms"].size() == 2);
    CHECK(j["distinguisher"][0]["clause"] == 4);
    CHECK(j.contains("time_ms"));
  }

  TEST_CASE("batch mode") {
    Run r = run({"check", "--batch"}, "0 ;; 0 | 0\n\n  a!(0) ;; b!(0)  \nbroken\n");
    CHECK(r.code == hopi::cli::kError);
    std::istringstream lines(r.out);
    std::string first, second, third;
    std::getline(lines, first);
    std::getline(lines, second);
    std::getline(lines, third);
    CHECK(first == "bisimilar");
    CHECK(second == "not bisimilar");
    Run ok = run({"--json", "check", "--batch"}, "0 ;; 0\na!(0) ;; a!(0)\n");
    CHECK(ok.code == hopi::cli::kEqual);
    CHECK(std::count(ok.out.begin(), ok.out.end(), '\n') == 2);
  }

  TEST_CASE("normal form, dump, trace and primes") {
    Run nf = run({"nf", "(<X>(X | X))<a!(0)>"});
    CHECK(nf.out.rfind("par[out(a^O)[zero], out(a^O)[zero]]\n", 0) == 0);
    Run dump = run({"--dump-tree", "nf", "a!(0)"});
    CHECK(dump.out.find("out a") != std::string::npos);
    Run tr = run({"--max-steps", "1", "trace", "a!(0) | a(X).X"});
    CHECK(tr.code == 0);
    CHECK(std::count(tr.out.begin(), tr.out.end(), '\n') == 4);
    Run tau = run({"trace", "--tau-only", "a!(0) | a(X).X"});
    CHECK(std::count(tau.out.begin(), tau.out.end(), '\n') == 2);
    Run pr = run({"primes", "a(X).(0 | a(X).0)"});
    CHECK(std::count(pr.out.begin(), pr.out.end(), '\n') == 2);
  }

  TEST_CASE("selftest and bench") {
    Run st = run({"selftest", "--max-nodes", "3", "--random", "20"});
    CHECK(st.code == hopi::cli::kEqual);
    CHECK(st.out.find("disagreements 0") != std::string::npos);
    Run b = run({"bench", "--sizes", "100,1000", "--reps", "1"});
    CHECK(b.code == 0);
    CHECK(b.out.rfind("n,time_ms,nodes,verdict_count\n", 0) == 0);
    CHECK(std::count(b.out.begin(), b.out.end(), '\n') == 3);
  }
}
