#include "hopi/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "hopi/bisim.hpp"
#include "hopi/corpus.hpp"
#include "hopi/normalizer.hpp"
#include "hopi/parser.hpp"
#include "hopi/semantics.hpp"

namespace hopi::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Options {
  bool json = false;
  std::string free;
  int max_steps = 3;
  std::uint64_t seed = 1;
  bool dump_tree = false;
  std::string mode = "fast";
  bool batch = false;
  bool tau_only = false;
  std::size_t max_nodes = 5;
  std::size_t random = 200;
  std::vector<std::size_t> sizes{1000, 10000, 100000};
  int reps = 3;
  std::vector<std::string> terms;
};

json distinguisher_json(const std::vector<DistinguisherStep>& steps) {
  json arr = json::array();
  for (const auto& s : steps)
    arr.push_back({{"clause", s.clause}, {"side", s.from_left ? "left" : "right"}, {"observation", s.observation}});
  return arr;
}

class Runner {
 public:
  Runner(const Options& o, std::istream& in, std::ostream& out)
      : o_(o), in_(in), out_(out), ctx_(parse_sort_context(o.free)) {}

  Term read(const std::string& src) { return parse(SourceTerm{src, ctx_}); }

  // One pair; fills `report` and returns the exit code.
  int check_pair(const std::string& ps, const std::string& qs, const std::string& mode, json& report) {
    Term p = read(ps), q = read(qs);
    report["command"] = "check";
    report["mode"] = mode;
    report["inputs"] = {ps, qs};
    auto t0 = Clock::now();
    std::optional<Verdict> fast, slow;
    std::size_t nodes = 0;
    if (mode == "fast" || mode == "both") {
      NormalizerSession s;
      fast = s.nf_equal(p, q);
      nodes = s.interned_count();
    }
    if (mode == "oracle" || mode == "both") slow = Oracle().check(p, q);
    report["time_ms"] = ms_since(t0);
    if (fast) {
      report["nodes"] = nodes;
      report["normal_forms"] = {fast->normal_forms->first, fast->normal_forms->second};
    }
    if (slow && !slow->equal) report["distinguisher"] = distinguisher_json(slow->distinguisher);
    if (fast && slow && fast->equal != slow->equal) {
      report["equal"] = nullptr;
      report["disagreement"] = {{"fast", fast->equal}, {"oracle", slow->equal}};
      return kDisagreement;
    }
    bool eq = fast ? fast->equal : slow->equal;
    report["equal"] = eq;
    return eq ? kEqual : kDifferent;
  }

  void print_check(const json& r) {
    if (o_.json) return;
    if (r.contains("disagreement")) {
      out_ << "disagreement: fast says " << (r["disagreement"]["fast"].get<bool>() ? "bisimilar" : "not bisimilar")
           << ", oracle says " << (r["disagreement"]["oracle"].get<bool>() ? "bisimilar" : "not bisimilar") << "\n";
      return;
    }
    out_ << (r["equal"].get<bool>() ? "bisimilar" : "not bisimilar") << "\n";
    if (r["equal"].get<bool>()) return;
    if (r.contains("normal_forms"))
      out_ << "  nf(left):  " << r["normal_forms"][0].get<std::string>() << "\n"
           << "  nf(right): " << r["normal_forms"][1].get<std::string>() << "\n";
    if (r.contains("distinguisher"))
      for (const auto& s : r["distinguisher"])
        out_ << "  clause " << s["clause"].get<int>() << " (" << s["side"].get<std::string>()
             << "): " << s["observation"].get<std::string>() << "\n";
  }

  int check(const std::string& mode) {
    if (!o_.batch) {
      if (o_.terms.size() != 2) throw Error("check needs two terms (or --batch)");
      json r;
      int code = check_pair(o_.terms[0], o_.terms[1], mode, r);
      if (o_.json) out_ << r.dump() << "\n";
      else print_check(r);
      return code;
    }
    json results = json::array();
    int worst = kEqual;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in_, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto sep = line.find(";;");
      json r;
      int code;
      try {
        if (sep == std::string::npos) throw Error("expected 'P ;; Q'");
        code = check_pair(trim(line.substr(0, sep)), trim(line.substr(sep + 2)), mode, r);
      } catch (const Error& e) {
        r = {{"command", "check"}, {"line", lineno}, {"error", e.what()}};
        code = kError;
        if (!o_.json) out_ << "error (line " << lineno << "): " << e.what() << "\n";
      }
      if (code != kError && !o_.json) print_check(r);
      if (o_.json) out_ << r.dump() << "\n";
      results.push_back(r);
      worst = std::max(worst, code);
    }
    return worst;
  }

  int nf() {
    if (o_.terms.size() != 1) throw Error("nf needs one term");
    Term t = read(o_.terms[0]);
    NormalizerSession s;
    auto t0 = Clock::now();
    const TreeNode* root = s.nf(t);
    double ms = ms_since(t0);
    std::string term_text = print(s.to_term(root));
    std::ostringstream dump;
    if (o_.dump_tree) s.dump(dump, root);
    if (o_.json) {
      json r{{"command", "nf"}, {"input", o_.terms[0]}, {"tree", s.print(root)}, {"term", term_text},
             {"time_ms", ms}, {"nodes", s.interned_count()}};
      if (o_.dump_tree) r["dump"] = dump.str();
      out_ << r.dump() << "\n";
    } else {
      out_ << s.print(root) << "\n" << term_text << "\n";
      if (o_.dump_tree) out_ << dump.str();
    }
    return kEqual;
  }

  json trace_tree(const Term& t, int depth) {
    json node{{"term", print(t)}};
    if (depth <= 0) return node;
    json steps = json::array();
    for (const auto& tr : transitions(t)) {
      if (o_.tau_only && tr.action.kind != Action::Kind::Tau) continue;
      steps.push_back({{"action", tr.action.to_string()}, {"target", trace_tree(tr.target, depth - 1)}});
    }
    node["steps"] = steps;
    return node;
  }

  void print_trace(const json& node, int indent) {
    if (!node.contains("steps")) return;
    for (const auto& s : node["steps"]) {
      out_ << std::string(indent, ' ') << "--" << s["action"].get<std::string>() << "--> "
           << s["target"]["term"].get<std::string>() << "\n";
      print_trace(s["target"], indent + 2);
    }
  }

  int trace() {
    if (o_.terms.size() != 1) throw Error("trace needs one term");
    json tree = trace_tree(read(o_.terms[0]), o_.max_steps);
    if (o_.json) {
      out_ << json{{"command", "trace"}, {"input", o_.terms[0]}, {"max_steps", o_.max_steps}, {"tree", tree}}.dump()
           << "\n";
    } else {
      out_ << tree["term"].get<std::string>() << "\n";
      print_trace(tree, 2);
    }
    return kEqual;
  }

  int primes() {
    if (o_.terms.size() != 1) throw Error("primes needs one term");
    std::vector<std::string> fs;
    for (const Term& f : prime_factors(read(o_.terms[0]))) fs.push_back(print(f));
    if (o_.json) out_ << json{{"command", "primes"}, {"input", o_.terms[0]}, {"factors", fs}}.dump() << "\n";
    else
      for (const auto& f : fs) out_ << f << "\n";
    return kEqual;
  }

  int selftest() {
    auto t0 = Clock::now();
    EnumerationOptions eo;
    eo.max_nodes = o_.max_nodes;
    std::vector<Term> all = enumerate_terms(eo);

    NormalizerSession s;
    Oracle oracle;
    std::vector<Term> reps;
    std::vector<const TreeNode*> nfs;
    std::vector<Oracle::Handle> handles;
    std::size_t disagreements = 0, pairs = 0, equal_pairs = 0;
    std::vector<json> examples;
    auto record = [&](const Term& p, const Term& q, bool fast, bool slow) {
      ++disagreements;
      if (examples.size() < 10) examples.push_back({{"left", print(p)}, {"right", print(q)}, {"fast", fast}, {"oracle", slow}});
    };

    // Congruent variants are equal for the oracle; check each against its class.
    std::map<Oracle::Handle, std::size_t> rep_of;
    for (const Term& t : all) {
      Oracle::Handle h = oracle.prepare(t);
      const TreeNode* n = s.nf(t);
      auto [it, inserted] = rep_of.emplace(h, reps.size());
      if (inserted) {
        reps.push_back(t);
        nfs.push_back(n);
        handles.push_back(h);
      } else if (nfs[it->second] != n) {
        record(reps[it->second], t, false, true);
      }
    }
    for (std::size_t i = 0; i < reps.size(); ++i) {
      for (std::size_t j = i + 1; j < reps.size(); ++j) {
        bool fast = nfs[i] == nfs[j];
        bool slow = oracle.bisimilar(handles[i], handles[j]);
        ++pairs;
        equal_pairs += slow;
        if (fast != slow) record(reps[i], reps[j], fast, slow);
      }
    }

    RandomTerms gen(o_.seed);
    std::size_t random_pairs = 0;
    for (std::size_t k = 0; k < o_.random; ++k) {
      Term p = gen.process();
      Term q = gen.uniform(0, 1) ? gen.process() : s.to_term(s.nf(p));
      bool fast = s.nf(p) == s.nf(q);
      bool slow = oracle.bisimilar(p, q);
      ++random_pairs;
      if (fast != slow) record(p, q, fast, slow);
    }

    json r{{"command", "selftest"},   {"max_nodes", o_.max_nodes}, {"terms", all.size()},
           {"classes", reps.size()},   {"pairs", pairs},           {"equal_pairs", equal_pairs},
           {"random_pairs", random_pairs}, {"seed", o_.seed},       {"disagreements", disagreements},
           {"examples", examples},     {"time_ms", ms_since(t0)}};
    if (o_.json) {
      out_ << r.dump() << "\n";
    } else {
      out_ << "terms " << all.size() << ", classes " << reps.size() << ", class pairs " << pairs << " ("
           << equal_pairs << " bisimilar), random pairs " << random_pairs << "\n"
           << "disagreements " << disagreements << "\n";
      for (const auto& e : examples)
        out_ << "  " << e["left"].get<std::string>() << " ;; " << e["right"].get<std::string>() << "\n";
    }
    return disagreements == 0 ? kEqual : kDisagreement;
  }

  int bench() {
    if (o_.json) out_ << "[";
    else out_ << "n,time_ms,nodes,verdict_count\n";
    bool first = true;
    for (std::size_t n : o_.sizes) {
      BenchPair b = synthesize_bench(n, o_.seed);
      double best = 0;
      std::size_t verdicts = 0;
      for (int r = 0; r < std::max(1, o_.reps); ++r) {
        NormalizerSession s;
        auto t0 = Clock::now();
        bool eq = s.nf_equal(b.lhs, b.rhs).equal;
        double ms = ms_since(t0);
        if (r == 0 || ms < best) best = ms;
        verdicts += eq;
      }
      NormalizerSession space;
      space.nf(b.lhs);
      if (o_.json) {
        out_ << (first ? "" : ",")
             << json{{"n", b.lhs_nodes}, {"time_ms", best}, {"nodes", space.interned_count()}, {"verdict_count", verdicts}}
                    .dump();
      } else {
        out_ << b.lhs_nodes << "," << best << "," << space.interned_count() << "," << verdicts << "\n";
      }
      first = false;
    }
    if (o_.json) out_ << "]\n";
    return kEqual;
  }

 private:
  const Options& o_;
  std::istream& in_;
  std::ostream& out_;
  SortContext ctx_;
};

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Strong bisimilarity checker for higher-order processes with parameterization"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "Emit a JSON report");
  app.add_option("--free", o.free, "Declared free variables, e.g. \"X:proc,y:name\"");
  app.add_option("--max-steps", o.max_steps, "Depth of the transition tree for trace")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "Seed for random corpora");
  app.add_flag("--dump-tree", o.dump_tree, "Dump the normal-form tree, one node per line");

  auto* check = app.add_subcommand("check", "Decide P ~ Q");
  check->add_option("--mode", o.mode, "fast | oracle | both")->check(CLI::IsMember({"fast", "oracle", "both"}));
  check->add_flag("--batch", o.batch, "Read 'P ;; Q' lines from standard input");
  check->add_option("terms", o.terms, "P Q");
  auto* oracle = app.add_subcommand("oracle", "Decide P ~ Q with the reference procedure");
  oracle->add_flag("--batch", o.batch, "Read 'P ;; Q' lines from standard input");
  oracle->add_option("terms", o.terms, "P Q");
  auto* nf = app.add_subcommand("nf", "Print the normal form");
  nf->add_option("term", o.terms, "P")->required();
  auto* trace = app.add_subcommand("trace", "Print the transition tree");
  trace->add_option("term", o.terms, "P")->required();
  trace->add_flag("--tau-only", o.tau_only, "Only internal steps");
  auto* primes = app.add_subcommand("primes", "Print the prime decomposition");
  primes->add_option("term", o.terms, "P")->required();
  auto* selftest = app.add_subcommand("selftest", "Exhaustive differential run of both engines");
  selftest->add_option("--max-nodes", o.max_nodes, "Largest enumerated term");
  selftest->add_option("--random", o.random, "Additional random pairs");
  auto* bench = app.add_subcommand("bench", "Scaling run, CSV on standard output");
  bench->add_option("--sizes", o.sizes, "Target sizes")->delimiter(',');
  bench->add_option("--reps", o.reps, "Repetitions per size (best time is reported)");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kEqual : kError;
  }

  try {
    Runner r(o, in, out);
    if (check->parsed()) return r.check(o.mode);
    if (oracle->parsed()) return r.check("oracle");
    if (nf->parsed()) return r.nf();
    if (trace->parsed()) return r.trace();
    if (primes->parsed()) return r.primes();
    if (selftest->parsed()) return r.selftest();
    if (bench->parsed()) return r.bench();
  } catch (const Error& e) {
    if (o.json) out << json{{"error", e.what()}}.dump() << "\n";
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace hopi::cli
