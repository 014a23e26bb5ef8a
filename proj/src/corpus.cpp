#include "hopi/corpus.hpp"

#include <functional>
#include <map>

namespace hopi {
namespace {

struct EnumScope {
  std::vector<std::pair<std::string, bool>> binders;  // ident, is_name
  int layers = 0;
};

class Enumerator {
 public:
  explicit Enumerator(const EnumerationOptions& o) : opts_(o) {}

  std::vector<Term> terms(std::size_t size, EnumScope& s) {
    std::vector<Term> out;
    if (size == 0) return out;
    if (size == 1) {
      out.push_back(Term::nil());
      out.push_back(Term::var(ProcVar{opts_.free_var, Sort::proc()}));
      for (const auto& [id, is_name] : s.binders)
        if (!is_name) out.push_back(Term::var(ProcVar{id, Sort::proc()}));
      return out;
    }
    std::size_t depth = s.binders.size() + 1;
    std::vector<Name> chans;
    for (const auto& c : opts_.channels) chans.push_back(Name::constant(c));
    for (const auto& [id, is_name] : s.binders)
      if (is_name) chans.push_back(Name::variable(id));

    std::string y = "Y" + std::to_string(depth);
    s.binders.push_back({y, false});
    auto under_proc = terms(size - 1, s);
    s.binders.pop_back();
    for (const Name& c : chans)
      for (const Term& b : under_proc) out.push_back(Term::input(c, ProcVar{y, Sort::proc()}, b));

    auto payloads = terms(size - 1, s);
    for (const Name& c : chans)
      for (const Term& p : payloads) out.push_back(Term::output(c, p));

    for (std::size_t i = 1; i + 1 < size; ++i) {
      auto ls = terms(i, s);
      auto rs = terms(size - 1 - i, s);
      for (const Term& l : ls)
        for (const Term& r : rs) out.push_back(Term::par(l, r));
    }

    if (s.layers < opts_.max_abstraction_layers) {
      ++s.layers;
      s.binders.push_back({y, false});
      for (const Term& b : terms(size - 1, s)) out.push_back(Term::proc_abs(ProcVar{y, Sort::proc()}, b));
      s.binders.pop_back();
      std::string x = "y" + std::to_string(depth);
      s.binders.push_back({x, true});
      for (const Term& b : terms(size - 1, s)) out.push_back(Term::name_abs(x, b));
      s.binders.pop_back();
      --s.layers;
    }

    // Applications only make sense with an abstraction or a bound variable in
    // head position; anything else is rejected by sorting anyway.
    auto head_ok = [&](const Term& f) {
      switch (f.kind()) {
        case Term::Kind::ProcAbs:
        case Term::Kind::NameAbs:
        case Term::Kind::ProcApp:
        case Term::Kind::NameApp: return true;
        case Term::Kind::Var: return f.var().ident != opts_.free_var;
        default: return false;
      }
    };
    for (std::size_t i = 1; i + 1 < size; ++i) {
      auto fs = terms(i, s);
      auto as = terms(size - 1 - i, s);
      for (const Term& f : fs) {
        if (!head_ok(f)) continue;
        for (const Term& a : as) out.push_back(Term::proc_app(f, a));
      }
    }
    for (const Term& f : terms(size - 1, s)) {
      if (!head_ok(f)) continue;
      for (const Name& c : chans) out.push_back(Term::name_app(f, c));
    }
    return out;
  }

 private:
  const EnumerationOptions& opts_;
};

}  // namespace

SortContext enumeration_context(const EnumerationOptions& opts) {
  SortContext ctx;
  ctx.procs[opts.free_var] = Sort::proc();
  return ctx;
}

std::vector<Term> enumerate_terms(const EnumerationOptions& opts) {
  Enumerator e(opts);
  SortContext ctx = enumeration_context(opts);
  std::vector<Term> out;
  for (std::size_t n = 1; n <= opts.max_nodes; ++n) {
    EnumScope scope;
    for (const Term& t : e.terms(n, scope)) {
      try {
        out.push_back(elaborate(t, ctx).term);
      } catch (const SortError&) {
      }
    }
  }
  return out;
}

// ---- random terms -----------------------------------------------------------

int RandomTerms::uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

std::string RandomTerms::fresh(const char* base) { return base + std::to_string(++counter_); }

Name RandomTerms::channel(const Scope& s) {
  int extra = static_cast<int>(s.names.size());
  int k = uniform(0, 1 + extra);
  if (k < 2) return Name::constant(k == 0 ? "a" : "b");
  return Name::variable(s.names[k - 2]);
}

Name RandomTerms::process_channel() { return Name::constant(uniform(0, 1) == 0 ? "a" : "b"); }

Term RandomTerms::proc(int size, Scope& s) {
  if (size <= 1) {
    std::vector<Term> leaves{Term::nil()};
    if (s.allow_free) leaves.push_back(Term::var(ProcVar{"X", Sort::proc()}));
    for (const auto& v : s.procs) leaves.push_back(Term::var(ProcVar{v, Sort::proc()}));
    return leaves[uniform(0, static_cast<int>(leaves.size()) - 1)];
  }
  bool ho = opts_.higher_order;
  for (;;) {
    switch (uniform(0, 10)) {
      case 0:
      case 1: {
        std::string y = fresh("Y");
        Name c = channel(s);
        s.procs.push_back(y);
        Term body = proc(size - 1, s);
        s.procs.pop_back();
        return Term::input(c, ProcVar{y, Sort::proc()}, body);
      }
      case 2:
      case 3: return Term::output(channel(s), proc(size - 1, s));
      case 4:
      case 5: {
        int l = uniform(1, size - 1);
        Term left = proc(l, s);
        return Term::par(left, proc(size - l, s));
      }
      case 6: {
        if (!ho) continue;
        bool over_name = uniform(0, 1) == 1;
        std::string y = fresh("F");
        auto& vars = over_name ? s.nabs_vars : s.pabs_vars;
        Sort sort = over_name ? Sort::nabs(Sort::proc()) : Sort::pabs(Sort::proc(), Sort::proc());
        vars.push_back(y);
        Term body = proc(size - 1, s);
        vars.pop_back();
        return Term::input(Name::constant(over_name ? "d" : "c"), ProcVar{y, sort}, body);
      }
      case 7: {
        if (!ho) continue;
        bool over_name = uniform(0, 1) == 1;
        return Term::output(Name::constant(over_name ? "d" : "c"), over_name ? nabs(size - 1, s) : pabs(size - 1, s));
      }
      case 8: {
        if (!ho || size < 3) continue;
        int k = uniform(1, size - 2);
        if (uniform(0, 1) == 0) {
          Term f = pabs(k + 1, s);
          return Term::proc_app(f, proc(size - 1 - k, s));
        }
        return Term::name_app(nabs(size - 1, s), channel(s));
      }
      case 9: {
        if (!s.pabs_vars.empty()) {
          std::string f = s.pabs_vars[uniform(0, static_cast<int>(s.pabs_vars.size()) - 1)];
          return Term::proc_app(Term::var(ProcVar{f, Sort::pabs(Sort::proc(), Sort::proc())}), proc(size - 1, s));
        }
        if (!s.nabs_vars.empty()) {
          std::string f = s.nabs_vars[uniform(0, static_cast<int>(s.nabs_vars.size()) - 1)];
          return Term::name_app(Term::var(ProcVar{f, Sort::nabs(Sort::proc())}), channel(s));
        }
        continue;
      }
      default: return proc(1, s);
    }
  }
}

Term RandomTerms::pabs(int size, Scope& s) {
  std::string y = fresh("Y");
  s.procs.push_back(y);
  Term body = proc(std::max(1, size - 1), s);
  s.procs.pop_back();
  return Term::proc_abs(ProcVar{y, Sort::proc()}, body);
}

Term RandomTerms::nabs(int size, Scope& s) {
  std::string y = fresh("n");
  s.names.push_back(y);
  Term body = proc(std::max(1, size - 1), s);
  s.names.pop_back();
  return Term::name_abs(y, body);
}

Term RandomTerms::process() { return process(uniform(1, opts_.size)); }

Term RandomTerms::process(int size) {
  Scope s;
  s.allow_free = opts_.allow_free;
  return proc(size, s);
}

Term RandomTerms::closed_process(int size) {
  Scope s;
  s.allow_free = false;
  return proc(size, s);
}

Term RandomTerms::proc_abstraction(int size) {
  Scope s;
  s.allow_free = opts_.allow_free;
  return pabs(size, s);
}

Term RandomTerms::name_abstraction(int size) {
  Scope s;
  s.allow_free = opts_.allow_free;
  return nabs(size, s);
}

// ---- benchmark terms --------------------------------------------------------

namespace {

Term balanced_par(const std::vector<Term>& parts, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return Term::nil();
  if (hi - lo == 1) return parts[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return Term::par(balanced_par(parts, lo, mid), balanced_par(parts, mid, hi));
}

}  // namespace

BenchPair synthesize_bench(std::size_t n, std::uint64_t seed) {
  RandomTerms gen(seed, RandomOptions{6, false, false});
  std::vector<Term> lhs, rhs;
  std::size_t nodes = 0;
  for (std::size_t i = 0; nodes < n; ++i) {
    Term l, r;
    if (i % 2 == 0) {
      // a(Y).(P | a(Y).P ...) against a(Y).P | ... with k copies
      std::string y = "Y";
      Name a = gen.process_channel();
      std::mt19937_64& rng = gen.rng();
      int k = 2 + static_cast<int>(rng() % 3);
      Term p = gen.process(gen.uniform(2, 6));
      // let P mention the bound variable
      p = Term::par(p, Term::output(Name::constant("b"), Term::var(ProcVar{y, Sort::proc()})));
      Term big = Term::input(a, ProcVar{y, Sort::proc()}, p);
      Term body = p;
      for (int c = 1; c < k; ++c) body = Term::par(body, big);
      l = Term::input(a, ProcVar{y, Sort::proc()}, body);
      r = big;
      for (int c = 1; c < k; ++c) r = Term::par(r, big);
    } else {
      Term q = gen.closed_process(gen.uniform(2, 6));
      Term x = Term::var(ProcVar{"Z", Sort::proc()});
      Term body = Term::par(Term::par(x, Term::output(Name::constant("a"), x)),
                            Term::input(Name::constant("b"), ProcVar{"W", Sort::proc()}, Term::par(x, Term::var(ProcVar{"W", Sort::proc()}))));
      l = Term::proc_app(Term::proc_abs(ProcVar{"Z", Sort::proc()}, body), q);
      r = subst_proc_unchecked(body, q, "Z");
    }
    nodes += l.size();
    lhs.push_back(std::move(l));
    rhs.push_back(std::move(r));
  }
  BenchPair out;
  out.lhs = balanced_par(lhs, 0, lhs.size());
  out.rhs = balanced_par(rhs, 0, rhs.size());
  out.lhs_nodes = out.lhs.size();
  return out;
}

}  // namespace hopi
