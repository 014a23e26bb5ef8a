// Deliberately simple reference implementations used to cross-check the
// library: every binder is renamed on the way down, nothing is shared or
// memoized, and transitions come straight from the inference rules.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "hopi/parser.hpp"
#include "hopi/semantics.hpp"
#include "hopi/syntax.hpp"

namespace naive {

using hopi::Name;
using hopi::ProcVar;
using hopi::Term;
using K = Term::Kind;

inline std::string fresh(const std::string& base) {
  static int counter = 0;
  return base + "_r" + std::to_string(++counter);
}

inline void free_vars(const Term& t, std::set<std::string> bound_p, std::set<std::string> bound_n,
                      std::set<std::string>& procs, std::set<std::string>& names) {
  auto name = [&](const Name& n) {
    if (n.is_variable() && !bound_n.count(n.ident)) names.insert(n.ident);
  };
  switch (t.kind()) {
    case K::Nil: return;
    case K::Var:
      if (!bound_p.count(t.var().ident)) procs.insert(t.var().ident);
      return;
    case K::Input:
      name(t.chan());
      bound_p.insert(t.bound_proc().ident);
      return free_vars(t.body(), bound_p, bound_n, procs, names);
    case K::Output:
      name(t.chan());
      return free_vars(t.payload(), bound_p, bound_n, procs, names);
    case K::Par:
      free_vars(t.left(), bound_p, bound_n, procs, names);
      return free_vars(t.right(), bound_p, bound_n, procs, names);
    case K::ProcAbs:
      bound_p.insert(t.bound_proc().ident);
      return free_vars(t.body(), bound_p, bound_n, procs, names);
    case K::NameAbs:
      bound_n.insert(t.bound_name());
      return free_vars(t.body(), bound_p, bound_n, procs, names);
    case K::ProcApp:
      free_vars(t.fun(), bound_p, bound_n, procs, names);
      return free_vars(t.arg(), bound_p, bound_n, procs, names);
    case K::NameApp:
      name(t.name_arg());
      return free_vars(t.fun(), bound_p, bound_n, procs, names);
  }
}

inline std::set<std::string> free_procs(const Term& t) {
  std::set<std::string> p, n;
  free_vars(t, {}, {}, p, n);
  return p;
}

inline std::set<std::string> free_names(const Term& t) {
  std::set<std::string> p, n;
  free_vars(t, {}, {}, p, n);
  return n;
}

Term subst_name(const Term& t, const Name& g, const std::string& m);

// t{r/x}; every binder met on the way is renamed, so capture is impossible.
inline Term subst(const Term& t, const Term& r, const std::string& x) {
  switch (t.kind()) {
    case K::Nil: return t;
    case K::Var: return t.var().ident == x ? r : t;
    case K::Input:
    case K::ProcAbs: {
      const ProcVar& y = t.bound_proc();
      if (y.ident == x) return t;
      ProcVar y2{fresh(y.ident), y.sort};
      Term body = subst(subst(t.body(), Term::var(y2), y.ident), r, x);
      return t.kind() == K::Input ? Term::input(t.chan(), y2, body) : Term::proc_abs(y2, body);
    }
    case K::Output: return Term::output(t.chan(), subst(t.payload(), r, x));
    case K::Par: return Term::par(subst(t.left(), r, x), subst(t.right(), r, x));
    case K::NameAbs: {
      std::string y2 = fresh(t.bound_name());
      return Term::name_abs(y2, subst(subst_name(t.body(), Name::variable(y2), t.bound_name()), r, x));
    }
    case K::ProcApp: return Term::proc_app(subst(t.fun(), r, x), subst(t.arg(), r, x));
    case K::NameApp: return Term::name_app(subst(t.fun(), r, x), t.name_arg());
  }
  return t;
}

inline Term subst_name(const Term& t, const Name& g, const std::string& m) {
  auto sub = [&](const Name& n) { return n.is_variable() && n.ident == m ? g : n; };
  switch (t.kind()) {
    case K::Nil:
    case K::Var: return t;
    case K::Input: {
      ProcVar y2{fresh(t.bound_proc().ident), t.bound_proc().sort};
      return Term::input(sub(t.chan()), y2, subst_name(subst(t.body(), Term::var(y2), t.bound_proc().ident), g, m));
    }
    case K::ProcAbs: {
      ProcVar y2{fresh(t.bound_proc().ident), t.bound_proc().sort};
      return Term::proc_abs(y2, subst_name(subst(t.body(), Term::var(y2), t.bound_proc().ident), g, m));
    }
    case K::Output: return Term::output(sub(t.chan()), subst_name(t.payload(), g, m));
    case K::Par: return Term::par(subst_name(t.left(), g, m), subst_name(t.right(), g, m));
    case K::NameAbs: {
      if (t.bound_name() == m) return t;
      std::string y2 = fresh(t.bound_name());
      return Term::name_abs(y2, subst_name(subst_name(t.body(), Name::variable(y2), t.bound_name()), g, m));
    }
    case K::ProcApp: return Term::proc_app(subst_name(t.fun(), g, m), subst_name(t.arg(), g, m));
    case K::NameApp: return Term::name_app(subst_name(t.fun(), g, m), sub(t.name_arg()));
  }
  return t;
}

inline Term beta(const Term& t) {
  switch (t.kind()) {
    case K::Nil:
    case K::Var: return t;
    case K::Input: return Term::input(t.chan(), t.bound_proc(), beta(t.body()));
    case K::Output: return Term::output(t.chan(), beta(t.payload()));
    case K::Par: return Term::par(beta(t.left()), beta(t.right()));
    case K::ProcAbs: return Term::proc_abs(t.bound_proc(), beta(t.body()));
    case K::NameAbs: return Term::name_abs(t.bound_name(), beta(t.body()));
    case K::ProcApp: {
      Term f = beta(t.fun()), a = beta(t.arg());
      if (f.kind() == K::ProcAbs) return beta(subst(f.body(), a, f.bound_proc().ident));
      return Term::proc_app(f, a);
    }
    case K::NameApp: {
      Term f = beta(t.fun());
      if (f.kind() == K::NameAbs) return beta(subst_name(f.body(), t.name_arg(), f.bound_name()));
      return Term::name_app(f, t.name_arg());
    }
  }
  return t;
}

// The depth table read literally, on the beta-normal form.
inline std::size_t depth_of_normal(const Term& t) {
  switch (t.kind()) {
    case K::Nil: return 0;
    case K::Var: return 1;
    case K::Input:
    case K::Output:
    case K::ProcAbs:
    case K::NameAbs: return 1 + depth_of_normal(t.kind() == K::Output ? t.payload() : t.body());
    case K::Par: return depth_of_normal(t.left()) + depth_of_normal(t.right());
    case K::ProcApp: return depth_of_normal(t.fun()) + depth_of_normal(t.arg());
    case K::NameApp: return depth_of_normal(t.fun());
  }
  return 0;
}

inline std::size_t depth(const Term& t) { return depth_of_normal(beta(t)); }

struct Step {
  enum Kind { In, Out, Tau } kind;
  Name chan;
  std::string bound;
  Term payload;
  Term target;
};

// Rules of the transition system over the beta-normal form: prefixes, the
// two parallel rules (with the bound variable kept apart from the other
// side) and communication.
inline std::vector<Step> steps(const Term& t0) {
  Term t = beta(t0);
  std::vector<Step> out;
  switch (t.kind()) {
    case K::Input: out.push_back({Step::In, t.chan(), t.bound_proc().ident, {}, t.body()}); break;
    case K::Output: out.push_back({Step::Out, t.chan(), {}, t.payload(), Term::nil()}); break;
    case K::Par: {
      auto ls = steps(t.left()), rs = steps(t.right());
      auto lift = [&](const Step& s, const Term& other, bool left) {
        Step c = s;
        if (c.kind == Step::In && free_procs(other).count(c.bound)) {
          std::string b = fresh(c.bound);
          c.target = subst(c.target, Term::var(ProcVar{b, {}}), c.bound);
          c.bound = b;
        }
        c.target = left ? Term::par(c.target, other) : Term::par(other, c.target);
        return c;
      };
      for (const auto& s : ls) out.push_back(lift(s, t.right(), true));
      for (const auto& s : rs) out.push_back(lift(s, t.left(), false));
      for (const auto& a : ls)
        for (const auto& b : rs) {
          if (a.kind == Step::Out && b.kind == Step::In && a.chan == b.chan)
            out.push_back({Step::Tau, {}, {}, {}, Term::par(a.target, subst(b.target, a.payload, b.bound))});
          if (a.kind == Step::In && b.kind == Step::Out && a.chan == b.chan)
            out.push_back({Step::Tau, {}, {}, {}, Term::par(subst(a.target, b.payload, a.bound), b.target)});
        }
      break;
    }
    default: break;
  }
  return out;
}

// Set of transitions as comparable strings, inputs instantiated with the
// variable `z` so both sides agree on it.
inline std::set<std::string> step_keys(const Term& t, const std::string& z) {
  std::set<std::string> keys;
  for (const auto& s : steps(t)) {
    switch (s.kind) {
      case Step::In:
        keys.insert("in " + s.chan.ident + " " +
                    hopi::canonical_key(subst(s.target, Term::var(ProcVar{z, {}}), s.bound)));
        break;
      case Step::Out:
        keys.insert("out " + s.chan.ident + " " + hopi::canonical_key(s.payload) + " " + hopi::canonical_key(s.target));
        break;
      case Step::Tau: keys.insert("tau " + hopi::canonical_key(s.target)); break;
    }
  }
  return keys;
}

inline std::set<std::string> library_keys(const Term& t) {
  std::set<std::string> keys;
  for (const auto& tr : hopi::transitions(t)) {
    const auto& a = tr.action;
    switch (a.kind) {
      case hopi::Action::Kind::In: keys.insert("in " + a.chan.ident + " " + hopi::canonical_key(tr.target)); break;
      case hopi::Action::Kind::Out:
        keys.insert("out " + a.chan.ident + " " + hopi::canonical_key(a.payload) + " " + hopi::canonical_key(tr.target));
        break;
      case hopi::Action::Kind::Tau: keys.insert("tau " + hopi::canonical_key(tr.target)); break;
    }
  }
  return keys;
}

}  // namespace naive
