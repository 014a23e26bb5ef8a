#include "hopi/semantics.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "hopi/parser.hpp"

namespace hopi {
namespace {

struct Binder {
  std::string ident;
  bool is_name;
};
using Env = std::vector<Binder>;

std::string index_of(const Env& env, const std::string& id, bool is_name) {
  for (std::size_t k = env.size(); k-- > 0;)
    if (env[k].ident == id && env[k].is_name == is_name) return "#" + std::to_string(env.size() - k);
  return {};
}

std::string name_key(const Env& env, const Name& n) {
  if (!n.is_variable()) return n.ident;
  std::string idx = index_of(env, n.ident, true);
  return idx.empty() ? "?" + n.ident : idx;
}

void spine(const Term& t, std::vector<const Term*>& out) {
  std::vector<const Term*> stack{&t};
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    if (cur->kind() == Term::Kind::Par) {
      stack.push_back(&cur->right());
      stack.push_back(&cur->left());
    } else if (!cur->is_nil()) {
      out.push_back(cur);
    }
  }
}

struct Canon {
  Term term;
  std::string key;
};

Canon canon(const Term& t, Env& env);

// Components of a beta-normal term, each canonical, sorted by key.
std::vector<Canon> canon_components(const Term& t, Env& env) {
  std::vector<const Term*> parts;
  spine(t, parts);
  std::vector<Canon> out;
  out.reserve(parts.size());
  for (const Term* p : parts) {
    Canon c = canon(*p, env);
    if (!c.term.is_nil()) out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const Canon& a, const Canon& b) { return a.key < b.key; });
  return out;
}

Canon canon(const Term& t, Env& env) {
  switch (t.kind()) {
    case Term::Kind::Nil: return {t, "0"};
    case Term::Kind::Var: {
      std::string idx = index_of(env, t.var().ident, false);
      return {t, idx.empty() ? "$" + t.var().ident : idx};
    }
    case Term::Kind::Input: {
      std::string ch = name_key(env, t.chan());
      env.push_back({t.bound_proc().ident, false});
      Canon b = canon(t.body(), env);
      env.pop_back();
      return {Term::input(t.chan(), t.bound_proc(), b.term), "I" + ch + "(" + b.key + ")"};
    }
    case Term::Kind::Output: {
      Canon p = canon(t.payload(), env);
      return {Term::output(t.chan(), p.term), "O" + name_key(env, t.chan()) + "(" + p.key + ")"};
    }
    case Term::Kind::Par: {
      auto comps = canon_components(t, env);
      if (comps.empty()) return {Term(), "0"};
      if (comps.size() == 1) return comps.front();
      std::string key = "P(";
      Term acc;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) key += ',';
        key += comps[i].key;
        acc = i == 0 ? comps[i].term : Term::par(acc, comps[i].term);
      }
      return {acc, key + ")"};
    }
    case Term::Kind::ProcAbs: {
      env.push_back({t.bound_proc().ident, false});
      Canon b = canon(t.body(), env);
      env.pop_back();
      return {Term::proc_abs(t.bound_proc(), b.term), "A(" + b.key + ")"};
    }
    case Term::Kind::NameAbs: {
      env.push_back({t.bound_name(), true});
      Canon b = canon(t.body(), env);
      env.pop_back();
      return {Term::name_abs(t.bound_name(), b.term), "N(" + b.key + ")"};
    }
    case Term::Kind::ProcApp: {
      Canon f = canon(t.fun(), env);
      Canon a = canon(t.arg(), env);
      return {Term::proc_app(f.term, a.term), "@(" + f.key + "," + a.key + ")"};
    }
    case Term::Kind::NameApp: {
      Canon f = canon(t.fun(), env);
      return {Term::name_app(f.term, t.name_arg()), "@n(" + f.key + "," + name_key(env, t.name_arg()) + ")"};
    }
  }
  return {t, "?"};
}

Term rest_without(const CanonicalForm& cf, std::size_t i, std::size_t j = static_cast<std::size_t>(-1)) {
  std::vector<Term> rest;
  rest.reserve(cf.components.size());
  for (std::size_t k = 0; k < cf.components.size(); ++k)
    if (k != i && k != j) rest.push_back(cf.components[k]);
  return par_of(rest);
}

bool is_var_headed(const Term& t) {
  const Term* h = &t;
  while (h->kind() == Term::Kind::ProcApp || h->kind() == Term::Kind::NameApp) h = &h->fun();
  return h->kind() == Term::Kind::Var;
}

}  // namespace

std::string Action::to_string() const {
  switch (kind) {
    case Kind::In: return chan.ident + "(" + bound.ident + ")";
    case Kind::Out: return chan.ident + "!(" + print(payload) + ")";
    case Kind::Tau: return "tau";
  }
  return "?";
}

Term par_of(const std::vector<Term>& parts) {
  Term acc;
  bool first = true;
  for (const Term& p : parts) {
    acc = first ? p : Term::par(acc, p);
    first = false;
  }
  return acc;
}

Term CanonicalForm::recompose() const { return par_of(components); }

std::string CanonicalForm::key() const {
  if (keys.empty()) return "0";
  if (keys.size() == 1) return keys.front();
  std::string k = "P(";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) k += ',';
    k += keys[i];
  }
  return k + ")";
}

CanonicalForm canonicalize(const Term& t) {
  Env env;
  auto comps = canon_components(beta_normalize(t), env);
  CanonicalForm cf;
  for (auto& c : comps) {
    cf.components.push_back(std::move(c.term));
    cf.keys.push_back(std::move(c.key));
  }
  return cf;
}

Term canonical_term(const Term& t) { return canonicalize(t).recompose(); }

std::string canonical_key(const Term& t) {
  Env env;
  return canon(beta_normalize(t), env).key;
}

bool struct_congruent(const Term& p, const Term& q) { return canonical_key(p) == canonical_key(q); }

ProcVar canonical_fresh_var(const std::vector<Term>& avoid, const Sort& sort) {
  std::set<std::string> used;
  for (const Term& t : avoid) {
    auto fv = free_vars(t);
    used.insert(fv.procs.begin(), fv.procs.end());
  }
  std::string id = "Z";
  for (int n = 1; used.count(id); ++n) id = "Z" + std::to_string(n);
  return ProcVar{id, sort};
}

std::vector<Transition> transitions(const Term& t) {
  CanonicalForm cf = canonicalize(t);
  std::vector<Transition> out;
  std::set<std::string> seen;
  auto add = [&](Action a, const Term& target) {
    Env env;
    Canon c = canon(beta_normalize(target), env);
    std::string k;
    switch (a.kind) {
      case Action::Kind::In: k = "in:" + a.chan.ident + ":" + a.bound.ident; break;
      case Action::Kind::Out: k = "out:" + a.chan.ident + ":" + canonical_key(a.payload); break;
      case Action::Kind::Tau: k = "tau"; break;
    }
    if (!seen.insert(k + "|" + c.key).second) return;
    out.push_back({std::move(a), c.term});
  };

  const auto& cs = cf.components;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].kind() == Term::Kind::Input) {
      ProcVar z = canonical_fresh_var({t}, cs[i].bound_proc().sort);
      Term body = subst_proc_unchecked(cs[i].body(), Term::var(z), cs[i].bound_proc().ident);
      add(Action::in(cs[i].chan(), z), Term::par(body, rest_without(cf, i)));
    } else if (cs[i].kind() == Term::Kind::Output) {
      add(Action::out(cs[i].chan(), cs[i].payload()), rest_without(cf, i));
    }
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].kind() != Term::Kind::Output) continue;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (cs[j].kind() != Term::Kind::Input || !(cs[j].chan() == cs[i].chan())) continue;
      Term received = subst_proc_unchecked(cs[j].body(), cs[i].payload(), cs[j].bound_proc().ident);
      add(Action::tau(), Term::par(received, rest_without(cf, i, j)));
    }
  }
  return out;
}

OpenDecompositions open_decompositions(const Term& t) {
  CanonicalForm cf = canonicalize(t);
  OpenDecompositions out;
  const auto& cs = cf.components;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    switch (cs[i].kind()) {
      case Term::Kind::Var: out.vars.push_back({cs[i].var(), rest_without(cf, i)}); break;
      case Term::Kind::ProcApp:
        if (is_var_headed(cs[i])) out.apps.push_back({cs[i].fun(), cs[i].arg(), rest_without(cf, i)});
        break;
      case Term::Kind::NameApp:
        if (is_var_headed(cs[i])) out.name_apps.push_back({cs[i].fun(), cs[i].name_arg(), rest_without(cf, i)});
        break;
      default: break;
    }
  }
  return out;
}

}  // namespace hopi
