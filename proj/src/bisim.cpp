#include "hopi/bisim.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "hopi/normalizer.hpp"
#include "hopi/parser.hpp"
#include "hopi/semantics.hpp"

namespace hopi {
namespace {

std::string fresh_name_ident(const Term& p, const Term& q) {
  FreeVars a = free_vars(p), b = free_vars(q);
  auto used = [&](const std::string& s) { return a.names.count(s) || b.names.count(s); };
  std::string id = "z";
  for (int n = 1; used(id); ++n) id = "z" + std::to_string(n);
  return id;
}

bool is_var_headed(const Term& t) {
  const Term* h = &t;
  while (h->kind() == Term::Kind::ProcApp || h->kind() == Term::Kind::NameApp) h = &h->fun();
  return h->kind() == Term::Kind::Var;
}

int clause_of(const Term& component) {
  switch (component.kind()) {
    case Term::Kind::Output: return 4;
    case Term::Kind::Input: return 5;
    case Term::Kind::Var: return 6;
    case Term::Kind::ProcApp: return 7;
    case Term::Kind::NameApp: return 8;
    default: return 1;
  }
}

}  // namespace

std::string Verdict::describe() const {
  if (equal) return "bisimilar";
  std::string s = "not bisimilar";
  for (const auto& st : distinguisher)
    s += "\n  clause " + std::to_string(st.clause) + (st.from_left ? " (left): " : " (right): ") + st.observation;
  return s;
}

namespace {

constexpr std::uint32_t kNoRest = static_cast<std::uint32_t>(-1);

std::string fresh_proc(std::uint32_t k) { return "Z'" + std::to_string(k); }
std::string fresh_name(std::uint32_t k) { return "z'" + std::to_string(k); }

std::uint32_t reserved_index(const std::string& id) {
  if (id.size() < 3 || id[1] != '\'' || (id[0] != 'Z' && id[0] != 'z')) return 0;
  return static_cast<std::uint32_t>(std::stoul(id.substr(2)));
}

}  // namespace

Oracle::Handle Oracle::prepare(const Term& t) {
  CanonicalForm cf = canonicalize(t);
  return intern_canonical(cf.recompose(), cf.key());
}

Oracle::Handle Oracle::intern_canonical(const Term& canonical, const std::string& key) {
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  Handle h = static_cast<Handle>(entries_.size());
  ids_.emplace(key, h);
  entries_.emplace_back();
  Entry e;
  e.term = canonical;
  FreeVars fv = free_vars(canonical);
  for (const auto& id : fv.procs) e.reserved = std::max(e.reserved, reserved_index(id));
  for (const auto& id : fv.names) e.reserved = std::max(e.reserved, reserved_index(id));

  if (canonical.is_nil()) {
    e.kind = Term::Kind::Nil;
  } else if (canonical.kind() == Term::Kind::Par) {
    e.kind = Term::Kind::Par;
    CanonicalForm cf = canonicalize(canonical);
    for (std::size_t i = 0; i < cf.components.size(); ++i)
      e.comps.push_back(intern_canonical(cf.components[i], cf.keys[i]));
  } else {
    e.kind = canonical.kind();
    e.comps.push_back(h);
    switch (e.kind) {
      case Term::Kind::Output: e.payload = prepare(canonical.payload()); break;
      case Term::Kind::ProcApp:
        e.var_headed = is_var_headed(canonical);
        e.head = prepare(canonical.fun());
        e.arg = prepare(canonical.arg());
        break;
      case Term::Kind::NameApp:
        e.var_headed = is_var_headed(canonical);
        e.head = prepare(canonical.fun());
        break;
      default: break;
    }
  }
  e.rests.assign(e.comps.size(), kNoRest);
  entries_[h] = std::move(e);
  return h;
}

const std::vector<Oracle::Handle>& Oracle::components(Handle h) { return entries_[h].comps; }

Oracle::Handle Oracle::rest(Handle h, std::size_t i) {
  if (entries_[h].rests[i] != kNoRest) return entries_[h].rests[i];
  std::vector<Term> parts;
  const auto& comps = entries_[h].comps;
  for (std::size_t k = 0; k < comps.size(); ++k)
    if (k != i) parts.push_back(entries_[comps[k]].term);
  Handle r = prepare(par_of(parts));
  entries_[h].rests[i] = r;
  return r;
}

// body{Z'k/X} | rest for the i-th component, an input.
Oracle::Handle Oracle::residual(Handle h, std::size_t i, std::uint32_t k) {
  std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) | k;
  for (const auto& [ck, v] : entries_[h].cache)
    if (ck == key) return v;
  Handle rh = rest(h, i);
  const Term& c = entries_[entries_[h].comps[i]].term;
  ProcVar z{fresh_proc(k), c.bound_proc().sort};
  Term body = subst_proc_unchecked(c.body(), Term::var(z), c.bound_proc().ident);
  Handle r = prepare(Term::par(body, entries_[rh].term));
  entries_[h].cache.emplace_back(key, r);
  return r;
}

// Body of an abstraction instantiated with the fresh variable of index k.
Oracle::Handle Oracle::instance(Handle h, std::uint32_t k) {
  std::uint64_t key = (std::uint64_t(1) << 63) | k;
  for (const auto& [ck, v] : entries_[h].cache)
    if (ck == key) return v;
  const Term& t = entries_[h].term;
  Term body = t.kind() == Term::Kind::ProcAbs
                  ? subst_proc_unchecked(t.body(), Term::var(ProcVar{fresh_proc(k), t.bound_proc().sort}),
                                         t.bound_proc().ident)
                  : subst_name(t.body(), Name::variable(fresh_name(k)), Name::variable(t.bound_name()));
  Handle r = prepare(body);
  entries_[h].cache.emplace_back(key, r);
  return r;
}

Verdict Oracle::check(const Term& p, const Term& q) {
  Handle a = prepare(p), b = prepare(q);
  Verdict v;
  v.equal = decide(a, b, 0, nullptr);
  if (!v.equal) decide(a, b, 0, &v.distinguisher);
  return v;
}

bool Oracle::decide(Handle p, Handle q, std::size_t level, std::vector<DistinguisherStep>* why) {
  if (p == q) return true;
  std::uint64_t key = p < q ? (std::uint64_t(p) << 32 | q) : (std::uint64_t(q) << 32 | p);
  if (!why) {
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  bool r = compute(p, q, level, why);
  if (memo_.size() >= opts_.memo_limit) memo_.clear();
  memo_[key] = r;
  return r;
}

bool Oracle::compute(Handle p, Handle q, std::size_t level, std::vector<DistinguisherStep>* why) {
  if (level > opts_.max_recursion)
    throw DepthBudgetExceeded("bisimilarity recursion exceeded " + std::to_string(opts_.max_recursion) + " levels");
  Term::Kind kp = entries_[p].kind, kq = entries_[q].kind;
  bool ap = kp == Term::Kind::ProcAbs || kp == Term::Kind::NameAbs;
  bool aq = kq == Term::Kind::ProcAbs || kq == Term::Kind::NameAbs;

  if (ap || aq) {
    if (kp != kq) {
      if (why) {
        int clause = !(ap && aq) ? 1 : (kp == Term::Kind::ProcAbs ? 2 : 3);
        const Term& abs = ap ? entries_[p].term : entries_[q].term;
        why->push_back({clause, ap, "shape of " + print(abs) + " not matched"});
      }
      return false;
    }
    std::uint32_t k = std::max(entries_[p].reserved, entries_[q].reserved) + 1;
    Handle a = instance(p, k), b = instance(q, k);
    if (why) {
      if (decide(a, b, level + 1, nullptr)) return true;
      why->push_back({kp == Term::Kind::ProcAbs ? 2 : 3, true, "abstraction bodies differ"});
      decide(a, b, level + 1, why);
      return false;
    }
    return decide(a, b, level + 1, nullptr);
  }
  return simulate(p, q, true, level, why) && simulate(q, p, false, level, why);
}

// Every observation of `p` must be matched by `q`. `from_left` tells whether
// `p` is the left term of the check, for the distinguisher.
bool Oracle::simulate(Handle p, Handle q, bool from_left, std::size_t level, std::vector<DistinguisherStep>* why) {
  std::uint32_t k = std::max(entries_[p].reserved, entries_[q].reserved) + 1;
  const std::size_t np = entries_[p].comps.size(), nq = entries_[q].comps.size();

  for (std::size_t i = 0; i < np; ++i) {
    Handle c = entries_[p].comps[i];
    if (i > 0 && entries_[p].comps[i - 1] == c) continue;
    const Term::Kind kind = entries_[c].kind;
    bool matched = false;
    // First candidate that failed, replayed to explain the mismatch.
    std::vector<std::pair<Handle, Handle>> failed;

    auto obligation = [&](Handle x, Handle y) {
      if (decide(x, y, level + 1, nullptr)) return true;
      if (failed.empty()) failed.emplace_back(x, y);
      return false;
    };

    for (std::size_t j = 0; j < nq && !matched; ++j) {
      Handle d = entries_[q].comps[j];
      if (entries_[d].kind != kind) continue;
      const Term& ct = entries_[c].term;
      const Term& dt = entries_[d].term;
      switch (kind) {
        case Term::Kind::Input:
          if (!(ct.chan() == dt.chan())) break;
          matched = obligation(residual(p, i, k), residual(q, j, k));
          break;
        case Term::Kind::Output:
          if (!(ct.chan() == dt.chan())) break;
          matched = obligation(entries_[c].payload, entries_[d].payload) && obligation(rest(p, i), rest(q, j));
          break;
        case Term::Kind::Var:
          if (!(ct.var() == dt.var())) break;
          matched = obligation(rest(p, i), rest(q, j));
          break;
        case Term::Kind::ProcApp:
        case Term::Kind::NameApp:
          if (!entries_[c].var_headed || !entries_[d].var_headed) {
            matched = c == d && obligation(rest(p, i), rest(q, j));
            break;
          }
          if (kind == Term::Kind::NameApp && !(ct.name_arg() == dt.name_arg())) break;
          matched = obligation(entries_[c].head, entries_[d].head) &&
                    (kind == Term::Kind::NameApp || obligation(entries_[c].arg, entries_[d].arg)) &&
                    obligation(rest(p, i), rest(q, j));
          break;
        default: break;
      }
    }
    if (matched) continue;
    if (why) {
      const Term& ct = entries_[c].term;
      std::string obs;
      switch (kind) {
        case Term::Kind::Input: obs = ct.chan().ident + "(" + fresh_proc(k) + ")"; break;
        case Term::Kind::Output: obs = ct.chan().ident + "!(" + print(ct.payload()) + ")"; break;
        default: obs = print(ct) + " | ..."; break;
      }
      why->push_back({clause_of(ct), from_left, obs});
      if (!failed.empty()) {
        auto [x, y] = failed.front();
        if (from_left) decide(x, y, level + 1, why);
        else decide(y, x, level + 1, why);
      }
    }
    return false;
  }
  return true;
}

Verdict hoio_bisimilar(const Term& p, const Term& q) {
  Oracle oracle;
  return oracle.check(p, q);
}

// ---- bounded context probes ----------------------------------------------

namespace {

class Prober {
 public:
  explicit Prober(const std::vector<Term>& probes) {
    for (const Term& t : probes) {
      if (occurs_free_proc(t, kHoleVar)) contexts_.push_back(t);
      else if (free_vars(t).procs.empty()) closed_.push_back(t);
    }
    if (contexts_.empty()) contexts_.push_back(Term::var(ProcVar{kHoleVar, Sort::proc()}));
  }

  bool game(const Term& p0, const Term& q0, int d) {
    if (d <= 0) return true;
    std::string kp = canonical_key(p0), kq = canonical_key(q0);
    if (kp == kq) return true;
    auto key = std::make_tuple(kp, kq, d);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool r = compute(beta_normalize(p0), beta_normalize(q0), d);
    memo_.emplace(key, r);
    return r;
  }

 private:
  std::vector<Term> instantiations(const Sort& s) const {
    std::vector<Term> out;
    for (const Term& a : closed_) {
      auto as = annotated_sort(a);
      if (!as || *as == s) out.push_back(a);
    }
    return out;
  }

  static bool well_sorted(const Term& t) {
    try {
      sort_check(t);
      return true;
    } catch (const SortError&) {
      return false;
    }
  }

  bool compute(const Term& p, const Term& q, int d) {
    if (p.is_abstraction() || q.is_abstraction()) {
      if (p.kind() != q.kind()) return false;
      if (p.kind() == Term::Kind::NameAbs) {
        Name fresh = Name::constant("probe_" + fresh_name_ident(p, q));
        return game(subst_name(p.body(), fresh, Name::variable(p.bound_name())),
                    subst_name(q.body(), fresh, Name::variable(q.bound_name())), d - 1);
      }
      for (const Term& a : instantiations(p.bound_proc().sort))
        if (!game(subst_proc_unchecked(p.body(), a, p.bound_proc().ident),
                  subst_proc_unchecked(q.body(), a, q.bound_proc().ident), d - 1))
          return false;
      return true;
    }
    return simulate(p, q, d) && simulate(q, p, d);
  }

  // Callers keep the left term first so refutations are symmetric in meaning.
  bool simulate(const Term& p, const Term& q, int d) {
    auto tp = transitions(p), tq = transitions(q);
    for (const auto& [act, target] : tp) {
      bool matched = false;
      for (const auto& [act2, target2] : tq) {
        if (act.kind != act2.kind) continue;
        if (act.kind != Action::Kind::Tau && !(act.chan == act2.chan)) continue;
        switch (act.kind) {
          case Action::Kind::Tau: matched = game(target, target2, d - 1); break;
          case Action::Kind::In: {
            matched = true;
            for (const Term& a : instantiations(act.bound.sort)) {
              if (!game(subst_proc_unchecked(target, a, act.bound.ident),
                        subst_proc_unchecked(target2, a, act2.bound.ident), d - 1)) {
                matched = false;
                break;
              }
            }
            break;
          }
          case Action::Kind::Out: {
            if (act.payload.kind() != act2.payload.kind() &&
                (act.payload.is_abstraction() || act2.payload.is_abstraction()))
              break;
            matched = true;
            for (const Term& e : contexts_) {
              Term ea = Term::par(subst_proc_unchecked(e, act.payload, kHoleVar), target);
              Term eb = Term::par(subst_proc_unchecked(e, act2.payload, kHoleVar), target2);
              if (!well_sorted(ea) || !well_sorted(eb)) continue;
              if (!game(ea, eb, d - 1)) {
                matched = false;
                break;
              }
            }
            break;
          }
        }
        if (matched) break;
      }
      if (!matched) return false;
    }
    return true;
  }

  std::vector<Term> closed_;
  std::vector<Term> contexts_;
  std::map<std::tuple<std::string, std::string, int>, bool> memo_;
};

}  // namespace

bool bounded_ctx_probe(const Term& p, const Term& q, const std::vector<Term>& probes, int depth) {
  Prober prober(probes);
  return prober.game(p, q, depth);
}

// ---- prime decomposition -------------------------------------------------

std::vector<Term> prime_factors(const Term& p) {
  NormalizerSession session;
  const TreeNode* n = session.nf(p);
  std::vector<Term> out;
  if (n->type == NodeType::Zero) return out;
  if (n->type == NodeType::Par) {
    for (const TreeNode* c : n->children) out.push_back(session.to_term(c));
  } else {
    out.push_back(session.to_term(n));
  }
  return out;
}

}  // namespace hopi
