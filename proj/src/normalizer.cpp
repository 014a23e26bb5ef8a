#include "hopi/normalizer.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <set>

#include "hopi/semantics.hpp"

namespace hopi {
namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::uint32_t label_index(Label l) { return l.is_index() ? l.value : 0; }

std::size_t component_count(const TreeNode* n) {
  if (n->type == NodeType::Zero) return 0;
  return n->type == NodeType::Par ? n->children.size() : 1;
}

}  // namespace

const char* to_string(NodeType t) {
  switch (t) {
    case NodeType::Zero: return "zero";
    case NodeType::Var: return "var";
    case NodeType::Inp: return "inp";
    case NodeType::Out: return "out";
    case NodeType::Par: return "par";
    case NodeType::Abs: return "abs";
    case NodeType::App: return "app";
    case NodeType::Name: return "name";
  }
  return "?";
}

NormalizerSession::NormalizerSession() { zero_ = make(NodeType::Zero, {}); }

std::uint32_t NormalizerSession::intern_symbol(const std::string& s) {
  auto [it, inserted] = symbol_ids_.emplace(s, static_cast<std::uint32_t>(symbols_.size()));
  if (inserted) symbols_.push_back(s);
  return it->second;
}

Label NormalizerSession::constant(const std::string& ident) { return {Label::Kind::Constant, intern_symbol(ident)}; }
Label NormalizerSession::free_name(const std::string& ident) { return {Label::Kind::FreeName, intern_symbol(ident)}; }

const TreeNode* NormalizerSession::make(NodeType type, Label label, std::vector<const TreeNode*> children) {
  std::size_t h = mix(mix(static_cast<std::size_t>(type), static_cast<std::size_t>(label.kind)), label.value);
  for (const TreeNode* c : children) h = mix(h, std::hash<const void*>()(c));
  TreeNode probe{type, label, std::move(children), 0, 0, h};
  auto it = table_.find(&probe);
  if (it != table_.end()) return *it;

  std::uint32_t mf = 0;
  switch (type) {
    case NodeType::Var:
    case NodeType::Name: mf = label_index(label); break;
    case NodeType::Inp: {
      std::uint32_t c = probe.children[0]->max_free;
      mf = std::max(label_index(label), c > 0 ? c - 1 : 0);
      break;
    }
    case NodeType::Out: mf = std::max(label_index(label), probe.children[0]->max_free); break;
    case NodeType::Abs: mf = probe.children[0]->max_free > 0 ? probe.children[0]->max_free - 1 : 0; break;
    default:
      for (const TreeNode* c : probe.children) mf = std::max(mf, c->max_free);
  }
  probe.max_free = mf;
  probe.id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(std::move(probe));
  const TreeNode* n = &nodes_.back();
  table_.insert(n);
  return n;
}

const TreeNode* NormalizerSession::var(std::uint32_t index) { return make(NodeType::Var, {Label::Kind::Index, index}); }

const TreeNode* NormalizerSession::free_var(const std::string& ident) {
  return make(NodeType::Var, {Label::Kind::FreeProc, intern_symbol(ident)});
}

const TreeNode* NormalizerSession::name_leaf(const Name& n) {
  return make(NodeType::Name, n.is_variable() ? free_name(n.ident) : constant(n.ident));
}

const TreeNode* NormalizerSession::abs(bool over_name, const TreeNode* body) {
  return make(NodeType::Abs, {over_name ? Label::Kind::NameBinder : Label::Kind::ProcBinder, 0}, {body});
}

// ---- tree representation --------------------------------------------------

const TreeNode* NormalizerSession::to_tree(const Term& t) {
  struct Binder {
    const std::string* ident;
    bool is_name;
  };
  std::vector<Binder> env;

  auto lookup = [&](const std::string& id, bool is_name) -> std::uint32_t {
    for (std::size_t k = env.size(); k-- > 0;)
      if (env[k].is_name == is_name && *env[k].ident == id) return static_cast<std::uint32_t>(env.size() - k);
    return 0;
  };
  auto name_label = [&](const Name& n) -> Label {
    if (!n.is_variable()) return constant(n.ident);
    if (std::uint32_t i = lookup(n.ident, true)) return {Label::Kind::Index, i};
    return free_name(n.ident);
  };

  std::function<const TreeNode*(const Term&)> go = [&](const Term& s) -> const TreeNode* {
    switch (s.kind()) {
      case Term::Kind::Nil: return zero_;
      case Term::Kind::Var: {
        if (std::uint32_t i = lookup(s.var().ident, false)) return var(i);
        return free_var(s.var().ident);
      }
      case Term::Kind::Input: {
        Label ch = name_label(s.chan());
        env.push_back({&s.bound_proc().ident, false});
        const TreeNode* body = go(s.body());
        env.pop_back();
        return inp(ch, body);
      }
      case Term::Kind::Output: return out(name_label(s.chan()), go(s.payload()));
      case Term::Kind::Par: {
        std::vector<const TreeNode*> kids;
        std::vector<const Term*> stack{&s};
        while (!stack.empty()) {
          const Term* cur = stack.back();
          stack.pop_back();
          if (cur->kind() == Term::Kind::Par) {
            stack.push_back(&cur->right());
            stack.push_back(&cur->left());
          } else {
            kids.push_back(go(*cur));
          }
        }
        return par(std::move(kids));
      }
      case Term::Kind::ProcAbs: {
        env.push_back({&s.bound_proc().ident, false});
        const TreeNode* body = go(s.body());
        env.pop_back();
        return abs(false, body);
      }
      case Term::Kind::NameAbs: {
        env.push_back({&s.bound_name(), true});
        const TreeNode* body = go(s.body());
        env.pop_back();
        return abs(true, body);
      }
      case Term::Kind::ProcApp: return app(go(s.fun()), go(s.arg()));
      case Term::Kind::NameApp: return app(go(s.fun()), make(NodeType::Name, name_label(s.name_arg())));
    }
    return zero_;
  };
  return go(t);
}

// ---- substitution -----------------------------------------------------------

Label NormalizerSession::shift_label(Label l, std::uint32_t d, std::uint32_t cutoff) const {
  if (l.is_index() && l.value > cutoff) l.value += d;
  return l;
}

const TreeNode* NormalizerSession::shift(const TreeNode* n, std::uint32_t d, std::uint32_t cutoff) {
  if (d == 0 || n->max_free <= cutoff) return n;
  auto key = std::make_pair(n, (static_cast<std::uint64_t>(d) << 32) | cutoff);
  auto it = shift_memo_.find(key);
  if (it != shift_memo_.end()) return it->second;

  // Shifting is monotone on indices, so sorted parallel children stay sorted.
  std::uint32_t inner = (n->type == NodeType::Inp || n->type == NodeType::Abs) ? cutoff + 1 : cutoff;
  std::vector<const TreeNode*> kids;
  kids.reserve(n->children.size());
  for (const TreeNode* c : n->children) kids.push_back(shift(c, d, inner));
  const TreeNode* r = make(n->type, shift_label(n->label, d, cutoff), std::move(kids));
  shift_memo_.emplace(key, r);
  return r;
}

const TreeNode* NormalizerSession::app_substitute(const TreeNode* raw, std::uint32_t ind, const TreeNode* eval) {
  bool eval_is_name = eval->type == NodeType::Name;
  std::unordered_map<std::pair<const TreeNode*, std::uint64_t>, const TreeNode*, PairHash> memo;

  auto sub_label = [&](Label l, std::uint32_t c) -> Label {
    if (!l.is_index() || l.value < c) return l;
    if (l.value > c) return {Label::Kind::Index, l.value - 1};
    if (!eval_is_name) throw KindError("process substituted into a channel position");
    return shift(eval, c - 1)->label;
  };

  std::function<const TreeNode*(const TreeNode*, std::uint32_t)> go = [&](const TreeNode* n,
                                                                          std::uint32_t c) -> const TreeNode* {
    if (n->max_free < c) return n;
    auto key = std::make_pair(n, static_cast<std::uint64_t>(c));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const TreeNode* r = nullptr;
    switch (n->type) {
      case NodeType::Var:
        if (n->label.value == c) {
          if (eval_is_name) throw KindError("name substituted into a process position");
          r = shift(eval, c - 1);
        } else {
          r = var(n->label.value - 1);
        }
        break;
      case NodeType::Name: r = make(NodeType::Name, sub_label(n->label, c)); break;
      case NodeType::Inp: r = inp(sub_label(n->label, c), go(n->children[0], c + 1)); break;
      case NodeType::Out: r = out(sub_label(n->label, c), go(n->children[0], c)); break;
      case NodeType::Abs: r = make(NodeType::Abs, n->label, {go(n->children[0], c + 1)}); break;
      case NodeType::Par: {
        std::vector<const TreeNode*> kids;
        kids.reserve(n->children.size());
        for (const TreeNode* k : n->children) kids.push_back(go(k, c));
        r = par(std::move(kids));
        break;
      }
      case NodeType::App: {
        const TreeNode* f = go(n->children[0], c);
        const TreeNode* a = go(n->children[1], c);
        if (f->type == NodeType::Abs) {
          bool over_name = f->label.kind == Label::Kind::NameBinder;
          if (over_name != (a->type == NodeType::Name)) throw KindError("application argument of the wrong kind");
          r = app_substitute(f->children[0], 1, a);
        } else {
          r = app(f, a);
        }
        break;
      }
      case NodeType::Zero: r = n; break;
    }
    memo.emplace(key, r);
    return r;
  };
  return go(raw, ind);
}

// ---- normalization steps ----------------------------------------------------

const TreeNode* NormalizerSession::ns1(const TreeNode* n) {
  if (n->children.empty()) return n;
  auto it = ns1_memo_.find(n);
  if (it != ns1_memo_.end()) return it->second;
  std::vector<const TreeNode*> kids;
  kids.reserve(n->children.size());
  for (const TreeNode* c : n->children) kids.push_back(ns1(c));
  const TreeNode* r;
  if (n->type == NodeType::App && kids[0]->type == NodeType::Abs) {
    bool over_name = kids[0]->label.kind == Label::Kind::NameBinder;
    if (over_name != (kids[1]->type == NodeType::Name)) throw KindError("application argument of the wrong kind");
    r = app_substitute(kids[0]->children[0], 1, kids[1]);
  } else {
    r = make(n->type, n->label, std::move(kids));
  }
  ns1_memo_.emplace(n, r);
  return r;
}

int NormalizerSession::compare(const TreeNode* a, const TreeNode* b) const {
  if (a == b) return 0;
  if (a->type != b->type) return a->type < b->type ? -1 : 1;
  const Label &la = a->label, &lb = b->label;
  if (!(la == lb)) {
    auto symbolic = [](Label l) {
      return l.kind == Label::Kind::Constant || l.kind == Label::Kind::FreeName || l.kind == Label::Kind::FreeProc;
    };
    if (la.is_index() != lb.is_index()) return la.is_index() ? -1 : 1;
    if (la.is_index()) return la.value < lb.value ? -1 : 1;
    if (symbolic(la) && symbolic(lb)) {
      int c = symbols_[la.value].compare(symbols_[lb.value]);
      if (c != 0) return c < 0 ? -1 : 1;
    }
    if (la.kind != lb.kind) return la.kind < lb.kind ? -1 : 1;
    return la.value < lb.value ? -1 : 1;
  }
  if (a->children.size() != b->children.size()) return a->children.size() < b->children.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (int c = compare(a->children[i], b->children[i])) return c;
  return 0;
}

const TreeNode* NormalizerSession::normalize_par(std::vector<const TreeNode*> children) {
  std::vector<const TreeNode*> flat;
  flat.reserve(children.size());
  for (const TreeNode* c : children) {
    if (c->type == NodeType::Zero) continue;
    if (c->type == NodeType::Par) flat.insert(flat.end(), c->children.begin(), c->children.end());
    else flat.push_back(c);
  }
  if (flat.empty()) return zero_;
  if (flat.size() == 1) return flat.front();
  std::sort(flat.begin(), flat.end(), [this](const TreeNode* a, const TreeNode* b) { return compare(a, b) < 0; });
  return par(std::move(flat));
}

const TreeNode* NormalizerSession::ns2(const TreeNode* n) {
  if (n->children.empty()) return n;
  auto it = ns2_memo_.find(n);
  if (it != ns2_memo_.end()) return it->second;
  std::vector<const TreeNode*> kids;
  kids.reserve(n->children.size());
  for (const TreeNode* c : n->children) kids.push_back(ns2(c));
  const TreeNode* r = n->type == NodeType::Par ? normalize_par(std::move(kids)) : make(n->type, n->label, std::move(kids));
  ns2_memo_.emplace(n, r);
  return r;
}

bool NormalizerSession::equals_shifted(const TreeNode* small, const TreeNode* big, std::uint32_t cutoff) const {
  if (small->max_free <= cutoff) return small == big;
  if (small->type != big->type || small->children.size() != big->children.size()) return false;
  if (!(shift_label(small->label, 1, cutoff) == big->label)) return false;
  std::uint32_t inner = (small->type == NodeType::Inp || small->type == NodeType::Abs) ? cutoff + 1 : cutoff;
  for (std::size_t i = 0; i < small->children.size(); ++i)
    if (!equals_shifted(small->children[i], big->children[i], inner)) return false;
  return true;
}

// a(X).(P | a(X).P ... ) becomes a(X).P | ... with one more copy. The
// continuation of `n` lives under one more binder than `n` itself, so the
// inner copies carry the shifted channel of `n`, and P seen from inside them
// has every index other than the shared bound variable shifted by one.
const TreeNode* NormalizerSession::distribute(const TreeNode* n) {
  const TreeNode* cont = n->children[0];
  if (cont->type == NodeType::Zero) return n;
  std::vector<const TreeNode*> single{cont};
  const std::vector<const TreeNode*>& comps = cont->type == NodeType::Par ? cont->children : single;
  Label expected = shift_label(n->label, 1, 0);

  for (std::size_t i = 0; i < comps.size();) {
    std::size_t j = i;
    while (j < comps.size() && comps[j] == comps[i]) ++j;
    const TreeNode* big = comps[i];
    std::size_t cnt = j - i;
    if (big->type == NodeType::Inp && big->label == expected) {
      const TreeNode* inner = big->children[0];
      if (component_count(inner) == comps.size() - cnt) {
        std::vector<const TreeNode*> rest;
        rest.reserve(comps.size() - cnt);
        for (std::size_t k = 0; k < comps.size(); ++k)
          if (k < i || k >= j) rest.push_back(comps[k]);
        bool match = true;
        if (rest.size() == 1) {
          match = equals_shifted(rest[0], inner, 1);
        } else if (!rest.empty()) {
          for (std::size_t k = 0; k < rest.size() && match; ++k)
            match = equals_shifted(rest[k], inner->children[k], 1);
        }
        if (match) {
          // The copies replace `n`, outside its binder: a(X).P with P = rest.
          const TreeNode* small = rest.empty() ? zero_ : rest.size() == 1 ? rest[0] : par(rest);
          return par(std::vector<const TreeNode*>(cnt + 1, inp(n->label, small)));
        }
      }
    }
    i = j;
  }
  return n;
}

const TreeNode* NormalizerSession::ns3(const TreeNode* n) {
  if (n->children.empty()) return n;
  auto it = ns3_memo_.find(n);
  if (it != ns3_memo_.end()) return it->second;
  std::vector<const TreeNode*> kids;
  kids.reserve(n->children.size());
  for (const TreeNode* c : n->children) kids.push_back(ns3(c));
  const TreeNode* r;
  if (n->type == NodeType::Par) r = normalize_par(std::move(kids));
  else if (n->type == NodeType::Inp) r = distribute(inp(n->label, kids[0]));
  else r = make(n->type, n->label, std::move(kids));
  ns3_memo_.emplace(n, r);
  return r;
}

const TreeNode* NormalizerSession::nf(const Term& t) {
  const TreeNode* n = ns2(ns1(to_tree(t)));
  for (;;) {
    const TreeNode* m = ns3(n);
    if (m == n) return n;
    n = m;
  }
}

Verdict NormalizerSession::nf_equal(const Term& p, const Term& q) {
  const TreeNode* a = nf(p);
  const TreeNode* b = nf(q);
  Verdict v;
  v.equal = a == b;
  v.normal_forms = std::make_pair(print(a), print(b));
  return v;
}

Verdict nf_equal(const Term& p, const Term& q) {
  NormalizerSession s;
  return s.nf_equal(p, q);
}

// ---- back to terms ----------------------------------------------------------

Term NormalizerSession::to_term(const TreeNode* root) {
  std::set<std::string> taken;
  std::vector<const TreeNode*> stack{root};
  std::unordered_set<const TreeNode*> seen;
  while (!stack.empty()) {
    const TreeNode* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    Label::Kind k = n->label.kind;
    if (k == Label::Kind::Constant || k == Label::Kind::FreeName || k == Label::Kind::FreeProc)
      taken.insert(symbols_[n->label.value]);
    for (const TreeNode* c : n->children) stack.push_back(c);
  }
  auto binder = [&](bool is_name, std::size_t depth) {
    std::string id = std::string(is_name ? "x" : "X") + std::to_string(depth);
    while (taken.count(id)) id += "_";
    return id;
  };

  std::vector<std::string> env;
  auto name_of = [&](Label l) -> Name {
    switch (l.kind) {
      case Label::Kind::Index: return Name::variable(env[env.size() - l.value]);
      case Label::Kind::Constant: return Name::constant(symbols_[l.value]);
      default: return Name::variable(symbols_[l.value]);
    }
  };

  std::function<Term(const TreeNode*)> go = [&](const TreeNode* n) -> Term {
    switch (n->type) {
      case NodeType::Zero: return Term::nil();
      case NodeType::Var:
        if (n->label.is_index()) return Term::var(ProcVar{env[env.size() - n->label.value], Sort::proc()});
        return Term::var(ProcVar{symbols_[n->label.value], Sort::proc()});
      case NodeType::Inp: {
        Name ch = name_of(n->label);
        env.push_back(binder(false, env.size() + 1));
        Term body = go(n->children[0]);
        ProcVar x{env.back(), Sort::proc()};
        env.pop_back();
        return Term::input(ch, x, body);
      }
      case NodeType::Out: return Term::output(name_of(n->label), go(n->children[0]));
      case NodeType::Par: {
        std::vector<Term> parts;
        for (const TreeNode* c : n->children) parts.push_back(go(c));
        return par_of(parts);
      }
      case NodeType::Abs: {
        bool over_name = n->label.kind == Label::Kind::NameBinder;
        env.push_back(binder(over_name, env.size() + 1));
        Term body = go(n->children[0]);
        std::string x = env.back();
        env.pop_back();
        return over_name ? Term::name_abs(x, body) : Term::proc_abs(ProcVar{x, Sort::proc()}, body);
      }
      case NodeType::App: {
        Term f = go(n->children[0]);
        const TreeNode* a = n->children[1];
        if (a->type == NodeType::Name) return Term::name_app(f, name_of(a->label));
        return Term::proc_app(f, go(a));
      }
      case NodeType::Name: throw KindError("name leaf outside an application");
    }
    return Term::nil();
  };
  return elaborate(go(root)).term;
}

// ---- printing ---------------------------------------------------------------

namespace {

std::string label_text(const NormalizerSession& s, const TreeNode* n) {
  const Label& l = n->label;
  std::string base;
  switch (l.kind) {
    case Label::Kind::None: return "";
    case Label::Kind::Index: base = std::to_string(l.value); break;
    case Label::Kind::Constant:
    case Label::Kind::FreeName:
    case Label::Kind::FreeProc: base = s.symbol(l.value); break;
    case Label::Kind::ProcBinder: return "proc";
    case Label::Kind::NameBinder: return "name";
  }
  if (n->type == NodeType::Inp) base += "^I";
  if (n->type == NodeType::Out) base += "^O";
  return base;
}

}  // namespace

std::string NormalizerSession::print(const TreeNode* n) const {
  std::string s = to_string(n->type);
  std::string l = label_text(*this, n);
  if (!l.empty()) s += "(" + l + ")";
  if (n->children.empty()) return s;
  s += "[";
  for (std::size_t i = 0; i < n->children.size(); ++i) {
    if (i) s += ", ";
    s += print(n->children[i]);
  }
  return s + "]";
}

void NormalizerSession::dump(std::ostream& os, const TreeNode* root) const {
  std::unordered_set<const TreeNode*> done;
  std::function<void(const TreeNode*)> go = [&](const TreeNode* n) {
    if (!done.insert(n).second) return;
    for (const TreeNode* c : n->children) go(c);
    std::string l = label_text(*this, n);
    os << n->id << ' ' << to_string(n->type) << ' ' << (l.empty() ? "-" : l);
    for (const TreeNode* c : n->children) os << ' ' << c->id;
    os << '\n';
  };
  go(root);
}

}  // namespace hopi
