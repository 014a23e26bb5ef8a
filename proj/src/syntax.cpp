#include "hopi/syntax.hpp"

#include <atomic>
#include <cctype>
#include <vector>

namespace hopi {

// ---- Sort ----------------------------------------------------------------

Sort Sort::pabs(Sort arg, Sort result) {
  Sort s;
  s.kind_ = Kind::PAbs;
  s.arg_ = std::make_shared<const Sort>(std::move(arg));
  s.result_ = std::make_shared<const Sort>(std::move(result));
  return s;
}

Sort Sort::nabs(Sort result) {
  Sort s;
  s.kind_ = Kind::NAbs;
  s.result_ = std::make_shared<const Sort>(std::move(result));
  return s;
}

const Sort& Sort::arg() const {
  if (kind_ != Kind::PAbs) throw SortError("sort has no argument: " + to_string());
  return *arg_;
}

const Sort& Sort::result() const {
  if (kind_ == Kind::Proc) throw SortError("proc has no result sort");
  return *result_;
}

int Sort::order() const {
  switch (kind_) {
    case Kind::Proc: return 0;
    case Kind::PAbs: return 1 + std::max(arg_->order(), result_->order());
    case Kind::NAbs: return 1 + result_->order();
  }
  return 0;
}

std::string Sort::to_string() const {
  switch (kind_) {
    case Kind::Proc: return "proc";
    case Kind::PAbs: {
      std::string a = arg_->to_string();
      if (arg_->is_abstraction()) a = "(" + a + ")";
      return a + " -> " + result_->to_string();
    }
    case Kind::NAbs: return "name -> " + result_->to_string();
  }
  return "?";
}

bool operator==(const Sort& a, const Sort& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Sort::Kind::Proc: return true;
    case Sort::Kind::PAbs: return *a.arg_ == *b.arg_ && *a.result_ == *b.result_;
    case Sort::Kind::NAbs: return *a.result_ == *b.result_;
  }
  return false;
}

namespace {

class SortTextParser {
 public:
  explicit SortTextParser(const std::string& s) : s_(s) {}

  // Returns nullopt for a bare "name" (only legal as the left of an arrow).
  std::optional<Sort> parse_arrow() {
    skip();
    bool is_name = false;
    std::optional<Sort> left;
    if (peek() == '(') {
      ++i_;
      left = parse_arrow();
      skip();
      expect(')');
    } else {
      std::string w = word();
      if (w == "proc") left = Sort::proc();
      else if (w == "name") is_name = true;
      else throw SortError("unknown sort '" + w + "' in '" + s_ + "'", i_);
    }
    skip();
    if (s_.compare(i_, 2, "->") == 0) {
      i_ += 2;
      auto right = parse_arrow();
      if (!right) throw SortError("'name' cannot be the result of an arrow", i_);
      if (is_name) return Sort::nabs(*right);
      return Sort::pabs(*left, *right);
    }
    if (is_name) return std::nullopt;
    return left;
  }

  bool at_end() {
    skip();
    return i_ >= s_.size();
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void expect(char c) {
    if (peek() != c) throw SortError(std::string("expected '") + c + "' in sort '" + s_ + "'", i_);
    ++i_;
  }
  std::string word() {
    std::size_t start = i_;
    while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
    return s_.substr(start, i_ - start);
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace

Sort parse_sort(const std::string& text) {
  SortTextParser p(text);
  auto s = p.parse_arrow();
  if (!p.at_end()) throw SortError("trailing characters in sort '" + text + "'");
  if (!s) throw SortError("'name' is not a process sort");
  return *s;
}

SortContext parse_sort_context(const std::string& text) {
  SortContext ctx;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    start = comma == std::string::npos ? text.size() + 1 : comma + 1;
    auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    auto colon = item.find(':');
    if (colon == std::string::npos) throw SortError("expected IDENT:SORT in '" + item + "'");
    std::string id = item.substr(0, colon);
    while (!id.empty() && std::isspace(static_cast<unsigned char>(id.back()))) id.pop_back();
    std::string sort = item.substr(colon + 1);
    if (id.empty()) throw SortError("empty identifier in '" + item + "'");
    if (std::isupper(static_cast<unsigned char>(id[0]))) {
      ctx.procs[id] = parse_sort(sort);
    } else {
      SortTextParser p(sort);
      auto s = p.parse_arrow();
      if (s || !p.at_end()) throw SortError("name '" + id + "' must have sort 'name'");
      ctx.names.insert(id);
    }
  }
  return ctx;
}

// ---- Term ----------------------------------------------------------------

namespace {

std::shared_ptr<Term::Node> make_node(Term::Kind k, std::size_t pos) {
  auto n = std::make_shared<Term::Node>();
  n->kind = k;
  n->pos = pos;
  return n;
}

const Term::Node& nil_node() {
  static const Term::Node n;
  return n;
}

}  // namespace

Term::Term() = default;

Term Term::nil(std::size_t pos) {
  if (pos == kNoPos) return Term();
  return Term(make_node(Kind::Nil, pos));
}

Term Term::var(ProcVar v, std::size_t pos) {
  auto n = make_node(Kind::Var, pos);
  n->pvar = std::move(v);
  return Term(std::move(n));
}

Term Term::input(Name chan, ProcVar bound, Term body, std::size_t pos) {
  auto n = make_node(Kind::Input, pos);
  n->name = std::move(chan);
  n->pvar = std::move(bound);
  n->a = std::move(body);
  return Term(std::move(n));
}

Term Term::output(Name chan, Term payload, std::size_t pos) {
  auto n = make_node(Kind::Output, pos);
  n->name = std::move(chan);
  n->a = std::move(payload);
  return Term(std::move(n));
}

Term Term::par(Term left, Term right, std::size_t pos) {
  auto n = make_node(Kind::Par, pos);
  n->a = std::move(left);
  n->b = std::move(right);
  return Term(std::move(n));
}

Term Term::proc_abs(ProcVar bound, Term body, std::size_t pos) {
  auto n = make_node(Kind::ProcAbs, pos);
  n->pvar = std::move(bound);
  n->a = std::move(body);
  return Term(std::move(n));
}

Term Term::proc_app(Term fun, Term arg, std::size_t pos) {
  auto n = make_node(Kind::ProcApp, pos);
  n->a = std::move(fun);
  n->b = std::move(arg);
  return Term(std::move(n));
}

Term Term::name_abs(std::string bound, Term body, std::size_t pos) {
  auto n = make_node(Kind::NameAbs, pos);
  n->nvar = std::move(bound);
  n->a = std::move(body);
  return Term(std::move(n));
}

Term Term::name_app(Term fun, Name arg, std::size_t pos) {
  auto n = make_node(Kind::NameApp, pos);
  n->a = std::move(fun);
  n->name = std::move(arg);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_ ? node_->kind : Kind::Nil; }
std::size_t Term::pos() const { return node_ ? node_->pos : kNoPos; }

const ProcVar& Term::var() const { return node_->pvar; }
const Name& Term::chan() const { return node_->name; }
const ProcVar& Term::bound_proc() const { return node_->pvar; }
const std::string& Term::bound_name() const { return node_->nvar; }
const Term& Term::body() const { return node_->a; }
const Term& Term::payload() const { return node_->a; }
const Term& Term::left() const { return node_->a; }
const Term& Term::right() const { return node_->b; }
const Term& Term::fun() const { return node_->a; }
const Term& Term::arg() const { return node_->b; }
const Name& Term::name_arg() const { return node_->name; }

std::size_t Term::size() const {
  switch (kind()) {
    case Kind::Nil:
    case Kind::Var: return 1;
    case Kind::Input:
    case Kind::Output:
    case Kind::ProcAbs:
    case Kind::NameAbs:
    case Kind::NameApp: return 1 + node_->a.size();
    case Kind::Par:
    case Kind::ProcApp: return 1 + node_->a.size() + node_->b.size();
  }
  return 1;
}

bool operator==(const Term& x, const Term& y) {
  if (x.node_ == y.node_) return true;
  if (x.kind() != y.kind()) return false;
  const Term::Node& a = x.node_ ? *x.node_ : nil_node();
  const Term::Node& b = y.node_ ? *y.node_ : nil_node();
  switch (a.kind) {
    case Term::Kind::Nil: return true;
    case Term::Kind::Var: return a.pvar == b.pvar;
    case Term::Kind::Input: return a.name == b.name && a.pvar == b.pvar && a.a == b.a;
    case Term::Kind::Output: return a.name == b.name && a.a == b.a;
    case Term::Kind::Par:
    case Term::Kind::ProcApp: return a.a == b.a && a.b == b.b;
    case Term::Kind::ProcAbs: return a.pvar == b.pvar && a.a == b.a;
    case Term::Kind::NameAbs: return a.nvar == b.nvar && a.a == b.a;
    case Term::Kind::NameApp: return a.name == b.name && a.a == b.a;
  }
  return false;
}

// ---- free variables ------------------------------------------------------

namespace {

void collect_free(const Term& t, std::vector<std::string>& bound_p, std::vector<std::string>& bound_n,
                  FreeVars& out) {
  auto is_bound = [](const std::vector<std::string>& v, const std::string& s) {
    for (auto it = v.rbegin(); it != v.rend(); ++it)
      if (*it == s) return true;
    return false;
  };
  auto name_use = [&](const Name& n) {
    if (n.is_variable() && !is_bound(bound_n, n.ident)) out.names.insert(n.ident);
  };
  switch (t.kind()) {
    case Term::Kind::Nil: return;
    case Term::Kind::Var:
      if (!is_bound(bound_p, t.var().ident)) out.procs.insert(t.var().ident);
      return;
    case Term::Kind::Input:
      name_use(t.chan());
      bound_p.push_back(t.bound_proc().ident);
      collect_free(t.body(), bound_p, bound_n, out);
      bound_p.pop_back();
      return;
    case Term::Kind::Output:
      name_use(t.chan());
      collect_free(t.payload(), bound_p, bound_n, out);
      return;
    case Term::Kind::Par:
      collect_free(t.left(), bound_p, bound_n, out);
      collect_free(t.right(), bound_p, bound_n, out);
      return;
    case Term::Kind::ProcAbs:
      bound_p.push_back(t.bound_proc().ident);
      collect_free(t.body(), bound_p, bound_n, out);
      bound_p.pop_back();
      return;
    case Term::Kind::ProcApp:
      collect_free(t.fun(), bound_p, bound_n, out);
      collect_free(t.arg(), bound_p, bound_n, out);
      return;
    case Term::Kind::NameAbs:
      bound_n.push_back(t.bound_name());
      collect_free(t.body(), bound_p, bound_n, out);
      bound_n.pop_back();
      return;
    case Term::Kind::NameApp:
      collect_free(t.fun(), bound_p, bound_n, out);
      name_use(t.name_arg());
      return;
  }
}

void collect_constants(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Nil:
    case Term::Kind::Var: return;
    case Term::Kind::Input:
    case Term::Kind::Output:
      if (!t.chan().is_variable()) out.insert(t.chan().ident);
      collect_constants(t.body(), out);
      return;
    case Term::Kind::Par:
    case Term::Kind::ProcApp:
      collect_constants(t.left(), out);
      collect_constants(t.right(), out);
      return;
    case Term::Kind::ProcAbs:
    case Term::Kind::NameAbs:
      collect_constants(t.body(), out);
      return;
    case Term::Kind::NameApp:
      if (!t.name_arg().is_variable()) out.insert(t.name_arg().ident);
      collect_constants(t.fun(), out);
      return;
  }
}

}  // namespace

FreeVars free_vars(const Term& t) {
  FreeVars out;
  std::vector<std::string> bp, bn;
  collect_free(t, bp, bn, out);
  return out;
}

bool occurs_free_proc(const Term& t, const std::string& x) {
  switch (t.kind()) {
    case Term::Kind::Nil: return false;
    case Term::Kind::Var: return t.var().ident == x;
    case Term::Kind::Input:
    case Term::Kind::ProcAbs: return t.bound_proc().ident != x && occurs_free_proc(t.body(), x);
    case Term::Kind::Output:
    case Term::Kind::NameAbs:
    case Term::Kind::NameApp: return occurs_free_proc(t.body(), x);
    case Term::Kind::Par:
    case Term::Kind::ProcApp: return occurs_free_proc(t.left(), x) || occurs_free_proc(t.right(), x);
  }
  return false;
}

bool occurs_free_name(const Term& t, const std::string& x) {
  auto hit = [&](const Name& n) { return n.is_variable() && n.ident == x; };
  switch (t.kind()) {
    case Term::Kind::Nil:
    case Term::Kind::Var: return false;
    case Term::Kind::Input:
    case Term::Kind::Output: return hit(t.chan()) || occurs_free_name(t.body(), x);
    case Term::Kind::ProcAbs: return occurs_free_name(t.body(), x);
    case Term::Kind::NameAbs: return t.bound_name() != x && occurs_free_name(t.body(), x);
    case Term::Kind::NameApp: return hit(t.name_arg()) || occurs_free_name(t.fun(), x);
    case Term::Kind::Par:
    case Term::Kind::ProcApp: return occurs_free_name(t.left(), x) || occurs_free_name(t.right(), x);
  }
  return false;
}

std::set<std::string> name_constants(const Term& t) {
  std::set<std::string> out;
  collect_constants(t, out);
  return out;
}

std::string fresh_ident(const std::string& base) {
  static std::atomic<unsigned long long> counter{0};
  std::string stem = base;
  auto us = stem.rfind('_');
  if (us != std::string::npos && us + 1 < stem.size() &&
      stem.find_first_not_of("0123456789", us + 1) == std::string::npos)
    stem.resize(us);
  if (stem.empty()) stem = "V";
  return stem + "_" + std::to_string(++counter);
}

// ---- sorts from annotations ----------------------------------------------

std::optional<Sort> annotated_sort(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Nil:
    case Term::Kind::Input:
    case Term::Kind::Output:
    case Term::Kind::Par: return Sort::proc();
    case Term::Kind::Var: return t.var().sort;
    case Term::Kind::ProcAbs: {
      auto b = annotated_sort(t.body());
      if (!b) return std::nullopt;
      return Sort::pabs(t.bound_proc().sort, *b);
    }
    case Term::Kind::NameAbs: {
      auto b = annotated_sort(t.body());
      if (!b) return std::nullopt;
      return Sort::nabs(*b);
    }
    case Term::Kind::ProcApp: {
      auto f = annotated_sort(t.fun());
      if (!f || f->kind() != Sort::Kind::PAbs) return std::nullopt;
      return f->result();
    }
    case Term::Kind::NameApp: {
      auto f = annotated_sort(t.fun());
      if (!f || f->kind() != Sort::Kind::NAbs) return std::nullopt;
      return f->result();
    }
  }
  return std::nullopt;
}

// ---- substitution --------------------------------------------------------

namespace {

Term subst_proc_raw(const Term& t, const Term& r, const std::string& x, const FreeVars& fr);

// Renames binder `y` of a process-binding node when it would capture a free
// variable of the substituted term.
Term subst_under_proc_binder(const Term& t, const Term& r, const std::string& x, const FreeVars& fr,
                             bool is_input) {
  const ProcVar& y = t.bound_proc();
  if (y.ident == x || !occurs_free_proc(t.body(), x)) return t;
  ProcVar bound = y;
  Term body = t.body();
  if (fr.procs.count(y.ident)) {
    bound.ident = fresh_ident(y.ident);
    body = subst_proc_raw(body, Term::var(bound), y.ident, FreeVars{{bound.ident}, {}});
  }
  body = subst_proc_raw(body, r, x, fr);
  return is_input ? Term::input(t.chan(), bound, body, t.pos()) : Term::proc_abs(bound, body, t.pos());
}

Term subst_proc_raw(const Term& t, const Term& r, const std::string& x, const FreeVars& fr) {
  switch (t.kind()) {
    case Term::Kind::Nil: return t;
    case Term::Kind::Var: return t.var().ident == x ? r : t;
    case Term::Kind::Input: return subst_under_proc_binder(t, r, x, fr, true);
    case Term::Kind::ProcAbs: return subst_under_proc_binder(t, r, x, fr, false);
    case Term::Kind::Output: {
      Term p = subst_proc_raw(t.payload(), r, x, fr);
      return p.same(t.payload()) ? t : Term::output(t.chan(), p, t.pos());
    }
    case Term::Kind::Par:
    case Term::Kind::ProcApp: {
      Term a = subst_proc_raw(t.left(), r, x, fr);
      Term b = subst_proc_raw(t.right(), r, x, fr);
      if (a.same(t.left()) && b.same(t.right())) return t;
      return t.kind() == Term::Kind::Par ? Term::par(a, b, t.pos()) : Term::proc_app(a, b, t.pos());
    }
    case Term::Kind::NameAbs: {
      if (!occurs_free_proc(t.body(), x)) return t;
      std::string y = t.bound_name();
      Term body = t.body();
      if (fr.names.count(y)) {
        std::string fresh = fresh_ident(y);
        body = subst_name(body, Name::variable(fresh), Name::variable(y));
        y = fresh;
      }
      return Term::name_abs(y, subst_proc_raw(body, r, x, fr), t.pos());
    }
    case Term::Kind::NameApp: {
      Term f = subst_proc_raw(t.fun(), r, x, fr);
      return f.same(t.fun()) ? t : Term::name_app(f, t.name_arg(), t.pos());
    }
  }
  return t;
}

}  // namespace

Term subst_proc(const Term& t, const Term& r, const ProcVar& x) {
  auto rs = annotated_sort(r);
  if (rs && !(*rs == x.sort))
    throw SortError("cannot substitute a term of sort " + rs->to_string() + " for " + x.ident + " : " +
                        x.sort.to_string(),
                    r.pos());
  return subst_proc_raw(t, r, x.ident, free_vars(r));
}

Term subst_proc_unchecked(const Term& t, const Term& r, const std::string& x) {
  return subst_proc_raw(t, r, x, free_vars(r));
}

Term subst_name(const Term& t, const Name& g, const Name& m) {
  auto swap = [&](const Name& n) -> const Name& { return n == m ? g : n; };
  switch (t.kind()) {
    case Term::Kind::Nil:
    case Term::Kind::Var: return t;
    case Term::Kind::Input: {
      Term b = subst_name(t.body(), g, m);
      return Term::input(swap(t.chan()), t.bound_proc(), b, t.pos());
    }
    case Term::Kind::Output: return Term::output(swap(t.chan()), subst_name(t.payload(), g, m), t.pos());
    case Term::Kind::Par: return Term::par(subst_name(t.left(), g, m), subst_name(t.right(), g, m), t.pos());
    case Term::Kind::ProcApp:
      return Term::proc_app(subst_name(t.fun(), g, m), subst_name(t.arg(), g, m), t.pos());
    case Term::Kind::ProcAbs: return Term::proc_abs(t.bound_proc(), subst_name(t.body(), g, m), t.pos());
    case Term::Kind::NameAbs: {
      const std::string& y = t.bound_name();
      if (m.is_variable() && y == m.ident) return t;
      if (g.is_variable() && y == g.ident && m.is_variable() && occurs_free_name(t.body(), m.ident)) {
        std::string fresh = fresh_ident(y);
        Term body = subst_name(t.body(), Name::variable(fresh), Name::variable(y));
        return Term::name_abs(fresh, subst_name(body, g, m), t.pos());
      }
      return Term::name_abs(y, subst_name(t.body(), g, m), t.pos());
    }
    case Term::Kind::NameApp: return Term::name_app(subst_name(t.fun(), g, m), swap(t.name_arg()), t.pos());
  }
  return t;
}

// ---- beta-normalization and depth ----------------------------------------

Term beta_normalize(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Nil:
    case Term::Kind::Var: return t;
    case Term::Kind::Input: return Term::input(t.chan(), t.bound_proc(), beta_normalize(t.body()), t.pos());
    case Term::Kind::Output: return Term::output(t.chan(), beta_normalize(t.payload()), t.pos());
    case Term::Kind::Par: return Term::par(beta_normalize(t.left()), beta_normalize(t.right()), t.pos());
    case Term::Kind::ProcAbs: return Term::proc_abs(t.bound_proc(), beta_normalize(t.body()), t.pos());
    case Term::Kind::NameAbs: return Term::name_abs(t.bound_name(), beta_normalize(t.body()), t.pos());
    case Term::Kind::ProcApp: {
      Term f = beta_normalize(t.fun());
      Term a = beta_normalize(t.arg());
      if (f.kind() == Term::Kind::ProcAbs)
        return beta_normalize(subst_proc_raw(f.body(), a, f.bound_proc().ident, free_vars(a)));
      return Term::proc_app(f, a, t.pos());
    }
    case Term::Kind::NameApp: {
      Term f = beta_normalize(t.fun());
      if (f.kind() == Term::Kind::NameAbs)
        return beta_normalize(subst_name(f.body(), t.name_arg(), Name::variable(f.bound_name())));
      return Term::name_app(f, t.name_arg(), t.pos());
    }
  }
  return t;
}

std::size_t depth(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Nil: return 0;
    case Term::Kind::Var: return 1;
    case Term::Kind::Input:
    case Term::Kind::Output:
    case Term::Kind::ProcAbs:
    case Term::Kind::NameAbs: return depth(t.body()) + 1;
    case Term::Kind::Par: return depth(t.left()) + depth(t.right());
    case Term::Kind::ProcApp: {
      Term f = beta_normalize(t.fun());
      if (f.kind() == Term::Kind::ProcAbs)
        return depth(subst_proc_raw(f.body(), t.arg(), f.bound_proc().ident, free_vars(t.arg())));
      if (f.kind() != Term::Kind::Var && f.kind() != Term::Kind::ProcApp && f.kind() != Term::Kind::NameApp)
        throw SortError("application of a non-abstraction", t.pos());
      return depth(f) + depth(t.arg());
    }
    case Term::Kind::NameApp: {
      Term f = beta_normalize(t.fun());
      if (f.kind() == Term::Kind::NameAbs)
        return depth(subst_name(f.body(), t.name_arg(), Name::variable(f.bound_name())));
      if (f.kind() != Term::Kind::Var && f.kind() != Term::Kind::ProcApp && f.kind() != Term::Kind::NameApp)
        throw SortError("name application of a non-abstraction", t.pos());
      return depth(f);
    }
  }
  return 0;
}

// ---- guardedness ---------------------------------------------------------

namespace {

bool is_var_headed(const Term& t) {
  Term h = t;
  while (h.kind() == Term::Kind::ProcApp || h.kind() == Term::Kind::NameApp) h = h.fun();
  return h.kind() == Term::Kind::Var;
}

const std::string& head_ident(const Term& t) {
  const Term* h = &t;
  while (h->kind() == Term::Kind::ProcApp || h->kind() == Term::Kind::NameApp) h = &h->fun();
  return h->var().ident;
}

// Returns true when no unguarded occurrence of x is found.
bool guarded_walk(const std::string& x, bool is_proc, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Nil: return true;
    case Term::Kind::Var: return !(is_proc && t.var().ident == x);
    case Term::Kind::Input:
    case Term::Kind::Output: return true;  // everything inside a prefix or an output is guarded
    case Term::Kind::Par: return guarded_walk(x, is_proc, t.left()) && guarded_walk(x, is_proc, t.right());
    case Term::Kind::ProcAbs:
      if (is_proc && t.bound_proc().ident == x) return true;
      return guarded_walk(x, is_proc, t.body());
    case Term::Kind::NameAbs:
      if (!is_proc && t.bound_name() == x) return true;
      return guarded_walk(x, is_proc, t.body());
    case Term::Kind::ProcApp:
    case Term::Kind::NameApp:
      if (is_var_headed(t)) {
        // Y<P'> with Y != x guards everything inside.
        if (is_proc && head_ident(t) == x) return false;
        return true;
      }
      if (t.kind() == Term::Kind::NameApp)
        return guarded_walk(x, is_proc, t.fun()) && !(!is_proc && t.name_arg().is_variable() && t.name_arg().ident == x);
      return guarded_walk(x, is_proc, t.fun()) && guarded_walk(x, is_proc, t.arg());
  }
  return true;
}

}  // namespace

bool is_guarded(const std::string& x, const Term& t) {
  if (x.empty()) return true;
  bool is_proc = std::isupper(static_cast<unsigned char>(x[0])) != 0;
  return guarded_walk(x, is_proc, t);
}

bool is_guarded(const Term& t) {
  FreeVars fv = free_vars(t);
  for (const auto& x : fv.procs)
    if (!is_guarded(x, t)) return false;
  for (const auto& x : fv.names)
    if (!is_guarded(x, t)) return false;
  return true;
}

// ---- alpha-equivalence ---------------------------------------------------

namespace {

struct AlphaEnv {
  std::vector<std::pair<std::string, std::string>> procs;
  std::vector<std::pair<std::string, std::string>> names;
};

// Both identifiers must be bound at the same binder, or both free and equal.
bool same_var(const std::vector<std::pair<std::string, std::string>>& env, const std::string& a,
              const std::string& b) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    bool ha = it->first == a, hb = it->second == b;
    if (ha || hb) return ha && hb;
  }
  return a == b;
}

bool same_name(const AlphaEnv& env, const Name& a, const Name& b) {
  if (a.kind != b.kind) return false;
  if (!a.is_variable()) return a.ident == b.ident;
  return same_var(env.names, a.ident, b.ident);
}

bool alpha_rec(const Term& x, const Term& y, AlphaEnv& env) {
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::Nil: return true;
    case Term::Kind::Var: return same_var(env.procs, x.var().ident, y.var().ident);
    case Term::Kind::Input:
    case Term::Kind::ProcAbs: {
      if (x.kind() == Term::Kind::Input && !same_name(env, x.chan(), y.chan())) return false;
      env.procs.emplace_back(x.bound_proc().ident, y.bound_proc().ident);
      bool r = alpha_rec(x.body(), y.body(), env);
      env.procs.pop_back();
      return r;
    }
    case Term::Kind::Output: return same_name(env, x.chan(), y.chan()) && alpha_rec(x.payload(), y.payload(), env);
    case Term::Kind::Par:
    case Term::Kind::ProcApp: return alpha_rec(x.left(), y.left(), env) && alpha_rec(x.right(), y.right(), env);
    case Term::Kind::NameAbs: {
      env.names.emplace_back(x.bound_name(), y.bound_name());
      bool r = alpha_rec(x.body(), y.body(), env);
      env.names.pop_back();
      return r;
    }
    case Term::Kind::NameApp: return same_name(env, x.name_arg(), y.name_arg()) && alpha_rec(x.fun(), y.fun(), env);
  }
  return false;
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) {
  AlphaEnv env;
  return alpha_rec(a, b, env);
}

}  // namespace hopi
