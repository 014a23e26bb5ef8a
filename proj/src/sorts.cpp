// Sort inference by unification. Channels are monomorphic within a term: each
// name constant carries a single payload sort, and every name variable carries
// its own payload sort, which a name abstraction records so that applications
// agree with the channel they pass.
#include <cctype>
#include <vector>

#include "hopi/parser.hpp"
#include "hopi/syntax.hpp"

namespace hopi {
namespace {

class Inference {
 public:
  enum class K { Meta, Proc, PAbs, NAbs };
  struct Node {
    K kind;
    int a = -1;  // PAbs argument, NAbs payload of the abstracted name
    int b = -1;  // result
  };

  explicit Inference(const SortContext& ctx) : ctx_(ctx) {
    for (const auto& [id, s] : ctx.procs) free_procs_[id] = from_sort(s);
    for (const auto& id : ctx.names) free_names_[id] = meta();
    for (const auto& [id, s] : ctx.channels) constants_[id] = from_sort(s);
  }

  int meta() { return push({K::Meta}); }
  int proc() { return push({K::Proc}); }
  int pabs(int a, int b) { return push({K::PAbs, a, b}); }
  int nabs(int payload, int b) { return push({K::NAbs, payload, b}); }

  int from_sort(const Sort& s) {
    switch (s.kind()) {
      case Sort::Kind::Proc: return proc();
      case Sort::Kind::PAbs: return pabs(from_sort(s.arg()), from_sort(s.result()));
      case Sort::Kind::NAbs: return nabs(meta(), from_sort(s.result()));
    }
    return proc();
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  Sort resolve(int x) {
    x = find(x);
    const Node n = nodes_[x];
    switch (n.kind) {
      case K::Meta:
      case K::Proc: return Sort::proc();
      case K::PAbs: return Sort::pabs(resolve(n.a), resolve(n.b));
      case K::NAbs: return Sort::nabs(resolve(n.b));
    }
    return Sort::proc();
  }

  std::string show(int x) {
    x = find(x);
    const Node n = nodes_[x];
    switch (n.kind) {
      case K::Meta: return "?";
      case K::Proc: return "proc";
      case K::PAbs: {
        std::string a = show(n.a);
        if (a.find("->") != std::string::npos) a = "(" + a + ")";
        return a + " -> " + show(n.b);
      }
      case K::NAbs: return "name -> " + show(n.b);
    }
    return "?";
  }

  void unify(int x, int y, const std::string& what, std::size_t pos) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    Node nx = nodes_[x], ny = nodes_[y];
    if (nx.kind == K::Meta) return bind(x, y, what, pos);
    if (ny.kind == K::Meta) return bind(y, x, what, pos);
    if (nx.kind != ny.kind)
      throw SortError(what + ": expected " + show(x) + " but found " + show(y), pos);
    // Merging two structures that contain each other would make the sort graph cyclic.
    if (occurs(x, y) || occurs(y, x)) throw SortError(what + ": infinite sort (self-application)", pos);
    parent_[x] = y;
    if (nx.kind == K::PAbs || nx.kind == K::NAbs) {
      unify(nx.a, ny.a, what, pos);
      unify(nx.b, ny.b, what, pos);
    }
  }

  int infer(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Nil: return proc();
      case Term::Kind::Var: return var_type(t.var().ident);
      case Term::Kind::Input: {
        int payload = channel(t.chan());
        binder_types_.push_back(payload);
        procs_.emplace_back(t.bound_proc().ident, payload);
        int body = infer(t.body());
        procs_.pop_back();
        unify(proc(), body, "input continuation must be a process", t.body().pos());
        return proc();
      }
      case Term::Kind::Output: {
        int payload = infer(t.payload());
        unify(channel(t.chan()), payload, "payload does not match channel '" + t.chan().ident + "'",
              t.payload().pos());
        return proc();
      }
      case Term::Kind::Par: {
        // Iterate along the parallel spine; deep spines come from wide terms.
        std::vector<const Term*> stack{&t};
        while (!stack.empty()) {
          const Term* cur = stack.back();
          stack.pop_back();
          if (cur->kind() == Term::Kind::Par) {
            stack.push_back(&cur->right());
            stack.push_back(&cur->left());
            continue;
          }
          int c = infer(*cur);
          unify(proc(), c, "dangling abstraction in parallel composition", cur->pos());
        }
        return proc();
      }
      case Term::Kind::ProcAbs: {
        int x = meta();
        binder_types_.push_back(x);
        procs_.emplace_back(t.bound_proc().ident, x);
        int body = infer(t.body());
        procs_.pop_back();
        return pabs(x, body);
      }
      case Term::Kind::ProcApp: {
        int f = infer(t.fun());
        int a = infer(t.arg());
        int r = meta();
        unify(f, pabs(a, r), "ill-sorted application", t.pos());
        return r;
      }
      case Term::Kind::NameAbs: {
        int payload = meta();
        names_.emplace_back(t.bound_name(), payload);
        int body = infer(t.body());
        names_.pop_back();
        return nabs(payload, body);
      }
      case Term::Kind::NameApp: {
        int f = infer(t.fun());
        int r = meta();
        unify(f, nabs(channel(t.name_arg()), r), "ill-sorted name application", t.pos());
        return r;
      }
    }
    return proc();
  }

  // Second pass: rebuild the term with resolved annotations. Binders are
  // visited in the same order as in infer().
  Term annotate(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Nil: return t;
      case Term::Kind::Var: {
        ProcVar v = t.var();
        v.sort = lookup_sort(v.ident);
        return Term::var(v, t.pos());
      }
      case Term::Kind::Input:
      case Term::Kind::ProcAbs: {
        ProcVar v = t.bound_proc();
        v.sort = resolve(binder_types_[next_binder_++]);
        sorted_procs_.emplace_back(v.ident, v.sort);
        Term body = annotate(t.body());
        sorted_procs_.pop_back();
        return t.kind() == Term::Kind::Input ? Term::input(t.chan(), v, body, t.pos())
                                             : Term::proc_abs(v, body, t.pos());
      }
      case Term::Kind::Output: return Term::output(t.chan(), annotate(t.payload()), t.pos());
      case Term::Kind::Par: return Term::par(annotate(t.left()), annotate(t.right()), t.pos());
      case Term::Kind::ProcApp: return Term::proc_app(annotate(t.fun()), annotate(t.arg()), t.pos());
      case Term::Kind::NameAbs: return Term::name_abs(t.bound_name(), annotate(t.body()), t.pos());
      case Term::Kind::NameApp: return Term::name_app(annotate(t.fun()), t.name_arg(), t.pos());
    }
    return t;
  }

 private:
  int push(Node n) {
    nodes_.push_back(n);
    parent_.push_back(static_cast<int>(parent_.size()));
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool occurs(int m, int x) {
    x = find(x);
    if (x == m) return true;
    const Node n = nodes_[x];
    if (n.kind == K::PAbs || n.kind == K::NAbs) return occurs(m, n.a) || occurs(m, n.b);
    return false;
  }

  void bind(int m, int x, const std::string& what, std::size_t pos) {
    if (occurs(m, x)) throw SortError(what + ": infinite sort (self-application)", pos);
    parent_[m] = x;
  }

  int var_type(const std::string& id) {
    for (auto it = procs_.rbegin(); it != procs_.rend(); ++it)
      if (it->first == id) return it->second;
    auto f = free_procs_.find(id);
    if (f != free_procs_.end()) return f->second;
    int m = meta();
    free_procs_[id] = m;
    return m;
  }

  Sort lookup_sort(const std::string& id) {
    for (auto it = sorted_procs_.rbegin(); it != sorted_procs_.rend(); ++it)
      if (it->first == id) return it->second;
    return resolve(free_procs_.at(id));
  }

  int channel(const Name& n) {
    if (n.is_variable()) {
      for (auto it = names_.rbegin(); it != names_.rend(); ++it)
        if (it->first == n.ident) return it->second;
      auto f = free_names_.find(n.ident);
      if (f != free_names_.end()) return f->second;
      int m = meta();
      free_names_[n.ident] = m;
      return m;
    }
    auto f = constants_.find(n.ident);
    if (f != constants_.end()) return f->second;
    int m = meta();
    constants_[n.ident] = m;
    return m;
  }

  const SortContext& ctx_;
  std::vector<Node> nodes_;
  std::vector<int> parent_;
  std::vector<std::pair<std::string, int>> procs_;
  std::vector<std::pair<std::string, int>> names_;
  std::map<std::string, int> free_procs_;
  std::map<std::string, int> free_names_;
  std::map<std::string, int> constants_;
  std::vector<int> binder_types_;
  std::size_t next_binder_ = 0;
  std::vector<std::pair<std::string, Sort>> sorted_procs_;
};

}  // namespace

Elaborated elaborate(const Term& t, const SortContext& ctx) {
  Inference inf(ctx);
  int s = inf.infer(t);
  Term annotated = inf.annotate(t);
  return {annotated, inf.resolve(s)};
}

Sort sort_check(const Term& t, const SortContext& ctx) { return elaborate(t, ctx).sort; }

}  // namespace hopi
