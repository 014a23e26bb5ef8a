// Tree normal forms: De Bruijn trees with maximal sharing, application
// rewriting, parallel flattening and the distribution law. Two terms are
// bisimilar iff their normal-form roots are the same interned node.
#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hopi/bisim.hpp"
#include "hopi/syntax.hpp"

namespace hopi {

/// Name leaf substituted where a process is expected, or the converse.
class KindError : public SortError {
 public:
  using SortError::SortError;
};

enum class NodeType : std::uint8_t { Zero, Var, Inp, Out, Par, Abs, App, Name };

const char* to_string(NodeType t);

struct Label {
  enum class Kind : std::uint8_t {
    None,
    Index,       // De Bruijn index, 1 = innermost binder
    Constant,    // channel constant
    FreeName,    // free name variable
    FreeProc,    // free process variable
    ProcBinder,  // abs over a process
    NameBinder,  // abs over a name
  };
  Kind kind = Kind::None;
  std::uint32_t value = 0;  // index, or symbol id

  bool is_index() const { return kind == Kind::Index; }
  friend bool operator==(const Label&, const Label&) = default;
};

struct TreeNode {
  NodeType type;
  Label label;
  std::vector<const TreeNode*> children;
  std::uint32_t id;        // creation order within the session
  std::uint32_t max_free;  // largest free De Bruijn index, 0 if none
  std::size_t hash;
};

/// Interning table plus the memo tables of every pass. Not thread-safe; use
/// one session per thread.
class NormalizerSession {
 public:
  NormalizerSession();
  NormalizerSession(const NormalizerSession&) = delete;
  NormalizerSession& operator=(const NormalizerSession&) = delete;

  const TreeNode* make(NodeType type, Label label, std::vector<const TreeNode*> children = {});
  const TreeNode* zero() { return zero_; }
  const TreeNode* var(std::uint32_t index);
  const TreeNode* free_var(const std::string& ident);
  const TreeNode* name_leaf(const Name& n);
  const TreeNode* inp(Label chan, const TreeNode* cont) { return make(NodeType::Inp, chan, {cont}); }
  const TreeNode* out(Label chan, const TreeNode* payload) { return make(NodeType::Out, chan, {payload}); }
  const TreeNode* par(std::vector<const TreeNode*> children) { return make(NodeType::Par, {}, std::move(children)); }
  const TreeNode* abs(bool over_name, const TreeNode* body);
  const TreeNode* app(const TreeNode* fun, const TreeNode* arg) { return make(NodeType::App, {}, {fun, arg}); }

  Label constant(const std::string& ident);
  Label free_name(const std::string& ident);
  const std::string& symbol(std::uint32_t id) const { return symbols_[id]; }

  const TreeNode* to_tree(const Term& t);
  /// raw{eval/ind}: `raw` sits under `ind` binders relative to `eval`;
  /// indices above `ind` are decremented, redexes created on the way are
  /// reduced.
  const TreeNode* app_substitute(const TreeNode* raw, std::uint32_t ind, const TreeNode* eval);
  /// Adds `d` to every index greater than `cutoff`.
  const TreeNode* shift(const TreeNode* n, std::uint32_t d, std::uint32_t cutoff = 0);
  const TreeNode* ns1(const TreeNode* n);
  const TreeNode* ns2(const TreeNode* n);
  const TreeNode* ns3(const TreeNode* n);
  const TreeNode* nf(const Term& t);
  Verdict nf_equal(const Term& p, const Term& q);

  /// Back to a term, with generated binder names and elaborated sorts.
  Term to_term(const TreeNode* n);

  std::string print(const TreeNode* n) const;
  /// One line per distinct node, children before parents: "id type label child-ids".
  void dump(std::ostream& os, const TreeNode* root) const;

  /// Distinct nodes created so far.
  std::size_t interned_count() const { return nodes_.size(); }

  /// Structural total order used to sort parallel components.
  int compare(const TreeNode* a, const TreeNode* b) const;

 private:
  struct NodeHash {
    std::size_t operator()(const TreeNode* n) const { return n->hash; }
  };
  struct NodeEq {
    bool operator()(const TreeNode* a, const TreeNode* b) const {
      return a->type == b->type && a->label == b->label && a->children == b->children;
    }
  };
  struct PairHash {
    std::size_t operator()(const std::pair<const TreeNode*, std::uint64_t>& p) const {
      return std::hash<const void*>()(p.first) * 31 + std::hash<std::uint64_t>()(p.second);
    }
  };
  using Memo = std::unordered_map<std::pair<const TreeNode*, std::uint64_t>, const TreeNode*, PairHash>;

  std::uint32_t intern_symbol(const std::string& s);
  const TreeNode* normalize_par(std::vector<const TreeNode*> children);
  const TreeNode* distribute(const TreeNode* n);
  bool equals_shifted(const TreeNode* small, const TreeNode* big, std::uint32_t cutoff) const;
  Label shift_label(Label l, std::uint32_t d, std::uint32_t cutoff) const;

  std::deque<TreeNode> nodes_;
  std::unordered_set<const TreeNode*, NodeHash, NodeEq> table_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::uint32_t> symbol_ids_;
  const TreeNode* zero_;
  Memo shift_memo_;
  std::unordered_map<const TreeNode*, const TreeNode*> ns1_memo_, ns2_memo_, ns3_memo_;
};

/// Convenience wrapper over a fresh session.
Verdict nf_equal(const Term& p, const Term& q);

}  // namespace hopi
