// Terms of the higher-order process calculus with name and process
// parameterization, plus the syntactic operations the rest of the checker
// builds on: free variables, substitution, beta-normalization, depth,
// guardedness and alpha-equivalence.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace hopi {

inline constexpr std::size_t kNoPos = static_cast<std::size_t>(-1);

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::size_t pos = kNoPos)
      : std::runtime_error(what), pos_(pos) {}
  std::size_t pos() const { return pos_; }

 private:
  std::size_t pos_;
};

class SortError : public Error {
 public:
  using Error::Error;
};

// Simple sorts. Name abstractions only record their result here; the payload
// carried by the abstracted name is tracked during inference only.
class Sort {
 public:
  enum class Kind { Proc, PAbs, NAbs };

  Sort() = default;
  static Sort proc() { return Sort(); }
  static Sort pabs(Sort arg, Sort result);
  static Sort nabs(Sort result);

  Kind kind() const { return kind_; }
  bool is_abstraction() const { return kind_ != Kind::Proc; }
  const Sort& arg() const;     // PAbs only
  const Sort& result() const;  // PAbs, NAbs

  /// Order of the sort: 0 for proc, 1 + max order of components otherwise.
  int order() const;
  std::string to_string() const;

  friend bool operator==(const Sort& a, const Sort& b);

 private:
  Kind kind_ = Kind::Proc;
  std::shared_ptr<const Sort> arg_;
  std::shared_ptr<const Sort> result_;
};

/// Parses "proc", "name", "proc -> proc", "name -> proc", "(proc -> proc) -> proc".
/// A leading "name ->" denotes a name abstraction.
Sort parse_sort(const std::string& text);

struct Name {
  enum class Kind { Constant, Variable };
  Kind kind = Kind::Constant;
  std::string ident;

  static Name constant(std::string id) { return {Kind::Constant, std::move(id)}; }
  static Name variable(std::string id) { return {Kind::Variable, std::move(id)}; }
  bool is_variable() const { return kind == Kind::Variable; }

  friend bool operator==(const Name&, const Name&) = default;
  friend auto operator<=>(const Name&, const Name&) = default;
};

// Identity of a process variable is its identifier; the sort is an annotation
// filled in by elaboration.
struct ProcVar {
  std::string ident;
  Sort sort;

  friend bool operator==(const ProcVar& a, const ProcVar& b) { return a.ident == b.ident; }
};

class Term {
 public:
  enum class Kind { Nil, Var, Input, Output, Par, ProcAbs, ProcApp, NameAbs, NameApp };

  Term();  // nil

  static Term nil(std::size_t pos = kNoPos);
  static Term var(ProcVar v, std::size_t pos = kNoPos);
  static Term input(Name chan, ProcVar bound, Term body, std::size_t pos = kNoPos);
  static Term output(Name chan, Term payload, std::size_t pos = kNoPos);
  static Term par(Term left, Term right, std::size_t pos = kNoPos);
  static Term proc_abs(ProcVar bound, Term body, std::size_t pos = kNoPos);
  static Term proc_app(Term fun, Term arg, std::size_t pos = kNoPos);
  static Term name_abs(std::string bound, Term body, std::size_t pos = kNoPos);
  static Term name_app(Term fun, Name arg, std::size_t pos = kNoPos);

  Kind kind() const;
  std::size_t pos() const;

  // Accessors are only meaningful for the matching kinds.
  const ProcVar& var() const;          // Var
  const Name& chan() const;            // Input, Output
  const ProcVar& bound_proc() const;   // Input, ProcAbs
  const std::string& bound_name() const;  // NameAbs
  const Term& body() const;            // Input, ProcAbs, NameAbs
  const Term& payload() const;         // Output
  const Term& left() const;            // Par
  const Term& right() const;           // Par
  const Term& fun() const;             // ProcApp, NameApp
  const Term& arg() const;             // ProcApp
  const Name& name_arg() const;        // NameApp

  bool is_nil() const { return kind() == Kind::Nil; }
  bool is_abstraction() const { return kind() == Kind::ProcAbs || kind() == Kind::NameAbs; }

  /// Number of constructors in the term.
  std::size_t size() const;

  /// Same node (not structural equality).
  bool same(const Term& other) const { return node_ == other.node_; }

  /// Structural equality including binder identifiers.
  friend bool operator==(const Term& a, const Term& b);

  struct Node;

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Term::Kind kind = Term::Kind::Nil;
  std::size_t pos = kNoPos;
  Name name;           // channel or name argument
  ProcVar pvar;        // variable or process binder
  std::string nvar;    // name binder
  Term a;              // body / payload / left / fun
  Term b;              // right / arg
  Node() = default;
};

struct FreeVars {
  std::set<std::string> procs;
  std::set<std::string> names;
  friend bool operator==(const FreeVars&, const FreeVars&) = default;
};

FreeVars free_vars(const Term& t);
bool occurs_free_proc(const Term& t, const std::string& x);
bool occurs_free_name(const Term& t, const std::string& x);
std::set<std::string> name_constants(const Term& t);

/// Fresh identifier derived from `base`; backed by a process-wide atomic counter.
std::string fresh_ident(const std::string& base);

/// Sort of a term computed from the sort annotations on its variables, when
/// they determine it.
std::optional<Sort> annotated_sort(const Term& t);

/// t{r/x}, capture-avoiding. Throws SortError when both sorts are known and differ.
Term subst_proc(const Term& t, const Term& r, const ProcVar& x);
/// t{r/x} without the sort check, for callers working on sort-checked terms.
Term subst_proc_unchecked(const Term& t, const Term& r, const std::string& x);
/// t{g/m}: replaces free occurrences of m in channel and argument positions.
Term subst_name(const Term& t, const Name& g, const Name& m);

/// Reduces every application of an explicit abstraction. Terminates on
/// well-sorted terms.
Term beta_normalize(const Term& t);

/// Depth of a term; applications are measured through their beta-reduct.
std::size_t depth(const Term& t);

/// True iff every occurrence of the variable `x` in `t` is guarded.
/// Uppercase identifiers denote process variables, lowercase ones name variables.
bool is_guarded(const std::string& x, const Term& t);
/// True iff every free variable of `t` is guarded in it.
bool is_guarded(const Term& t);

bool alpha_equal(const Term& a, const Term& b);

// ---- sorting -------------------------------------------------------------

struct SortContext {
  std::map<std::string, Sort> procs;   // declared free process variables
  std::set<std::string> names;         // declared free name variables
  std::map<std::string, Sort> channels;  // optional payload sorts of constants
};

/// Parses "X:proc,y:name,F:proc->proc".
SortContext parse_sort_context(const std::string& text);

struct Elaborated {
  Term term;  // with resolved sort annotations on every process variable
  Sort sort;
};

/// Infers sorts; rejects dangling abstractions, ill-sorted applications,
/// inconsistent channel payloads and self-application.
Elaborated elaborate(const Term& t, const SortContext& ctx = {});
Sort sort_check(const Term& t, const SortContext& ctx = {});

}  // namespace hopi
