// Reference decision procedure for strong HO-IO bisimilarity, by induction
// on depth: every clause of the bisimulation is checked against the finitely
// many candidate matches on the other side.
#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hopi/syntax.hpp"

namespace hopi {

class DepthBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// One observation in a distinguishing sequence. `clause` numbers the
/// bisimulation clauses: 1 non-abstraction, 2 process abstraction, 3 name
/// abstraction, 4 output, 5 input, 6 bare variable, 7 variable applied to a
/// process, 8 variable applied to a name.
struct DistinguisherStep {
  int clause = 0;
  bool from_left = true;  // which side performed the observation
  std::string observation;
};

struct Verdict {
  bool equal = false;
  std::optional<std::pair<std::string, std::string>> normal_forms;
  std::vector<DistinguisherStep> distinguisher;

  std::string describe() const;
};

struct OracleOptions {
  std::size_t max_recursion = 10000;
  std::size_t memo_limit = std::size_t(1) << 23;  // verdict cache is dropped beyond this
};

/// Session holding interned canonical forms and the verdict cache; not
/// thread-safe, use one per thread.
class Oracle {
 public:
  using Handle = std::uint32_t;

  explicit Oracle(OracleOptions opts = {}) : opts_(opts) {}

  /// Interns the canonical form of a term; handles of congruent terms coincide.
  Handle prepare(const Term& t);
  bool bisimilar(Handle p, Handle q) { return decide(p, q, 0, nullptr); }
  bool bisimilar(const Term& p, const Term& q) { return bisimilar(prepare(p), prepare(q)); }
  Verdict check(const Term& p, const Term& q);

  std::size_t memo_size() const { return memo_.size(); }
  std::size_t interned() const { return entries_.size(); }

 private:
  struct Entry {
    Term term;  // canonical and beta-normal
    Term::Kind kind = Term::Kind::Nil;  // Par when there are several components
    std::uint32_t reserved = 0;  // largest index of an oracle-fresh variable free in `term`
    bool var_headed = false;
    std::vector<Handle> comps;  // the entry itself when it has one component
    std::vector<Handle> rests;  // lazily filled, parallel to comps
    Handle payload = 0, head = 0, arg = 0;
    std::vector<std::pair<std::uint64_t, Handle>> cache;  // residuals and instances
  };

  Handle intern_canonical(const Term& canonical, const std::string& key);
  Entry& entry(Handle h) { return entries_[h]; }
  Handle rest(Handle h, std::size_t i);
  Handle residual(Handle h, std::size_t i, std::uint32_t k);
  Handle instance(Handle h, std::uint32_t k);
  const std::vector<Handle>& components(Handle h);

  bool decide(Handle p, Handle q, std::size_t level, std::vector<DistinguisherStep>* why);
  bool compute(Handle p, Handle q, std::size_t level, std::vector<DistinguisherStep>* why);
  bool simulate(Handle p, Handle q, bool from_left, std::size_t level, std::vector<DistinguisherStep>* why);

  OracleOptions opts_;
  std::deque<Entry> entries_;
  std::unordered_map<std::string, Handle> ids_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

Verdict hoio_bisimilar(const Term& p, const Term& q);

/// Name of the hole variable in probe contexts E(X).
inline const std::string kHoleVar = "X";

/// Bounded context-bisimulation game on closed terms. Closed probes
/// instantiate inputs and abstractions; probes with the hole variable free
/// wrap transmitted terms (the identity context is used when none is given).
/// Returns false only on a concrete refutation within `depth` rounds.
bool bounded_ctx_probe(const Term& p, const Term& q, const std::vector<Term>& probes, int depth = 4);

/// Parallel components of the normal form, as terms; each is prime.
std::vector<Term> prime_factors(const Term& p);

}  // namespace hopi
