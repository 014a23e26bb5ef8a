// Term corpora for differential testing and benchmarks: exhaustive small
// terms, seeded random well-sorted terms, and synthesized scaling terms.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hopi/syntax.hpp"

namespace hopi {

struct EnumerationOptions {
  std::size_t max_nodes = 6;
  std::vector<std::string> channels{"a", "b"};
  std::string free_var = "X";  // one free process variable of sort proc
  int max_abstraction_layers = 1;
};

/// Every well-sorted term with at most `max_nodes` constructors, bound
/// variables named canonically so alpha-variants appear once.
std::vector<Term> enumerate_terms(const EnumerationOptions& opts = {});

/// Sort context declaring the enumeration's free variable.
SortContext enumeration_context(const EnumerationOptions& opts = {});

struct RandomOptions {
  int size = 8;              // rough constructor budget
  bool allow_free = true;    // may use the free process variable "X"
  bool higher_order = true;  // abstractions, applications, abstraction-carrying channels
};

// Channels of random terms have fixed payload sorts: "a" and "b" carry
// processes, "c" carries process abstractions, "d" name abstractions.
class RandomTerms {
 public:
  explicit RandomTerms(std::uint64_t seed, RandomOptions opts = {}) : rng_(seed), opts_(opts) {}

  Term process();
  Term process(int size);
  Term closed_process(int size);
  /// A term of sort proc -> proc.
  Term proc_abstraction(int size);
  /// A term of sort name -> proc.
  Term name_abstraction(int size);
  Name process_channel();
  std::mt19937_64& rng() { return rng_; }
  int uniform(int lo, int hi);

 private:
  struct Scope {
    std::vector<std::string> procs;      // bound, sort proc
    std::vector<std::string> pabs_vars;  // bound, sort proc -> proc
    std::vector<std::string> nabs_vars;  // bound, sort name -> proc
    std::vector<std::string> names;      // bound names carrying processes
    bool allow_free = true;
  };

  Term proc(int size, Scope& s);
  Term pabs(int size, Scope& s);
  Term nabs(int size, Scope& s);
  Name channel(const Scope& s);
  std::string fresh(const char* base);

  std::mt19937_64 rng_;
  RandomOptions opts_;
  int counter_ = 0;
};

struct BenchPair {
  Term lhs;              // built from DIS and APP redexes
  Term rhs;              // the same components already rewritten
  std::size_t lhs_nodes; // constructor count of lhs
};

/// Closed terms of roughly `n` constructors made of independent DIS and
/// APP instances, combined by a balanced parallel composition.
BenchPair synthesize_bench(std::size_t n, std::uint64_t seed);

}  // namespace hopi
