// Structural congruence and the labelled transition system.
#pragma once

#include <string>
#include <vector>

#include "hopi/syntax.hpp"

namespace hopi {

struct Action {
  enum class Kind { In, Out, Tau };
  Kind kind = Kind::Tau;
  Name chan;       // In, Out
  ProcVar bound;   // In: the variable left open in the target
  Term payload;    // Out

  static Action in(Name chan, ProcVar bound) { return {Kind::In, std::move(chan), std::move(bound), {}}; }
  static Action out(Name chan, Term payload) { return {Kind::Out, std::move(chan), {}, std::move(payload)}; }
  static Action tau() { return {}; }

  std::string to_string() const;
};

struct Transition {
  Action action;
  Term target;  // canonical
};

/// Parallel components of a term after beta-normalization, flattening and
/// removal of nil, each recursively canonical, sorted by canonical key.
struct CanonicalForm {
  std::vector<Term> components;
  std::vector<std::string> keys;  // parallel to components

  /// Left-nested parallel composition of the components (nil when empty).
  Term recompose() const;
  /// Key of the whole form; equal keys iff structurally congruent.
  std::string key() const;
  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) { return a.keys == b.keys; }
};

CanonicalForm canonicalize(const Term& t);
/// canonicalize(t).recompose()
Term canonical_term(const Term& t);
/// Alpha- and congruence-invariant key of a term.
std::string canonical_key(const Term& t);
bool struct_congruent(const Term& p, const Term& q);

/// Parallel composition of a list of terms (nil for an empty list).
Term par_of(const std::vector<Term>& parts);

/// A process variable not free in any of the given terms, "Z", "Z1", "Z2", ...
ProcVar canonical_fresh_var(const std::vector<Term>& avoid, const Sort& sort = Sort::proc());

/// All one-step transitions, up to congruence on targets and alpha on actions.
std::vector<Transition> transitions(const Term& t);

struct VarDecomposition {
  ProcVar var;
  Term rest;
};
struct AppDecomposition {
  Term head;  // a variable, or a variable-headed application for curried heads
  Term arg;
  Term rest;
};
struct NameAppDecomposition {
  Term head;
  Name arg;
  Term rest;
};
struct OpenDecompositions {
  std::vector<VarDecomposition> vars;
  std::vector<AppDecomposition> apps;
  std::vector<NameAppDecomposition> name_apps;
};

OpenDecompositions open_decompositions(const Term& t);

}  // namespace hopi
