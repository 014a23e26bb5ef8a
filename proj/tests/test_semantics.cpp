#include <doctest.h>

#include "hopi/corpus.hpp"
#include "hopi/parser.hpp"
#include "hopi/semantics.hpp"
#include "naive.hpp"

using namespace hopi;

namespace {

Term P(const std::string& s, const SortContext& ctx = {}) { return parse(s, ctx); }

std::vector<std::string> keys_of(const Term& t) { return canonicalize(t).keys; }

}  // namespace

TEST_SUITE("semantics") {
  TEST_CASE("canonical forms") {
    CHECK(keys_of(P("0 | (0 | a(X).0)")) == keys_of(P("a(X).0")));
    CHECK(canonicalize(P("0 | (0 | a(X).0)")).components.size() == 1);

    CanonicalForm app = canonicalize(P("(<X>(X | X))<b!(0)>"));
    REQUIRE(app.components.size() == 2);
    CHECK(alpha_equal(app.components[0], P("b!(0)")));
    CHECK(alpha_equal(app.components[1], P("b!(0)")));

    CanonicalForm napp = canonicalize(P("(<x>x!(0))<c> | 0"));
    REQUIRE(napp.components.size() == 1);
    CHECK(alpha_equal(napp.components[0], P("c!(0)")));
  }

  TEST_CASE("structural congruence") {
    CHECK(struct_congruent(P("(a!(0) | b!(0)) | c!(0)"), P("a!(0) | (b!(0) | c!(0))")));
    CHECK(struct_congruent(P("a!(0) | b!(0)"), P("b!(0) | a!(0)")));
    CHECK(struct_congruent(P("a(X).0"), P("a(Y).0")));
    CHECK_FALSE(struct_congruent(P("a(X).0"), P("a!(0)")));
    CHECK_FALSE(struct_congruent(P("<X>0"), P("<x>0")));
  }

  TEST_CASE("canonicalization is idempotent and keeps depth") {
    RandomTerms gen(31);
    for (int i = 0; i < 300; ++i) {
      Term t = gen.process(10);
      Term c = canonical_term(t);
      CHECK(canonical_key(c) == canonical_key(t));
      CHECK(alpha_equal(canonical_term(c), c));
      CHECK(depth(c) == depth(t));
    }
  }

  TEST_CASE("transitions of a prefix") {
    auto ts = transitions(P("a(X).0"));
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].action.kind == Action::Kind::In);
    CHECK(ts[0].action.chan == Name::constant("a"));
    CHECK(ts[0].target.is_nil());
    CHECK(transitions(P("0")).empty());
  }

  TEST_CASE("output, input and communication") {
    Term t = P("a!(0) | a(X).X");
    auto ts = transitions(t);
    CHECK(ts.size() == 3);
    std::string z = canonical_fresh_var({t}).ident;
    CHECK(naive::library_keys(t) == naive::step_keys(t, z));
    bool tau_to_nil = false;
    for (const auto& tr : ts)
      if (tr.action.kind == Action::Kind::Tau) tau_to_nil = tr.target.is_nil();
    CHECK(tau_to_nil);
  }

  TEST_CASE("transitions agree with the rule interpreter") {
    RandomTerms gen(32);
    for (int i = 0; i < 400; ++i) {
      Term t = gen.process(10);
      std::string z = canonical_fresh_var({t}).ident;
      CHECK(naive::library_keys(t) == naive::step_keys(t, z));
    }
  }

  TEST_CASE("transitions are invariant under congruence") {
    RandomTerms gen(33);
    for (int i = 0; i < 200; ++i) {
      Term a = gen.process(5), b = gen.process(5);
      Term l = Term::par(Term::par(a, Term::nil()), b);
      Term r = Term::par(b, a);
      CHECK(naive::library_keys(l) == naive::library_keys(r));
    }
  }

  TEST_CASE("first step of the protocol") {
    Term p = P("a!(<x>(b!(<Z>x!(Z)))) | b(X).(X<e!(0)> | f!(0))");
    Term q = P("a(X).(X<c> | c(Y).(Y | g!(0)))");
    Term expected = P("b(X).(X<e!(0)> | f!(0)) | (<x>(b!(<Z>x!(Z))))<c> | c(Y).(Y | g!(0))");
    bool found = false;
    for (const auto& tr : transitions(Term::par(p, q)))
      if (tr.action.kind == Action::Kind::Tau && struct_congruent(tr.target, expected)) found = true;
    CHECK(found);
  }

  TEST_CASE("open decompositions") {
    SortContext ctx = parse_sort_context("X:proc");
    auto d = open_decompositions(P("X | a!(0)", ctx));
    REQUIRE(d.vars.size() == 1);
    CHECK(d.vars[0].var.ident == "X");
    CHECK(alpha_equal(d.vars[0].rest, P("a!(0)")));
    CHECK(d.apps.empty());
    CHECK(d.name_apps.empty());

    SortContext ctx2;
    ctx2.procs["X"] = Sort::pabs(Sort::proc(), Sort::proc());
    ctx2.procs["W"] = Sort::nabs(Sort::proc());
    auto e = open_decompositions(P("X<0> | W<d>", ctx2));
    REQUIRE(e.apps.size() == 1);
    REQUIRE(e.name_apps.size() == 1);
    CHECK(e.apps[0].arg.is_nil());
    CHECK(e.name_apps[0].arg == Name::constant("d"));
    CHECK(alpha_equal(e.apps[0].rest, P("W<d>", ctx2)));

    auto none = open_decompositions(P("a(X).X"));
    CHECK(none.vars.empty());
    CHECK(none.apps.empty());
    CHECK(none.name_apps.empty());
  }

  TEST_CASE("outputs and inputs decompose the source") {
    RandomTerms gen(34);
    for (int i = 0; i < 300; ++i) {
      Term t = gen.process(10);
      for (const auto& tr : transitions(t)) {
        if (tr.action.kind == Action::Kind::Out) {
          CHECK(struct_congruent(t, Term::par(Term::output(tr.action.chan, tr.action.payload), tr.target)));
        } else if (tr.action.kind == Action::Kind::In) {
          // t = a(Z).P1 | P2 with the target P1 | P2
          bool witnessed = false;
          CanonicalForm cf = canonicalize(t);
          for (std::size_t k = 0; k < cf.components.size() && !witnessed; ++k) {
            const Term& c = cf.components[k];
            if (c.kind() != Term::Kind::Input || !(c.chan() == tr.action.chan)) continue;
            std::vector<Term> rest;
            for (std::size_t j = 0; j < cf.components.size(); ++j)
              if (j != k) rest.push_back(cf.components[j]);
            Term p1 = subst_proc_unchecked(c.body(), Term::var(tr.action.bound), c.bound_proc().ident);
            witnessed = struct_congruent(Term::par(p1, par_of(rest)), tr.target);
          }
          CHECK(witnessed);
        }
      }
    }
  }
}
