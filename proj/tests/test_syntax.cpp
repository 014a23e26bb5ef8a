#include <doctest.h>

#include "hopi/corpus.hpp"
#include "hopi/parser.hpp"
#include "hopi/syntax.hpp"
#include "naive.hpp"

using namespace hopi;

namespace {

Term P(const std::string& s, const SortContext& ctx = {}) { return parse(s, ctx); }

}  // namespace

TEST_SUITE("syntax") {
  TEST_CASE("sorts print and parse") {
    CHECK(Sort::proc().to_string() == "proc");
    Sort s = parse_sort("(proc -> proc) -> proc");
    CHECK(s.kind() == Sort::Kind::PAbs);
    CHECK(s.arg() == Sort::pabs(Sort::proc(), Sort::proc()));
    CHECK(s.order() == 2);
    CHECK(parse_sort("name -> proc") == Sort::nabs(Sort::proc()));
    CHECK(parse_sort(s.to_string()) == s);
    CHECK_THROWS_AS(parse_sort("proc ->"), Error);

    SortContext ctx = parse_sort_context("X:proc,y:name,F:proc->proc");
    CHECK(ctx.procs.at("X") == Sort::proc());
    CHECK(ctx.procs.at("F") == Sort::pabs(Sort::proc(), Sort::proc()));
    CHECK(ctx.names.count("y") == 1);
  }

  TEST_CASE("free variables") {
    CHECK(free_vars(P("0")) == FreeVars{});
    CHECK(free_vars(P("a(X).X")) == FreeVars{});
    SortContext ctx = parse_sort_context("X:name->proc,d:name");
    Term t = P("X<d> | c!(<y>y!(0))", ctx);
    std::set<std::string> procs{"X"};
    CHECK(free_vars(t).procs == procs);
    CHECK(free_vars(t).procs == naive::free_procs(t));
    // d is a declared free name in argument position
    CHECK(free_vars(t).names == naive::free_names(t));
  }

  TEST_CASE("free variables agree with a plain walker on random terms") {
    RandomTerms gen(11);
    for (int i = 0; i < 300; ++i) {
      Term t = gen.process(10);
      CHECK(free_vars(t).procs == naive::free_procs(t));
      CHECK(free_vars(t).names == naive::free_names(t));
    }
  }

  TEST_CASE("depth") {
    CHECK(depth(P("0")) == 0);
    SortContext ctx = parse_sort_context("X:name->proc");
    CHECK(depth(P("X<n>", ctx)) == 1);
    Term t = P("(<X>(X | X))<a(Y).0>");
    CHECK(depth(t) == naive::depth(t));
    CHECK(depth(t) == 2);
    CHECK(depth(P("a(X).b!(X) | c!(0)")) == 3 + 1);
  }

  TEST_CASE("depth agrees with the table on random terms and ignores renaming") {
    RandomTerms gen(12);
    for (int i = 0; i < 300; ++i) {
      Term t = gen.process(10);
      CHECK(depth(t) == naive::depth(t));
      CHECK(depth(beta_normalize(t)) == depth(t));
    }
  }

  TEST_CASE("process substitution") {
    Term x = Term::var(ProcVar{"X", Sort::proc()});
    CHECK(alpha_equal(subst_proc(Term::par(x, x), Term::nil(), ProcVar{"X", Sort::proc()}), P("0 | 0")));
    Term bound = P("a(X).X");
    CHECK(alpha_equal(subst_proc(bound, P("a!(0)"), ProcVar{"X", Sort::proc()}), bound));
    SortContext ctx = parse_sort_context("X:proc");
    Term app = P("(<Y>b!(Y))<X>", ctx);
    Term r = subst_proc(app, P("c!(0)"), ProcVar{"X", Sort::proc()});
    CHECK(alpha_equal(r, naive::subst(app, P("c!(0)"), "X")));
    CHECK(print(r) == "(<Y>b!(Y))<c!(0)>");
  }

  TEST_CASE("substitution avoids capture") {
    SortContext ctx = parse_sort_context("X:proc,Y:proc");
    Term t = P("a(Y).(X | Y)", ctx);
    Term r = subst_proc(t, Term::var(ProcVar{"Y", Sort::proc()}), ProcVar{"X", Sort::proc()});
    CHECK(free_vars(r).procs.count("Y") == 1);
    CHECK(alpha_equal(r, naive::subst(t, Term::var(ProcVar{"Y", Sort::proc()}), "X")));
    CHECK_FALSE(alpha_equal(r, P("a(Y).(Y | Y)")));
  }

  TEST_CASE("substitution checks sorts") {
    CHECK_THROWS_AS(subst_proc(P("a!(0)"), P("<Y>Y"), ProcVar{"X", Sort::proc()}), SortError);
  }

  TEST_CASE("name substitution") {
    SortContext ctx = parse_sort_context("x:name");
    CHECK(alpha_equal(subst_name(P("x!(0)", ctx), Name::constant("c"), Name::variable("x")), P("c!(0)")));
    Term bound = P("<x>x!(0)");
    CHECK(alpha_equal(subst_name(bound, Name::constant("c"), Name::variable("x")), bound));
    Term both = P("x(Y).x!(Y)", ctx);
    Term r = subst_name(both, Name::constant("b"), Name::variable("x"));
    CHECK(alpha_equal(r, P("b(Y).b!(Y)")));
    CHECK(alpha_equal(r, naive::subst_name(both, Name::constant("b"), "x")));
  }

  TEST_CASE("substitutions compose on random terms") {
    RandomTerms gen(13, RandomOptions{8, true, false});
    for (int i = 0; i < 200; ++i) {
      // t{r/X}{s/Y} = t{s/Y}{r{s/Y}/X} with X not free in s
      Term y = Term::var(ProcVar{"Y", Sort::proc()});
      Term t = Term::par(gen.process(6), subst_proc_unchecked(gen.process(6), y, "X"));
      Term r = Term::par(gen.process(4), y);
      Term s = gen.closed_process(4);
      Term lhs = subst_proc_unchecked(subst_proc_unchecked(t, r, "X"), s, "Y");
      Term rhs = subst_proc_unchecked(subst_proc_unchecked(t, s, "Y"), subst_proc_unchecked(r, s, "Y"), "X");
      CHECK(alpha_equal(lhs, rhs));
    }
  }

  TEST_CASE("beta normalization") {
    CHECK(alpha_equal(beta_normalize(P("(<X>(X | X))<b!(0)>")), P("b!(0) | b!(0)")));
    CHECK(alpha_equal(beta_normalize(P("(<x>x!(0))<c>")), P("c!(0)")));
    RandomTerms gen(14);
    for (int i = 0; i < 200; ++i) {
      Term t = gen.process(10);
      CHECK(alpha_equal(beta_normalize(t), naive::beta(t)));
    }
  }

  TEST_CASE("guardedness") {
    SortContext ctx = parse_sort_context("X:proc,Z:proc->proc");
    CHECK(is_guarded("X", P("a!(X)", ctx)));
    CHECK_FALSE(is_guarded("X", P("X | 0", ctx)));
    CHECK(is_guarded("X", P("b(Y).X | Z<X>", ctx)));
    CHECK_FALSE(is_guarded("Z", P("b(Y).X | Z<X>", ctx)));
    CHECK_FALSE(is_guarded(P("b(Y).X | Z<X>", ctx)));
    CHECK(is_guarded(P("a!(X) | b(Y).Y", ctx)));
  }

  TEST_CASE("sort checking") {
    CHECK(sort_check(P("0")) == Sort::proc());
    CHECK(sort_check(parse_unchecked("<x>x!(0)")) == Sort::nabs(Sort::proc()));
    CHECK(sort_check(parse_unchecked("<X>X")) == Sort::pabs(Sort::proc(), Sort::proc()));
    CHECK_THROWS_AS(sort_check(parse_unchecked("(<X>X<X>)<<X>X<X>>")), SortError);
    CHECK_THROWS_AS(sort_check(parse_unchecked("<X>X | 0")), SortError);
    CHECK_THROWS_AS(sort_check(parse_unchecked("a!(0) | a!(<X>X)")), SortError);
    CHECK_THROWS_AS(sort_check(parse_unchecked("a!(0)<0>")), SortError);
  }

  TEST_CASE("sort checking terminates on random accepted terms") {
    RandomTerms gen(15, RandomOptions{50, true, true});
    for (int i = 0; i < 100; ++i) {
      Term t = gen.process(50);
      CHECK_NOTHROW(sort_check(t));
      CHECK(depth(t) == naive::depth(t));
    }
  }

  TEST_CASE("fresh identifiers are distinct") {
    CHECK(fresh_ident("X") != fresh_ident("X"));
  }
}
