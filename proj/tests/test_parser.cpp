#include <doctest.h>

#include "hopi/corpus.hpp"
#include "hopi/parser.hpp"

using namespace hopi;

TEST_SUITE("parser") {
  TEST_CASE("grammar readings") {
    Term t = parse("a(X).0");
    REQUIRE(t.kind() == Term::Kind::Input);
    CHECK(t.chan() == Name::constant("a"));
    CHECK(t.bound_proc().ident == "X");
    CHECK(t.body().is_nil());

    Term app = parse("(<X>(X | X))<b!(0)>");
    REQUIRE(app.kind() == Term::Kind::ProcApp);
    REQUIRE(app.fun().kind() == Term::Kind::ProcAbs);
    CHECK(app.fun().body().kind() == Term::Kind::Par);
    CHECK(app.arg().kind() == Term::Kind::Output);
    CHECK(app.arg().chan() == Name::constant("b"));
  }

  TEST_CASE("the protocol's abstraction") {
    Term t = parse("a!(<x>(b!(<Z> x!(Z))))");
    REQUIRE(t.kind() == Term::Kind::Output);
    const Term& a = t.payload();
    REQUIRE(a.kind() == Term::Kind::NameAbs);
    const Term& inner = a.body();
    REQUIRE(inner.kind() == Term::Kind::Output);
    CHECK(inner.chan() == Name::constant("b"));
    REQUIRE(inner.payload().kind() == Term::Kind::ProcAbs);
    const Term& send = inner.payload().body();
    REQUIRE(send.kind() == Term::Kind::Output);
    CHECK(send.chan() == Name::variable("x"));
  }

  TEST_CASE("precedence") {
    Term t = parse("a(X).X | b!(0)");
    REQUIRE(t.kind() == Term::Kind::Par);
    CHECK(t.left().kind() == Term::Kind::Input);
    Term u = parse("a(X).X<0> | 0", parse_sort_context(""));
    CHECK(u.left().body().kind() == Term::Kind::ProcApp);
  }

  TEST_CASE("printing") {
    CHECK(print(Term::nil()) == "0");
    Term t = Term::par(Term::output(Name::constant("a"), Term::nil()),
                       Term::input(Name::constant("b"), ProcVar{"X", Sort::proc()}, Term::var(ProcVar{"X", Sort::proc()})));
    CHECK(print(t) == "a!(0) | b(X).X");
    SortContext ctx = parse_sort_context("X:proc->proc");
    CHECK(print(Term::proc_app(Term::var(ProcVar{"X", ctx.procs.at("X")}), Term::nil())) == "X<0>");
    CHECK(print(parse("a!(0) | (b!(0) | c!(0))")) == "a!(0) | (b!(0) | c!(0))");
  }

  TEST_CASE("ccs sugar") {
    Term t = parse("a.b!");
    REQUIRE(t.kind() == Term::Kind::Input);
    CHECK(t.body().kind() == Term::Kind::Output);
    CHECK(t.body().payload().is_nil());
    Term u = parse("a");
    REQUIRE(u.kind() == Term::Kind::Input);
    CHECK(u.body().is_nil());
  }

  TEST_CASE("name arguments and declared free names") {
    Term t = parse("(<x>x!(0))<c>");
    REQUIRE(t.kind() == Term::Kind::NameApp);
    CHECK(t.name_arg() == Name::constant("c"));
    Term u = parse("y!(0)", parse_sort_context("y:name"));
    CHECK(u.chan() == Name::variable("y"));
    Term v = parse("y!(0)");
    CHECK(v.chan() == Name::constant("y"));
  }

  TEST_CASE("errors carry positions") {
    try {
      parse("a(X).(0 | ");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.pos() != kNoPos);
      CHECK(std::string(e.what()).find("1:") != std::string::npos);
      CHECK_FALSE(e.expected().empty());
    }
    try {
      parse("a!(0) |\n  a!(<X>X)");
      FAIL("expected a sort error");
    } catch (const SortError& e) {
      CHECK(std::string(e.what()).find("2:") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("a(x).0"), ParseError);
  }

  TEST_CASE("comments and whitespace") {
    CHECK(alpha_equal(parse("a!(0)   # trailing comment\n | 0"), parse("a!(0) | 0")));
  }

  TEST_CASE("round trip on random terms") {
    RandomTerms gen(21);
    for (int i = 0; i < 500; ++i) {
      Term t = gen.process(12);
      Term back = parse(print(t), parse_sort_context("X:proc"));
      CHECK(alpha_equal(back, t));
      CHECK(print(back) == print(t));
    }
  }
}
