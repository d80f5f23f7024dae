#include <doctest.h>

#include "horn/parser.hpp"
#include "horn/unify.hpp"
#include "support.hpp"

using namespace horn;
using horn::test::prog;

namespace {

Term t(const char* s) { return parse_term(s); }
Atom a(const char* s) { return parse_atom(s); }

}  // namespace

TEST_CASE("mgu of simple terms") {
  auto s = mgu(t("f(X,b)"), t("f(a,Y)"));
  REQUIRE(s);
  CHECK(apply(*s, t("f(X,Y)")) == t("f(a,b)"));
  CHECK_FALSE(mgu(t("f(a)"), t("f(b)")));
  CHECK_FALSE(mgu(t("f(a)"), t("g(a)")));
  CHECK_FALSE(mgu(t("f(a,b)"), t("f(a)")));
}

TEST_CASE("occurs check") {
  CHECK_FALSE(mgu(t("X"), t("s(X)")));
  CHECK_FALSE(mgu(t("[X|Y]"), t("Y")));
  CHECK(mgu(t("X"), t("X")));
}

TEST_CASE("mgu result is idempotent") {
  auto s = mgu(t("f(X,Y,Z)"), t("f(Y,Z,g(W))"));
  REQUIRE(s);
  for (const auto& [v, term] : s->bindings()) CHECK(apply(*s, term) == term);
  CHECK(apply(*s, t("X")) == t("g(W)"));
}

TEST_CASE("unifier produces equal instances") {
  for (unsigned seed = 0; seed < 300; ++seed) {
    horn::test::Generator g(seed);
    Term x = g.term(2), y = g.term(2);
    if (auto s = mgu(x, y)) CHECK(apply(*s, x) == apply(*s, y));
  }
}

TEST_CASE("atom set unifiers enumerate pairings") {
  auto all = mgu_atom_sets_all({a("p(X)"), a("p(Y)")}, {a("p(a)"), a("p(b)")});
  CHECK(all.size() == 2);
  CHECK(mgu_atom_sets({a("p(X)")}, {a("q(X)")}) == std::nullopt);
  CHECK(mgu_atom_sets({}, {}).has_value());
}

TEST_CASE("substitution composition") {
  Substitution s1{{"X", t("f(Y)")}};
  Substitution s2{{"Y", t("a")}};
  Substitution c = compose(s1, s2);
  CHECK(apply(c, t("g(X,Y)")) == apply(s2, apply(s1, t("g(X,Y)"))));
  CHECK(restrict(c, {"X"}).size() == 1);
  CHECK(Substitution{{"X", t("Y")}}.is_renaming());
  CHECK_FALSE(Substitution{{"X", t("a")}}.is_renaming());
}

TEST_CASE("fresh names avoid the given set") {
  FreshNames f({"_1", "_2"});
  std::string n = f.next();
  CHECK(n != "_1");
  CHECK(n != "_2");
  CHECK(f.next() != n);
}

TEST_CASE("standardizing apart yields variants") {
  Program p = prog("p(X,Y) :- q(Y,Z).");
  Program q = standardize_apart(p, variables(p));
  CHECK(q == p);
  for (const auto& v : variables(q)) CHECK_FALSE(variables(p).count(v));
  CHECK(is_variant(p, q));
  CHECK_FALSE(is_variant(prog("p(X,X)."), prog("p(X,Y).")));
}

TEST_CASE("one-sided matching") {
  CHECK(match(a("p(X,Y)"), a("p(a,b)")));
  CHECK(match(a("p(X,X)"), a("p(a,a)")));
  CHECK_FALSE(match(a("p(X,X)"), a("p(a,b)")));
  CHECK_FALSE(match(a("p(a)"), a("p(X)")));
}
