// Acceptance runner: one PASS/FAIL line per criterion, failing items listed
// beneath. Exits nonzero when any criterion fails.
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "horn/algebra.hpp"
#include "horn/forms.hpp"
#include "horn/parser.hpp"
#include "horn/proportion.hpp"
#include "horn/semantics.hpp"
#include "horn/sld.hpp"
#include "properties.hpp"

using namespace horn;

namespace {

std::string corpus(const std::string& rel) { return std::string(HORN_CORPUS_DIR) + "/" + rel; }
Program program(const std::string& name) { return read_program_file(corpus("programs/" + name + ".lp")); }

const FormLibrary& library() {
  static const FormLibrary lib = read_form_file(corpus("forms/forms.lpf"));
  return lib;
}

Program apply_named(const std::string& name, const std::string& bound) {
  EvalOptions opts;
  opts.library = &library();
  return apply_form(*library().find(name), {read_bound_program(bound, corpus("programs"))}, opts);
}

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void check(const std::string& item, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    if (!ok) failed_.push_back(item + (detail.empty() ? "" : ": " + detail));
  }

  void program_equal(const std::string& item, const std::function<Program()>& got, const Program& want, bool exact) {
    check(item, [&](std::string& d) {
      Program g = got();
      bool ok = exact ? strictly_equal(canonical(g), canonical(want)) : g == want;
      if (!ok) d = "got {" + one_line(g) + "} expected {" + one_line(want) + "}";
      return ok;
    });
  }

  bool report() const {
    std::printf("%s %s\n", failed_.empty() ? "PASS" : "FAIL", title_.c_str());
    for (const auto& f : failed_) std::printf("     - %s\n", f.c_str());
    return failed_.empty();
  }

 private:
  static Program canonical(const Program& p) {
    Program out;
    for (const auto& r : p) out.insert(canonicalize(r));
    return out;
  }
  static std::string one_line(const Program& p) {
    std::string s = render_program(p);
    for (auto& c : s)
      if (c == '\n') c = ' ';
    if (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  }

  std::string title_;
  std::vector<std::string> failed_;
};

Atom atom(const char* text) { return parse_atom(text); }

// Lists over `alphabet` of length at most `n`, as terms.
std::vector<std::string> lists(const std::string& alphabet, std::size_t n) {
  std::vector<std::string> out{""}, layer{""};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> next;
    for (const auto& l : layer)
      for (char c : alphabet) next.push_back(l.empty() ? std::string(1, c) : l + "," + c);
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  for (auto& l : out) l = "[" + l + "]";
  return out;
}

bool composition() {
  Criterion c("1 composition goldens (exact canonical equality)");
  Program nat = program("nat");
  c.program_equal("proper(Nat) o proper(Nat)", [&] { return compose(proper(nat), proper(nat)); },
                  parse_program("nat(s(s(X))) :- nat(X)."), true);
  c.program_equal("Q1 o PlusList = Plus", [&] { return compose(program("q1"), program("pluslist")); }, program("plus"), true);
  c.program_equal("Q1rev o Plus = PlusList", [&] { return compose(program("q1rev"), program("plus")); },
                  program("pluslist"), true);
  c.program_equal("Q1 o PlusList' = Plus", [&] { return compose(program("q1"), program("pluslist_prime")); },
                  program("plus"), true);
  c.program_equal("Q2 o Plus = PlusList'", [&] { return compose(program("q2"), program("plus")); },
                  program("pluslist_prime"), true);
  c.program_equal("Q o PlusList o S = Member",
                  [&] { return compose(compose(program("member_q"), program("pluslist")), program("member_s")); },
                  program("member"), true);
  return c.report();
}

bool concatenation() {
  Criterion c("2 concatenation goldens");
  c.program_equal("List[list/length] . Nat[nat/length] = Length",
                  [&] { return concatenate(program("list_as_length"), program("nat_as_length")); }, program("length"),
                  true);
  c.program_equal("{plus(0)} . {plus(s(0))} . {plus(s(0))}",
                  [&] {
                    Program one = program("plus_one_piece");
                    return concatenate(concatenate(program("plus_zero_piece"), one), one);
                  },
                  parse_program("plus(0,s(0),s(0))."), true);
  return c.report();
}

bool forms() {
  Criterion c("3 form goldens (up to variants)");
  c.program_equal("Plus(Nat) = Plus", [&] { return apply_named("Plus", "nat.lp(X)"); }, program("plus"), false);
  c.program_equal("Even(Nat[nat/even]) = Even", [&] { return apply_named("Even", "nat_as_even.lp"); }, program("even"),
                  false);
  c.program_equal("Plus(Tree(u,x,x))", [&] { return apply_named("Plus", "tree.lp(U,X,X)"); }, program("plus_tree_sym"),
                  false);
  c.program_equal("Plus(Tree(u,x1,x2))", [&] { return apply_named("Plus", "tree.lp(U,X1,X2)"); },
                  program("plus_tree_four"), false);
  c.program_equal("Even(Reverse)", [&] { return apply_named("Even", "reverse.lp"); }, program("even_reverse"), false);
  c.program_equal("G(List(u,x)) = {plus([u],[u],[u,u])}", [&] { return apply_named("G", "list.lp(U,X)"); },
                  program("singleton_append"), false);
  return c.report();
}

bool semantics() {
  Criterion c("4 semantics");
  GroundingBound lists4;
  lists4.max_term_depth = 5;  // [a,b,c,d] nests five constructors deep
  lists4.extra_constants = {"a", "b", "c", "d"};
  c.check("Plus(List) |= plus([a,b],[c,d],[a,b,c,d])", [&](std::string&) {
    return least_model(apply_named("Plus", "list.lp(U,X)"), lists4).entails(atom("plus([a,b],[c,d],[a,b,c,d])"));
  });
  c.check("Times(List) |= times([a,a],[b,b],[b,b,b,b])", [&](std::string&) {
    return least_model(apply_named("Times", "list.lp(U,X)"), lists4).entails(atom("times([a,a],[b,b],[b,b,b,b])"));
  });
  GroundingBound lists3;
  lists3.max_term_depth = 4;
  lists3.extra_constants = {"a", "b", "c"};
  Model even = least_model(apply_named("Even", "reverse.lp"), lists3);
  c.check("Even(Reverse) |= reverse([a,b],[b,a])", [&](std::string&) { return even.entails(atom("reverse([a,b],[b,a])")); });
  c.check("Even(Reverse) entails no reverse([a,b,c],_)", [&](std::string& d) {
    for (const auto& l : lists("abc", 4))
      if (even.entails(atom(("reverse([a,b,c]," + l + ")").c_str()))) {
        d = "entails reverse([a,b,c]," + l + ")";
        return false;
      }
    return true;
  });
  return c.report();
}

bool sld() {
  Criterion c("5 SLD");
  c.check("labeled 4-step derivation ending in the empty query", [&](std::string& d) {
    LabeledProgram lp(program("q1rev"), "q1rev");
    lp.add(program("plus"), "plus");
    Query q{parse_goals("plus([a],[b,c],[a,b,c])")};
    auto r = prove_with_trace(lp, q, 16);
    if (!r) {
      d = "no refutation";
      return false;
    }
    bool alternating = true;
    for (std::size_t i = 0; i < r->steps.size(); ++i)
      alternating = alternating && r->steps[i].source_label == (i % 2 == 0 ? "q1rev" : "plus");
    d = render_trace(q, *r);
    return r->steps.size() == 4 && alternating && r->steps.back().resolvent.empty();
  });
  GroundingBound small;
  small.max_term_depth = 2;
  small.extra_constants = {"a"};
  Rule comm = parse_program("plus(Y,X,Z) :- plus(X,Y,Z).").rules()[0];
  c.check("PlusList' proves commutativity", [&](std::string& d) {
    auto r = proves_rule(program("pluslist_prime"), comm, 12, small);
    if (r.counterinstance) d = "counterinstance " + render_program(Program{*r.counterinstance});
    return r.holds && r.instances > 0;
  });
  c.check("PlusList has a commutativity counterinstance", [&](std::string&) {
    auto r = proves_rule(program("pluslist"), comm, 12, small);
    return !r.holds && r.counterinstance.has_value();
  });
  return c.report();
}

bool proportions() {
  Criterion c("6 proportions");
  auto check_file = [](const std::string& name) {
    auto f = read_proportion_file(corpus("proportions/" + name + ".prop"));
    return check_proportion(f.problem, *f.S, *f.witness);
  };
  c.check("joint-domain witness holds", [&](std::string&) { return check_file("a_b_joint").holds; });
  c.check("disjoint domains reject the alien fact", [&](std::string& d) {
    auto r = check_file("a_b_disjoint");
    bool alien = false;
    for (const auto& i : r.items)
      if (!i.passed && i.name.rfind("form AddB", 0) == 0 && i.detail.find("{b}") != std::string::npos) alien = true;
    d = to_string(r);
    return !r.holds && alien;
  });
  c.check("solver finds {d. c :- d.} at form depth 2", [&](std::string& d) {
    auto f = read_proportion_file(corpus("proportions/a_b_disjoint_open.prop"));
    SolverBudget b;
    b.max_form_depth = 2;
    auto r = solve_proportion(f.problem, b);
    Program want = parse_program("d. c :- d.");
    for (const auto& s : r.solutions)
      if (s.S == want) return true;
    d = std::to_string(r.solutions.size()) + " solutions, none matching";
    return false;
  });
  c.check("all derived permutations of Nat:Plus(Nat)::List:Plus(List) hold", [&](std::string& d) {
    auto f = read_proportion_file(corpus("proportions/nat_plus_list.prop"));
    auto derived = derived_proportions(Proportion{f.problem, *f.S, *f.witness});
    bool ok = derived.size() == 3;
    for (const auto& p : derived)
      if (!p.report.holds) {
        d += p.label + " fails; ";
        ok = false;
      }
    return ok;
  });
  return c.report();
}

bool properties() {
  using namespace horn::test;
  Criterion c("7 property suites (500 cases each, fixed seeds)");
  auto suite = [&](const std::string& name, const PropertyStats& st, std::size_t min_cases = 500) {
    c.check(name, [&](std::string& d) {
      d = std::to_string(st.cases) + " cases, " + std::to_string(st.failures) + " failures";
      if (!st.first_failure.empty()) d += "; first: " + st.first_failure;
      return st.ok(min_cases);
    });
  };
  suite("composition associative up to variants", compose_associativity(500, 1, true));
  suite("concatenation associative", concat_associativity(500, 2));
  suite("tp_step = compose(ground(P), I)", tp_matches_compose(500, 3));
  suite("least model = omega(ground(P))", least_model_matches_omega(500, 4));
  suite("SLD agrees with least model on corpus programs", sld_matches_least_model(40, 5));
  suite("solver answers verify, planted witnesses found", solver_sound_and_complete(500, 6));
  suite("solver equals exhaustive oracle", solver_matches_oracle(500, 7));
  return c.report();
}

}  // namespace

int main() {
  bool ok = true;
  for (auto run : {composition, concatenation, forms, semantics, sld, proportions, properties}) ok = run() && ok;
  return ok ? 0 : 1;
}
