// Terms, atoms, rules and programs over an unranked first-order language.
//
// A program is a set of rules. Two rules are the same set element when they
// are variants of each other, so Program stores one representative per
// canonical key and keeps its rules in canonical order.
#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace horn {

struct Term {
  enum class Kind : unsigned char { Variable, Compound };

  Kind kind = Kind::Compound;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name) { return {Kind::Variable, std::move(name), {}}; }
  static Term fn(std::string name, std::vector<Term> args = {}) {
    return {Kind::Compound, std::move(name), std::move(args)};
  }

  bool is_var() const { return kind == Kind::Variable; }
  bool is_constant() const { return kind == Kind::Compound && args.empty(); }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

// nil / cons, the desugared list constructors.
Term nil();
Term cons(Term head, Term tail);
Term make_list(std::vector<Term> items, Term tail = nil());

struct Atom {
  std::string pred;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

// Head plus a duplicate-free body. The body is kept sorted so that rules
// built from the same atoms compare equal.
class Rule {
 public:
  Rule() = default;
  Rule(Atom head, std::vector<Atom> body = {});

  const Atom& head() const { return head_; }
  const std::vector<Atom>& body() const { return body_; }
  std::size_t size() const { return body_.size(); }
  bool is_fact() const { return body_.empty(); }

  friend bool operator==(const Rule&, const Rule&) = default;
  friend std::strong_ordering operator<=>(const Rule& a, const Rule& b);

 private:
  Atom head_;
  std::vector<Atom> body_;
};

struct PredSignature {
  std::string head;
  std::set<std::string> body;

  friend bool operator==(const PredSignature&, const PredSignature&) = default;
  friend auto operator<=>(const PredSignature&, const PredSignature&) = default;
};

class Program {
 public:
  Program() = default;
  Program(std::vector<Rule> rules);
  Program(std::initializer_list<Rule> rules) : Program(std::vector<Rule>(rules)) {}

  // Returns false when a variant of `r` is already present.
  bool insert(Rule r);
  bool contains(const Rule& r) const;
  // Copies rule `i` of `src`, reusing its canonical key.
  bool insert_from(const Program& src, std::size_t i);

  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<std::string>& keys() const { return keys_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  auto begin() const { return rules_.begin(); }
  auto end() const { return rules_.end(); }

  // Set equality up to per-rule variable renaming.
  friend bool operator==(const Program& a, const Program& b) { return a.keys_ == b.keys_; }

 private:
  std::vector<Rule> rules_;
  std::vector<std::string> keys_;
  std::vector<std::string> order_;  // sort key per rule
};

// Exact syntactic set equality, no renaming allowed.
bool strictly_equal(const Program& a, const Program& b);
bool is_subset(const Program& a, const Program& b);
Program unite(const Program& a, const Program& b);

// --- structural accessors ---

Program facts(const Program& p);
Program proper(const Program& p);
PredSignature pred_of(const Rule& r);
Program rename_predicate(const Program& p, std::string_view from, std::string_view to);
Program reverse(const Program& p);
// body(P) as a program of facts.
Program body_facts(const Program& p);

std::size_t depth(const Term& t);
std::size_t depth(const Atom& a);
bool is_ground(const Term& t);
bool is_ground(const Atom& a);
bool is_ground(const Rule& r);
bool is_ground(const Program& p);

// Variables in order of first occurrence.
void collect_vars(const Term& t, std::vector<std::string>& out);
void collect_vars(const Atom& a, std::vector<std::string>& out);
std::vector<std::string> variables(const Rule& r);
std::set<std::string> variables(const Program& p);

// Predicate names and functor names used (functors include constants).
std::set<std::string> predicates(const Program& p);
std::set<std::string> functors(const Program& p);
void collect_functors(const Term& t, std::set<std::pair<std::string, std::size_t>>& out);
std::set<std::pair<std::string, std::size_t>> predicate_arities(const Program& p);

// --- rendering ---

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
// The rule exactly as stored, e.g. "b :- a."
std::string to_string(const Rule& r);

// Variant-invariant key: variables renamed canonically, body in canonical order.
std::string canonical_key(const Rule& r);
Rule canonicalize(const Rule& r);

// Canonical text: one rule per line in canonical order, each renamed.
std::string render_program(const Program& p);
std::vector<std::string> render_lines(const Program& p);

}  // namespace horn
