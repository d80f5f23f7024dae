// SLD-resolution with leftmost selection, canonical rule order and
// iterative deepening.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "horn/semantics.hpp"
#include "horn/syntax.hpp"
#include "horn/unify.hpp"

namespace horn {

struct Query {
  std::vector<Atom> goals;  // empty is the empty query □
  bool empty() const { return goals.empty(); }
  friend bool operator==(const Query&, const Query&) = default;
};

std::string to_string(const Query& q);

// A program whose rules remember which named sub-program they came from.
class LabeledProgram {
 public:
  LabeledProgram() = default;
  LabeledProgram(const Program& p, std::string label = "") { add(p, std::move(label)); }

  // Rules already present keep their first label.
  void add(const Program& p, const std::string& label);

  const Program& program() const { return program_; }
  const std::string& label_of(std::size_t rule_index) const { return labels_[rule_index]; }

 private:
  Program program_;
  std::vector<std::string> labels_;  // parallel to program_.rules()
};

struct DerivationStep {
  Query query;                 // the query before this step
  std::size_t selected_index;  // atom of `query` that was resolved
  Rule rule_used;              // renamed apart from the query
  Substitution unifier;
  std::string source_label;
  Query resolvent;
};

// Resolves goal `selected` of `q` with a variant of `r`. Fresh names are
// drawn from `fresh`, which should avoid every variable of the query.
std::optional<Query> resolve_step(const Query& q, std::size_t selected, const Rule& r, FreshNames& fresh,
                                  Substitution* unifier = nullptr, Rule* renamed = nullptr);
std::optional<Query> resolve_step(const Query& q, std::size_t selected, const Rule& r);

struct Refutation {
  std::vector<DerivationStep> steps;
  Substitution answer;  // restricted to the variables of the original query
};

// Shortest refutation with at most `max_depth` steps, if any.
std::optional<Refutation> prove_with_trace(const LabeledProgram& p, const Query& q, std::size_t max_depth);
bool proves(const Program& p, const Atom& a, std::size_t max_depth);

// Trace rendered as "<- [label] goal, ..." lines, starting with the query
// under label "?" and ending with "<- [label] []".
std::string render_trace(const Query& q, const Refutation& r);

struct RuleCheck {
  bool holds = true;
  std::size_t instances = 0;
  std::optional<Rule> counterinstance;
};

// P ⊢ r: every instance of r over the bounded universe whose body atoms are
// provable has a provable head.
RuleCheck proves_rule(const Program& p, const Rule& r, std::size_t max_depth, const GroundingBound& b);

}  // namespace horn
