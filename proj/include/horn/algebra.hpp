// Sequential composition, powers, Kleene star/plus/omega, concatenation and
// syntactic representation (P = Q ∘ R ∘ S) of Horn programs.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "horn/syntax.hpp"

namespace horn {

// Thrown when an operation would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComposeOptions {
  std::size_t max_rules = 100000;
};

// P ∘ R: every body atom of a rule of P is resolved against the head of a
// fresh variant of some rule of R, all simultaneously. Facts of P pass
// through. Throws BudgetExceeded past `max_rules` generated rules.
Program compose(const Program& p, const Program& r, const ComposeOptions& opts = {});

// p(X1..Xn) <- p(X1..Xn) for every predicate/arity occurring in the programs.
Program identity_program(const Program& p);

Program power(const Program& p, std::size_t n, const ComposeOptions& opts = {});

struct IterationResult {
  Program program;
  bool converged = false;  // false: the cap was hit before a fixpoint
  std::size_t iterations = 0;
};

constexpr std::size_t kDefaultStarCap = 32;

// ∪_{k ≤ cap} P^k, stopping once a power repeats an earlier one.
IterationResult star(const Program& p, std::size_t cap = kDefaultStarCap, const ComposeOptions& opts = {});
// P* ∘ P
IterationResult plus(const Program& p, std::size_t cap = kDefaultStarCap, const ComposeOptions& opts = {});
// P⁺ ∘ ∅
IterationResult omega(const Program& p, std::size_t cap = kDefaultStarCap, const ComposeOptions& opts = {});

// Argument-list concatenation of same-predicate atoms; nullopt on mismatch.
std::optional<Atom> concatenate(const Atom& a, const Atom& b);
std::vector<Atom> concatenate(const std::vector<Atom>& a, const std::vector<Atom>& b);
// r · r' when pred(r) = pred(r').
std::optional<Rule> concatenate(const Rule& a, const Rule& b);
// Variables are shared between the operands, not standardized apart.
Program concatenate(const Program& p, const Program& r);

struct DecompositionWitness {
  Program left;   // Q
  Program right;  // S
};

// p = (left ∘ r) ∘ right as canonical program sets.
bool check_representation(const Program& p, const Program& r, const DecompositionWitness& w,
                          const ComposeOptions& opts = {});

struct SearchBudget {
  std::size_t max_rules = 3;       // rules per transfer program
  std::size_t max_body = 2;        // body atoms per candidate rule
  std::size_t max_term_depth = 1;  // depth of candidate argument terms
  std::size_t max_vars = 3;        // distinct variables in candidate atoms
  std::size_t max_candidates = 64; // candidate rules kept per search level
  std::size_t max_checks = 2000000;
};

struct RepresentationResult {
  std::optional<DecompositionWitness> witness;
  std::size_t checks = 0;
  bool exhausted = false;  // stopped at max_checks, not at the end of the space
};

// Iterative deepening over transfer programs drawn from the symbols of p and
// r. A missing witness means none was found within the budget.
RepresentationResult search_representation(const Program& p, const Program& r, const SearchBudget& budget = {});

}  // namespace horn
