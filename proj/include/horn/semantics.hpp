// Interpretations, bounded grounding, the immediate-consequence operator and
// least models.
//
// All answers are relative to a GroundingBound. The Herbrand universe is the
// set of terms over the program's function symbols (plus any extra
// constants) whose depth does not exceed `max_term_depth`; constants have
// depth 0.
#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "horn/algebra.hpp"
#include "horn/syntax.hpp"

namespace horn {

class BoundOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroundingBound {
  std::size_t max_term_depth = 6;
  std::size_t max_atoms = 200000;
  // Constants added to the universe beyond those of the program.
  std::vector<std::string> extra_constants;
};

using Interpretation = std::set<Atom>;

Program to_program(const Interpretation& i);
std::vector<Term> herbrand_universe(const Program& p, const GroundingBound& b);

// Ground instances whose terms all have depth ≤ the bound.
Program ground(const Program& p, const GroundingBound& b);

// T_P(I) = { head(r) | r ∈ gnd(P), body(r) ⊆ I }.
Interpretation tp_step(const Program& p, const Interpretation& i, const GroundingBound& b);

// Iterates tp_step from ∅; the least fixpoint of the bounded grounding.
Interpretation least_fixpoint(const Program& p, const GroundingBound& b);

bool is_model(const Program& ground_program, const Interpretation& i);

// Least model computed bottom-up on the rules themselves: atoms may keep
// variables (each stands for all of its ground instances). Derived atoms
// deeper than the bound are dropped, which keeps the iteration finite.
class Model {
 public:
  const Program& generators() const { return generators_; }
  bool converged() const { return converged_; }
  std::size_t rounds() const { return rounds_; }

  // Is the ground atom an instance of some generator?
  bool entails(const Atom& ground_atom) const;
  // Ground instances over the bounded universe.
  Interpretation ground_atoms(const std::vector<Term>& universe, std::size_t max_atoms) const;

 private:
  friend Model least_model(const Program&, const GroundingBound&);
  Program generators_;
  bool converged_ = false;
  std::size_t rounds_ = 0;
};

Model least_model(const Program& p, const GroundingBound& b);

bool entails(const Program& p, const Atom& ground_atom, const GroundingBound& b);

struct EquivalenceResult {
  bool equivalent = false;
  // Answers compare least models restricted to this bound only.
  GroundingBound bound;
  std::size_t atoms_compared = 0;
};

EquivalenceResult equivalent(const Program& p, const Program& r, const GroundingBound& b);

}  // namespace horn
