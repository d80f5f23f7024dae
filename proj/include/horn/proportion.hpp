// Analogical proportions P : Q :: R : S between programs, witnessed by two
// forms and a pair of subprogram vectors.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "horn/forms.hpp"
#include "horn/syntax.hpp"

namespace horn {

class ProportionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DomainSig {
  std::string name;
  std::set<std::string> preds;
  std::set<std::string> functors;  // constants included
};

// The smallest domain containing every symbol of `p`.
DomainSig domain_of(const Program& p, std::string name = "");
DomainSig intersect(const DomainSig& a, const DomainSig& b);
DomainSig join(const DomainSig& a, const DomainSig& b);
bool in_domain(const Program& p, const DomainSig& d);
// Symbols of `p` not allowed in `d`, e.g. {"pred b", "functor f"}.
std::vector<std::string> alien_symbols(const Program& p, const DomainSig& d);
std::string to_string(const DomainSig& d);

struct ProportionProblem {
  Program P, Q, R;
  DomainSig source, target;

  // Throws ProportionError unless P, Q lie in `source` and R in `target`.
  static ProportionProblem make(Program P, Program Q, Program R, DomainSig source, DomainSig target);
};

enum class Line { FGFG, FGGF, FFGG };

std::string to_string(Line l);
std::optional<Line> parse_line(std::string_view s);

struct ProportionWitness {
  FormDef F, G;
  std::vector<BoundProgram> Pvec, Rvec;
  Line line = Line::FGFG;
  NonConstancyProbe probe = default_probe();
  std::shared_ptr<const FormLibrary> library;  // forms called from F and G
};

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ProportionReport {
  bool holds = false;
  std::vector<CheckItem> items;
};

std::string to_string(const ProportionReport& r);

struct CheckOptions {
  bool strict = false;  // exact syntactic equality instead of equality up to variants
  ComposeOptions compose;
};

// Throws ProportionError when the vector lengths disagree with the form arities.
ProportionReport check_proportion(const ProportionProblem& prob, const Program& S, const ProportionWitness& w,
                                  const CheckOptions& opts = {});

struct Proportion {
  ProportionProblem problem;
  Program S;
  ProportionWitness witness;
};

struct DerivedProportion {
  std::string label;  // "Q:P::S:R", "R:S::P:Q" or "P:R::Q:S"
  Proportion proportion;
  ProportionReport report;
};

// The three permuted proportions. Each one carries the first rearrangement of
// the witness (forms, vectors, line) that verifies, or the plain role swap
// with its failing report when none does.
std::vector<DerivedProportion> derived_proportions(const Proportion& p, const CheckOptions& opts = {});

struct SolverBudget {
  std::size_t max_form_depth = 2;
  std::size_t vector_length = 1;
  std::size_t max_pool_rules = 10;  // subsets are drawn from at most this many rules
  std::size_t max_forms = 20000;
  std::size_t max_evaluations = 5000000;
};

struct Solution {
  Program S;
  ProportionWitness witness;
};

struct SolveResult {
  std::vector<Solution> solutions;
  bool exhausted = false;  // the budget ran out before the search space was covered
  std::size_t forms = 0;
  std::size_t evaluations = 0;
};

// Forms enumerated by the solver for the given leaves, up to `depth`.
std::vector<FormPtr> enumerate_forms(const std::vector<std::string>& vars, const std::vector<Program>& atoms,
                                     std::size_t depth, std::size_t max_forms);

// Bounded search over the form grammar
//   X_i | {atom} | facts(F) | proper(F) | rev(F) | body(F) | F | G | F o G | F . G
// with atoms drawn from P, Q, R inside source ∩ target and vectors drawn from
// rule subsets. Only pointwise ⊆-minimal vector pairs are kept per (F, G, line).
// Returns one verified witness per distinct (S, line), preferring shallow forms,
// ordered by rendered S.
SolveResult solve_proportion(const ProportionProblem& prob, const SolverBudget& budget = {});

// Proportion problem files (.prop), one directive per line, `#` comments:
//
//   program P = nat.lp
//   program S = ?                      (or a file holding the expected answer)
//   domain source arith: preds nat, plus; functors 0, s
//   witness forms = forms.lpf
//   witness F = Id
//   witness line = FGFG
//   witness Pvec = nat.lp[nat](X)      (';'-separated, one per vector entry)
//
// Paths are relative to the .prop file.
struct ProportionFile {
  ProportionProblem problem;
  std::optional<Program> S;
  std::optional<ProportionWitness> witness;
  std::shared_ptr<FormLibrary> library;
};

ProportionFile read_proportion_file(const std::string& path);

// "path[pred](T1,...,Tn)" with both suffixes optional; the program's own
// parameters are its variables in source order.
BoundProgram read_bound_program(const std::string& spec, const std::string& base_dir = ".");

}  // namespace horn
