// Substitutions, most general unifiers and variants.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "horn/syntax.hpp"

namespace horn {

// Finite map from variable names to terms. Bindings are kept fully
// resolved, so applying a substitution once is enough.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init) : map_(init) {}

  const Term* find(const std::string& var) const;
  void bind(const std::string& var, Term t) { map_[var] = std::move(t); }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<std::string, Term>& bindings() const { return map_; }

  // Injective variable-to-variable map.
  bool is_renaming() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term> map_;
};

Term apply(const Substitution& s, const Term& t);
Atom apply(const Substitution& s, const Atom& a);
Rule apply(const Substitution& s, const Rule& r);
Program apply(const Substitution& s, const Program& p);

// (first ∘ second)(x) = apply(second, apply(first, x)).
Substitution compose(const Substitution& first, const Substitution& second);
// Restrict to the given variables.
Substitution restrict(const Substitution& s, const std::vector<std::string>& vars);

std::string to_string(const Substitution& s);

// Incremental unifier with occurs check. Bindings are triangular while
// unifying; `result()` returns the idempotent solved form.
class Unifier {
 public:
  bool unify(const Term& a, const Term& b);
  bool unify(const Atom& a, const Atom& b);
  Term resolve(const Term& t) const;
  Atom resolve(const Atom& a) const;
  Substitution result() const;

 private:
  const Term& walk(const Term& t) const;
  bool occurs(const std::string& var, const Term& t) const;

  std::map<std::string, Term> bind_;
};

std::optional<Substitution> mgu(const Term& a, const Term& b);
std::optional<Substitution> mgu_atoms(const Atom& a, const Atom& b);

// Unifiers making the two atom sets equal, one per bijection (pairing atoms
// with the same predicate) whose pairs unify simultaneously. Ordered by the
// canonical enumeration of pairings.
std::vector<Substitution> mgu_atom_sets_all(const std::vector<Atom>& goal, const std::vector<Atom>& heads);
std::optional<Substitution> mgu_atom_sets(const std::vector<Atom>& goal, const std::vector<Atom>& heads);

// Produces names `_<n>` not present in the avoid set.
class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> avoid = {}, std::string prefix = "_") : avoid_(std::move(avoid)), prefix_(std::move(prefix)) {}
  std::string next();
  void avoid(const std::string& name) { avoid_.insert(name); }

 private:
  std::set<std::string> avoid_;
  std::string prefix_;
  std::size_t counter_ = 0;
};

Rule rename_apart(const Rule& r, FreshNames& fresh);
Program standardize_apart(const Program& p, const std::set<std::string>& avoid);
Program standardize_apart(const Program& p, FreshNames& fresh);

bool is_variant(const Rule& a, const Rule& b);
bool is_variant(const Program& p, const Program& q);

// Does `general` subsume `instance` (instance = general·σ for some σ)?
std::optional<Substitution> match(const Atom& general, const Atom& instance);

}  // namespace horn
