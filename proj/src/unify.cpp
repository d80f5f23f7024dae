#include "horn/unify.hpp"

#include <algorithm>
#include <functional>

namespace horn {

const Term* Substitution::find(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

bool Substitution::is_renaming() const {
  std::set<std::string> targets;
  for (const auto& [v, t] : map_) {
    if (!t.is_var() || !targets.insert(t.name).second) return false;
  }
  return true;
}

Term apply(const Substitution& s, const Term& t) {
  if (t.is_var()) {
    const Term* b = s.find(t.name);
    return b ? *b : t;
  }
  Term out = Term::fn(t.name);
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(apply(s, a));
  return out;
}

Atom apply(const Substitution& s, const Atom& a) {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply(s, t));
  return out;
}

Rule apply(const Substitution& s, const Rule& r) {
  std::vector<Atom> body;
  body.reserve(r.size());
  for (const auto& a : r.body()) body.push_back(apply(s, a));
  return Rule(apply(s, r.head()), std::move(body));
}

Program apply(const Substitution& s, const Program& p) {
  Program out;
  for (const auto& r : p) out.insert(apply(s, r));
  return out;
}

Substitution compose(const Substitution& first, const Substitution& second) {
  Substitution out;
  for (const auto& [v, t] : first.bindings()) {
    Term u = apply(second, t);
    if (!(u.is_var() && u.name == v)) out.bind(v, std::move(u));
  }
  for (const auto& [v, t] : second.bindings())
    if (!first.find(v)) out.bind(v, t);
  return out;
}

Substitution restrict(const Substitution& s, const std::vector<std::string>& vars) {
  Substitution out;
  for (const auto& v : vars)
    if (const Term* t = s.find(v)) out.bind(v, *t);
  return out;
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += v + " -> " + to_string(t);
  }
  return out + "}";
}

// ---------------------------------------------------------------------------

const Term& Unifier::walk(const Term& t) const {
  const Term* cur = &t;
  while (cur->is_var()) {
    auto it = bind_.find(cur->name);
    if (it == bind_.end()) break;
    cur = &it->second;
  }
  return *cur;
}

bool Unifier::occurs(const std::string& var, const Term& t) const {
  const Term& w = walk(t);
  if (w.is_var()) return w.name == var;
  return std::any_of(w.args.begin(), w.args.end(), [&](const Term& a) { return occurs(var, a); });
}

bool Unifier::unify(const Term& a, const Term& b) {
  const Term& x = walk(a);
  const Term& y = walk(b);
  if (x.is_var() && y.is_var() && x.name == y.name) return true;
  if (x.is_var()) {
    if (occurs(x.name, y)) return false;
    bind_.emplace(x.name, y);
    return true;
  }
  if (y.is_var()) {
    if (occurs(y.name, x)) return false;
    bind_.emplace(y.name, x);
    return true;
  }
  if (x.name != y.name || x.args.size() != y.args.size()) return false;
  // x and y may be invalidated by bindings made below; copy the children.
  std::vector<Term> xs = x.args, ys = y.args;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!unify(xs[i], ys[i])) return false;
  return true;
}

bool Unifier::unify(const Atom& a, const Atom& b) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify(a.args[i], b.args[i])) return false;
  return true;
}

Term Unifier::resolve(const Term& t) const {
  const Term& w = walk(t);
  if (w.is_var()) return w;
  Term out = Term::fn(w.name);
  out.args.reserve(w.args.size());
  for (const auto& a : w.args) out.args.push_back(resolve(a));
  return out;
}

Atom Unifier::resolve(const Atom& a) const {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(resolve(t));
  return out;
}

Substitution Unifier::result() const {
  Substitution s;
  for (const auto& [v, t] : bind_) {
    Term r = resolve(Term::var(v));
    if (!(r.is_var() && r.name == v)) s.bind(v, std::move(r));
  }
  return s;
}

std::optional<Substitution> mgu(const Term& a, const Term& b) {
  Unifier u;
  if (!u.unify(a, b)) return std::nullopt;
  return u.result();
}

std::optional<Substitution> mgu_atoms(const Atom& a, const Atom& b) {
  Unifier u;
  if (!u.unify(a, b)) return std::nullopt;
  return u.result();
}

std::vector<Substitution> mgu_atom_sets_all(const std::vector<Atom>& goal, const std::vector<Atom>& heads) {
  std::vector<Substitution> out;
  if (goal.size() != heads.size()) return out;
  std::vector<bool> used(heads.size(), false);
  std::function<void(std::size_t, const Unifier&)> go = [&](std::size_t i, const Unifier& u) {
    if (i == goal.size()) {
      Substitution s = u.result();
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
      return;
    }
    for (std::size_t j = 0; j < heads.size(); ++j) {
      if (used[j] || heads[j].pred != goal[i].pred) continue;
      Unifier next = u;
      if (!next.unify(goal[i], heads[j])) continue;
      used[j] = true;
      go(i + 1, next);
      used[j] = false;
    }
  };
  go(0, Unifier{});
  return out;
}

std::optional<Substitution> mgu_atom_sets(const std::vector<Atom>& goal, const std::vector<Atom>& heads) {
  auto all = mgu_atom_sets_all(goal, heads);
  if (all.empty()) return std::nullopt;
  return all.front();
}

// ---------------------------------------------------------------------------

std::string FreshNames::next() {
  while (true) {
    std::string name = prefix_ + std::to_string(++counter_);
    if (avoid_.insert(name).second) return name;
  }
}

Rule rename_apart(const Rule& r, FreshNames& fresh) {
  Substitution s;
  for (const auto& v : variables(r)) s.bind(v, Term::var(fresh.next()));
  return apply(s, r);
}

Program standardize_apart(const Program& p, FreshNames& fresh) {
  Program out;
  for (const auto& r : p) out.insert(rename_apart(r, fresh));
  return out;
}

Program standardize_apart(const Program& p, const std::set<std::string>& avoid) {
  std::set<std::string> all = avoid;
  for (const auto& v : variables(p)) all.insert(v);
  FreshNames fresh(std::move(all));
  return standardize_apart(p, fresh);
}

bool is_variant(const Rule& a, const Rule& b) { return canonical_key(a) == canonical_key(b); }

bool is_variant(const Program& p, const Program& q) { return p == q; }

namespace {

bool match_term(const Term& g, const Term& t, Substitution& s) {
  if (g.is_var()) {
    if (const Term* b = s.find(g.name)) return *b == t;
    s.bind(g.name, t);
    return true;
  }
  if (t.is_var() || g.name != t.name || g.args.size() != t.args.size()) return false;
  for (std::size_t i = 0; i < g.args.size(); ++i)
    if (!match_term(g.args[i], t.args[i], s)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> match(const Atom& general, const Atom& instance) {
  if (general.pred != instance.pred || general.args.size() != instance.args.size()) return std::nullopt;
  Substitution s;
  for (std::size_t i = 0; i < general.args.size(); ++i)
    if (!match_term(general.args[i], instance.args[i], s)) return std::nullopt;
  return s;
}

}  // namespace horn
