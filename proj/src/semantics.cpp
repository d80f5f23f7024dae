#include "horn/semantics.hpp"

#include <algorithm>
#include <functional>

#include "horn/unify.hpp"

namespace horn {

Program to_program(const Interpretation& i) {
  Program out;
  for (const auto& a : i) out.insert(Rule(a));
  return out;
}

std::vector<Term> herbrand_universe(const Program& p, const GroundingBound& b) {
  std::set<std::pair<std::string, std::size_t>> fns;
  for (const auto& r : p) {
    for (const auto& t : r.head().args) collect_functors(t, fns);
    for (const auto& a : r.body())
      for (const auto& t : a.args) collect_functors(t, fns);
  }
  for (const auto& c : b.extra_constants) fns.emplace(c, 0);

  // Terms bucketed by exact depth.
  std::vector<std::vector<Term>> by_depth(1);
  for (const auto& [name, arity] : fns)
    if (arity == 0) by_depth[0].push_back(Term::fn(name));
  std::size_t total = by_depth[0].size();

  for (std::size_t d = 1; d <= b.max_term_depth; ++d) {
    std::vector<Term> below;
    for (const auto& level : by_depth) below.insert(below.end(), level.begin(), level.end());
    std::vector<Term> level;
    for (const auto& [name, arity] : fns) {
      if (arity == 0 || below.empty()) continue;
      std::vector<std::size_t> idx(arity, 0);
      while (true) {
        Term t = Term::fn(name);
        std::size_t deepest = 0;
        for (auto i : idx) {
          t.args.push_back(below[i]);
          deepest = std::max(deepest, depth(below[i]));
        }
        if (deepest + 1 == d) {
          level.push_back(std::move(t));
          if (++total > b.max_atoms)
            throw BoundOverflow("Herbrand universe exceeds " + std::to_string(b.max_atoms) +
                                " terms at depth " + std::to_string(b.max_term_depth));
        }
        std::size_t k = 0;
        while (k < arity && ++idx[k] == below.size()) idx[k++] = 0;
        if (k == arity) break;
      }
    }
    if (level.empty()) break;
    by_depth.push_back(std::move(level));
  }
  std::vector<Term> out;
  for (auto& level : by_depth) out.insert(out.end(), level.begin(), level.end());
  return out;
}

namespace {

bool within(const Atom& a, std::size_t d) { return depth(a) <= d; }

bool rule_within(const Rule& r, std::size_t d) {
  return within(r.head(), d) &&
         std::all_of(r.body().begin(), r.body().end(), [&](const Atom& a) { return within(a, d); });
}

// Calls `emit` with every extension of `s` binding `vars` to universe terms.
void for_each_assignment(const std::vector<std::string>& vars, const std::vector<Term>& universe, Substitution s,
                         const std::function<void(const Substitution&)>& emit) {
  std::vector<std::string> open;
  for (const auto& v : vars)
    if (!s.find(v)) open.push_back(v);
  if (open.empty()) {
    emit(s);
    return;
  }
  if (universe.empty()) return;
  std::vector<std::size_t> idx(open.size(), 0);
  while (true) {
    for (std::size_t k = 0; k < open.size(); ++k) s.bind(open[k], universe[idx[k]]);
    emit(s);
    std::size_t k = 0;
    while (k < open.size() && ++idx[k] == universe.size()) idx[k++] = 0;
    if (k == open.size()) break;
  }
}

bool match_into(const Term& g, const Term& t, Substitution& s) {
  if (g.is_var()) {
    if (const Term* b = s.find(g.name)) return *b == t;
    s.bind(g.name, t);
    return true;
  }
  if (t.is_var() || g.name != t.name || g.args.size() != t.args.size()) return false;
  for (std::size_t i = 0; i < g.args.size(); ++i)
    if (!match_into(g.args[i], t.args[i], s)) return false;
  return true;
}

bool match_into(const Atom& g, const Atom& t, Substitution& s) {
  if (g.pred != t.pred || g.args.size() != t.args.size()) return false;
  for (std::size_t i = 0; i < g.args.size(); ++i)
    if (!match_into(g.args[i], t.args[i], s)) return false;
  return true;
}

}  // namespace

Program ground(const Program& p, const GroundingBound& b) {
  std::vector<Term> universe = herbrand_universe(p, b);
  Program out;
  const std::size_t work_limit = b.max_atoms * 64;
  std::size_t work = 0;
  for (const auto& r : p) {
    for_each_assignment(variables(r), universe, {}, [&](const Substitution& s) {
      if (++work > work_limit)
        throw BoundOverflow("grounding needs more than " + std::to_string(work_limit) + " instantiations");
      Rule inst = apply(s, r);
      if (!rule_within(inst, b.max_term_depth)) return;
      out.insert(std::move(inst));
      if (out.size() > b.max_atoms)
        throw BoundOverflow("grounding exceeds " + std::to_string(b.max_atoms) + " rules at depth " +
                            std::to_string(b.max_term_depth));
    });
  }
  return out;
}

Interpretation tp_step(const Program& p, const Interpretation& i, const GroundingBound& b) {
  std::vector<Term> universe = herbrand_universe(p, b);
  std::vector<Atom> facts_in(i.begin(), i.end());
  Interpretation out;
  for (const auto& r : p) {
    const auto& body = r.body();
    std::vector<std::string> head_vars;
    collect_vars(r.head(), head_vars);
    std::function<void(std::size_t, const Substitution&)> go = [&](std::size_t k, const Substitution& s) {
      if (k == body.size()) {
        for_each_assignment(head_vars, universe, s, [&](const Substitution& full) {
          Atom h = apply(full, r.head());
          if (!within(h, b.max_term_depth)) return;
          out.insert(std::move(h));
          if (out.size() > b.max_atoms)
            throw BoundOverflow("interpretation exceeds " + std::to_string(b.max_atoms) + " atoms");
        });
        return;
      }
      for (const auto& f : facts_in) {
        if (!within(f, b.max_term_depth)) continue;
        Substitution next = s;
        if (match_into(body[k], f, next)) go(k + 1, next);
      }
    };
    go(0, {});
  }
  return out;
}

Interpretation least_fixpoint(const Program& p, const GroundingBound& b) {
  Interpretation cur;
  while (true) {
    Interpretation next = tp_step(p, cur, b);
    next.insert(cur.begin(), cur.end());
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

bool is_model(const Program& ground_program, const Interpretation& i) {
  for (const auto& r : ground_program) {
    bool body_holds = std::all_of(r.body().begin(), r.body().end(), [&](const Atom& a) { return i.count(a) > 0; });
    if (body_holds && !i.count(r.head())) return false;
  }
  return true;
}

bool Model::entails(const Atom& ground_atom) const {
  return std::any_of(generators_.begin(), generators_.end(),
                     [&](const Rule& g) { return match(g.head(), ground_atom).has_value(); });
}

Interpretation Model::ground_atoms(const std::vector<Term>& universe, std::size_t max_atoms) const {
  // Instances may not go deeper than the universe itself.
  std::size_t bound = 0;
  for (const auto& t : universe) bound = std::max(bound, depth(t));
  Interpretation out;
  for (const auto& g : generators_) {
    std::vector<std::string> vars;
    collect_vars(g.head(), vars);
    for_each_assignment(vars, universe, {}, [&](const Substitution& s) {
      Atom a = apply(s, g.head());
      if (!within(a, bound)) return;
      out.insert(std::move(a));
      if (out.size() > max_atoms) throw BoundOverflow("model exceeds " + std::to_string(max_atoms) + " ground atoms");
    });
  }
  return out;
}

Model least_model(const Program& p, const GroundingBound& b) {
  Model m;
  ComposeOptions opts;
  opts.max_rules = b.max_atoms;
  while (true) {
    ++m.rounds_;
    Program step = compose(p, m.generators_, opts);
    bool grew = false;
    for (const auto& r : step) {
      if (!within(r.head(), b.max_term_depth)) continue;
      if (m.generators_.insert(r)) grew = true;
    }
    if (m.generators_.size() > b.max_atoms)
      throw BoundOverflow("least model exceeds " + std::to_string(b.max_atoms) + " atoms");
    if (!grew) {
      m.converged_ = true;
      return m;
    }
  }
}

bool entails(const Program& p, const Atom& ground_atom, const GroundingBound& b) {
  return least_model(p, b).entails(ground_atom);
}

EquivalenceResult equivalent(const Program& p, const Program& r, const GroundingBound& b) {
  EquivalenceResult res;
  res.bound = b;
  std::vector<Term> universe = herbrand_universe(unite(p, r), b);
  auto restricted = [&](const Program& prog) {
    Interpretation all = least_model(prog, b).ground_atoms(universe, b.max_atoms);
    Interpretation out;
    for (const auto& a : all)
      if (within(a, b.max_term_depth)) out.insert(a);
    return out;
  };
  Interpretation lp = restricted(p), lr = restricted(r);
  res.atoms_compared = lp.size() + lr.size();
  res.equivalent = lp == lr;
  return res;
}

}  // namespace horn
