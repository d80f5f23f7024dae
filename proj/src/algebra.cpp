#include "horn/algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "horn/unify.hpp"

namespace horn {

Program compose(const Program& p, const Program& r, const ComposeOptions& opts) {
  Program out;
  std::set<std::string> used = variables(p);
  for (const auto& v : variables(r)) used.insert(v);
  FreshNames fresh(std::move(used));
  std::size_t generated = 0;

  for (const auto& rule : p) {
    if (rule.is_fact()) {
      out.insert(rule);
      continue;
    }
    const auto& body = rule.body();
    std::vector<Atom> collected;
    std::function<void(std::size_t, const Unifier&)> resolve_from = [&](std::size_t i, const Unifier& u) {
      if (i == body.size()) {
        std::vector<Atom> new_body;
        new_body.reserve(collected.size());
        for (const auto& a : collected) new_body.push_back(u.resolve(a));
        out.insert(Rule(u.resolve(rule.head()), std::move(new_body)));
        if (++generated > opts.max_rules)
          throw BudgetExceeded("composition produced more than " + std::to_string(opts.max_rules) + " rules");
        return;
      }
      for (const auto& partner : r) {
        if (partner.head().pred != body[i].pred || partner.head().arity() != body[i].arity()) continue;
        Rule copy = rename_apart(partner, fresh);
        Unifier next = u;
        if (!next.unify(body[i], copy.head())) continue;
        std::size_t mark = collected.size();
        collected.insert(collected.end(), copy.body().begin(), copy.body().end());
        resolve_from(i + 1, next);
        collected.resize(mark);
      }
    };
    resolve_from(0, Unifier{});
  }
  return out;
}

Program identity_program(const Program& p) {
  Program out;
  for (const auto& [pred, arity] : predicate_arities(p)) {
    Atom a{pred, {}};
    for (std::size_t i = 0; i < arity; ++i) a.args.push_back(Term::var("X" + std::to_string(i + 1)));
    out.insert(Rule(a, {a}));
  }
  return out;
}

Program power(const Program& p, std::size_t n, const ComposeOptions& opts) {
  if (n == 0) return identity_program(p);
  Program acc = p;
  for (std::size_t k = 1; k < n; ++k) acc = compose(p, acc, opts);
  return acc;
}

IterationResult star(const Program& p, std::size_t cap, const ComposeOptions& opts) {
  IterationResult res;
  std::vector<Program> powers{identity_program(p)};
  res.program = powers.front();
  for (std::size_t k = 1; k <= cap; ++k) {
    Program next = k == 1 ? p : compose(p, powers.back(), opts);
    res.iterations = k;
    if (std::find(powers.begin(), powers.end(), next) != powers.end()) {
      res.converged = true;
      return res;
    }
    res.program = unite(res.program, next);
    powers.push_back(std::move(next));
  }
  return res;
}

IterationResult plus(const Program& p, std::size_t cap, const ComposeOptions& opts) {
  IterationResult s = star(p, cap, opts);
  s.program = compose(s.program, p, opts);
  return s;
}

IterationResult omega(const Program& p, std::size_t cap, const ComposeOptions& opts) {
  IterationResult s = plus(p, cap, opts);
  s.program = compose(s.program, Program{}, opts);
  return s;
}

std::optional<Atom> concatenate(const Atom& a, const Atom& b) {
  if (a.pred != b.pred) return std::nullopt;
  Atom out = a;
  out.args.insert(out.args.end(), b.args.begin(), b.args.end());
  return out;
}

std::vector<Atom> concatenate(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  std::vector<Atom> out;
  for (const auto& x : a)
    for (const auto& y : b)
      if (auto c = concatenate(x, y)) out.push_back(std::move(*c));
  return out;
}

std::optional<Rule> concatenate(const Rule& a, const Rule& b) {
  if (pred_of(a) != pred_of(b)) return std::nullopt;
  return Rule(*concatenate(a.head(), b.head()), concatenate(a.body(), b.body()));
}

Program concatenate(const Program& p, const Program& r) {
  Program out;
  for (const auto& a : p)
    for (const auto& b : r)
      if (auto c = concatenate(a, b)) out.insert(std::move(*c));
  return out;
}

bool check_representation(const Program& p, const Program& r, const DecompositionWitness& w,
                          const ComposeOptions& opts) {
  return compose(compose(w.left, r, opts), w.right, opts) == p;
}

// ---------------------------------------------------------------------------
// Representation search

namespace {

void terms_up_to(std::size_t depth, const std::vector<Term>& leaves,
                 const std::set<std::pair<std::string, std::size_t>>& fns, std::size_t limit,
                 std::vector<Term>& out) {
  out = leaves;
  for (std::size_t d = 1; d <= depth && out.size() < limit; ++d) {
    std::vector<Term> prev = out;
    for (const auto& [name, arity] : fns) {
      if (arity == 0) continue;
      std::vector<std::size_t> idx(arity, 0);
      while (out.size() < limit) {
        Term t = Term::fn(name);
        for (auto i : idx) t.args.push_back(prev[i]);
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
        std::size_t k = 0;
        while (k < arity && ++idx[k] == prev.size()) idx[k++] = 0;
        if (k == arity) break;
      }
    }
  }
  if (out.size() > limit) out.resize(limit);
}

std::vector<Rule> candidate_rules(const Program& p, const Program& r, const SearchBudget& b) {
  Program both = unite(p, r);
  std::set<std::pair<std::string, std::size_t>> fns;
  for (const auto& rule : both) {
    for (const auto& t : rule.head().args) collect_functors(t, fns);
    for (const auto& a : rule.body())
      for (const auto& t : a.args) collect_functors(t, fns);
  }
  std::vector<Term> leaves;
  for (std::size_t i = 0; i < b.max_vars; ++i) leaves.push_back(Term::var("X" + std::to_string(i + 1)));
  for (const auto& [name, arity] : fns)
    if (arity == 0) leaves.push_back(Term::fn(name));
  std::vector<Term> pool;
  terms_up_to(b.max_term_depth, leaves, fns, b.max_candidates, pool);

  std::vector<Atom> atoms;
  for (const auto& [pred, arity] : predicate_arities(both)) {
    std::vector<std::size_t> idx(arity, 0);
    while (atoms.size() < b.max_candidates) {
      Atom a{pred, {}};
      for (auto i : idx) a.args.push_back(pool[i]);
      atoms.push_back(std::move(a));
      std::size_t k = 0;
      while (k < arity && ++idx[k] == pool.size()) idx[k++] = 0;
      if (k == arity) break;
    }
  }

  Program rules;
  for (const auto& id : identity_program(both)) rules.insert(id);
  std::vector<Rule> ordered(rules.begin(), rules.end());
  std::vector<std::size_t> pick;
  std::function<void(std::size_t, std::size_t, const Atom&)> bodies = [&](std::size_t from, std::size_t left,
                                                                          const Atom& head) {
    std::vector<Atom> body;
    for (auto i : pick) body.push_back(atoms[i]);
    Rule rule(head, std::move(body));
    if (rules.insert(rule)) ordered.push_back(std::move(rule));
    if (left == 0) return;
    for (std::size_t i = from; i < atoms.size(); ++i) {
      pick.push_back(i);
      bodies(i + 1, left - 1, head);
      pick.pop_back();
    }
  };
  for (const auto& h : atoms) bodies(0, b.max_body, h);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Rule& x, const Rule& y) { return x.size() < y.size(); });
  return ordered;
}

// All subsets of `items` with exactly k elements, as programs.
void subsets_of_size(const std::vector<Rule>& items, std::size_t k, std::vector<Program>& out) {
  std::vector<std::size_t> idx;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    if (idx.size() == k) {
      Program prog;
      for (auto i : idx) prog.insert(items[i]);
      out.push_back(std::move(prog));
      return;
    }
    for (std::size_t i = from; i + (k - idx.size()) <= items.size(); ++i) {
      idx.push_back(i);
      go(i + 1);
      idx.pop_back();
    }
  };
  go(0);
}

}  // namespace

RepresentationResult search_representation(const Program& p, const Program& r, const SearchBudget& budget) {
  RepresentationResult res;
  ComposeOptions opts;
  opts.max_rules = 10000;
  auto check = [&](const Program& q, const Program& s) {
    ++res.checks;
    try {
      return check_representation(p, r, {q, s}, opts);
    } catch (const BudgetExceeded&) {
      return false;
    }
  };

  Program id = identity_program(unite(p, r));
  if (check(id, id)) {
    res.witness = DecompositionWitness{id, id};
    return res;
  }

  std::vector<Rule> cands = candidate_rules(p, r, budget);
  std::vector<std::vector<Program>> by_size(budget.max_rules + 1);
  for (std::size_t level = 0; level <= budget.max_rules; ++level) {
    subsets_of_size(cands, level, by_size[level]);
    // Pairs where the larger side has exactly `level` rules.
    for (std::size_t ql = 0; ql <= level; ++ql) {
      for (const auto& q : by_size[ql]) {
        Program qr;
        try {
          qr = compose(q, r, opts);
        } catch (const BudgetExceeded&) {
          continue;
        }
        std::size_t s_from = ql == level ? 0 : level;
        for (std::size_t sl = s_from; sl <= level; ++sl) {
          for (const auto& s : by_size[sl]) {
            if (res.checks >= budget.max_checks) {
              res.exhausted = true;
              return res;
            }
            ++res.checks;
            Program full;
            try {
              full = compose(qr, s, opts);
            } catch (const BudgetExceeded&) {
              continue;
            }
            if (full == p) {
              res.witness = DecompositionWitness{q, s};
              return res;
            }
          }
        }
      }
    }
  }
  return res;
}

}  // namespace horn
