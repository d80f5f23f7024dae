#include "horn/sld.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace horn {

std::string to_string(const Query& q) {
  if (q.goals.empty()) return "[]";
  std::string out;
  for (std::size_t i = 0; i < q.goals.size(); ++i) {
    if (i) out += ", ";
    out += to_string(q.goals[i]);
  }
  return out;
}

void LabeledProgram::add(const Program& p, const std::string& label) {
  for (const auto& r : p) {
    if (program_.contains(r)) continue;
    program_.insert(r);
    auto pos = std::find(program_.rules().begin(), program_.rules().end(), r) - program_.rules().begin();
    labels_.insert(labels_.begin() + pos, label);
  }
}

std::optional<Query> resolve_step(const Query& q, std::size_t selected, const Rule& r, FreshNames& fresh,
                                  Substitution* unifier, Rule* renamed) {
  if (selected >= q.goals.size()) return std::nullopt;
  Rule copy = rename_apart(r, fresh);
  auto theta = mgu_atoms(q.goals[selected], copy.head());
  if (!theta) return std::nullopt;
  Query out;
  for (std::size_t i = 0; i < selected; ++i) out.goals.push_back(apply(*theta, q.goals[i]));
  for (const auto& b : copy.body()) out.goals.push_back(apply(*theta, b));
  for (std::size_t i = selected + 1; i < q.goals.size(); ++i) out.goals.push_back(apply(*theta, q.goals[i]));
  if (unifier) *unifier = *theta;
  if (renamed) *renamed = std::move(copy);
  return out;
}

std::optional<Query> resolve_step(const Query& q, std::size_t selected, const Rule& r) {
  std::set<std::string> avoid;
  for (const auto& g : q.goals) {
    std::vector<std::string> vs;
    collect_vars(g, vs);
    avoid.insert(vs.begin(), vs.end());
  }
  FreshNames fresh(std::move(avoid));
  return resolve_step(q, selected, r, fresh);
}

std::optional<Refutation> prove_with_trace(const LabeledProgram& lp, const Query& q, std::size_t max_depth) {
  const Program& p = lp.program();
  std::vector<std::string> query_vars;
  for (const auto& g : q.goals) collect_vars(g, query_vars);
  std::set<std::string> avoid(query_vars.begin(), query_vars.end());
  for (const auto& v : variables(p)) avoid.insert(v);

  for (std::size_t limit = 0; limit <= max_depth; ++limit) {
    FreshNames fresh(avoid);
    std::vector<DerivationStep> steps;
    std::function<bool(const Query&)> search = [&](const Query& cur) -> bool {
      if (cur.empty()) return true;
      if (steps.size() == limit) return false;
      const auto& rules = p.rules();
      for (std::size_t i = 0; i < rules.size(); ++i) {
        if (rules[i].head().pred != cur.goals[0].pred) continue;
        Substitution theta;
        Rule renamed;
        auto next = resolve_step(cur, 0, rules[i], fresh, &theta, &renamed);
        if (!next) continue;
        steps.push_back(DerivationStep{cur, 0, renamed, theta, lp.label_of(i), *next});
        if (search(*next)) return true;
        steps.pop_back();
      }
      return false;
    };
    if (search(q)) {
      Refutation ref;
      Substitution acc;
      for (const auto& s : steps) acc = compose(acc, s.unifier);
      ref.answer = restrict(acc, query_vars);
      ref.steps = std::move(steps);
      return ref;
    }
  }
  return std::nullopt;
}

bool proves(const Program& p, const Atom& a, std::size_t max_depth) {
  return prove_with_trace(LabeledProgram(p), Query{{a}}, max_depth).has_value();
}

std::string render_trace(const Query& q, const Refutation& r) {
  std::string out = "<- [?] " + to_string(q) + "\n";
  for (const auto& s : r.steps) out += "<- [" + s.source_label + "] " + to_string(s.resolvent) + "\n";
  return out;
}

RuleCheck proves_rule(const Program& p, const Rule& r, std::size_t max_depth, const GroundingBound& b) {
  RuleCheck res;
  Program ctx = p;
  ctx.insert(r);
  std::vector<Term> universe = herbrand_universe(ctx, b);
  std::map<Atom, bool> memo;
  auto provable = [&](const Atom& a) {
    auto it = memo.find(a);
    if (it != memo.end()) return it->second;
    bool ok = proves(p, a, max_depth);
    memo.emplace(a, ok);
    return ok;
  };

  std::vector<std::string> vars = variables(r);
  std::vector<std::size_t> idx(vars.size(), 0);
  if (!vars.empty() && universe.empty()) return res;
  while (true) {
    Substitution s;
    for (std::size_t k = 0; k < vars.size(); ++k) s.bind(vars[k], universe[idx[k]]);
    Rule inst = apply(s, r);
    bool in_bound = depth(inst.head()) <= b.max_term_depth &&
                    std::all_of(inst.body().begin(), inst.body().end(),
                                [&](const Atom& a) { return depth(a) <= b.max_term_depth; });
    if (in_bound) {
      ++res.instances;
      bool body_ok = std::all_of(inst.body().begin(), inst.body().end(), provable);
      if (body_ok && !provable(inst.head())) {
        res.holds = false;
        res.counterinstance = inst;
        return res;
      }
    }
    std::size_t k = 0;
    while (k < vars.size() && ++idx[k] == universe.size()) idx[k++] = 0;
    if (k == vars.size()) break;
  }
  return res;
}

}  // namespace horn
