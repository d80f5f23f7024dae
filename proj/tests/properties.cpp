#include "properties.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "horn/algebra.hpp"
#include "horn/corpus.hpp"
#include "horn/proportion.hpp"
#include "horn/semantics.hpp"
#include "horn/sld.hpp"
#include "support.hpp"

namespace horn::test {

namespace {

// --- one-sided matching for subsumption -----------------------------------

using Bindings = std::map<std::string, Term>;

bool match_term(const Term& g, const Term& i, Bindings& b) {
  if (g.is_var()) {
    auto [it, fresh] = b.emplace(g.name, i);
    return fresh || it->second == i;
  }
  if (i.is_var() || g.name != i.name || g.args.size() != i.args.size()) return false;
  for (std::size_t k = 0; k < g.args.size(); ++k)
    if (!match_term(g.args[k], i.args[k], b)) return false;
  return true;
}

bool match_atom(const Atom& g, const Atom& i, Bindings& b) {
  if (g.pred != i.pred || g.args.size() != i.args.size()) return false;
  for (std::size_t k = 0; k < g.args.size(); ++k)
    if (!match_term(g.args[k], i.args[k], b)) return false;
  return true;
}

bool match_body(const std::vector<Atom>& g, std::size_t k, const std::vector<Atom>& i, const Bindings& b) {
  if (k == g.size()) return true;
  for (const auto& target : i) {
    Bindings next = b;
    if (match_atom(g[k], target, next) && match_body(g, k + 1, i, next)) return true;
  }
  return false;
}

// general·θ has the head of `instance` and a body inside it.
bool subsumes(const Rule& general, const Rule& instance) {
  Bindings b;
  return match_atom(general.head(), instance.head(), b) && match_body(general.body(), 0, instance.body(), b);
}

bool covered(const Program& p, const Program& by) {
  return std::all_of(p.begin(), p.end(), [&](const Rule& r) {
    return std::any_of(by.begin(), by.end(), [&](const Rule& s) { return subsumes(s, r); });
  });
}

std::string show(const Program& p) { return "{" + render_program(p) + "}"; }

Generator small_generator(unsigned seed) {
  Generator g(seed);
  g.max_rules = 3;
  g.max_body = 2;
  g.max_depth = 1;
  return g;
}

}  // namespace

PropertyStats compose_associativity(std::size_t n, unsigned seed, bool strict) {
  PropertyStats st;
  ComposeOptions opts{4000};
  for (unsigned s = seed; st.cases < n && st.skipped < 20 * n; ++s) {
    Generator g = small_generator(s);
    Program p = g.program(), q = g.program(), r = g.program();
    Program left, right;
    try {
      left = compose(compose(p, q, opts), r, opts);
      right = compose(p, compose(q, r, opts), opts);
    } catch (const BudgetExceeded&) {
      ++st.skipped;
      continue;
    }
    ++st.cases;
    bool same = strict ? left == right : covered(left, right) && covered(right, left);
    if (!same) st.fail("P=" + show(p) + " Q=" + show(q) + " R=" + show(r) + ": " + show(left) + " vs " + show(right));
  }
  return st;
}

PropertyStats concat_associativity(std::size_t n, unsigned seed) {
  PropertyStats st;
  for (unsigned s = seed; st.cases < n; ++s) {
    Generator g = small_generator(s);
    // A single predicate keeps most rule pairs concatenable.
    g.preds = {{"p", 1}, {"p", 2}};
    g.max_body = 1;
    Program p = g.program(), q = g.program(), r = g.program();
    Program left = concatenate(concatenate(p, q), r);
    Program right = concatenate(p, concatenate(q, r));
    ++st.cases;
    if (!strictly_equal(left, right)) st.fail("P=" + show(p) + " Q=" + show(q) + " R=" + show(r));
  }
  return st;
}

PropertyStats tp_matches_compose(std::size_t n, unsigned seed) {
  PropertyStats st;
  GroundingBound b;
  b.max_term_depth = 3;
  for (unsigned s = seed; st.cases < n; ++s) {
    Generator g = small_generator(s);
    g.ground_only = true;
    Program p = g.program();
    Interpretation i;
    for (std::size_t k = 0, m = g.below(5); k < m; ++k) i.insert(g.atom());
    ++st.cases;
    Program via_tp = to_program(tp_step(p, i, b));
    Program via_compose = compose(ground(p, b), to_program(i));
    if (!(via_tp == via_compose))
      st.fail("P=" + show(p) + " I=" + show(to_program(i)) + ": " + show(via_tp) + " vs " + show(via_compose));
  }
  return st;
}

// Both sides run two levels deeper than the atoms compared, so that
// intermediate instances are not cut off by the bound on either side.
PropertyStats least_model_matches_omega(std::size_t n, unsigned seed) {
  PropertyStats st;
  const std::size_t shown = 1;
  GroundingBound b;
  b.max_term_depth = shown + 2;
  auto shallow = [&](const Program& p) {
    Program out;
    for (const auto& r : p)
      if (depth(r.head()) <= shown) out.insert(r);
    return out;
  };
  for (unsigned s = seed; st.cases < n && st.skipped < 20 * n; ++s) {
    Generator g = small_generator(s);
    g.ground_only = s % 2 == 0;
    Program p = g.program();
    IterationResult w;
    try {
      w = omega(ground(p, b), 16, ComposeOptions{20000});
    } catch (const std::exception&) {
      ++st.skipped;
      continue;
    }
    if (!w.converged) {
      ++st.skipped;
      continue;
    }
    ++st.cases;
    Model m = least_model(p, b);
    Program lm = shallow(to_program(m.ground_atoms(herbrand_universe(p, b), b.max_atoms)));
    Program lfp = shallow(to_program(least_fixpoint(p, b)));
    Program om = shallow(w.program);
    if (!(lm == om) || !(lfp == om))
      st.fail("P=" + show(p) + ": lm " + show(lm) + ", lfp " + show(lfp) + ", omega " + show(om));
  }
  return st;
}

PropertyStats sld_matches_least_model(std::size_t atoms_per_program, unsigned seed) {
  PropertyStats st;
  std::mt19937 rng(seed);
  GroundingBound small, model_bound;
  small.max_term_depth = 2;
  small.extra_constants = {"a"};
  model_bound.max_term_depth = 3;
  model_bound.extra_constants = {"a"};
  for (const auto& entry : list_corpus(default_corpus_dir())) {
    if (entry.kind != "program") continue;
    Program p = read_program_file(entry.path);
    Model m = least_model(p, model_bound);
    std::vector<Term> u = herbrand_universe(p, small);
    std::vector<Atom> atoms;
    for (const auto& [pred, arity] : predicate_arities(p)) {
      std::size_t total = 1;
      for (std::size_t k = 0; k < arity; ++k) total *= u.size();
      for (std::size_t c = 0; c < std::min(total, atoms_per_program); ++c) {
        Atom a{pred, {}};
        std::size_t code = total <= atoms_per_program ? c : std::uniform_int_distribution<std::size_t>(0, total - 1)(rng);
        for (std::size_t k = 0; k < arity; ++k, code /= u.size()) a.args.push_back(u[code % u.size()]);
        atoms.push_back(std::move(a));
      }
    }
    for (const auto& a : atoms) {
      ++st.cases;
      bool model = m.entails(a);
      bool sld = proves(p, a, 24);
      if (model != sld)
        st.fail(entry.name + ": " + to_string(a) + " model=" + std::to_string(model) + " sld=" + std::to_string(sld));
    }
  }
  return st;
}

// --- propositional proportion instances -----------------------------------

namespace {

const std::vector<std::string> kAtoms{"a", "b", "c"};

struct Instance {
  Program P, Q, R;
  DomainSig source, target;
};

DomainSig random_domain(std::mt19937& rng, const std::string& name) {
  DomainSig d{name, {}, {}};
  while (d.preds.empty())
    for (const auto& a : kAtoms)
      if (rng() % 2) d.preds.insert(a);
  return d;
}

Program random_over(std::mt19937& rng, const DomainSig& d) {
  std::vector<std::string> atoms(d.preds.begin(), d.preds.end());
  return random_propositional(rng, atoms, 2, 2);
}

Instance random_instance(std::mt19937& rng) {
  Instance in;
  in.source = random_domain(rng, "s");
  in.target = random_domain(rng, "t");
  in.P = random_over(rng, in.source);
  in.Q = random_over(rng, in.source);
  in.R = random_over(rng, in.target);
  return in;
}

std::string describe(const Instance& in) {
  return "P=" + show(in.P) + " Q=" + show(in.Q) + " R=" + show(in.R) + " source=" + to_string(in.source) +
         " target=" + to_string(in.target);
}

}  // namespace

PropertyStats solver_sound_and_complete(std::size_t n, unsigned seed) {
  PropertyStats st;
  std::mt19937 rng(seed);
  auto forms = enumerate_forms({"X"}, {}, 2, 100000);
  std::vector<FormParam> params{{"X", std::nullopt, std::nullopt}};
  DomainSig all{"abc", {"a", "b", "c"}, {}};
  std::size_t planted = 0;
  while (st.cases < n && st.skipped < 50 * n) {
    // Plant a witness: P = F(Pv), Q = G(Pv), R = F(Rv), S = G(Rv).
    ProportionWitness w;
    w.F = FormDef{"F", params, forms[rng() % forms.size()]};
    w.G = FormDef{"G", params, forms[rng() % forms.size()]};
    Program pv = random_over(rng, all), rv = random_over(rng, all);
    w.Pvec = {bind_program(pv)};
    w.Rvec = {bind_program(rv)};
    Program P, Q, R, S;
    try {
      P = apply_form(w.F, w.Pvec);
      Q = apply_form(w.G, w.Pvec);
      R = apply_form(w.F, w.Rvec);
      S = apply_form(w.G, w.Rvec);
    } catch (const std::exception&) {
      ++st.skipped;
      continue;
    }
    auto prob = ProportionProblem::make(P, Q, R, all, all);
    bool verified = check_proportion(prob, S, w).holds;
    // Small pools keep the exhaustive search cheap.
    bool reachable = is_subset(pv, unite(P, Q)) && is_subset(rv, R) && unite(P, Q).size() <= 4 && R.size() <= 3 &&
                     !unite(P, Q).empty() && !R.empty();
    if (!verified || !reachable) {
      ++st.skipped;
      continue;
    }
    ++st.cases;
    ++planted;
    SolveResult res = solve_proportion(prob);
    std::string where = describe({P, Q, R, all, all}) + " F=" + to_string(*w.F.body) + " G=" + to_string(*w.G.body);
    if (res.exhausted) st.fail("solver exhausted: " + where);
    if (res.solutions.empty()) st.fail("no solution for a verified planted witness: " + where);
    for (const auto& sol : res.solutions) {
      if (!check_proportion(prob, sol.S, sol.witness).holds) st.fail("unverified solution: " + where);
      Program a = prog("a.");
      Program wrong = is_subset(a, sol.S) ? Program{} : unite(sol.S, a);
      if (is_subset(a, sol.S))
        for (const auto& r : sol.S)
          if (!(Program{r} == a)) wrong.insert(r);
      if (check_proportion(prob, wrong, sol.witness).holds) st.fail("verifier accepts a wrong S: " + where);
    }
  }
  return st;
}

// --- exhaustive oracle ------------------------------------------------------
//
// Propositional programs over {a,b,c} are bitmasks of 24 possible rules
// (head × body subset). Forms are identified with their value tuples on every
// input vector the solver may use, plus the non-constancy probe; the closure
// of those tuples under the grammar operations enumerates all forms of bounded
// depth semantically.

namespace oracle {

using Mask = std::uint32_t;

constexpr Mask bit(unsigned head, unsigned body) { return Mask{1} << (head * 8 + body); }

Mask encode(const Program& p) {
  Mask m = 0;
  for (const auto& r : p) {
    unsigned body = 0;
    for (const auto& a : r.body()) body |= 1u << (a.pred[0] - 'a');
    m |= bit(static_cast<unsigned>(r.head().pred[0] - 'a'), body);
  }
  return m;
}

Program decode(Mask m) {
  Program p;
  for (unsigned h = 0; h < 3; ++h)
    for (unsigned b = 0; b < 8; ++b)
      if (m & bit(h, b)) {
        std::vector<Atom> body;
        for (unsigned k = 0; k < 3; ++k)
          if (b & (1u << k)) body.push_back(Atom{kAtoms[k], {}});
        p.insert(Rule(Atom{kAtoms[h], {}}, body));
      }
  return p;
}

template <class F>
void each_rule(Mask m, F f) {
  for (unsigned h = 0; h < 3; ++h)
    for (unsigned b = 0; b < 8; ++b)
      if (m & bit(h, b)) f(h, b);
}

Mask facts(Mask m) { return m & (bit(0, 0) | bit(1, 0) | bit(2, 0)); }
Mask proper(Mask m) { return m & ~facts(m); }

Mask reverse(Mask m) {
  Mask out = facts(m);
  each_rule(proper(m), [&](unsigned h, unsigned b) {
    for (unsigned k = 0; k < 3; ++k)
      if (b & (1u << k)) out |= bit(k, 1u << h);
  });
  return out;
}

Mask body(Mask m) {
  Mask out = 0;
  each_rule(m, [&](unsigned, unsigned b) {
    for (unsigned k = 0; k < 3; ++k)
      if (b & (1u << k)) out |= bit(k, 0);
  });
  return out;
}

// Each body atom picks one rule of r with that head; the new body is the
// union of the picked bodies.
Mask compose(Mask p, Mask r) {
  Mask out = 0;
  each_rule(p, [&](unsigned h, unsigned b) {
    std::set<unsigned> bodies{0};
    for (unsigned k = 0; k < 3; ++k) {
      if (!(b & (1u << k))) continue;
      std::set<unsigned> next;
      for (unsigned c = 0; c < 8; ++c)
        if (r & bit(k, c))
          for (unsigned acc : bodies) next.insert(acc | c);
      bodies = std::move(next);
    }
    for (unsigned acc : bodies) out |= bit(h, acc);
  });
  return out;
}

// Same-signature rules concatenate to themselves.
Mask concat(Mask p, Mask r) { return p & r; }

enum class Op { Facts, Proper, Reverse, Body, Union, Compose, Concat };

// Library evaluation on the (first-order) probe programs, memoized by id.
class ProbeTable {
 public:
  int intern(const std::optional<Program>& p) {
    if (!p) return -1;
    auto [it, fresh] = ids_.emplace(p->keys(), static_cast<int>(programs_.size()));
    if (fresh) programs_.push_back(*p);
    return it->second;
  }

  int apply(Op op, int a, int b) {
    if (a < 0 || (b < 0 && op >= Op::Union)) return -1;
    auto key = std::make_tuple(op, a, b);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const Program& x = programs_[a];
    std::optional<Program> out;
    try {
      switch (op) {
        case Op::Facts: out = horn::facts(x); break;
        case Op::Proper: out = horn::proper(x); break;
        case Op::Reverse: out = horn::reverse(x); break;
        case Op::Body: out = body_facts(x); break;
        case Op::Union: out = unite(x, programs_[b]); break;
        case Op::Compose: out = horn::compose(x, programs_[b], ComposeOptions{2000}); break;
        case Op::Concat: out = concatenate(x, programs_[b]); break;
      }
    } catch (const BudgetExceeded&) {
    }
    int id = intern(out);
    memo_.emplace(key, id);
    return id;
  }

 private:
  std::vector<Program> programs_;
  std::map<std::vector<std::string>, int> ids_;
  std::map<std::tuple<Op, int, int>, int> memo_;
};

struct Value {
  std::vector<Mask> vals;  // one per input program
  std::vector<int> probe;  // one per probe program

  std::vector<std::int64_t> key() const {
    std::vector<std::int64_t> k(vals.begin(), vals.end());
    k.insert(k.end(), probe.begin(), probe.end());
    return k;
  }

  bool nonconstant() const {
    std::set<int> seen;
    for (int id : probe)
      if (id >= 0) seen.insert(id);
    return seen.size() >= 2;
  }
};

Mask apply(Op op, Mask a, Mask b) {
  switch (op) {
    case Op::Facts: return facts(a);
    case Op::Proper: return proper(a);
    case Op::Reverse: return reverse(a);
    case Op::Body: return body(a);
    case Op::Union: return a | b;
    case Op::Compose: return compose(a, b);
    case Op::Concat: return concat(a, b);
  }
  return 0;
}

Value combine(Op op, const Value& x, const Value* y, ProbeTable& table) {
  Value v;
  for (std::size_t i = 0; i < x.vals.size(); ++i) v.vals.push_back(apply(op, x.vals[i], y ? y->vals[i] : 0));
  for (std::size_t i = 0; i < x.probe.size(); ++i) v.probe.push_back(table.apply(op, x.probe[i], y ? y->probe[i] : -1));
  return v;
}

std::vector<Value> closure(const std::vector<Mask>& inputs, const std::vector<Mask>& atoms, std::size_t depth,
                           ProbeTable& table) {
  std::vector<int> probe_ids;
  for (const auto& p : default_probe().programs) probe_ids.push_back(table.intern(p));

  std::vector<Value> all;
  std::set<std::vector<std::int64_t>> seen;
  auto add = [&](Value v) {
    if (seen.insert(v.key()).second) all.push_back(std::move(v));
  };
  add(Value{inputs, probe_ids});
  for (Mask a : atoms) {
    Program lit = decode(a);
    add(Value{std::vector<Mask>(inputs.size(), a), std::vector<int>(probe_ids.size(), table.intern(lit))});
  }
  for (std::size_t d = 1; d <= depth; ++d) {
    const std::vector<Value> below = all;
    for (const auto& x : below)
      for (Op op : {Op::Facts, Op::Proper, Op::Reverse, Op::Body}) add(combine(op, x, nullptr, table));
    for (const auto& x : below)
      for (const auto& y : below)
        for (Op op : {Op::Union, Op::Compose, Op::Concat}) add(combine(op, x, &y, table));
  }
  return all;
}

bool within(Mask m, const DomainSig& d) {
  bool ok = true;
  each_rule(m, [&](unsigned h, unsigned b) {
    if (!d.preds.count(kAtoms[h])) ok = false;
    for (unsigned k = 0; k < 3; ++k)
      if ((b & (1u << k)) && !d.preds.count(kAtoms[k])) ok = false;
  });
  return ok;
}

std::vector<Mask> subsets_of(Mask pool) {
  std::vector<unsigned> bits;
  for (unsigned i = 0; i < 24; ++i)
    if (pool & (Mask{1} << i)) bits.push_back(i);
  std::vector<Mask> out;
  for (std::size_t s = 0; s < (std::size_t{1} << bits.size()); ++s) {
    Mask m = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (s & (std::size_t{1} << i)) m |= Mask{1} << bits[i];
    out.push_back(m);
  }
  return out;
}

Mask pool_of(std::initializer_list<Mask> progs, const DomainSig& d) {
  Mask out = 0;
  for (Mask p : progs) each_rule(p, [&](unsigned h, unsigned b) {
      if (within(bit(h, b), d)) out |= bit(h, b);
    });
  return out;
}

using Answer = std::pair<Line, Mask>;

std::set<Answer> solve(const Instance& in, std::size_t depth) {
  const DomainSig shared = intersect(in.source, in.target);
  const Mask P = encode(in.P), Q = encode(in.Q), R = encode(in.R);
  const std::vector<Mask> pvs = subsets_of(pool_of({P, Q}, in.source));
  const std::vector<Mask> rvs = subsets_of(pool_of({R}, in.target));
  const bool ffgg = within(P, shared) && within(Q, shared) && within(R, shared);
  const std::vector<Mask> svs = ffgg ? subsets_of(pool_of({P, Q, R}, shared)) : std::vector<Mask>{};

  std::vector<Mask> inputs;
  std::map<Mask, std::size_t> index;
  for (const auto* list : {&pvs, &rvs, &svs})
    for (Mask m : *list)
      if (index.emplace(m, inputs.size()).second) inputs.push_back(m);

  std::vector<Mask> atoms;
  Mask used = body(P | Q | R);
  each_rule(P | Q | R, [&](unsigned h, unsigned) { used |= bit(h, 0); });
  for (unsigned k = 0; k < 3; ++k)
    if ((used & bit(k, 0)) && shared.preds.count(kAtoms[k])) atoms.push_back(bit(k, 0));

  ProbeTable table;
  std::vector<Value> forms = closure(inputs, atoms, depth, table);

  std::set<Answer> answers;
  auto run = [&](Line line, const std::vector<Mask>& left, const std::vector<Mask>& right, Mask f_left, Mask g_left,
                 Mask pinned_target) {
    // Valid (pv, rv) pairs per (F, G), then the pointwise-minimal ones.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<Mask, Mask>>> valid;
    for (Mask pv : left) {
      std::size_t pi = index.at(pv);
      for (std::size_t f = 0; f < forms.size(); ++f) {
        if (forms[f].vals[pi] != f_left) continue;
        for (std::size_t g = 0; g < forms.size(); ++g) {
          if (forms[g].vals[pi] != g_left) continue;
          for (Mask rv : right) {
            std::size_t ri = index.at(rv);
            Mask fr = forms[f].vals[ri], gr = forms[g].vals[ri];
            Mask pinned = line == Line::FGGF ? gr : fr;
            Mask answer = line == Line::FGGF ? fr : gr;
            if (pinned != pinned_target || !within(answer, in.target)) continue;
            valid[{f, g}].emplace_back(pv, rv);
          }
        }
      }
    }
    for (const auto& [fg, pairs] : valid) {
      if (!forms[fg.first].nonconstant() || !forms[fg.second].nonconstant()) continue;
      for (const auto& [pv, rv] : pairs) {
        bool minimal = std::none_of(pairs.begin(), pairs.end(), [&](const std::pair<Mask, Mask>& o) {
          bool below = (o.first & ~pv) == 0 && (o.second & ~rv) == 0;
          return below && (o.first != pv || o.second != rv);
        });
        if (!minimal) continue;
        std::size_t ri = index.at(rv);
        Mask answer = line == Line::FGGF ? forms[fg.first].vals[ri] : forms[fg.second].vals[ri];
        answers.emplace(line, answer);
      }
    }
  };
  run(Line::FGFG, pvs, rvs, P, Q, R);
  run(Line::FGGF, pvs, rvs, P, Q, R);
  if (ffgg) run(Line::FFGG, svs, svs, P, R, Q);
  return answers;
}

}  // namespace oracle

PropertyStats solver_matches_oracle(std::size_t n, unsigned seed) {
  PropertyStats st;
  std::mt19937 rng(seed);
  while (st.cases < n) {
    Instance in = random_instance(rng);
    ++st.cases;
    auto prob = ProportionProblem::make(in.P, in.Q, in.R, in.source, in.target);
    SolveResult res = solve_proportion(prob);
    if (res.exhausted) {
      st.fail("solver exhausted: " + describe(in));
      continue;
    }
    std::set<oracle::Answer> got;
    for (const auto& s : res.solutions) got.emplace(s.witness.line, oracle::encode(s.S));
    std::set<oracle::Answer> want = oracle::solve(in, 2);
    if (got != want) {
      std::ostringstream msg;
      msg << describe(in) << "; solver:";
      for (const auto& [l, m] : got) msg << " " << to_string(l) << show(oracle::decode(m));
      msg << "; oracle:";
      for (const auto& [l, m] : want) msg << " " << to_string(l) << show(oracle::decode(m));
      st.fail(msg.str());
    }
  }
  return st;
}

}  // namespace horn::test
