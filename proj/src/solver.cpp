#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <unordered_map>
#include <set>
#include <tuple>

#include "horn/proportion.hpp"

namespace horn {

namespace {

using K = FormExpr::Kind;

std::vector<std::string> var_names(std::size_t n) {
  if (n == 1) return {"X"};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("X" + std::to_string(i));
  return out;
}

// All subsets of `pool`, smallest first.
std::vector<Program> subsets(const std::vector<Rule>& pool) {
  std::vector<Program> out;
  const std::size_t n = pool.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Program p;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) p.insert(pool[i]);
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(), [](const Program& a, const Program& b) { return a.size() < b.size(); });
  return out;
}

using Vec = std::vector<Program>;

std::vector<Vec> vectors(const std::vector<Program>& subs, std::size_t n) {
  std::vector<Vec> out{{}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Vec> next;
    for (const auto& v : out)
      for (const auto& s : subs) {
        Vec w = v;
        w.push_back(s);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

bool pointwise_subset(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!is_subset(a[i], b[i])) return false;
  return true;
}

std::string vec_key(const Vec& v) {
  std::string out;
  for (const auto& p : v) out += render_program(p) + "\x1f";
  return out;
}

struct BudgetOut {};

// Forms are searched by value: a form is represented by the programs it
// yields on every input vector (and on the non-constancy probe). Two forms
// with the same values are interchangeable everywhere in the search, so only
// the first one found, which is also the shallowest, is kept.
class Search {
 public:
  Search(const ProportionProblem& prob, const SolverBudget& b) : prob_(prob), budget_(b) {}

  SolveResult run();

 private:
  struct Class {
    FormPtr form;
    std::size_t depth;
    std::vector<int> values;  // program id per input vector, -1 on failure
  };

  struct Candidate {
    std::size_t f, g;
    Line line;
    std::size_t pv, rv;
    int S;
  };

  std::size_t intern(const Vec& v);
  std::vector<std::size_t> intern_all(const std::vector<Vec>& vs);
  int intern_program(const Program& p);
  int apply_op(K kind, int a, int b);
  bool add_class(FormPtr form, std::size_t depth, std::vector<int> values);
  void enumerate(const std::vector<Program>& atoms, SolveResult& res);
  bool nonconstant(const Class& c) const;
  bool below(std::size_t a, std::size_t b);  // vector a ⊆ vector b pointwise
  std::vector<Rule> pool(const std::vector<const Program*>& sources, const DomainSig& d);
  void collect(Line line, const std::vector<std::size_t>& pvecs, const std::vector<std::size_t>& rvecs);

  const ProportionProblem& prob_;
  SolverBudget budget_;
  std::vector<std::string> vars_;
  std::vector<Vec> vecs_;
  std::vector<std::vector<int>> vec_program_ids_;
  std::map<std::string, std::size_t> vec_ids_;
  std::vector<std::size_t> probes_;
  // Programs are interned, so each operation runs once per distinct operand pair.
  std::deque<Program> programs_;
  std::unordered_map<std::string, int> program_ids_;
  std::unordered_map<std::uint64_t, int> ops_;
  std::map<std::pair<std::size_t, std::size_t>, bool> below_;
  std::vector<Class> classes_;
  std::set<std::vector<int>> signatures_;
  std::vector<Candidate> found_;
  std::size_t evaluations_ = 0;
};

std::size_t Search::intern(const Vec& v) {
  auto [it, fresh] = vec_ids_.emplace(vec_key(v), vecs_.size());
  if (fresh) {
    vecs_.push_back(v);
    std::vector<int> ids;
    for (const auto& p : v) ids.push_back(intern_program(p));
    vec_program_ids_.push_back(std::move(ids));
  }
  return it->second;
}

std::vector<std::size_t> Search::intern_all(const std::vector<Vec>& vs) {
  std::vector<std::size_t> out;
  for (const auto& v : vs) out.push_back(intern(v));
  return out;
}

int Search::intern_program(const Program& p) {
  std::string key;
  for (const auto& k : p.keys()) key += k + "\n";
  auto [it, fresh] = program_ids_.emplace(std::move(key), static_cast<int>(programs_.size()));
  if (fresh) programs_.push_back(p);
  return it->second;
}

int Search::apply_op(K kind, int a, int b) {
  if (a < 0 || (b < 0 && (kind == K::Union || kind == K::Compose || kind == K::Concat))) return -1;
  const std::uint64_t key = (static_cast<std::uint64_t>(kind) << 56) | (static_cast<std::uint64_t>(a) << 28) |
                            static_cast<std::uint64_t>(b + 1);
  auto it = ops_.find(key);
  if (it != ops_.end()) return it->second;
  if (++evaluations_ > budget_.max_evaluations) throw BudgetOut{};
  const Program& x = programs_[static_cast<std::size_t>(a)];
  std::optional<Program> out;
  try {
    ComposeOptions co;
    co.max_rules = 2000;
    switch (kind) {
      case K::Facts: out = facts(x); break;
      case K::Proper: out = proper(x); break;
      case K::Reverse: out = reverse(x); break;
      case K::Body: out = body_facts(x); break;
      case K::Union: out = unite(x, programs_[static_cast<std::size_t>(b)]); break;
      case K::Compose: out = compose(x, programs_[static_cast<std::size_t>(b)], co); break;
      case K::Concat: out = concatenate(x, programs_[static_cast<std::size_t>(b)]); break;
      default: break;
    }
  } catch (const BudgetExceeded&) {
  }
  int id = out ? intern_program(*out) : -1;
  ops_.emplace(key, id);
  return id;
}

bool Search::add_class(FormPtr form, std::size_t depth, std::vector<int> values) {
  if (!signatures_.insert(values).second) return false;
  classes_.push_back(Class{std::move(form), depth, std::move(values)});
  return true;
}

void Search::enumerate(const std::vector<Program>& atoms, SolveResult& res) {
  const std::size_t n = vecs_.size();
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    std::vector<int> values;
    for (std::size_t v = 0; v < n; ++v) values.push_back(vec_program_ids_[v][i]);
    add_class(var(vars_[i]), 0, std::move(values));
  }
  for (const auto& a : atoms) add_class(lit(a), 0, std::vector<int>(n, intern_program(a)));

  auto full = [&] {
    if (classes_.size() < budget_.max_forms) return false;
    res.exhausted = true;
    return true;
  };
  auto unary_op = [&](K k, std::size_t i, std::size_t d) {
    std::vector<int> values(n);
    for (std::size_t v = 0; v < n; ++v) values[v] = apply_op(k, classes_[i].values[v], -1);
    if (!signatures_.count(values)) add_class(unary(k, classes_[i].form), d, std::move(values));
  };
  auto binary_op = [&](K k, std::size_t i, std::size_t j, std::size_t d) {
    std::vector<int> values(n);
    for (std::size_t v = 0; v < n; ++v) values[v] = apply_op(k, classes_[i].values[v], classes_[j].values[v]);
    if (!signatures_.count(values)) add_class(binary(k, classes_[i].form, classes_[j].form), d, std::move(values));
  };

  for (std::size_t d = 1; d <= budget_.max_form_depth; ++d) {
    const std::size_t count = classes_.size();
    for (std::size_t i = 0; i < count && !full(); ++i) {
      if (classes_[i].depth != d - 1) continue;
      for (K k : {K::Facts, K::Proper, K::Reverse, K::Body}) unary_op(k, i, d);
    }
    // Binary nodes with at least one operand from the previous level.
    for (std::size_t i = 0; i < count && !full(); ++i)
      for (std::size_t j = 0; j < count && !full(); ++j) {
        if (classes_[i].depth != d - 1 && classes_[j].depth != d - 1) continue;
        if (i < j) binary_op(K::Union, i, j, d);
        binary_op(K::Compose, i, j, d);
        binary_op(K::Concat, i, j, d);
      }
  }
}

// Same test as is_nonconstant with the default probe.
bool Search::nonconstant(const Class& c) const {
  std::set<int> seen;
  for (std::size_t vid : probes_)
    if (c.values[vid] >= 0) seen.insert(c.values[vid]);
  return seen.size() >= 2;
}

bool Search::below(std::size_t a, std::size_t b) {
  auto key = std::make_pair(a, b);
  auto it = below_.find(key);
  if (it == below_.end()) it = below_.emplace(key, pointwise_subset(vecs_[a], vecs_[b])).first;
  return it->second;
}

std::vector<Rule> Search::pool(const std::vector<const Program*>& sources, const DomainSig& d) {
  Program all;
  for (const Program* p : sources)
    for (const auto& r : *p)
      if (in_domain(Program{r}, d)) all.insert(r);
  return all.rules();
}

void Search::collect(Line line, const std::vector<std::size_t>& pvecs, const std::vector<std::size_t>& rvecs) {
  const int P = intern_program(prob_.P);
  const int Q = intern_program(line == Line::FFGG ? prob_.R : prob_.Q);
  const int target = intern_program(line == Line::FFGG ? prob_.Q : prob_.R);
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (nonconstant(classes_[i])) live.push_back(i);
  std::map<int, bool> allowed;
  for (std::size_t pv : pvecs) {
    std::vector<std::size_t> fs, gs;
    for (std::size_t i : live) {
      int out = classes_[i].values[pv];
      if (out == P) fs.push_back(i);
      if (out == Q) gs.push_back(i);
    }
    if (fs.empty() || gs.empty()) continue;
    for (std::size_t rv : rvecs)
      for (std::size_t f : fs)
        for (std::size_t g : gs) {
          int fr = classes_[f].values[rv], gr = classes_[g].values[rv];
          if (fr < 0 || gr < 0) continue;
          // The identity that pins R, and the program that becomes S.
          int pinned = line == Line::FGGF ? gr : fr;
          int answer = line == Line::FGGF ? fr : gr;
          if (pinned != target) continue;
          auto ok = allowed.find(answer);
          if (ok == allowed.end())
            ok = allowed.emplace(answer, in_domain(programs_[static_cast<std::size_t>(answer)], prob_.target)).first;
          if (ok->second) found_.push_back(Candidate{f, g, line, pv, rv, answer});
        }
  }
}

SolveResult Search::run() {
  SolveResult res;
  vars_ = var_names(budget_.vector_length);
  const DomainSig shared = intersect(prob_.source, prob_.target);

  std::vector<Program> atoms;
  for (const Program* p : {&prob_.P, &prob_.Q, &prob_.R})
    for (const auto& r : *p) {
      std::vector<Atom> all{r.head()};
      all.insert(all.end(), r.body().begin(), r.body().end());
      for (const auto& a : all) {
        Program lit{Rule(a)};
        if (in_domain(lit, shared) && std::find(atoms.begin(), atoms.end(), lit) == atoms.end())
          atoms.push_back(std::move(lit));
      }
    }
  auto limited = [&](std::vector<Rule> rules) {
    if (rules.size() > budget_.max_pool_rules) {
      rules.resize(budget_.max_pool_rules);
      res.exhausted = true;
    }
    return vectors(subsets(rules), budget_.vector_length);
  };
  const bool ffgg = in_domain(prob_.P, shared) && in_domain(prob_.Q, shared) && in_domain(prob_.R, shared);
  auto pvecs = intern_all(limited(pool({&prob_.P, &prob_.Q}, prob_.source)));
  auto rvecs = intern_all(limited(pool({&prob_.R}, prob_.target)));
  std::vector<std::size_t> svecs;
  if (ffgg) svecs = intern_all(limited(pool({&prob_.P, &prob_.Q, &prob_.R}, shared)));
  for (const auto& p : default_probe().programs) probes_.push_back(intern(Vec(vars_.size(), p)));

  try {
    enumerate(atoms, res);
    collect(Line::FGFG, pvecs, rvecs);
    collect(Line::FGGF, pvecs, rvecs);
    if (ffgg) collect(Line::FFGG, svecs, svecs);
  } catch (const BudgetOut&) {
    res.exhausted = true;
  }
  res.forms = classes_.size();

  // Keep pointwise-minimal vector pairs per (F, G, line).
  std::map<std::tuple<std::size_t, std::size_t, Line>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < found_.size(); ++i) groups[{found_[i].f, found_[i].g, found_[i].line}].push_back(i);
  std::vector<std::size_t> minimal;
  for (const auto& [key, members] : groups)
    for (std::size_t i : members) {
      const auto& a = found_[i];
      bool dominated = std::any_of(members.begin(), members.end(), [&](std::size_t j) {
        const auto& b = found_[j];
        if (b.pv == a.pv && b.rv == a.rv) return false;
        return below(b.pv, a.pv) && below(b.rv, a.rv);
      });
      if (!dominated) minimal.push_back(i);
    }

  // One witness per (S, line): the shallowest forms that verify.
  std::map<std::pair<std::string, Line>, std::vector<std::pair<std::string, std::size_t>>> by_answer;
  for (std::size_t i : minimal) {
    const auto& c = found_[i];
    std::string rank = std::to_string(classes_[c.f].depth + classes_[c.g].depth) + "\x1e" +
                       to_string(*classes_[c.f].form) + "\x1e" + to_string(*classes_[c.g].form) + "\x1e" +
                       vec_key(vecs_[c.pv]) + "\x1e" + vec_key(vecs_[c.rv]);
    by_answer[{render_program(programs_[static_cast<std::size_t>(c.S)]), c.line}].emplace_back(std::move(rank), i);
  }
  std::vector<FormParam> params;
  for (const auto& v : vars_) params.push_back(FormParam{v, std::nullopt, std::nullopt});
  for (auto& [answer, candidates] : by_answer) {
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [rank, i] : candidates) {
      const auto& c = found_[i];
      const Program& S = programs_[static_cast<std::size_t>(c.S)];
      ProportionWitness w;
      w.F = FormDef{"F", params, classes_[c.f].form};
      w.G = FormDef{"G", params, classes_[c.g].form};
      for (const auto& p : vecs_[c.pv]) w.Pvec.push_back(bind_program(p));
      for (const auto& r : vecs_[c.rv]) w.Rvec.push_back(bind_program(r));
      w.line = c.line;
      if (!check_proportion(prob_, S, w).holds) continue;
      res.solutions.push_back(Solution{S, std::move(w)});
      break;
    }
  }
  res.evaluations = evaluations_;
  return res;
}

}  // namespace

std::vector<FormPtr> enumerate_forms(const std::vector<std::string>& vars, const std::vector<Program>& atoms,
                                     std::size_t depth, std::size_t max_forms) {
  std::vector<std::vector<FormPtr>> by_depth(1);
  for (const auto& v : vars) by_depth[0].push_back(var(v));
  for (const auto& a : atoms) by_depth[0].push_back(lit(a));
  std::size_t total = by_depth[0].size();
  auto full = [&] { return total >= max_forms; };

  for (std::size_t d = 1; d <= depth && !full(); ++d) {
    std::vector<FormPtr> below;
    for (const auto& level : by_depth) below.insert(below.end(), level.begin(), level.end());
    const auto& prev = by_depth[d - 1];
    std::vector<FormPtr> level;
    auto push = [&](FormPtr f) {
      if (full()) return;
      level.push_back(std::move(f));
      ++total;
    };
    for (const auto& a : prev)
      for (K k : {K::Facts, K::Proper, K::Reverse, K::Body}) push(unary(k, a));
    // Binary nodes with at least one operand of depth d-1.
    std::vector<std::string> below_str;
    for (const auto& f : below) below_str.push_back(to_string(*f));
    const std::size_t first_prev = below.size() - prev.size();
    for (std::size_t i = 0; i < below.size(); ++i)
      for (std::size_t j = 0; j < below.size(); ++j) {
        bool deep = i >= first_prev || j >= first_prev;
        if (!deep) continue;
        if (below_str[i] < below_str[j]) push(binary(K::Union, below[i], below[j]));
        push(binary(K::Compose, below[i], below[j]));
        push(binary(K::Concat, below[i], below[j]));
      }
    by_depth.push_back(std::move(level));
  }
  std::vector<FormPtr> out;
  for (auto& level : by_depth) out.insert(out.end(), level.begin(), level.end());
  return out;
}

SolveResult solve_proportion(const ProportionProblem& prob, const SolverBudget& budget) {
  return Search(prob, budget).run();
}

}  // namespace horn
