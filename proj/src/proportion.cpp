#include "horn/proportion.hpp"

#include <algorithm>

namespace horn {

DomainSig domain_of(const Program& p, std::string name) {
  return DomainSig{std::move(name), predicates(p), functors(p)};
}

DomainSig intersect(const DomainSig& a, const DomainSig& b) {
  DomainSig out;
  out.name = a.name + "∩" + b.name;
  std::set_intersection(a.preds.begin(), a.preds.end(), b.preds.begin(), b.preds.end(),
                        std::inserter(out.preds, out.preds.end()));
  std::set_intersection(a.functors.begin(), a.functors.end(), b.functors.begin(), b.functors.end(),
                        std::inserter(out.functors, out.functors.end()));
  return out;
}

DomainSig join(const DomainSig& a, const DomainSig& b) {
  DomainSig out = a;
  out.name = a.name + "∪" + b.name;
  out.preds.insert(b.preds.begin(), b.preds.end());
  out.functors.insert(b.functors.begin(), b.functors.end());
  return out;
}

std::vector<std::string> alien_symbols(const Program& p, const DomainSig& d) {
  std::vector<std::string> out;
  for (const auto& s : predicates(p))
    if (!d.preds.count(s)) out.push_back("pred " + s);
  for (const auto& s : functors(p))
    if (!d.functors.count(s)) out.push_back("functor " + s);
  return out;
}

bool in_domain(const Program& p, const DomainSig& d) { return alien_symbols(p, d).empty(); }

std::string to_string(const DomainSig& d) {
  auto join_names = [](const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
    return out;
  };
  return d.name + ": preds " + join_names(d.preds) + "; functors " + join_names(d.functors);
}

ProportionProblem ProportionProblem::make(Program P, Program Q, Program R, DomainSig source, DomainSig target) {
  auto require = [](const Program& p, const DomainSig& d, const char* what) {
    auto alien = alien_symbols(p, d);
    if (!alien.empty()) throw ProportionError(std::string(what) + " uses " + alien.front() + " outside domain " + d.name);
  };
  require(P, source, "P");
  require(Q, source, "Q");
  require(R, target, "R");
  return ProportionProblem{std::move(P), std::move(Q), std::move(R), std::move(source), std::move(target)};
}

std::string to_string(Line l) {
  switch (l) {
    case Line::FGFG: return "FGFG";
    case Line::FGGF: return "FGGF";
    case Line::FFGG: return "FFGG";
  }
  return "?";
}

std::optional<Line> parse_line(std::string_view s) {
  if (s == "FGFG") return Line::FGFG;
  if (s == "FGGF") return Line::FGGF;
  if (s == "FFGG") return Line::FFGG;
  return std::nullopt;
}

std::string to_string(const ProportionReport& r) {
  std::string out;
  for (const auto& item : r.items) {
    out += item.passed ? "PASS " : "FAIL ";
    out += item.name;
    if (!item.detail.empty()) out += ": " + item.detail;
    out += '\n';
  }
  out += r.holds ? "proportion holds\n" : "proportion fails\n";
  return out;
}

namespace {

std::string braces(const Program& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.keys().size(); ++i) {
    std::string k = p.keys()[i];
    if (!k.empty() && k.back() == '.') k.pop_back();
    out += (i ? ", " : "") + k;
  }
  return out + "}";
}

// Symbols a form introduces on its own: its literals, rename targets and
// substituted terms, followed through the library.
void form_symbols(const FormExpr& f, const FormLibrary* lib, const std::set<std::string>& metas,
                  std::set<std::string>& seen_calls, std::vector<Program>& lits, Program& extra) {
  using K = FormExpr::Kind;
  if (f.kind == K::Literal && std::find(lits.begin(), lits.end(), f.literal) == lits.end()) lits.push_back(f.literal);
  if (f.kind == K::RenamePred)
    for (const auto& [from, to] : f.renames)
      if (!metas.count(to)) extra.insert(Rule(Atom{to, {}}));
  if (f.kind == K::Subst)
    for (const auto& [v, t] : f.subst.bindings()) extra.insert(Rule(Atom{"p", {t}}));
  if (f.kind == K::Call && lib && seen_calls.insert(f.name).second)
    if (const FormDef* def = lib->find(f.name)) form_symbols(*def->body, lib, metas, seen_calls, lits, extra);
  for (const auto& a : f.args) form_symbols(*a, lib, metas, seen_calls, lits, extra);
}

std::set<std::string> meta_names(const FormDef& d, const FormLibrary* lib) {
  std::set<std::string> out;
  auto add = [&](const FormDef& def) {
    for (const auto& p : def.params)
      if (p.pred_meta) out.insert(*p.pred_meta);
  };
  add(d);
  if (lib)
    for (const auto& [name, def] : lib->defs()) add(def);
  return out;
}

}  // namespace

ProportionReport check_proportion(const ProportionProblem& prob, const Program& S, const ProportionWitness& w,
                                  const CheckOptions& opts) {
  const std::size_t n = w.F.params.size();
  if (w.G.params.size() != n || w.Pvec.size() != n || w.Rvec.size() != n)
    throw ProportionError("arity mismatch: F takes " + std::to_string(n) + ", G takes " +
                          std::to_string(w.G.params.size()) + ", vectors have " + std::to_string(w.Pvec.size()) +
                          " and " + std::to_string(w.Rvec.size()) + " entries");

  ProportionReport rep;
  auto add = [&](std::string name, bool ok, std::string detail = "") {
    rep.items.push_back(CheckItem{std::move(name), ok, std::move(detail)});
  };
  auto membership = [&](const std::string& what, const Program& p, const DomainSig& d) {
    auto alien = alien_symbols(p, d);
    add(what + " in " + d.name, alien.empty(), alien.empty() ? "" : alien.front() + " not allowed");
  };

  const DomainSig shared = [&] {
    DomainSig s = intersect(prob.source, prob.target);
    s.name = "𝕊∩𝕋";
    return s;
  }();

  membership("P", prob.P, prob.source);
  membership("Q", prob.Q, prob.source);
  membership("R", prob.R, prob.target);
  membership("S", S, prob.target);

  const FormLibrary* lib = w.library.get();
  for (const FormDef* def : {&w.F, &w.G}) {
    std::vector<Program> lits;
    Program extra;
    std::set<std::string> seen;
    form_symbols(*def->body, lib, meta_names(*def, lib), seen, lits, extra);
    std::string bad;
    for (const auto& l : lits)
      if (!in_domain(l, shared)) {
        bad = "literal " + braces(l) + " outside 𝕊∩𝕋";
        break;
      }
    if (bad.empty() && !in_domain(extra, shared)) bad = alien_symbols(extra, shared).front() + " outside 𝕊∩𝕋";
    add("form " + def->name + " over 𝕊∩𝕋", bad.empty(), bad);
  }

  std::vector<Program> pv, rv;
  for (std::size_t i = 0; i < n; ++i) {
    std::string idx = "[" + std::to_string(i + 1) + "]";
    try {
      pv.push_back(instantiate(w.Pvec[i]));
      rv.push_back(instantiate(w.Rvec[i]));
    } catch (const FormError& e) {
      add("vector entry " + idx, false, e.what());
      return rep;
    }
    membership("Pvec" + idx, pv.back(), prob.source);
    membership("Rvec" + idx, rv.back(), prob.target);
  }

  EvalOptions eval{opts.compose, lib};
  add("F non-constant", is_nonconstant(w.F, w.probe, eval), "probe gave a single result");
  add("G non-constant", is_nonconstant(w.G, w.probe, eval), "probe gave a single result");
  if (rep.items[rep.items.size() - 2].passed) rep.items[rep.items.size() - 2].detail.clear();
  if (rep.items.back().passed) rep.items.back().detail.clear();

  auto identity = [&](const std::string& lhs, const Program& expected, const FormDef& form, const std::vector<BoundProgram>& vec,
                      const std::string& vec_name) {
    std::string name = lhs + " = " + form.name + "(" + vec_name + ")";
    try {
      Program got = apply_form(form, vec, eval);
      bool ok = opts.strict ? strictly_equal(got, expected) : got == expected;
      add(name, ok, ok ? "" : "got " + braces(got) + ", expected " + braces(expected));
    } catch (const std::exception& e) {
      add(name, false, e.what());
    }
  };

  switch (w.line) {
    case Line::FGFG:
      identity("P", prob.P, w.F, w.Pvec, "Pvec");
      identity("Q", prob.Q, w.G, w.Pvec, "Pvec");
      identity("R", prob.R, w.F, w.Rvec, "Rvec");
      identity("S", S, w.G, w.Rvec, "Rvec");
      break;
    case Line::FGGF:
      identity("P", prob.P, w.F, w.Pvec, "Pvec");
      identity("Q", prob.Q, w.G, w.Pvec, "Pvec");
      identity("R", prob.R, w.G, w.Rvec, "Rvec");
      identity("S", S, w.F, w.Rvec, "Rvec");
      break;
    case Line::FFGG:
      identity("P", prob.P, w.F, w.Pvec, "Pvec");
      identity("Q", prob.Q, w.F, w.Rvec, "Rvec");
      identity("R", prob.R, w.G, w.Pvec, "Pvec");
      identity("S", S, w.G, w.Rvec, "Rvec");
      membership("P", prob.P, shared);
      membership("Q", prob.Q, shared);
      membership("R", prob.R, shared);
      membership("S", S, shared);
      for (std::size_t i = 0; i < n; ++i) {
        std::string idx = "[" + std::to_string(i + 1) + "]";
        membership("Pvec" + idx, pv[i], shared);
        membership("Rvec" + idx, rv[i], shared);
      }
      break;
  }

  rep.holds = std::all_of(rep.items.begin(), rep.items.end(), [](const CheckItem& c) { return c.passed; });
  return rep;
}

std::vector<DerivedProportion> derived_proportions(const Proportion& p, const CheckOptions& opts) {
  const auto& pr = p.problem;
  struct Perm {
    std::string label;
    Program P, Q, R, S;
    DomainSig source, target;
  };
  DomainSig both = join(pr.source, pr.target);
  std::vector<Perm> perms = {
      {"Q:P::S:R", pr.Q, pr.P, p.S, pr.R, pr.source, pr.target},
      {"R:S::P:Q", pr.R, p.S, pr.P, pr.Q, pr.target, pr.source},
      {"P:R::Q:S", pr.P, pr.R, pr.Q, p.S, both, both},
  };

  std::vector<DerivedProportion> out;
  for (const auto& perm : perms) {
    ProportionProblem prob{perm.P, perm.Q, perm.R, perm.source, perm.target};
    std::optional<DerivedProportion> first;
    bool found = false;
    for (bool swap_forms : {false, true}) {
      for (bool swap_vecs : {false, true}) {
        for (Line line : {Line::FGFG, Line::FGGF, Line::FFGG}) {
          ProportionWitness w = p.witness;
          if (swap_forms) std::swap(w.F, w.G);
          if (swap_vecs) std::swap(w.Pvec, w.Rvec);
          w.line = line;
          ProportionReport rep = check_proportion(prob, perm.S, w, opts);
          DerivedProportion d{perm.label, Proportion{prob, perm.S, std::move(w)}, std::move(rep)};
          if (d.report.holds) {
            out.push_back(std::move(d));
            found = true;
            break;
          }
          if (!first) first = std::move(d);
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) out.push_back(std::move(*first));
  }
  return out;
}

}  // namespace horn
