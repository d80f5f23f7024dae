#include "horn/forms.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "horn/parser.hpp"
#include "horn/semantics.hpp"

namespace horn {

namespace {

std::shared_ptr<FormExpr> node(FormExpr::Kind k) {
  auto f = std::make_shared<FormExpr>();
  f->kind = k;
  return f;
}

}  // namespace

FormPtr lit(Program p) {
  auto f = node(FormExpr::Kind::Literal);
  f->literal = std::move(p);
  return f;
}

FormPtr var(std::string name) {
  auto f = node(FormExpr::Kind::Var);
  f->name = std::move(name);
  return f;
}

FormPtr call(std::string form, std::vector<FormPtr> args) {
  auto f = node(FormExpr::Kind::Call);
  f->name = std::move(form);
  f->args = std::move(args);
  return f;
}

FormPtr unary(FormExpr::Kind kind, FormPtr arg) {
  auto f = node(kind);
  f->args = {std::move(arg)};
  return f;
}

FormPtr binary(FormExpr::Kind kind, FormPtr a, FormPtr b) {
  auto f = node(kind);
  f->args = {std::move(a), std::move(b)};
  return f;
}

FormPtr power_of(FormPtr arg, std::size_t n) {
  auto f = node(FormExpr::Kind::Power);
  f->args = {std::move(arg)};
  f->n = n;
  return f;
}

FormPtr rename_preds(FormPtr arg, std::vector<std::pair<std::string, std::string>> renames) {
  auto f = node(FormExpr::Kind::RenamePred);
  f->args = {std::move(arg)};
  f->renames = std::move(renames);
  return f;
}

FormPtr fresh_vars(FormPtr arg, std::string tuple) {
  auto f = node(FormExpr::Kind::FreshVars);
  f->args = {std::move(arg)};
  f->name = std::move(tuple);
  return f;
}

FormPtr substitute(FormPtr arg, Substitution s) {
  auto f = node(FormExpr::Kind::Subst);
  f->args = {std::move(arg)};
  f->subst = std::move(s);
  return f;
}

FormPtr ground_at(FormPtr arg, std::size_t depth) {
  auto f = node(FormExpr::Kind::Ground);
  f->args = {std::move(arg)};
  f->n = depth;
  return f;
}

std::string to_string(const FormExpr& f) {
  using K = FormExpr::Kind;
  auto arg = [&](std::size_t i) { return to_string(*f.args[i]); };
  switch (f.kind) {
    case K::Literal: {
      if (f.literal.empty()) return "empty";
      std::string out = "{";
      for (std::size_t i = 0; i < f.literal.size(); ++i) {
        if (i) out += ' ';
        out += to_string(f.literal.rules()[i]);
      }
      return out + "}";
    }
    case K::Var: return f.name;
    case K::Call: {
      std::string out = f.name + "(";
      for (std::size_t i = 0; i < f.args.size(); ++i) out += (i ? ", " : "") + arg(i);
      return out + ")";
    }
    case K::Union: return "(" + arg(0) + " | " + arg(1) + ")";
    case K::Compose: return "(" + arg(0) + " o " + arg(1) + ")";
    case K::Concat: return "(" + arg(0) + " . " + arg(1) + ")";
    case K::Power: return arg(0) + "^" + std::to_string(f.n);
    case K::Facts: return "facts(" + arg(0) + ")";
    case K::Proper: return "proper(" + arg(0) + ")";
    case K::Reverse: return "rev(" + arg(0) + ")";
    case K::Body: return "body(" + arg(0) + ")";
    case K::Identity: return "id(" + arg(0) + ")";
    case K::RenamePred: {
      std::string out = arg(0) + "[";
      for (std::size_t i = 0; i < f.renames.size(); ++i)
        out += (i ? ", " : "") + f.renames[i].first + "/" + f.renames[i].second;
      return out + "]";
    }
    case K::FreshVars: return arg(0) + "[" + f.name + "/fresh]";
    case K::Subst: {
      std::string out = "subst(" + arg(0);
      for (const auto& [v, t] : f.subst.bindings()) out += ", " + v + " = " + to_string(t);
      return out + ")";
    }
    case K::Ground: return "gnd(" + arg(0) + ", " + std::to_string(f.n) + ")";
  }
  return "?";
}

std::size_t form_depth(const FormExpr& f) {
  std::size_t d = 0;
  for (const auto& a : f.args) d = std::max(d, form_depth(*a) + 1);
  if (f.kind == FormExpr::Kind::Call && f.args.empty()) d = 1;
  return d;
}

std::string to_string(const FormDef& d) {
  std::string out = "form " + d.name + "(";
  for (std::size_t i = 0; i < d.params.size(); ++i) {
    const auto& p = d.params[i];
    if (i) out += ", ";
    out += p.var;
    if (p.pred_meta) out += "[" + *p.pred_meta + "]";
    if (p.tuple_meta) out += "(" + *p.tuple_meta + ")";
  }
  return out + ") = " + to_string(*d.body) + ";";
}

// ---------------------------------------------------------------------------

std::string default_main_pred(const Program& p) {
  if (p.empty()) return "p";
  return p.rules().front().head().pred;
}

BoundProgram bind_program(Program p, std::string main_pred, std::vector<std::string> params, std::vector<Term> args) {
  if (main_pred.empty()) main_pred = default_main_pred(p);
  return BoundProgram{std::move(p), std::move(main_pred), std::move(params), std::move(args)};
}

Program instantiate(const BoundProgram& b) {
  if (b.args.empty()) return b.program;
  if (b.args.size() != b.params.size())
    throw FormError("call-site tuple has " + std::to_string(b.args.size()) + " terms but the program declares " +
                    std::to_string(b.params.size()) + " variables");
  Substitution s;
  for (std::size_t i = 0; i < b.params.size(); ++i) s.bind(b.params[i], b.args[i]);
  return apply(s, b.program);
}

std::vector<std::string> tuple_variables(const BoundProgram& b) {
  if (b.args.empty()) return b.params;
  std::vector<std::string> out;
  for (const auto& t : b.args) collect_vars(t, out);
  return out;
}

void FormLibrary::add(FormDef def) {
  std::string name = def.name;
  defs_[name] = std::move(def);
}

const FormDef* FormLibrary::find(const std::string& name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct EvalContext {
  const EvalOptions& opts;
  FreshNames fresh;
  std::size_t call_depth = 0;
};

void literal_vars(const FormExpr& f, std::set<std::string>& out) {
  if (f.kind == FormExpr::Kind::Literal)
    for (const auto& v : variables(f.literal)) out.insert(v);
  for (const auto& v : f.subst.bindings()) {
    out.insert(v.first);
    std::vector<std::string> vs;
    collect_vars(v.second, vs);
    out.insert(vs.begin(), vs.end());
  }
  for (const auto& a : f.args) literal_vars(*a, out);
}

Program eval(const FormExpr& f, const Binding& env, EvalContext& ctx);

Binding bind_params(const FormDef& def, const std::vector<BoundProgram>& args) {
  if (def.params.size() != args.size())
    throw FormError("form " + def.name + " expects " + std::to_string(def.params.size()) + " arguments, got " +
                    std::to_string(args.size()));
  Binding env;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& p = def.params[i];
    env.vars[p.var] = args[i];
    if (p.pred_meta) env.pred_metas[*p.pred_meta] = args[i].main_pred;
    if (p.tuple_meta) env.tuple_metas[*p.tuple_meta] = tuple_variables(args[i]);
  }
  return env;
}

Program eval(const FormExpr& f, const Binding& env, EvalContext& ctx) {
  using K = FormExpr::Kind;
  auto sub = [&](std::size_t i) { return eval(*f.args[i], env, ctx); };
  const auto& copts = ctx.opts.compose;
  switch (f.kind) {
    case K::Literal: return f.literal;
    case K::Var: {
      auto it = env.vars.find(f.name);
      if (it == env.vars.end()) throw FormError("unbound program variable " + f.name);
      return instantiate(it->second);
    }
    case K::Call: {
      const FormLibrary* lib = ctx.opts.library;
      const FormDef* def = lib ? lib->find(f.name) : nullptr;
      if (!def) throw FormError("unknown form " + f.name);
      if (++ctx.call_depth > 64) throw FormError("form call nesting too deep at " + f.name);
      std::vector<BoundProgram> args;
      for (const auto& a : f.args) {
        if (a->kind == K::Var) {
          auto it = env.vars.find(a->name);
          if (it == env.vars.end()) throw FormError("unbound program variable " + a->name);
          args.push_back(it->second);
        } else {
          args.push_back(bind_program(eval(*a, env, ctx)));
        }
      }
      Program out = eval(*def->body, bind_params(*def, args), ctx);
      --ctx.call_depth;
      return out;
    }
    case K::Union: return unite(sub(0), sub(1));
    case K::Compose: return compose(sub(0), sub(1), copts);
    case K::Concat: return concatenate(sub(0), sub(1));
    case K::Power: return power(sub(0), f.n, copts);
    case K::Facts: return facts(sub(0));
    case K::Proper: return proper(sub(0));
    case K::Reverse: return reverse(sub(0));
    case K::Body: return body_facts(sub(0));
    case K::Identity: return identity_program(sub(0));
    case K::RenamePred: {
      Program p = sub(0);
      for (const auto& [from, to] : f.renames) {
        auto resolve = [&](const std::string& s) {
          auto it = env.pred_metas.find(s);
          return it == env.pred_metas.end() ? s : it->second;
        };
        p = rename_predicate(p, resolve(from), resolve(to));
      }
      return p;
    }
    case K::FreshVars: {
      auto it = env.tuple_metas.find(f.name);
      if (it == env.tuple_metas.end()) throw FormError("unknown variable tuple " + f.name);
      Program p = sub(0);
      std::set<std::string> in_bodies;
      for (const auto& r : p)
        for (const auto& a : r.body()) {
          std::vector<std::string> vs;
          collect_vars(a, vs);
          in_bodies.insert(vs.begin(), vs.end());
        }
      for (const auto& v : variables(p)) ctx.fresh.avoid(v);
      Substitution s;
      for (const auto& v : it->second)
        if (in_bodies.count(v) && !s.find(v)) s.bind(v, Term::var(ctx.fresh.next()));
      return apply(s, p);
    }
    case K::Subst: return apply(f.subst, sub(0));
    case K::Ground: {
      GroundingBound b;
      b.max_term_depth = f.n;
      return ground(sub(0), b);
    }
  }
  throw FormError("malformed form");
}

std::set<std::string> avoid_set(const FormExpr& f, const Binding& env, const FormLibrary* lib) {
  std::set<std::string> avoid;
  literal_vars(f, avoid);
  if (lib)
    for (const auto& [name, def] : lib->defs()) literal_vars(*def.body, avoid);
  for (const auto& [name, b] : env.vars) {
    for (const auto& v : variables(b.program)) avoid.insert(v);
    for (const auto& v : tuple_variables(b)) avoid.insert(v);
  }
  return avoid;
}

}  // namespace

Program eval_form(const FormExpr& f, const Binding& env, const EvalOptions& opts) {
  EvalContext ctx{opts, FreshNames(avoid_set(f, env, opts.library), "Z")};
  return eval(f, env, ctx);
}

Program apply_form(const FormDef& def, const std::vector<BoundProgram>& args, const EvalOptions& opts) {
  return eval_form(*def.body, bind_params(def, args), opts);
}

std::set<std::string> free_vars(const FormExpr& f) {
  std::set<std::string> out;
  if (f.kind == FormExpr::Kind::Var) out.insert(f.name);
  for (const auto& a : f.args) {
    auto sub = free_vars(*a);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

namespace {

void collect_literals(const FormExpr& f, const FormLibrary* lib, std::set<std::string>& seen,
                      std::vector<Program>& out) {
  if (f.kind == FormExpr::Kind::Literal && std::find(out.begin(), out.end(), f.literal) == out.end())
    out.push_back(f.literal);
  if (f.kind == FormExpr::Kind::Call && lib && seen.insert(f.name).second)
    if (const FormDef* def = lib->find(f.name)) collect_literals(*def->body, lib, seen, out);
  for (const auto& a : f.args) collect_literals(*a, lib, seen, out);
}

}  // namespace

std::vector<Program> literals(const FormExpr& f, const FormLibrary* lib) {
  std::vector<Program> out;
  std::set<std::string> seen;
  collect_literals(f, lib, seen, out);
  return out;
}

NonConstancyProbe default_probe() {
  static const NonConstancyProbe probe{{
      Program{},
      parse_program("p(a)."),
      parse_program("p(a). p(f(X)) :- p(X)."),
      parse_program("p(X) :- q(X), p(f(X)). q(b)."),
  }};
  return probe;
}

bool is_nonconstant(const FormDef& f, const NonConstancyProbe& probe, const EvalOptions& opts) {
  // Pure in its inputs, and the verifier asks the same question many times.
  // Forms that call library definitions are not cached.
  static std::mutex mutex;
  static std::unordered_map<std::string, bool> cache;
  std::string key;
  if (!opts.library) {
    FormDef anon = f;
    anon.name.clear();
    key = to_string(anon) + '\x1e' + std::to_string(opts.compose.max_rules);
    for (const auto& p : probe.programs) {
      key += '\x1e';
      for (const auto& k : p.keys()) key += k + '\n';
    }
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  bool result = false;
  std::vector<Program> seen;
  for (const auto& prog : probe.programs) {
    std::vector<std::string> params;
    for (const auto& v : variables(prog)) params.push_back(v);
    std::vector<BoundProgram> args(f.params.size(), bind_program(prog, "", params));
    try {
      Program out = apply_form(f, args, opts);
      if (std::find(seen.begin(), seen.end(), out) == seen.end()) seen.push_back(std::move(out));
    } catch (const std::exception&) {
      continue;
    }
    if (seen.size() >= 2) {
      result = true;
      break;
    }
  }
  if (!key.empty()) {
    std::lock_guard lock(mutex);
    cache.emplace(std::move(key), result);
  }
  return result;
}

}  // namespace horn
