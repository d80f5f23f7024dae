#include "horn/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "horn/algebra.hpp"
#include "horn/corpus.hpp"
#include "horn/forms.hpp"
#include "horn/parser.hpp"
#include "horn/proportion.hpp"
#include "horn/semantics.hpp"
#include "horn/sld.hpp"

namespace horn {

namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

json program_json(const Program& p) { return json{{"rules", render_lines(p)}}; }

std::string program_text(const Program& p) {
  std::string s = render_program(p);
  return s.empty() ? s : s + "\n";
}

// "a=1,b=2" into a map; unknown keys are rejected by the caller.
std::map<std::string, std::size_t> parse_budget(const std::string& spec) {
  std::map<std::string, std::size_t> out;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("budget item '" + item + "' needs '='");
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (value.empty() || !std::all_of(value.begin(), value.end(), ::isdigit))
      throw UsageError("budget value for '" + key + "' must be a number");
    out[key] = std::stoul(value);
  }
  return out;
}

void take(std::map<std::string, std::size_t>& m, const std::string& key, std::size_t& dst) {
  auto it = m.find(key);
  if (it == m.end()) return;
  dst = it->second;
  m.erase(it);
}

void reject_rest(const std::map<std::string, std::size_t>& m) {
  if (!m.empty()) throw UsageError("unknown budget key '" + m.begin()->first + "'");
}

std::string braces(const Program& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? " " : "") + p.keys()[i];
  return out + "}";
}

std::string vector_text(const std::vector<BoundProgram>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + braces(instantiate(v[i]));
  return out;
}

json report_json(const ProportionReport& r) {
  json items = json::array();
  for (const auto& i : r.items) items.push_back({{"check", i.name}, {"passed", i.passed}, {"detail", i.detail}});
  return {{"holds", r.holds}, {"items", items}};
}

json witness_json(const ProportionWitness& w) {
  json pv = json::array(), rv = json::array();
  for (const auto& b : w.Pvec) pv.push_back(render_lines(instantiate(b)));
  for (const auto& b : w.Rvec) rv.push_back(render_lines(instantiate(b)));
  return {{"F", to_string(w.F)}, {"G", to_string(w.G)}, {"line", to_string(w.line)}, {"Pvec", pv}, {"Rvec", rv}};
}

std::string witness_text(const ProportionWitness& w) {
  return "line: " + to_string(w.line) + "\n" + to_string(w.F) + "\n" + to_string(w.G) + "\nPvec: " +
         vector_text(w.Pvec) + "\nRvec: " + vector_text(w.Rvec) + "\n";
}

class Commands {
 public:
  Commands(std::ostream& out, bool json_mode) : out_(out), json_(json_mode) {}

  int fold(const std::vector<std::string>& files, bool use_concat, const std::string& budget) {
    ComposeOptions opts;
    auto b = parse_budget(budget);
    take(b, "rules", opts.max_rules);
    reject_rest(b);
    Program acc = read_program_file(files.front());
    for (std::size_t i = 1; i < files.size(); ++i) {
      Program next = read_program_file(files[i]);
      acc = use_concat ? concatenate(acc, next) : compose(acc, next, opts);
    }
    emit(acc);
    return kExitOk;
  }

  int reverse_cmd(const std::string& file) {
    emit(reverse(read_program_file(file)));
    return kExitOk;
  }

  int lm(const std::string& file, std::size_t depth, bool generators) {
    Program p = read_program_file(file);
    GroundingBound b;
    b.max_term_depth = depth;
    Model m = least_model(p, b);
    std::vector<std::string> lines;
    if (generators) {
      lines = render_lines(m.generators());
    } else {
      for (const auto& a : m.ground_atoms(herbrand_universe(p, b), b.max_atoms))
        if (horn::depth(a) <= depth) lines.push_back(to_string(a) + ".");
      std::sort(lines.begin(), lines.end());
    }
    if (json_) {
      out_ << json{{"atoms", lines}, {"converged", m.converged()}, {"depth", depth}}.dump(2) << "\n";
    } else {
      for (const auto& l : lines) out_ << l << "\n";
    }
    return kExitOk;
  }

  int query(const std::vector<std::string>& items, std::size_t depth, bool trace) {
    if (items.size() < 2) throw UsageError("query needs at least one program file and a goal");
    LabeledProgram lp;
    for (std::size_t i = 0; i + 1 < items.size(); ++i) lp.add(read_program_file(items[i]), stem(items[i]));
    Query q{parse_goals(items.back())};
    auto ref = prove_with_trace(lp, q, depth);
    if (json_) {
      json j{{"proved", ref.has_value()}, {"depth", depth}};
      if (ref) {
        json ans = json::object();
        for (const auto& [v, t] : ref->answer.bindings()) ans[v] = to_string(t);
        j["answer"] = ans;
        if (trace) {
          std::vector<std::string> lines;
          std::stringstream ss(render_trace(q, *ref));
          for (std::string l; std::getline(ss, l);) lines.push_back(l);
          j["trace"] = lines;
        }
      }
      out_ << j.dump(2) << "\n";
      return kExitOk;
    }
    if (!ref) {
      out_ << "no\n";
      return kExitOk;
    }
    out_ << "yes\n";
    for (const auto& [v, t] : ref->answer.bindings()) out_ << v << " = " << to_string(t) << "\n";
    if (trace) out_ << render_trace(q, *ref);
    return kExitOk;
  }

  int form_eval(const std::string& file, const std::string& name, const std::vector<std::string>& binds) {
    FormLibrary lib = read_form_file(file);
    std::map<std::string, BoundProgram> bound;
    for (const auto& b : binds) {
      auto eq = b.find('=');
      if (eq == std::string::npos) throw UsageError("binding '" + b + "' must look like X=file.lp");
      bound[b.substr(0, eq)] = read_bound_program(b.substr(eq + 1));
    }
    EvalOptions opts{{}, &lib};
    Program result;
    if (const FormDef* def = lib.find(name)) {
      std::vector<BoundProgram> args;
      for (const auto& p : def->params) {
        auto it = bound.find(p.var);
        if (it == bound.end()) throw FormError("unbound program variable " + p.var);
        args.push_back(it->second);
      }
      result = apply_form(*def, args, opts);
    } else {
      FormPtr f = parse_form_expr(name, std::filesystem::path(file).parent_path().string());
      Binding env;
      for (const auto& v : free_vars(*f)) {
        auto it = bound.find(v);
        if (it == bound.end()) throw FormError("unbound program variable " + v);
        env.vars[v] = it->second;
      }
      result = eval_form(*f, env, opts);
    }
    emit(result);
    return kExitOk;
  }

  int prop_check(const std::string& file, bool strict, bool derived) {
    ProportionFile pf = read_proportion_file(file);
    if (!pf.S) throw ProportionError("proportion file names no program S to check");
    if (!pf.witness) throw ProportionError("proportion file has no witness");
    CheckOptions opts;
    opts.strict = strict;
    ProportionReport rep = check_proportion(pf.problem, *pf.S, *pf.witness, opts);
    bool ok = rep.holds;
    std::vector<DerivedProportion> perms;
    if (derived && rep.holds) {
      perms = derived_proportions(Proportion{pf.problem, *pf.S, *pf.witness}, opts);
      for (const auto& d : perms) ok = ok && d.report.holds;
    }
    if (json_) {
      json j = report_json(rep);
      if (derived) {
        json arr = json::array();
        for (const auto& d : perms) {
          json e = report_json(d.report);
          e["proportion"] = d.label;
          e["witness"] = witness_json(d.proportion.witness);
          arr.push_back(e);
        }
        j["derived"] = arr;
      }
      out_ << j.dump(2) << "\n";
    } else {
      out_ << to_string(rep);
      for (const auto& d : perms) {
        out_ << "\n== " << d.label << "\n" << witness_text(d.proportion.witness) << to_string(d.report);
      }
    }
    return ok ? kExitOk : kExitVerify;
  }

  int prop_solve(const std::string& file, const std::string& budget) {
    ProportionFile pf = read_proportion_file(file);
    SolverBudget sb;
    auto b = parse_budget(budget);
    take(b, "depth", sb.max_form_depth);
    take(b, "n", sb.vector_length);
    take(b, "pool", sb.max_pool_rules);
    take(b, "forms", sb.max_forms);
    take(b, "evals", sb.max_evaluations);
    reject_rest(b);
    if (sb.vector_length == 0) throw UsageError("vector length must be at least 1");
    SolveResult res = solve_proportion(pf.problem, sb);

    std::vector<Program> answers;
    for (const auto& s : res.solutions)
      if (std::find(answers.begin(), answers.end(), s.S) == answers.end()) answers.push_back(s.S);
    bool expected_found = !pf.S || std::find(answers.begin(), answers.end(), *pf.S) != answers.end();

    if (json_) {
      json sols = json::array();
      for (const auto& s : res.solutions) {
        json w = witness_json(s.witness);
        w["S"] = render_lines(s.S);
        sols.push_back(w);
      }
      json ans = json::array();
      for (const auto& a : answers) ans.push_back(render_lines(a));
      out_ << json{{"answers", ans}, {"solutions", sols}, {"exhausted", res.exhausted}, {"forms", res.forms}}.dump(2)
           << "\n";
    } else {
      out_ << "answers: " << answers.size() << "\n";
      for (const auto& a : answers) out_ << "S = " << braces(a) << "\n";
      for (std::size_t i = 0; i < res.solutions.size(); ++i) {
        const auto& s = res.solutions[i];
        out_ << "\n# solution " << i + 1 << "\nS = " << braces(s.S) << "\n" << witness_text(s.witness);
      }
      if (res.exhausted) out_ << "\nsearch budget exhausted; the list may be incomplete\n";
    }
    if (!expected_found) return res.exhausted ? kExitBudget : kExitVerify;
    if (res.exhausted) return kExitBudget;
    return kExitOk;
  }

  int represent(const std::string& pfile, const std::string& rfile, const std::string& budget) {
    SearchBudget sb;
    auto b = parse_budget(budget);
    take(b, "rules", sb.max_rules);
    take(b, "body", sb.max_body);
    take(b, "depth", sb.max_term_depth);
    take(b, "vars", sb.max_vars);
    take(b, "candidates", sb.max_candidates);
    take(b, "checks", sb.max_checks);
    reject_rest(b);
    auto res = search_representation(read_program_file(pfile), read_program_file(rfile), sb);
    if (json_) {
      json j{{"found", res.witness.has_value()}, {"exhausted", res.exhausted}, {"checks", res.checks}};
      if (res.witness) {
        j["Q"] = render_lines(res.witness->left);
        j["S"] = render_lines(res.witness->right);
      }
      out_ << j.dump(2) << "\n";
    } else if (res.witness) {
      out_ << "Q = " << braces(res.witness->left) << "\nS = " << braces(res.witness->right) << "\n";
    } else {
      out_ << (res.exhausted ? "not found (budget exhausted)\n" : "not found\n");
    }
    if (!res.witness && res.exhausted) return kExitBudget;
    return kExitOk;
  }

  int equiv(const std::string& a, const std::string& b, std::size_t depth) {
    GroundingBound bound;
    bound.max_term_depth = depth;
    auto res = equivalent(read_program_file(a), read_program_file(b), bound);
    if (json_)
      out_ << json{{"equivalent", res.equivalent}, {"depth", depth}, {"atoms", res.atoms_compared}}.dump(2) << "\n";
    else
      out_ << (res.equivalent ? "equivalent" : "not equivalent") << " up to depth " << depth << "\n";
    return kExitOk;
  }

  int golden(const std::string& root) {
    GoldenReport rep = run_golden_suite(root);
    if (json_) {
      json arr = json::array();
      for (const auto& o : rep.outcomes)
        arr.push_back({{"name", o.name}, {"passed", o.passed}, {"diff", o.diff}, {"ms", o.millis}});
      out_ << json{{"cases", arr}, {"passed", rep.all_passed()}}.dump(2) << "\n";
    } else {
      out_ << rep.render();
    }
    return rep.all_passed() ? kExitOk : kExitVerify;
  }

 private:
  void emit(const Program& p) {
    if (json_)
      out_ << program_json(p).dump(2) << "\n";
    else
      out_ << program_text(p);
  }

  std::ostream& out_;
  bool json_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Algebra, semantics and analogical proportions of Horn programs", "hornalg"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> files, items, binds;
  std::string file, file2, name, budget;
  std::optional<std::size_t> depth;
  bool trace = false, strict = false, derived = false, generators = false;

  auto* c_compose = app.add_subcommand("compose", "Left fold of sequential composition");
  c_compose->add_option("files", files, "Program files")->required();
  c_compose->add_option("--budget", budget, "rules=N");
  auto* c_concat = app.add_subcommand("concat", "Left fold of concatenation");
  c_concat->add_option("files", files, "Program files")->required();
  auto* c_reverse = app.add_subcommand("reverse", "Reverse every rule");
  c_reverse->add_option("file", file, "Program file")->required();

  auto* c_lm = app.add_subcommand("lm", "Bounded least model");
  c_lm->add_option("file", file, "Program file")->required();
  c_lm->add_option("--depth", depth, "Term depth bound (default 6)");
  c_lm->add_flag("--generators", generators, "Print non-ground generators instead of ground atoms");

  auto* c_query = app.add_subcommand("query", "SLD query against the union of the programs");
  c_query->add_option("items", items, "Program files followed by the goal")->required();
  c_query->add_option("--depth", depth, "Derivation length bound (default 16)");
  c_query->add_flag("--trace", trace, "Print the labeled derivation");

  auto* c_form = app.add_subcommand("form-eval", "Instantiate a form");
  c_form->add_option("forms", file, "Form file")->required();
  c_form->add_option("name", name, "Form name or expression")->required();
  c_form->add_option("--bind", binds, "X=file.lp[pred](T1,...)");

  auto* c_check = app.add_subcommand("prop-check", "Verify the witness of a proportion file");
  c_check->add_option("file", file, "Proportion file")->required();
  c_check->add_flag("--strict-eq", strict, "Exact syntactic equality");
  c_check->add_flag("--derived", derived, "Also verify the three permuted proportions");

  auto* c_solve = app.add_subcommand("prop-solve", "Search for solutions of a proportion file");
  c_solve->add_option("file", file, "Proportion file")->required();
  c_solve->add_option("--budget", budget, "depth=N,n=N,pool=N,forms=N,evals=N");

  auto* c_rep = app.add_subcommand("represent", "Search Q, S with P = Q o R o S");
  c_rep->add_option("P", file, "Program file")->required();
  c_rep->add_option("R", file2, "Program file")->required();
  c_rep->add_option("--budget", budget, "rules=N,body=N,depth=N,vars=N,candidates=N,checks=N");

  auto* c_equiv = app.add_subcommand("equiv", "Compare bounded least models");
  c_equiv->add_option("P", file, "Program file")->required();
  c_equiv->add_option("R", file2, "Program file")->required();
  c_equiv->add_option("--depth", depth, "Term depth bound (default 6)");

  auto* c_golden = app.add_subcommand("golden", "Run the golden suite");
  c_golden->add_option("root", file, "Corpus directory");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  Commands cmd(out, format == "json");
  try {
    if (c_compose->parsed()) return cmd.fold(files, false, budget);
    if (c_concat->parsed()) return cmd.fold(files, true, budget);
    if (c_reverse->parsed()) return cmd.reverse_cmd(file);
    if (c_lm->parsed()) return cmd.lm(file, depth.value_or(6), generators);
    if (c_query->parsed()) return cmd.query(items, depth.value_or(16), trace);
    if (c_form->parsed()) return cmd.form_eval(file, name, binds);
    if (c_check->parsed()) return cmd.prop_check(file, strict, derived);
    if (c_solve->parsed()) return cmd.prop_solve(file, budget);
    if (c_rep->parsed()) return cmd.represent(file, file2, budget);
    if (c_equiv->parsed()) return cmd.equiv(file, file2, depth.value_or(6));
    if (c_golden->parsed()) return cmd.golden(file.empty() ? default_corpus_dir() : file);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const FormError& e) {
    err << "form error: " << e.what() << "\n";
    return kExitParse;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const BoundOverflow& e) {
    err << "bound exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ProportionError& e) {
    err << "invalid proportion: " << e.what() << "\n";
    return kExitVerify;
  }
  return kExitError;
}

}  // namespace horn
