// Program forms: expressions over program literals, program variables and
// the algebraic operations, together with their instantiation.
//
// Form files (`.lpf`) hold named definitions:
//
//   file    := { "form" Name "(" param { "," param } ")" "=" expr ";" }
//   param   := Var [ "[" ident "]" ] [ "(" Var ")" ]      e.g. X[q](Xs)
//   expr    := compose { "|" compose }                    union
//   compose := concat { "o" concat }                      sequential composition
//   concat  := postfix { "." postfix }                    concatenation
//   postfix := primary { "[" item { "," item } "]" | "^" n }
//   item    := ident "/" ident                            predicate rename
//            | Var "/" "fresh"                            fresh copy of a tuple
//   primary := "(" expr ")" | "{" rules "}" | Var | Name "(" expr { "," expr } ")"
//            | facts(e) | proper(e) | rev(e) | body(e) | id(e) | gnd(e, n)
//            | subst(e, Var "=" term { "," Var "=" term }) | load("file.lp") | empty
//
// A parameter X[q](Xs) makes `q` stand for the main predicate of whatever
// program is bound to X, and `Xs` for the variables of the call-site tuple.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "horn/algebra.hpp"
#include "horn/syntax.hpp"
#include "horn/unify.hpp"

namespace horn {

class FormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FormExpr;
using FormPtr = std::shared_ptr<const FormExpr>;

struct FormExpr {
  enum class Kind {
    Literal,
    Var,
    Call,
    Union,
    Compose,
    Concat,
    Power,
    Facts,
    Proper,
    Reverse,
    Body,
    Identity,
    RenamePred,
    FreshVars,
    Subst,
    Ground,
  };

  Kind kind = Kind::Literal;
  std::string name;  // variable, called form, or fresh-tuple name
  Program literal;
  std::vector<FormPtr> args;
  std::size_t n = 0;  // power exponent / grounding depth
  std::vector<std::pair<std::string, std::string>> renames;
  Substitution subst;
};

FormPtr lit(Program p);
FormPtr var(std::string name);
FormPtr call(std::string form, std::vector<FormPtr> args);
FormPtr unary(FormExpr::Kind kind, FormPtr arg);
FormPtr binary(FormExpr::Kind kind, FormPtr a, FormPtr b);
FormPtr power_of(FormPtr arg, std::size_t n);
FormPtr rename_preds(FormPtr arg, std::vector<std::pair<std::string, std::string>> renames);
FormPtr fresh_vars(FormPtr arg, std::string tuple);
FormPtr substitute(FormPtr arg, Substitution s);
FormPtr ground_at(FormPtr arg, std::size_t depth);

std::string to_string(const FormExpr& f);
std::size_t form_depth(const FormExpr& f);

struct FormParam {
  std::string var;
  std::optional<std::string> pred_meta;
  std::optional<std::string> tuple_meta;
};

struct FormDef {
  std::string name;
  std::vector<FormParam> params;
  FormPtr body;
};

std::string to_string(const FormDef& d);

// A program bound to a form variable. `params` are the program's own tuple
// variables; `args` (same length, or empty) is the call-site tuple.
struct BoundProgram {
  Program program;
  std::string main_pred;
  std::vector<std::string> params;
  std::vector<Term> args;
};

// First head predicate in canonical order, or "p" for the empty program.
std::string default_main_pred(const Program& p);
BoundProgram bind_program(Program p, std::string main_pred = "", std::vector<std::string> params = {},
                          std::vector<Term> args = {});
// The bound program after applying the call-site tuple.
Program instantiate(const BoundProgram& b);
// Variables of the call-site tuple (or of `params` when no args are given).
std::vector<std::string> tuple_variables(const BoundProgram& b);

class FormLibrary {
 public:
  void add(FormDef def);
  const FormDef* find(const std::string& name) const;
  const std::map<std::string, FormDef>& defs() const { return defs_; }

 private:
  std::map<std::string, FormDef> defs_;
};

struct Binding {
  std::map<std::string, BoundProgram> vars;
  std::map<std::string, std::string> pred_metas;
  std::map<std::string, std::vector<std::string>> tuple_metas;
};

struct EvalOptions {
  ComposeOptions compose;
  const FormLibrary* library = nullptr;
};

Program eval_form(const FormExpr& f, const Binding& env, const EvalOptions& opts = {});
// Binds the definition's parameters positionally and evaluates its body.
Program apply_form(const FormDef& def, const std::vector<BoundProgram>& args, const EvalOptions& opts = {});

std::set<std::string> free_vars(const FormExpr& f);
// Program literals occurring in the form (and in forms it calls).
std::vector<Program> literals(const FormExpr& f, const FormLibrary* lib = nullptr);

struct NonConstancyProbe {
  std::vector<Program> programs;
};

NonConstancyProbe default_probe();

// True when the probe yields at least two distinct results. A false answer
// only says the probe found no difference.
bool is_nonconstant(const FormDef& f, const NonConstancyProbe& probe, const EvalOptions& opts = {});

// Form file reader; `base_dir` resolves load("...") paths.
FormLibrary parse_forms(std::string_view text, const std::string& base_dir = ".");
FormLibrary read_form_file(const std::string& path);
FormPtr parse_form_expr(std::string_view text, const std::string& base_dir = ".");

}  // namespace horn
