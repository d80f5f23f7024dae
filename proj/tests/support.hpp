#pragma once

#include <random>
#include <string>
#include <vector>

#include "horn/parser.hpp"
#include "horn/syntax.hpp"

namespace horn::test {

inline Program prog(const std::string& text) { return parse_program(text); }

inline std::string corpus_path(const std::string& rel) { return std::string(HORN_CORPUS_DIR) + "/" + rel; }

inline Program corpus_program(const std::string& name) {
  return read_program_file(corpus_path("programs/" + name + ".lp"));
}

// Small random programs over a fixed signature.
struct Generator {
  std::mt19937 rng;
  std::vector<std::pair<std::string, std::size_t>> preds{{"p", 1}, {"q", 1}, {"r", 2}};
  std::vector<std::pair<std::string, std::size_t>> fns{{"a", 0}, {"b", 0}, {"f", 1}};
  std::vector<std::string> vars{"X", "Y", "Z"};
  std::size_t max_depth = 1;
  std::size_t max_body = 2;
  std::size_t max_rules = 3;
  bool ground_only = false;

  explicit Generator(unsigned seed) : rng(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  Term term(std::size_t depth) {
    if (!ground_only && below(3) == 0) return Term::var(vars[below(vars.size())]);
    std::vector<std::pair<std::string, std::size_t>> choices;
    for (const auto& f : fns)
      if (f.second == 0 || depth > 0) choices.push_back(f);
    const auto& [name, arity] = choices[below(choices.size())];
    Term t = Term::fn(name);
    for (std::size_t i = 0; i < arity; ++i) t.args.push_back(term(depth - 1));
    return t;
  }

  Atom atom() {
    const auto& [name, arity] = preds[below(preds.size())];
    Atom a{name, {}};
    for (std::size_t i = 0; i < arity; ++i) a.args.push_back(term(max_depth));
    return a;
  }

  Rule rule() {
    Atom head = atom();
    std::vector<Atom> body;
    std::size_t n = below(max_body + 1);
    for (std::size_t i = 0; i < n; ++i) body.push_back(atom());
    return Rule(std::move(head), std::move(body));
  }

  Program program() {
    Program p;
    std::size_t n = below(max_rules + 1);
    for (std::size_t i = 0; i < n; ++i) p.insert(rule());
    return p;
  }
};

// Propositional programs over the given atoms.
inline Program random_propositional(std::mt19937& rng, const std::vector<std::string>& atoms, std::size_t max_rules,
                                    std::size_t max_body) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  Program p;
  std::size_t n = pick(max_rules + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Atom> body;
    std::size_t b = pick(max_body + 1);
    for (std::size_t j = 0; j < b; ++j) body.push_back(Atom{atoms[pick(atoms.size())], {}});
    p.insert(Rule(Atom{atoms[pick(atoms.size())], {}}, std::move(body)));
  }
  return p;
}

}  // namespace horn::test
