#include "horn/syntax.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

namespace horn {

namespace {

template <class T>
std::strong_ordering compare_seq(const std::vector<T>& a, const std::vector<T>& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  return compare_seq(a.args, b.args);
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.pred <=> b.pred; c != 0) return c;
  return compare_seq(a.args, b.args);
}

std::strong_ordering operator<=>(const Rule& a, const Rule& b) {
  if (auto c = a.head_ <=> b.head_; c != 0) return c;
  return compare_seq(a.body_, b.body_);
}

Term nil() { return Term::fn("nil"); }
Term cons(Term head, Term tail) { return Term::fn("cons", {std::move(head), std::move(tail)}); }

Term make_list(std::vector<Term> items, Term tail) {
  Term out = std::move(tail);
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(std::move(*it), std::move(out));
  return out;
}

Rule::Rule(Atom head, std::vector<Atom> body) : head_(std::move(head)), body_(std::move(body)) {
  std::sort(body_.begin(), body_.end());
  body_.erase(std::unique(body_.begin(), body_.end()), body_.end());
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

bool is_nil(const Term& t) { return t.kind == Term::Kind::Compound && t.name == "nil" && t.args.empty(); }
bool is_cons(const Term& t) { return t.kind == Term::Kind::Compound && t.name == "cons" && t.args.size() == 2; }

void write_term(const Term& t, std::string& out);

void write_args(const std::vector<Term>& args, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    write_term(args[i], out);
  }
  out += ')';
}

void write_term(const Term& t, std::string& out) {
  if (t.is_var()) {
    out += t.name;
    return;
  }
  if (is_nil(t)) {
    out += "[]";
    return;
  }
  if (is_cons(t)) {
    out += '[';
    const Term* cur = &t;
    bool first = true;
    while (is_cons(*cur)) {
      if (!first) out += ',';
      first = false;
      write_term(cur->args[0], out);
      cur = &cur->args[1];
    }
    if (!is_nil(*cur)) {
      out += '|';
      write_term(*cur, out);
    }
    out += ']';
    return;
  }
  out += t.name;
  if (!t.args.empty()) write_args(t.args, out);
}

void write_atom(const Atom& a, std::string& out) {
  out += a.pred;
  if (!a.args.empty()) write_args(a.args, out);
}

std::string write_rule(const Atom& head, const std::vector<const Atom*>& body) {
  std::string out;
  write_atom(head, out);
  if (!body.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i) out += ", ";
      write_atom(*body[i], out);
    }
  }
  out += '.';
  return out;
}

}  // namespace

std::string to_string(const Term& t) {
  std::string s;
  write_term(t, s);
  return s;
}

std::string to_string(const Atom& a) {
  std::string s;
  write_atom(a, s);
  return s;
}

std::string to_string(const Rule& r) {
  std::vector<const Atom*> body;
  for (const auto& a : r.body()) body.push_back(&a);
  return write_rule(r.head(), body);
}

// ---------------------------------------------------------------------------
// Canonical variable naming

namespace {

std::string canonical_var_name(std::size_t i) {
  std::string s(1, static_cast<char>('A' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

using VarMap = std::map<std::string, std::size_t>;

Term rename_term(const Term& t, VarMap& vars) {
  if (t.is_var()) {
    auto [it, inserted] = vars.try_emplace(t.name, vars.size());
    return Term::var(canonical_var_name(it->second));
  }
  Term out = Term::fn(t.name);
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(rename_term(a, vars));
  return out;
}

Atom rename_atom(const Atom& a, VarMap& vars) {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(rename_term(t, vars));
  return out;
}

// Renaming-invariant shape of a body atom: head variables keep their head
// index, other variables get an index local to the atom.
void skeleton_term(const Term& t, const VarMap& head_vars, VarMap& local, std::string& out) {
  if (t.is_var()) {
    if (auto it = head_vars.find(t.name); it != head_vars.end()) {
      out += '#' + std::to_string(it->second);
    } else {
      auto [lit, ins] = local.try_emplace(t.name, local.size());
      out += '$' + std::to_string(lit->second);
    }
    return;
  }
  out += t.name;
  out += '(';
  for (const auto& a : t.args) {
    skeleton_term(a, head_vars, local, out);
    out += ',';
  }
  out += ')';
}

std::string skeleton(const Atom& a, const VarMap& head_vars) {
  std::string out = a.pred + "(";
  VarMap local;
  for (const auto& t : a.args) {
    skeleton_term(t, head_vars, local, out);
    out += ',';
  }
  return out + ")";
}

constexpr std::size_t kMaxCanonicalOrderings = 40320;

struct Canonical {
  std::string key;
  Atom head;
  std::vector<Atom> body;  // in canonical order
};

Canonical canonical_form(const Rule& r) {
  VarMap head_vars;
  Atom head = rename_atom(r.head(), head_vars);

  const auto& body = r.body();
  std::vector<std::pair<std::string, std::size_t>> skel;
  skel.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) skel.emplace_back(skeleton(body[i], head_vars), i);
  std::sort(skel.begin(), skel.end());

  // Tie groups: [begin, end) ranges of equal skeletons.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  std::size_t orderings = 1;
  for (std::size_t i = 0; i < skel.size();) {
    std::size_t j = i;
    while (j < skel.size() && skel[j].first == skel[i].first) ++j;
    if (j - i > 1) {
      groups.emplace_back(i, j);
      for (std::size_t k = 2; k <= j - i && orderings <= kMaxCanonicalOrderings; ++k) orderings *= k;
    }
    i = j;
  }

  std::vector<std::size_t> order(skel.size());
  for (std::size_t i = 0; i < skel.size(); ++i) order[i] = skel[i].second;

  auto build = [&](const std::vector<std::size_t>& ord) {
    Canonical c;
    VarMap vars = head_vars;
    c.head = head;
    c.body.reserve(ord.size());
    for (auto idx : ord) c.body.push_back(rename_atom(body[idx], vars));
    std::vector<const Atom*> ptrs;
    for (const auto& a : c.body) ptrs.push_back(&a);
    c.key = write_rule(c.head, ptrs);
    return c;
  };

  if (groups.empty()) return build(order);

  if (orderings > kMaxCanonicalOrderings) {
    // Too many ties to enumerate; order each group by its rendering under a
    // first naming pass. Exact for all but highly symmetric bodies.
    Canonical first = build(order);
    std::vector<std::pair<std::string, std::size_t>> by_text;
    for (auto [b, e] : groups) {
      by_text.clear();
      for (std::size_t k = b; k < e; ++k) by_text.emplace_back(to_string(first.body[k]), order[k]);
      std::sort(by_text.begin(), by_text.end());
      for (std::size_t k = b; k < e; ++k) order[k] = by_text[k - b].second;
    }
    return build(order);
  }

  for (auto [b, e] : groups) std::sort(order.begin() + b, order.begin() + e);
  Canonical best = build(order);
  // Odometer over the permutations of every tie group.
  while (true) {
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      auto [b, e] = groups[g];
      if (std::next_permutation(order.begin() + b, order.begin() + e)) break;
    }
    if (g == groups.size()) break;
    Canonical c = build(order);
    if (c.key < best.key) best = std::move(c);
  }
  return best;
}

std::string order_key(const Rule& r, const std::string& key) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08zu", r.head().arity());
  return r.head().pred + '\x01' + buf + '\x01' + key;
}

}  // namespace

std::string canonical_key(const Rule& r) { return canonical_form(r).key; }

Rule canonicalize(const Rule& r) {
  auto c = canonical_form(r);
  return Rule(std::move(c.head), std::move(c.body));
}

// ---------------------------------------------------------------------------
// Program

Program::Program(std::vector<Rule> rules) {
  for (auto& r : rules) insert(std::move(r));
}

bool Program::insert(Rule r) {
  std::string key = canonical_key(r);
  std::string ord = order_key(r, key);
  auto it = std::lower_bound(order_.begin(), order_.end(), ord);
  if (it != order_.end() && *it == ord) return false;
  auto pos = it - order_.begin();
  order_.insert(it, ord);
  keys_.insert(keys_.begin() + pos, std::move(key));
  rules_.insert(rules_.begin() + pos, std::move(r));
  return true;
}

bool Program::insert_from(const Program& src, std::size_t i) {
  const std::string& ord = src.order_[i];
  auto it = std::lower_bound(order_.begin(), order_.end(), ord);
  if (it != order_.end() && *it == ord) return false;
  auto pos = it - order_.begin();
  order_.insert(it, ord);
  keys_.insert(keys_.begin() + pos, src.keys_[i]);
  rules_.insert(rules_.begin() + pos, src.rules_[i]);
  return true;
}

bool Program::contains(const Rule& r) const {
  std::string ord = order_key(r, canonical_key(r));
  return std::binary_search(order_.begin(), order_.end(), ord);
}

bool strictly_equal(const Program& a, const Program& b) {
  std::vector<Rule> x(a.rules()), y(b.rules());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

bool is_subset(const Program& a, const Program& b) {
  return std::all_of(a.begin(), a.end(), [&](const Rule& r) { return b.contains(r); });
}

Program unite(const Program& a, const Program& b) {
  Program out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out.insert_from(b, i);
  return out;
}

Program facts(const Program& p) {
  Program out;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.rules()[i].is_fact()) out.insert_from(p, i);
  return out;
}

Program proper(const Program& p) {
  Program out;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!p.rules()[i].is_fact()) out.insert_from(p, i);
  return out;
}

PredSignature pred_of(const Rule& r) {
  PredSignature s{r.head().pred, {}};
  for (const auto& a : r.body()) s.body.insert(a.pred);
  return s;
}

Program rename_predicate(const Program& p, std::string_view from, std::string_view to) {
  auto fix = [&](Atom a) {
    if (a.pred == from) a.pred = std::string(to);
    return a;
  };
  Program out;
  for (const auto& r : p) {
    std::vector<Atom> body;
    for (const auto& a : r.body()) body.push_back(fix(a));
    out.insert(Rule(fix(r.head()), std::move(body)));
  }
  return out;
}

Program reverse(const Program& p) {
  Program out;
  for (const auto& r : p) {
    if (r.is_fact()) {
      out.insert_from(p, static_cast<std::size_t>(&r - p.rules().data()));
      continue;
    }
    for (const auto& a : r.body()) out.insert(Rule(a, {r.head()}));
  }
  return out;
}

Program body_facts(const Program& p) {
  Program out;
  for (const auto& r : p)
    for (const auto& a : r.body()) out.insert(Rule(a));
  return out;
}

std::size_t depth(const Term& t) {
  std::size_t d = 0;
  for (const auto& a : t.args) d = std::max(d, depth(a) + 1);
  return d;
}

std::size_t depth(const Atom& a) {
  std::size_t d = 0;
  for (const auto& t : a.args) d = std::max(d, depth(t));
  return d;
}

bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  return std::all_of(t.args.begin(), t.args.end(), [](const Term& x) { return is_ground(x); });
}

bool is_ground(const Atom& a) {
  return std::all_of(a.args.begin(), a.args.end(), [](const Term& x) { return is_ground(x); });
}

bool is_ground(const Rule& r) {
  return is_ground(r.head()) &&
         std::all_of(r.body().begin(), r.body().end(), [](const Atom& a) { return is_ground(a); });
}

bool is_ground(const Program& p) {
  return std::all_of(p.begin(), p.end(), [](const Rule& r) { return is_ground(r); });
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

void collect_vars(const Atom& a, std::vector<std::string>& out) {
  for (const auto& t : a.args) collect_vars(t, out);
}

std::vector<std::string> variables(const Rule& r) {
  std::vector<std::string> out;
  collect_vars(r.head(), out);
  for (const auto& a : r.body()) collect_vars(a, out);
  return out;
}

std::set<std::string> variables(const Program& p) {
  std::set<std::string> out;
  for (const auto& r : p)
    for (auto& v : variables(r)) out.insert(std::move(v));
  return out;
}

std::set<std::string> predicates(const Program& p) {
  std::set<std::string> out;
  for (const auto& r : p) {
    out.insert(r.head().pred);
    for (const auto& a : r.body()) out.insert(a.pred);
  }
  return out;
}

void collect_functors(const Term& t, std::set<std::pair<std::string, std::size_t>>& out) {
  if (t.is_var()) return;
  out.emplace(t.name, t.args.size());
  for (const auto& a : t.args) collect_functors(a, out);
}

std::set<std::string> functors(const Program& p) {
  std::set<std::pair<std::string, std::size_t>> fs;
  auto atom = [&](const Atom& a) {
    for (const auto& t : a.args) collect_functors(t, fs);
  };
  for (const auto& r : p) {
    atom(r.head());
    for (const auto& a : r.body()) atom(a);
  }
  std::set<std::string> out;
  for (auto& [name, arity] : fs) out.insert(name);
  return out;
}

std::set<std::pair<std::string, std::size_t>> predicate_arities(const Program& p) {
  std::set<std::pair<std::string, std::size_t>> out;
  for (const auto& r : p) {
    out.emplace(r.head().pred, r.head().arity());
    for (const auto& a : r.body()) out.emplace(a.pred, a.arity());
  }
  return out;
}

std::vector<std::string> render_lines(const Program& p) { return p.keys(); }

std::string render_program(const Program& p) {
  std::string out;
  for (const auto& k : p.keys()) {
    if (!out.empty()) out += '\n';
    out += k;
  }
  return out;
}

}  // namespace horn
