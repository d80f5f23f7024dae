#include <filesystem>
#include <regex>
#include <sstream>

#include "horn/parser.hpp"
#include "horn/proportion.hpp"

namespace horn {

namespace {

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) {
    part = trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::string resolve(const std::string& base, const std::string& rel) {
  return (std::filesystem::path(base) / rel).string();
}

}  // namespace

BoundProgram read_bound_program(const std::string& spec, const std::string& base_dir) {
  static const std::regex shape(R"(^\s*([^\[\(]+?)\s*(?:\[\s*([A-Za-z0-9_]+)\s*\])?\s*(?:\((.*)\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(spec, m, shape)) throw ParseError("malformed program binding '" + spec + "'", 1, 1);
  std::string path = resolve(base_dir, m[1].str());
  std::string text = read_text_file(path);
  Program p;
  try {
    p = parse_program(text);
  } catch (const ParseError& e) {
    throw ParseError(e.message(), e.line(), e.column(), path);
  }
  std::vector<Term> args;
  if (m[3].matched) {
    std::string inner = trim(m[3].str());
    if (!inner.empty()) args = parse_term("t(" + inner + ")").args;
  }
  return bind_program(std::move(p), m[2].matched ? m[2].str() : "", source_variables(text), std::move(args));
}

ProportionFile read_proportion_file(const std::string& path) {
  std::string text = read_text_file(path);
  std::string base = std::filesystem::path(path).parent_path().string();
  if (base.empty()) base = ".";

  std::optional<Program> progs[4];
  std::optional<DomainSig> source, target;
  std::string forms_file, fname, gname;
  std::optional<Line> line;
  std::vector<std::string> pvec, rvec, probe;

  std::stringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, lineno, 1, path); };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string l = trim(raw.substr(0, raw.find('#')));
    if (l.empty()) continue;
    std::stringstream words(l);
    std::string kw;
    words >> kw;
    std::string rest;
    std::getline(words, rest);
    rest = trim(rest);

    if (kw == "domain") {
      auto colon = rest.find(':');
      if (colon == std::string::npos) fail("domain line needs ':'");
      auto head = split(rest.substr(0, colon), ' ');
      if (head.size() != 2 || (head[0] != "source" && head[0] != "target"))
        fail("expected 'domain source|target NAME:'");
      DomainSig d;
      d.name = head[1];
      for (const auto& clause : split(rest.substr(colon + 1), ';')) {
        std::stringstream cs(clause);
        std::string which;
        cs >> which;
        std::string names;
        std::getline(cs, names);
        auto& dst = which == "preds" ? d.preds : d.functors;
        if (which != "preds" && which != "functors") fail("expected 'preds' or 'functors', found '" + which + "'");
        for (const auto& s : split(names, ',')) dst.insert(s);
      }
      (head[0] == "source" ? source : target) = std::move(d);
      continue;
    }

    auto eq = rest.find('=');
    if (eq == std::string::npos) fail("expected '='");
    std::string key = trim(rest.substr(0, eq));
    std::string value = trim(rest.substr(eq + 1));

    if (kw == "program") {
      static const std::string names = "PQRS";
      auto idx = names.find(key);
      if (key.size() != 1 || idx == std::string::npos) fail("program name must be P, Q, R or S");
      if (value == "?") {
        if (key != "S") fail("only S may be left open");
        continue;
      }
      progs[idx] = read_program_file(resolve(base, value));
    } else if (kw == "witness") {
      if (key == "forms") forms_file = value;
      else if (key == "F") fname = value;
      else if (key == "G") gname = value;
      else if (key == "line") {
        line = parse_line(value);
        if (!line) fail("unknown identity line '" + value + "'");
      } else if (key == "Pvec") pvec = split(value, ';');
      else if (key == "Rvec") rvec = split(value, ';');
      else if (key == "probe") probe = split(value, ';');
      else fail("unknown witness field '" + key + "'");
    } else {
      fail("unknown directive '" + kw + "'");
    }
  }

  for (int i = 0; i < 3; ++i)
    if (!progs[i]) throw ParseError(std::string("missing program ") + "PQR"[i], lineno, 1, path);
  if (!source || !target) throw ParseError("both domain source and domain target are required", lineno, 1, path);

  ProportionFile out{ProportionProblem::make(*progs[0], *progs[1], *progs[2], *source, *target), progs[3], std::nullopt,
                     nullptr};
  if (!forms_file.empty()) out.library = std::make_shared<FormLibrary>(read_form_file(resolve(base, forms_file)));

  if (!fname.empty() || !gname.empty()) {
    if (!out.library) throw ParseError("witness needs 'witness forms = FILE'", lineno, 1, path);
    auto lookup = [&](const std::string& n) {
      const FormDef* d = out.library->find(n);
      if (!d) throw ParseError("unknown form '" + n + "'", lineno, 1, path);
      return *d;
    };
    ProportionWitness w;
    w.F = lookup(fname);
    w.G = lookup(gname);
    w.line = line.value_or(Line::FGFG);
    for (const auto& s : pvec) w.Pvec.push_back(read_bound_program(s, base));
    for (const auto& s : rvec) w.Rvec.push_back(read_bound_program(s, base));
    if (!probe.empty()) {
      w.probe.programs.clear();
      for (const auto& s : probe) w.probe.programs.push_back(read_program_file(resolve(base, s)));
    }
    w.library = out.library;
    out.witness = std::move(w);
  }
  return out;
}

}  // namespace horn
