#include "horn/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <json.hpp>
#include <sstream>

#include "horn/cli.hpp"
#include "horn/parser.hpp"

#ifndef HORN_CORPUS_DIR
#define HORN_CORPUS_DIR "corpus"
#endif

namespace horn {

namespace fs = std::filesystem;

std::string default_corpus_dir() { return HORN_CORPUS_DIR; }

std::vector<CorpusEntry> list_corpus(const std::string& root) {
  const std::pair<const char*, const char*> kinds[] = {
      {"programs", "program"}, {"forms", "form"}, {"proportions", "proportion"}};
  std::vector<CorpusEntry> out;
  for (const auto& [dir, kind] : kinds) {
    fs::path d = fs::path(root) / dir;
    if (!fs::is_directory(d)) continue;
    for (const auto& e : fs::directory_iterator(d)) {
      if (!e.is_regular_file()) continue;
      CorpusEntry entry{e.path().stem().string(), kind, e.path().string(), ""};
      std::ifstream in(e.path());
      std::string first;
      std::getline(in, first);
      if (!first.empty() && (first[0] == '%' || first[0] == '#')) {
        auto b = first.find_first_not_of("%# ");
        entry.anchor = b == std::string::npos ? "" : first.substr(b);
      }
      out.push_back(std::move(entry));
    }
  }
  std::sort(out.begin(), out.end(), [](const CorpusEntry& a, const CorpusEntry& b) { return a.path < b.path; });
  return out;
}

bool GoldenReport::all_passed() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const GoldenOutcome& o) { return o.passed; });
}

std::string GoldenReport::render() const {
  std::ostringstream out;
  std::size_t passed = 0;
  for (const auto& o : outcomes) {
    passed += o.passed;
    out << (o.passed ? "PASS " : "FAIL ") << o.name << "\n";
    if (!o.passed) out << o.diff;
  }
  out << passed << "/" << outcomes.size() << " golden cases passed\n";
  return out.str();
}

std::vector<GoldenCase> load_manifest(const std::string& path) {
  auto j = nlohmann::json::parse(read_text_file(path));
  std::vector<GoldenCase> out;
  for (const auto& c : j.at("cases")) {
    GoldenCase g;
    g.name = c.at("name").get<std::string>();
    g.args = c.at("args").get<std::vector<std::string>>();
    g.expected = c.at("expected").get<std::string>();
    g.comparison = c.value("comparison", "exact") == "variants" ? Comparison::UpToVariants : Comparison::Exact;
    g.anchor = c.value("anchor", "");
    g.exit_code = c.value("exit", 0);
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

std::string resolve_args(std::string s, const std::string& root) {
  const std::string marker = "@/";
  for (auto pos = s.find(marker); pos != std::string::npos; pos = s.find(marker, pos + root.size() + 1))
    s.replace(pos, marker.size(), root + "/");
  return s;
}

bool same_programs(const std::string& a, const std::string& b) {
  try {
    return parse_program(a) == parse_program(b);
  } catch (const ParseError&) {
    return false;
  }
}

}  // namespace

GoldenOutcome run_golden_case(const GoldenCase& c, const std::string& root) {
  GoldenOutcome o;
  o.name = c.name;
  std::vector<std::string> args;
  for (const auto& a : c.args) args.push_back(resolve_args(a, root));

  std::ostringstream out, err;
  auto start = std::chrono::steady_clock::now();
  int code = run_cli(args, out, err);
  o.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::string expected;
  try {
    expected = read_text_file((fs::path(root) / c.expected).string());
  } catch (const IoError& e) {
    o.diff = std::string("  ") + e.what() + "\n";
    return o;
  }
  const std::string actual = out.str();
  bool same = c.comparison == Comparison::Exact ? actual == expected : same_programs(actual, expected);
  o.passed = same && code == c.exit_code;
  if (!o.passed) {
    std::ostringstream d;
    if (code != c.exit_code) d << "  exit code " << code << ", expected " << c.exit_code << "\n";
    if (!err.str().empty()) d << "  stderr: " << err.str();
    if (!same) d << "  expected:\n" << expected << "  actual:\n" << actual;
    o.diff = d.str();
  }
  return o;
}

GoldenReport run_golden_suite(const std::string& root) {
  auto cases = load_manifest((fs::path(root) / "golden" / "manifest.json").string());
  std::vector<std::future<GoldenOutcome>> jobs;
  for (const auto& c : cases)
    jobs.push_back(std::async(std::launch::async, [&c, &root] { return run_golden_case(c, root); }));
  GoldenReport rep;
  for (auto& j : jobs) rep.outcomes.push_back(j.get());
  return rep;
}

}  // namespace horn
