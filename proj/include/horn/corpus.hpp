// Corpus listing and the golden-output suite.
#pragma once

#include <string>
#include <vector>

namespace horn {

struct CorpusEntry {
  std::string name;
  std::string kind;  // program, form or proportion
  std::string path;
  std::string anchor;  // first comment line of the file
};

// Directory the build was configured with.
std::string default_corpus_dir();
std::vector<CorpusEntry> list_corpus(const std::string& root);

enum class Comparison { Exact, UpToVariants };

// One CLI invocation and its expected output. Arguments starting with "@/"
// (also after "=" in --bind values) are resolved against the corpus root.
struct GoldenCase {
  std::string name;
  std::vector<std::string> args;
  std::string expected;  // path relative to the corpus root
  Comparison comparison = Comparison::Exact;
  std::string anchor;
  int exit_code = 0;
};

struct GoldenOutcome {
  std::string name;
  bool passed = false;
  std::string diff;
  double millis = 0;
};

struct GoldenReport {
  std::vector<GoldenOutcome> outcomes;
  bool all_passed() const;
  std::string render() const;
};

std::vector<GoldenCase> load_manifest(const std::string& path);
GoldenOutcome run_golden_case(const GoldenCase& c, const std::string& root);
// Runs every case of <root>/golden/manifest.json concurrently; the report
// keeps manifest order.
GoldenReport run_golden_suite(const std::string& root);

}  // namespace horn
