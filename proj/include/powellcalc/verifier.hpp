#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace powellcalc {

enum class ScenarioStatus { pass, fail, finding };

std::string to_string(ScenarioStatus s);

struct ScenarioResult {
  std::string id;
  ScenarioStatus status = ScenarioStatus::pass;
  std::string witness;  // empty on a plain pass
  double ms = 0.0;
};

struct VerifyOptions {
  std::size_t jobs = 1;  // worker threads; scenarios never share state
};

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses a scenario file and runs every scenario, returning results in file
// order.  The format is strict: unknown keys, unknown kinds, duplicate ids,
// or malformed parameters raise ScenarioError before anything runs.
std::vector<ScenarioResult> run_scenarios(const std::string& json_text,
                                          const VerifyOptions& options = {});

// Runs the single scenario with the given id; throws ScenarioError if absent.
ScenarioResult run_scenario_by_id(const std::string& json_text,
                                  const std::string& id);

// Structural validation without running anything: the strict parse plus the
// anchor policy (every anchor is either "plumbing" or contains a quoted
// statement of the fact being checked).  Throws ScenarioError on problems.
void lint_scenarios(const std::string& json_text);

// True when no result carries status fail (findings are reportable outcomes,
// not failures).
bool all_clean(const std::vector<ScenarioResult>& results);

std::string emit_json(const std::vector<ScenarioResult>& results);
std::string emit_text(const std::vector<ScenarioResult>& results);

// Scenario files embedded at build time, addressable by short name.
struct BundledFile {
  std::string name;
  std::string content;
};
const std::vector<BundledFile>& bundled_scenarios();

// Content of the bundled file with the given name ("paper-core" or a name
// ending in ".json"); nullptr when absent.
const std::string* find_bundled(const std::string& name);

}  // namespace powellcalc
