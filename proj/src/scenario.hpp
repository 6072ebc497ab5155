// Scenario configuration: JSON schema, validation, built-in scenarios.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mobility.hpp"

namespace minuet {

// A scenario document is plain JSON until resolved. Resolution fills in every
// defaultable key (producing the canonical form), expands the mobility section
// into concrete per-vehicle traces, and validates the whole document. All
// validation problems are reported together, each prefixed with the JSON path
// of the offending key.
struct ResolvedScenario {
  Scenario scenario;
  nlohmann::json canonical;  // original document with all defaults made explicit
  std::string hash;          // 16 hex digits over the canonical dump
};

// Returns the built-in scenario document, or nullopt for an unknown name.
std::optional<nlohmann::json> builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

// Parses a JSON document from a file. On failure returns nullopt and appends
// a message to errors.
std::optional<nlohmann::json> load_scenario_json(const std::string& path,
                                                 std::vector<std::string>& errors);

// Validates and resolves a scenario document. `base_dir` is used to resolve a
// relative mobility.trace_file path ("" = current directory). On failure
// returns nullopt and appends one message per problem to errors.
std::optional<ResolvedScenario> resolve_scenario(const nlohmann::json& doc,
                                                 const std::string& base_dir,
                                                 std::vector<std::string>& errors);

// Convenience: apply common command-line overrides before resolution.
void override_seed(nlohmann::json& doc, uint64_t seed);
void override_strategy(nlohmann::json& doc, StrategyKind strategy);
void override_name(nlohmann::json& doc, const std::string& name);

// FNV-1a over a string, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace minuet
