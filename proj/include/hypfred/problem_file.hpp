#pragma once

#include "hypfred/problem.hpp"

#include <json.hpp>

#include <filesystem>
#include <istream>

namespace hypfred {

/// JSON problem document:
///   { "n": 2, "m": 1, "a": ["1", "-1"], "b": [[..],[..]], "g": .., "h": .., "r": ..,
///     "f": [..], "volterra": true, "description": "..." }
/// Entries are expression strings or plain numbers. b, g, h, r and f default
/// to zero and volterra to true. Errors are ValidationError naming the key.
ProblemData problem_from_json(const nlohmann::json& doc);
ProblemData read_problem(std::istream& in);
ProblemData read_problem(const std::filesystem::path& path);

nlohmann::ordered_json problem_to_json(const ProblemData& data);

} // namespace hypfred
