#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ocevi/envgen.hpp"
#include "ocevi/planner.hpp"

namespace ocevi {

using Json = nlohmann::json;

// MDP documents: {S, A, H, s_init, P[h][s][a][s'], r[h][s][a], optional state_names,
// action_names and meta}. Doubles are written in shortest round-trip form.
Json mdp_to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const Json& doc);

Json policy_to_json(const Policy& policy);
Policy policy_from_json(const Json& doc);

Json values_to_json(const ValueTables& values);
Json meta_to_json(const HardInstanceMeta& meta);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Loads an MDP document; structural problems throw std::invalid_argument.
/// Semantic invariants (row sums, reward range) are left to validate().
TabularMdp read_mdp_file(const std::filesystem::path& path);

}  // namespace ocevi
