#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcprov/errors.hpp"
#include "vcprov/provisioner.hpp"

namespace vcprov {

/// Reads and validates a scenario file. Collects non-fatal findings into
/// `warnings` when given. Throws IoError when the file cannot be read and
/// ScenarioError (with the JSON path of the offending element) when the
/// content is malformed, has unknown or missing keys, or violates a model
/// invariant. Transition rows that sum to one within 1e-9 but not exactly
/// are renormalized.
ProvisioningSpec load_scenario(const std::filesystem::path& path,
                               std::vector<std::string>* warnings = nullptr);

/// Same contract as load_scenario, for an already-parsed document.
ProvisioningSpec scenario_from_json(const nlohmann::json& document,
                                    std::vector<std::string>* warnings = nullptr);

/// Serializes a spec so that load of the dump reproduces it field for
/// field. Object keys are emitted in sorted order.
nlohmann::json scenario_to_json(const ProvisioningSpec& spec);

/// FNV-1a 64-bit hash of the spec's canonical JSON serialization, as a
/// 16-digit lowercase hex string. Stable across platforms; used to tie
/// result files back to the exact scenario that produced them.
std::string spec_hash(const ProvisioningSpec& spec);

} // namespace vcprov
