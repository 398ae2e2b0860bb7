#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vcprov/cloud.hpp"
#include "vcprov/mdp.hpp"
#include "vcprov/provisioner.hpp"

namespace vcprov {

/// Name of the pseudo-random scheme used by generate_trace: the raw
/// mt19937_64 stream mapped to [0, 1) through its top 53 bits. Recorded in
/// results so runs can be reproduced across platforms and standard
/// libraries.
inline constexpr const char* kGeneratorName = "mt19937_64-u53";

/// A realized demand path. `levels` holds level indices into the demand
/// model that produced it.
struct DemandTrace {
    std::uint64_t seed = 0;
    std::string generator;
    std::vector<int> levels;
};

/// Samples a demand path of `length` epochs starting from
/// `initial_level_id` (empty selects the model's first level). The same
/// (model, length, seed, initial level) quadruple always yields the same
/// path, on any platform. Throws std::invalid_argument on a non-positive
/// length or unknown level id.
DemandTrace generate_trace(const DemandModel& model, int length, std::uint64_t seed,
                           std::string_view initial_level_id = {});

/// What happened in one epoch: the demand observed when the decision was
/// made, the configuration chosen for the epoch, and whether that
/// configuration failed to cover the demand realized during the epoch.
struct EpochRecord {
    int epoch = 0;
    int demand_level = 0;
    int config = 0;
    int allocated = 0;
    int migrations = 0;
    bool violation = false;

    bool operator==(const EpochRecord&) const = default;
};

/// Complete log of one policy run on one trace.
struct RunResult {
    std::string policy_label;
    std::uint64_t seed = 0;
    std::string generator;
    std::vector<std::string> level_ids; ///< demand level names, by index
    std::vector<EpochRecord> epochs;
    std::int64_t total_allocated_epochs = 0; ///< unit-epochs: Σ allocated over epochs
    std::int64_t total_migrations = 0;
    std::int64_t total_violations = 0;

    bool operator==(const RunResult&) const = default;
};

/// Replays `policy` along a demand trace. At epoch t the policy observes
/// (current configuration, trace.levels[t]) and commits the configuration
/// held for epoch t; feasibility is judged against the demand realized at
/// t+1 (the final epoch is judged against its own demand). Starts from
/// configuration index `initial_config` (0 is the all-zero configuration).
/// Throws std::invalid_argument on an empty trace, out-of-range levels or
/// initial configuration, or a policy that does not fit the index.
RunResult simulate(const Policy& policy, const StateIndex& index, const ProvisioningSpec& spec,
                   const DemandTrace& trace, int initial_config = 0,
                   std::string label = "policy");

struct RunSummaryRow {
    std::string policy;
    std::uint64_t seed = 0;
    std::int64_t total_migrations = 0;
    double mean_allocated = 0.0;
    std::int64_t violations = 0;
};

/// Per-run totals plus the running cumulative migration count per epoch
/// (one series per run, aligned with `rows`).
struct RunSummary {
    std::vector<RunSummaryRow> rows;
    std::vector<std::vector<std::int64_t>> cumulative_migrations;
};

/// Aggregates runs that share a trace length. Throws std::invalid_argument
/// when runs have differing epoch counts or no runs are given.
RunSummary summarize(const std::vector<RunResult>& results);

} // namespace vcprov
