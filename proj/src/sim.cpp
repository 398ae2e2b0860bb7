#include "vcprov/sim.hpp"

#include <random>
#include <stdexcept>

namespace vcprov {

namespace {

/// Uniform draw in [0, 1) from the generator's top 53 bits. Unlike
/// std::uniform_real_distribution this mapping is pinned by the standard's
/// mt19937_64 definition alone, so traces replay identically everywhere.
double next_u53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_level(const std::vector<double>& row, double u) {
    double cumulative = 0.0;
    int last_positive = -1;
    for (size_t j = 0; j < row.size(); ++j) {
        if (row[j] <= 0.0) continue;
        cumulative += row[j];
        last_positive = static_cast<int>(j);
        if (u < cumulative) return last_positive;
    }
    // Roundoff can leave the cumulative sum a hair under one; charge the
    // remainder to the last reachable level.
    return last_positive;
}

} // namespace

DemandTrace generate_trace(const DemandModel& model, int length, std::uint64_t seed,
                           std::string_view initial_level_id) {
    if (length < 1) {
        throw std::invalid_argument("generate_trace: length must be positive");
    }
    const int initial =
        initial_level_id.empty() ? 0 : model.level_index(initial_level_id);

    DemandTrace trace;
    trace.seed = seed;
    trace.generator = kGeneratorName;
    trace.levels.reserve(static_cast<size_t>(length));
    trace.levels.push_back(initial);

    std::mt19937_64 rng(seed);
    const auto& matrix = model.transition_matrix();
    for (int t = 1; t < length; ++t) {
        const auto& row = matrix[static_cast<size_t>(trace.levels.back())];
        trace.levels.push_back(sample_level(row, next_u53(rng)));
    }
    return trace;
}

RunResult simulate(const Policy& policy, const StateIndex& index, const ProvisioningSpec& spec,
                   const DemandTrace& trace, int initial_config, std::string label) {
    if (trace.levels.empty()) {
        throw std::invalid_argument("simulate: trace has no epochs");
    }
    for (int level : trace.levels) {
        if (level < 0 || level >= index.num_levels()) {
            throw std::invalid_argument("simulate: trace level " + std::to_string(level) +
                                        " is out of range");
        }
    }
    if (initial_config < 0 || initial_config >= index.num_configurations()) {
        throw std::invalid_argument("simulate: initial configuration " +
                                    std::to_string(initial_config) + " is out of range");
    }
    if (policy.action_of.size() != static_cast<size_t>(index.num_states())) {
        throw std::invalid_argument("simulate: policy covers " +
                                    std::to_string(policy.action_of.size()) +
                                    " states, index has " + std::to_string(index.num_states()));
    }
    for (int action : policy.action_of) {
        if (action < 0 || action >= index.num_configurations()) {
            throw std::invalid_argument("simulate: policy targets configuration " +
                                        std::to_string(action) + ", which is out of range");
        }
    }

    const std::vector<Configuration> configs =
        enumerate_configurations(spec.topology, spec.granularity);
    if (static_cast<int>(configs.size()) != index.num_configurations() ||
        spec.demand.num_levels() != index.num_levels()) {
        throw std::invalid_argument("simulate: index was built from a different spec");
    }

    RunResult result;
    result.policy_label = std::move(label);
    result.seed = trace.seed;
    result.generator = trace.generator;
    result.level_ids.reserve(static_cast<size_t>(index.num_levels()));
    for (const DemandLevel& level : spec.demand.levels()) result.level_ids.push_back(level.id);
    result.epochs.reserve(trace.levels.size());

    int current = initial_config;
    const int horizon = static_cast<int>(trace.levels.size());
    for (int t = 0; t < horizon; ++t) {
        const int observed = trace.levels[static_cast<size_t>(t)];
        const int chosen =
            policy.action_of[static_cast<size_t>(index.state_of(current, observed))];
        const int realized =
            t + 1 < horizon ? trace.levels[static_cast<size_t>(t + 1)] : observed;

        EpochRecord record;
        record.epoch = t;
        record.demand_level = observed;
        record.config = chosen;
        record.allocated = total_allocated(configs[static_cast<size_t>(chosen)]);
        record.migrations = migration_count(configs[static_cast<size_t>(current)],
                                            configs[static_cast<size_t>(chosen)]);
        record.violation = !is_feasible(configs[static_cast<size_t>(chosen)], realized, spec.demand);

        result.total_allocated_epochs += record.allocated;
        result.total_migrations += record.migrations;
        result.total_violations += record.violation ? 1 : 0;
        result.epochs.push_back(record);
        current = chosen;
    }
    return result;
}

RunSummary summarize(const std::vector<RunResult>& results) {
    if (results.empty()) {
        throw std::invalid_argument("summarize: no runs given");
    }
    const size_t horizon = results.front().epochs.size();
    for (const RunResult& result : results) {
        if (result.epochs.size() != horizon) {
            throw std::invalid_argument("summarize: runs cover different epoch counts");
        }
    }

    RunSummary summary;
    summary.rows.reserve(results.size());
    summary.cumulative_migrations.reserve(results.size());
    for (const RunResult& result : results) {
        RunSummaryRow row;
        row.policy = result.policy_label;
        row.seed = result.seed;
        row.total_migrations = result.total_migrations;
        row.violations = result.total_violations;

        std::vector<std::int64_t> running;
        running.reserve(horizon);
        std::int64_t cumulative = 0;
        for (const EpochRecord& record : result.epochs) {
            cumulative += record.migrations;
            running.push_back(cumulative);
        }
        row.mean_allocated = static_cast<double>(result.total_allocated_epochs) /
                             static_cast<double>(horizon);
        summary.rows.push_back(std::move(row));
        summary.cumulative_migrations.push_back(std::move(running));
    }
    return summary;
}

} // namespace vcprov
