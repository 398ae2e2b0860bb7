#include "vcprov/provisioner.hpp"

#include <cmath>
#include <stdexcept>

namespace vcprov {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string joined;
    for (const std::string& error : errors) {
        if (!joined.empty()) joined += "; ";
        joined += error;
    }
    return joined;
}

void require_valid_spec(const ProvisioningSpec& spec, const char* caller) {
    SpecReport report = validate_spec(spec);
    if (!report.errors.empty()) {
        throw std::invalid_argument(std::string(caller) + ": invalid spec: " +
                                    join_errors(report.errors));
    }
}

} // namespace

SpecReport validate_spec(const ProvisioningSpec& spec) {
    SpecReport report;
    if (spec.granularity < 1) {
        report.errors.push_back("granularity must be positive");
    } else {
        for (const RsuNode& node : spec.topology.nodes()) {
            if (node.capacity % spec.granularity != 0) {
                report.errors.push_back("granularity " + std::to_string(spec.granularity) +
                                        " does not divide capacity of node '" + node.id + "'");
            }
        }
        if (report.errors.empty()) {
            try {
                enumerate_configurations(spec.topology, spec.granularity);
            } catch (const std::length_error& error) {
                report.errors.push_back(error.what());
            }
        }
    }
    for (const DemandLevel& level : spec.demand.levels()) {
        if (level.required_units > spec.topology.total_capacity()) {
            report.errors.push_back("scenario infeasible for level '" + level.id + "': requires " +
                                    std::to_string(level.required_units) +
                                    " units but total capacity is " +
                                    std::to_string(spec.topology.total_capacity()));
        }
    }
    const RewardParams& reward = spec.reward;
    const auto check_non_negative = [&report](double value, const char* name) {
        if (!std::isfinite(value) || value < 0.0) {
            report.errors.push_back(std::string(name) + " must be a finite non-negative number");
        }
    };
    check_non_negative(reward.max_resources, "max_resources");
    check_non_negative(reward.alpha, "alpha");
    check_non_negative(reward.beta, "beta");
    check_non_negative(reward.violation_penalty, "violation_penalty");
    if (!(spec.discount >= 0.0) || !(spec.discount < 1.0)) {
        report.errors.push_back("discount must lie in [0, 1)");
    }
    if (report.errors.empty() &&
        reward.max_resources < reward.alpha * spec.topology.total_capacity()) {
        report.warnings.push_back(
            "max_resources is below the allocation charge of a fully leased topology; "
            "rewards can go negative");
    }
    return report;
}

StateIndex::StateIndex(int num_configurations, int num_levels)
    : num_configurations_(num_configurations), num_levels_(num_levels) {
    if (num_configurations < 1 || num_levels < 1) {
        throw std::invalid_argument("state index: counts must be positive");
    }
}

int StateIndex::state_of(int configuration, int level) const {
    if (configuration < 0 || configuration >= num_configurations_) {
        throw std::invalid_argument("state index: configuration " +
                                    std::to_string(configuration) + " is out of range");
    }
    if (level < 0 || level >= num_levels_) {
        throw std::invalid_argument("state index: level " + std::to_string(level) +
                                    " is out of range");
    }
    return configuration * num_levels_ + level;
}

std::pair<int, int> StateIndex::pair_of(int state) const {
    if (state < 0 || state >= num_states()) {
        throw std::invalid_argument("state index: state " + std::to_string(state) +
                                    " is out of range");
    }
    return {state / num_levels_, state % num_levels_};
}

StateIndex build_state_index(const ProvisioningSpec& spec) {
    require_valid_spec(spec, "build_state_index");
    const std::vector<Configuration> configs =
        enumerate_configurations(spec.topology, spec.granularity);
    return StateIndex(static_cast<int>(configs.size()), spec.demand.num_levels());
}

std::pair<TabularMdp, StateIndex> build_mdp(const ProvisioningSpec& spec) {
    require_valid_spec(spec, "build_mdp");

    const std::vector<Configuration> configs =
        enumerate_configurations(spec.topology, spec.granularity);
    const int num_configs = static_cast<int>(configs.size());
    const int num_levels = spec.demand.num_levels();
    const StateIndex index(num_configs, num_levels);

    std::vector<int> allocated(configs.size());
    for (size_t c = 0; c < configs.size(); ++c) allocated[c] = total_allocated(configs[c]);

    const auto& matrix = spec.demand.transition_matrix();
    const RewardParams& reward = spec.reward;

    TabularMdp mdp;
    mdp.num_states = index.num_states();
    mdp.discount = spec.discount;
    mdp.actions.resize(static_cast<size_t>(mdp.num_states));

    for (int c = 0; c < num_configs; ++c) {
        for (int level = 0; level < num_levels; ++level) {
            const int state = index.state_of(c, level);
            auto& actions = mdp.actions[static_cast<size_t>(state)];
            actions.reserve(static_cast<size_t>(num_configs));
            for (int target = 0; target < num_configs; ++target) {
                Action action;
                action.id = target;
                const double base =
                    reward.max_resources -
                    reward.alpha * (allocated[static_cast<size_t>(target)] -
                                    allocated[static_cast<size_t>(c)]) -
                    reward.beta * migration_count(configs[static_cast<size_t>(c)],
                                                  configs[static_cast<size_t>(target)]);
                for (int next_level = 0; next_level < num_levels; ++next_level) {
                    const double probability =
                        matrix[static_cast<size_t>(level)][static_cast<size_t>(next_level)];
                    if (probability == 0.0) continue;
                    Transition transition;
                    transition.next_state = index.state_of(target, next_level);
                    transition.probability = probability;
                    transition.reward =
                        is_feasible(configs[static_cast<size_t>(target)], next_level, spec.demand)
                            ? base
                            : base - reward.violation_penalty;
                    action.transitions.push_back(transition);
                }
                actions.push_back(std::move(action));
            }
        }
    }

    ValidationReport report = validate_mdp(mdp);
    if (!report.empty()) {
        throw std::logic_error("build_mdp: compiled model failed validation: " +
                               report.front().message);
    }
    return {std::move(mdp), index};
}

Policy greedy_policy(const ProvisioningSpec& spec, const StateIndex& index) {
    require_valid_spec(spec, "greedy_policy");

    const std::vector<Configuration> configs =
        enumerate_configurations(spec.topology, spec.granularity);
    if (index.num_configurations() != static_cast<int>(configs.size()) ||
        index.num_levels() != spec.demand.num_levels()) {
        throw std::invalid_argument("greedy_policy: index was built from a different spec");
    }

    std::vector<int> allocated(configs.size());
    for (size_t c = 0; c < configs.size(); ++c) allocated[c] = total_allocated(configs[c]);

    Policy policy;
    policy.action_of.resize(static_cast<size_t>(index.num_states()));
    for (int c = 0; c < index.num_configurations(); ++c) {
        for (int level = 0; level < index.num_levels(); ++level) {
            const int required =
                spec.demand.levels()[static_cast<size_t>(level)].required_units;
            int best = -1;
            int best_allocated = 0;
            int best_placements = 0;
            for (int target = 0; target < index.num_configurations(); ++target) {
                if (allocated[static_cast<size_t>(target)] < required) continue;
                const int placements = migration_count(configs[static_cast<size_t>(c)],
                                                       configs[static_cast<size_t>(target)]);
                if (best < 0 || allocated[static_cast<size_t>(target)] < best_allocated ||
                    (allocated[static_cast<size_t>(target)] == best_allocated &&
                     placements < best_placements)) {
                    best = target;
                    best_allocated = allocated[static_cast<size_t>(target)];
                    best_placements = placements;
                }
            }
            if (best < 0) {
                throw std::logic_error("greedy_policy: no feasible configuration for level '" +
                                       spec.demand.levels()[static_cast<size_t>(level)].id + "'");
            }
            policy.action_of[static_cast<size_t>(index.state_of(c, level))] = best;
        }
    }
    return policy;
}

ProvisioningSolution mdp_policy(const ProvisioningSpec& spec) {
    auto [mdp, index] = build_mdp(spec);
    PolicyIterationResult solved = policy_iteration(mdp);
    return {std::move(solved.policy), std::move(solved.values), index, solved.iterations};
}

PolicyComparison compare_policies(const TabularMdp& mdp, const Policy& left,
                                  const Policy& right, double tolerance) {
    const ValueFunction left_values = policy_evaluation(mdp, left, tolerance);
    const ValueFunction right_values = policy_evaluation(mdp, right, tolerance);

    PolicyComparison comparison;
    comparison.difference.resize(static_cast<size_t>(mdp.num_states));
    if (mdp.num_states == 0) return comparison;
    double sum = 0.0;
    for (int s = 0; s < mdp.num_states; ++s) {
        const double diff = left_values.value_of[static_cast<size_t>(s)] -
                            right_values.value_of[static_cast<size_t>(s)];
        comparison.difference[static_cast<size_t>(s)] = diff;
        sum += diff;
        if (s == 0) {
            comparison.min_difference = diff;
            comparison.max_difference = diff;
        } else {
            comparison.min_difference = std::min(comparison.min_difference, diff);
            comparison.max_difference = std::max(comparison.max_difference, diff);
        }
    }
    comparison.mean_difference = sum / mdp.num_states;
    return comparison;
}

} // namespace vcprov
