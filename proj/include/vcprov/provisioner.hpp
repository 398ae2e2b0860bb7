#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vcprov/cloud.hpp"
#include "vcprov/mdp.hpp"

namespace vcprov {

/// Reward shape for one provisioning epoch: a fixed budget minus a charge
/// of alpha per extra allocated unit, beta per VM placement, and a flat
/// penalty whenever the chosen configuration cannot serve the realized
/// demand.
struct RewardParams {
    double max_resources = 0.0;
    double alpha = 1.0;
    double beta = 0.0;
    double violation_penalty = 0.0;
};

/// Full description of a provisioning problem.
struct ProvisioningSpec {
    Topology topology;
    DemandModel demand;
    int granularity = 1;
    RewardParams reward;
    double discount = 0.95;
};

struct SpecReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};

/// Cross-component checks on a spec whose parts are individually well
/// formed: the granularity divides every capacity, the configuration count
/// stays under the enumeration cap, every demand level can be served by
/// the full topology, the reward terms are non-negative and finite, and
/// the discount lies in [0, 1). Warns when max_resources cannot cover the
/// allocation charge of the largest configuration.
SpecReport validate_spec(const ProvisioningSpec& spec);

/// Bijection between flat MDP state ids and (configuration, demand level)
/// pairs. States are configuration-major: state = config * L + level.
class StateIndex {
public:
    StateIndex() = default;
    /// Throws std::invalid_argument unless both counts are positive.
    StateIndex(int num_configurations, int num_levels);

    int num_states() const { return num_configurations_ * num_levels_; }
    int num_configurations() const { return num_configurations_; }
    int num_levels() const { return num_levels_; }
    /// Flat id of (configuration, level); bounds-checked.
    int state_of(int configuration, int level) const;
    /// Inverse of state_of; bounds-checked.
    std::pair<int, int> pair_of(int state) const;

private:
    int num_configurations_ = 0;
    int num_levels_ = 0;
};

/// Index for the spec's state space without compiling transitions: one
/// state per (configuration, demand level) pair. Throws
/// std::invalid_argument when validate_spec reports errors.
StateIndex build_state_index(const ProvisioningSpec& spec);

/// Compiles the provisioning problem into a tabular MDP. States are
/// (configuration, demand level) pairs laid out by StateIndex; action k
/// moves to configuration k regardless of state, so action ids coincide
/// with configuration indices. Demand evolves by the spec's chain
/// independently of the action, and each transition's reward charges the
/// allocation delta, the placements needed, and the violation penalty
/// against the realized successor level. Transitions with zero probability
/// are dropped. Throws std::invalid_argument when validate_spec reports
/// errors.
std::pair<TabularMdp, StateIndex> build_mdp(const ProvisioningSpec& spec);

/// Myopic heuristic: in every state, lease the cheapest configuration that
/// serves the current demand level. Ties go to the fewest placements from
/// the current configuration, then to the lowest configuration index. The
/// index must stem from the same spec. Throws std::invalid_argument when
/// validate_spec reports errors or the index disagrees with the spec.
Policy greedy_policy(const ProvisioningSpec& spec, const StateIndex& index);

struct ProvisioningSolution {
    Policy policy;
    ValueFunction values;
    StateIndex index;
    int iterations = 0;
};

/// Solves the compiled MDP with policy_iteration.
ProvisioningSolution mdp_policy(const ProvisioningSpec& spec);

struct PolicyComparison {
    /// value of `left` minus value of `right`, per state
    std::vector<double> difference;
    double min_difference = 0.0;
    double max_difference = 0.0;
    double mean_difference = 0.0;
};

/// Evaluates both policies on the same model and reports the per-state
/// value gap (left minus right).
PolicyComparison compare_policies(const TabularMdp& mdp, const Policy& left,
                                  const Policy& right, double tolerance = 1e-9);

} // namespace vcprov
