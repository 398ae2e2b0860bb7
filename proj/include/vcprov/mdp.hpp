#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vcprov {

/// One possible successor of a (state, action) pair. The reward is attached
/// to the transition so that it may depend on the realized successor.
struct Transition {
    int next_state = 0;
    double probability = 0.0;
    double reward = 0.0;
};

/// An action available in some state, identified by a caller-chosen id.
/// Ids only need to be unique within a state.
struct Action {
    int id = 0;
    std::vector<Transition> transitions;
};

/// Finite discounted MDP in tabular form. `actions[s]` lists the actions
/// available in state s; every state must offer at least one action and
/// every action's transition probabilities must sum to one.
struct TabularMdp {
    int num_states = 0;
    std::vector<std::vector<Action>> actions;
    double discount = 0.95;
};

/// Deterministic stationary policy: `action_of[s]` is the id of the action
/// taken in state s.
struct Policy {
    std::vector<int> action_of;

    bool operator==(const Policy&) const = default;
};

/// State values under some policy (or the optimal values).
struct ValueFunction {
    std::vector<double> value_of;
};

/// A single defect found by validate_mdp. `state` and `action` are -1 when
/// the defect is not tied to one.
struct ValidationIssue {
    int state = -1;
    int action = -1;
    std::string message;
};

using ValidationReport = std::vector<ValidationIssue>;

/// Margin a challenger's Q-value must win by before it displaces the
/// incumbent action; keeps argmax decisions stable under roundoff.
inline constexpr double kTieTolerance = 1e-9;

/// Probability mass bookkeeping tolerance for validation.
inline constexpr double kProbabilityTolerance = 1e-12;

/// States up to this count are evaluated with a direct linear solve;
/// larger models fall back to fixed-point sweeps.
inline constexpr int kDenseEvaluationLimit = 2000;

/// Checks structural invariants: action lists sized to num_states, at least
/// one action per state with ids unique within the state, finite rewards,
/// successor indices in range, probability rows summing to one within
/// kProbabilityTolerance, and discount in [0, 1). Returns every defect
/// found; an empty report means the model is well formed.
ValidationReport validate_mdp(const TabularMdp& mdp);

/// Exact values of a fixed policy. The returned vector V satisfies the
/// Bellman residual bound max_s |(T_pi V)(s) - V(s)| <= tolerance.
/// Throws std::invalid_argument if the policy is the wrong size, selects an
/// action id a state does not offer, or tolerance is not positive.
ValueFunction policy_evaluation(const TabularMdp& mdp, const Policy& policy,
                                double tolerance = 1e-9);

/// One-step greedy policy with respect to `values`. Actions are scanned in
/// ascending id order and a challenger must beat the current best Q-value
/// by at least kTieTolerance, so near-ties resolve to the lowest id.
/// Throws std::invalid_argument on size mismatch or non-finite values.
Policy policy_improvement(const TabularMdp& mdp, const ValueFunction& values);

struct PolicyIterationResult {
    Policy policy;
    ValueFunction values;
    int iterations = 0;
};

/// Howard-style policy iteration. Starts from `initial` when given,
/// otherwise from the lowest action id in every state. A state's action is
/// only replaced when the challenger improves on the incumbent's Q-value by
/// at least kTieTolerance, which makes the stable point well defined.
/// Iteration count is bounded by the number of deterministic policies; a
/// safety cap of 10000 iterations turns a non-terminating run into a
/// std::logic_error. Throws std::invalid_argument if the model fails
/// validate_mdp or the initial policy is unusable.
PolicyIterationResult policy_iteration(const TabularMdp& mdp,
                                       std::optional<Policy> initial = std::nullopt);

struct ValueIterationResult {
    Policy policy;
    ValueFunction values;
    int sweeps = 0;
    bool converged = false;
};

/// Value iteration from V = 0. Sweeps stop once the max-norm change drops
/// to tolerance * (1 - discount) / (2 * discount), which bounds the
/// sup-norm distance to the optimal values by tolerance / 2 (a zero
/// discount converges after one sweep). If max_iterations sweeps pass
/// without reaching that threshold the result carries converged = false.
/// Throws std::invalid_argument if the model fails validate_mdp, tolerance
/// is not positive, or max_iterations is not positive.
ValueIterationResult value_iteration(const TabularMdp& mdp, double tolerance,
                                     int max_iterations);

} // namespace vcprov
