#include "vcprov/mdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace vcprov {

namespace {

constexpr int kMaxPolicyIterations = 10000;
constexpr long kMaxEvaluationSweeps = 10000000;

const Action* find_action(const TabularMdp& mdp, int state, int action_id) {
    for (const Action& action : mdp.actions[static_cast<size_t>(state)]) {
        if (action.id == action_id) return &action;
    }
    return nullptr;
}

double q_value(const TabularMdp& mdp, const std::vector<double>& values,
               const Action& action) {
    double q = 0.0;
    for (const Transition& t : action.transitions) {
        q += t.probability * (t.reward + mdp.discount * values[static_cast<size_t>(t.next_state)]);
    }
    return q;
}

/// Action indices of a state sorted by ascending action id, so that scans
/// resolve ties toward the lowest id regardless of list order.
std::vector<int> id_sorted_order(const std::vector<Action>& actions) {
    std::vector<int> order(actions.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&actions](int a, int b) {
        return actions[static_cast<size_t>(a)].id < actions[static_cast<size_t>(b)].id;
    });
    return order;
}

void require_valid(const TabularMdp& mdp, const char* caller) {
    ValidationReport report = validate_mdp(mdp);
    if (!report.empty()) {
        throw std::invalid_argument(std::string(caller) + ": invalid model: " +
                                    report.front().message);
    }
}

/// One application of the fixed-policy Bellman operator; returns the
/// max-norm difference to the input vector.
double apply_policy_operator(const TabularMdp& mdp,
                             const std::vector<const Action*>& chosen,
                             const std::vector<double>& in,
                             std::vector<double>& out) {
    double delta = 0.0;
    for (size_t s = 0; s < chosen.size(); ++s) {
        out[s] = q_value(mdp, in, *chosen[s]);
        delta = std::max(delta, std::abs(out[s] - in[s]));
    }
    return delta;
}

std::vector<const Action*> resolve_policy(const TabularMdp& mdp, const Policy& policy,
                                          const char* caller) {
    if (policy.action_of.size() != static_cast<size_t>(mdp.num_states)) {
        throw std::invalid_argument(std::string(caller) + ": policy covers " +
                                    std::to_string(policy.action_of.size()) +
                                    " states, model has " + std::to_string(mdp.num_states));
    }
    std::vector<const Action*> chosen(static_cast<size_t>(mdp.num_states));
    for (int s = 0; s < mdp.num_states; ++s) {
        const Action* action = find_action(mdp, s, policy.action_of[static_cast<size_t>(s)]);
        if (action == nullptr) {
            throw std::invalid_argument(std::string(caller) + ": state " + std::to_string(s) +
                                        " offers no action with id " +
                                        std::to_string(policy.action_of[static_cast<size_t>(s)]));
        }
        chosen[static_cast<size_t>(s)] = action;
    }
    return chosen;
}

} // namespace

ValidationReport validate_mdp(const TabularMdp& mdp) {
    ValidationReport report;
    if (mdp.num_states < 0) {
        report.push_back({-1, -1, "num_states is negative"});
        return report;
    }
    if (!(mdp.discount >= 0.0) || !(mdp.discount < 1.0)) {
        report.push_back({-1, -1, "discount " + std::to_string(mdp.discount) +
                                      " is outside [0, 1)"});
    }
    if (mdp.actions.size() != static_cast<size_t>(mdp.num_states)) {
        report.push_back({-1, -1, "actions lists " + std::to_string(mdp.actions.size()) +
                                      " states, num_states is " +
                                      std::to_string(mdp.num_states)});
        return report;
    }
    for (int s = 0; s < mdp.num_states; ++s) {
        const auto& actions = mdp.actions[static_cast<size_t>(s)];
        if (actions.empty()) {
            report.push_back({s, -1, "state has no actions"});
            continue;
        }
        std::unordered_set<int> seen_ids;
        for (const Action& action : actions) {
            if (!seen_ids.insert(action.id).second) {
                report.push_back({s, action.id, "duplicate action id within state"});
            }
            if (action.transitions.empty()) {
                report.push_back({s, action.id, "action has no transitions"});
                continue;
            }
            double mass = 0.0;
            for (const Transition& t : action.transitions) {
                if (!std::isfinite(t.probability) || t.probability < 0.0) {
                    report.push_back({s, action.id,
                                      "transition probability " + std::to_string(t.probability) +
                                          " is not a finite non-negative number"});
                }
                if (!std::isfinite(t.reward)) {
                    report.push_back({s, action.id, "transition reward is not finite"});
                }
                if (t.next_state < 0 || t.next_state >= mdp.num_states) {
                    report.push_back({s, action.id,
                                      "successor state " + std::to_string(t.next_state) +
                                          " is out of range"});
                }
                mass += t.probability;
            }
            if (std::abs(mass - 1.0) > kProbabilityTolerance) {
                report.push_back({s, action.id,
                                  "transition probabilities sum to " + std::to_string(mass)});
            }
        }
    }
    return report;
}

ValueFunction policy_evaluation(const TabularMdp& mdp, const Policy& policy,
                                double tolerance) {
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("policy_evaluation: tolerance must be positive");
    }
    std::vector<const Action*> chosen = resolve_policy(mdp, policy, "policy_evaluation");
    const int n = mdp.num_states;
    std::vector<double> values(static_cast<size_t>(n), 0.0);
    if (n == 0) return {values};

    if (n <= kDenseEvaluationLimit) {
        Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd expected_reward = Eigen::VectorXd::Zero(n);
        for (int s = 0; s < n; ++s) {
            for (const Transition& t : chosen[static_cast<size_t>(s)]->transitions) {
                system(s, t.next_state) -= mdp.discount * t.probability;
                expected_reward(s) += t.probability * t.reward;
            }
        }
        Eigen::VectorXd solved = system.partialPivLu().solve(expected_reward);
        for (int s = 0; s < n; ++s) values[static_cast<size_t>(s)] = solved(s);
    }

    // Fixed-point sweeps guarantee the residual contract; after a direct
    // solve this usually exits on the first check.
    std::vector<double> next(static_cast<size_t>(n), 0.0);
    for (long sweep = 0; sweep < kMaxEvaluationSweeps; ++sweep) {
        double residual = apply_policy_operator(mdp, chosen, values, next);
        if (residual <= tolerance) return {values};
        values.swap(next);
    }
    throw std::logic_error("policy_evaluation: residual failed to converge");
}

Policy policy_improvement(const TabularMdp& mdp, const ValueFunction& values) {
    if (values.value_of.size() != static_cast<size_t>(mdp.num_states)) {
        throw std::invalid_argument("policy_improvement: values cover " +
                                    std::to_string(values.value_of.size()) +
                                    " states, model has " + std::to_string(mdp.num_states));
    }
    for (double v : values.value_of) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("policy_improvement: values must be finite");
        }
    }
    Policy policy;
    policy.action_of.resize(static_cast<size_t>(mdp.num_states));
    for (int s = 0; s < mdp.num_states; ++s) {
        const auto& actions = mdp.actions[static_cast<size_t>(s)];
        if (actions.empty()) {
            throw std::invalid_argument("policy_improvement: state " + std::to_string(s) +
                                        " has no actions");
        }
        const std::vector<int> order = id_sorted_order(actions);
        int best = order.front();
        double best_q = q_value(mdp, values.value_of, actions[static_cast<size_t>(best)]);
        for (size_t k = 1; k < order.size(); ++k) {
            const int candidate = order[k];
            const double q = q_value(mdp, values.value_of, actions[static_cast<size_t>(candidate)]);
            if (q - best_q >= kTieTolerance) {
                best = candidate;
                best_q = q;
            }
        }
        policy.action_of[static_cast<size_t>(s)] = actions[static_cast<size_t>(best)].id;
    }
    return policy;
}

PolicyIterationResult policy_iteration(const TabularMdp& mdp, std::optional<Policy> initial) {
    require_valid(mdp, "policy_iteration");

    Policy policy;
    if (initial.has_value()) {
        resolve_policy(mdp, *initial, "policy_iteration");
        policy = std::move(*initial);
    } else {
        policy.action_of.resize(static_cast<size_t>(mdp.num_states));
        for (int s = 0; s < mdp.num_states; ++s) {
            const auto& actions = mdp.actions[static_cast<size_t>(s)];
            int lowest = actions.front().id;
            for (const Action& action : actions) lowest = std::min(lowest, action.id);
            policy.action_of[static_cast<size_t>(s)] = lowest;
        }
    }

    // Evaluate tighter than the decision margin so Q comparisons are not
    // dominated by evaluation error.
    const double evaluation_tolerance = kTieTolerance / 10.0;
    for (int iteration = 1; iteration <= kMaxPolicyIterations; ++iteration) {
        ValueFunction values = policy_evaluation(mdp, policy, evaluation_tolerance);
        bool changed = false;
        for (int s = 0; s < mdp.num_states; ++s) {
            const auto& actions = mdp.actions[static_cast<size_t>(s)];
            const Action* incumbent = find_action(mdp, s, policy.action_of[static_cast<size_t>(s)]);
            int best_id = incumbent->id;
            double best_q = q_value(mdp, values.value_of, *incumbent);
            for (int k : id_sorted_order(actions)) {
                const Action& challenger = actions[static_cast<size_t>(k)];
                if (challenger.id == incumbent->id) continue;
                const double q = q_value(mdp, values.value_of, challenger);
                if (q - best_q >= kTieTolerance) {
                    best_id = challenger.id;
                    best_q = q;
                }
            }
            if (best_id != policy.action_of[static_cast<size_t>(s)]) {
                policy.action_of[static_cast<size_t>(s)] = best_id;
                changed = true;
            }
        }
        if (!changed) {
            return {std::move(policy), std::move(values), iteration};
        }
    }
    throw std::logic_error("policy_iteration: no stable policy after " +
                           std::to_string(kMaxPolicyIterations) + " iterations");
}

ValueIterationResult value_iteration(const TabularMdp& mdp, double tolerance,
                                     int max_iterations) {
    require_valid(mdp, "value_iteration");
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("value_iteration: tolerance must be positive");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("value_iteration: max_iterations must be positive");
    }

    const int n = mdp.num_states;
    const double threshold =
        mdp.discount > 0.0
            ? tolerance * (1.0 - mdp.discount) / (2.0 * mdp.discount)
            : std::numeric_limits<double>::infinity();

    ValueIterationResult result;
    result.values.value_of.assign(static_cast<size_t>(n), 0.0);
    std::vector<double> next(static_cast<size_t>(n), 0.0);
    [[maybe_unused]] double previous_delta = std::numeric_limits<double>::infinity();
    while (result.sweeps < max_iterations) {
        ++result.sweeps;
        double delta = 0.0;
        for (int s = 0; s < n; ++s) {
            const auto& actions = mdp.actions[static_cast<size_t>(s)];
            double best = q_value(mdp, result.values.value_of, actions.front());
            for (size_t k = 1; k < actions.size(); ++k) {
                best = std::max(best, q_value(mdp, result.values.value_of, actions[k]));
            }
            next[static_cast<size_t>(s)] = best;
            delta = std::max(delta, std::abs(best - result.values.value_of[static_cast<size_t>(s)]));
        }
        assert(!std::isfinite(previous_delta) ||
               delta <= mdp.discount * previous_delta + kTieTolerance);
        previous_delta = delta;
        result.values.value_of.swap(next);
        if (delta <= threshold) {
            result.converged = true;
            break;
        }
    }
    result.policy = policy_improvement(mdp, result.values);
    return result;
}

} // namespace vcprov
