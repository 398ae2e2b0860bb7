#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "support/oracles.hpp"
#include "vcprov/mdp.hpp"

using namespace vcprov;

namespace {

// s0 moves to s1 earning 3, s1 loops on itself earning 1. With discount
// 0.9: V(s1) = 1 / (1 - 0.9) = 10 and V(s0) = 3 + 0.9 * 10 = 12.
TabularMdp two_state_chain() {
    TabularMdp mdp;
    mdp.num_states = 2;
    mdp.discount = 0.9;
    mdp.actions.resize(2);
    mdp.actions[0].push_back(Action{0, {Transition{1, 1.0, 3.0}}});
    mdp.actions[1].push_back(Action{0, {Transition{1, 1.0, 1.0}}});
    return mdp;
}

TabularMdp self_loop(double reward, double discount) {
    TabularMdp mdp;
    mdp.num_states = 1;
    mdp.discount = discount;
    mdp.actions.resize(1);
    mdp.actions[0].push_back(Action{0, {Transition{0, 1.0, reward}}});
    return mdp;
}

Policy zero_policy(const TabularMdp& mdp) {
    Policy policy;
    policy.action_of.assign(static_cast<size_t>(mdp.num_states), 0);
    return policy;
}

double bellman_residual(const TabularMdp& mdp, const Policy& policy,
                        const std::vector<double>& values) {
    double residual = 0.0;
    for (int s = 0; s < mdp.num_states; ++s) {
        const Action& action =
            testsupport::action_by_id(mdp, s, policy.action_of[static_cast<size_t>(s)]);
        residual = std::max(residual, std::abs(testsupport::action_value(mdp, values, action) -
                                               values[static_cast<size_t>(s)]));
    }
    return residual;
}

} // namespace

TEST_CASE("validate_mdp accepts a well-formed chain") {
    CHECK(validate_mdp(two_state_chain()).empty());
}

TEST_CASE("validate_mdp flags probability rows that do not sum to one") {
    TabularMdp mdp = two_state_chain();
    mdp.actions[0][0].transitions = {Transition{0, 0.5, 0.0}, Transition{1, 0.4, 0.0}};
    const ValidationReport report = validate_mdp(mdp);
    REQUIRE(report.size() == 1);
    CHECK(report[0].state == 0);
    CHECK(report[0].action == 0);
    CHECK(report[0].message.find("sum") != std::string::npos);
}

TEST_CASE("validate_mdp flags out-of-range successors and discounts") {
    TabularMdp mdp = two_state_chain();
    mdp.actions[1][0].transitions[0].next_state = 7;
    mdp.discount = 1.0;
    const ValidationReport report = validate_mdp(mdp);
    REQUIRE(report.size() == 2);
    CHECK(report[0].message.find("discount") != std::string::npos);
    CHECK(report[1].state == 1);
    CHECK(report[1].message.find("out of range") != std::string::npos);
}

TEST_CASE("validate_mdp flags structural gaps") {
    TabularMdp mdp = two_state_chain();

    SUBCASE("missing state list") {
        mdp.actions.pop_back();
        REQUIRE(validate_mdp(mdp).size() == 1);
    }
    SUBCASE("state without actions") {
        mdp.actions[1].clear();
        const ValidationReport report = validate_mdp(mdp);
        REQUIRE(report.size() == 1);
        CHECK(report[0].state == 1);
        CHECK(report[0].message.find("no actions") != std::string::npos);
    }
    SUBCASE("action without transitions") {
        mdp.actions[0][0].transitions.clear();
        REQUIRE(validate_mdp(mdp).size() == 1);
    }
    SUBCASE("duplicate action ids within a state") {
        mdp.actions[0].push_back(mdp.actions[0][0]);
        const ValidationReport report = validate_mdp(mdp);
        REQUIRE(report.size() == 1);
        CHECK(report[0].message.find("duplicate") != std::string::npos);
    }
    SUBCASE("non-finite reward and negative probability") {
        mdp.actions[0][0].transitions[0].reward = std::nan("");
        mdp.actions[1][0].transitions[0].probability = -1.0;
        const ValidationReport report = validate_mdp(mdp);
        CHECK(report.size() == 3); // nan reward, negative probability, row sum
    }
}

TEST_CASE("policy evaluation matches the geometric series on a self-loop") {
    const TabularMdp mdp = self_loop(1.0, 0.5);
    const ValueFunction values = policy_evaluation(mdp, zero_policy(mdp));
    CHECK(values.value_of[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("policy evaluation returns zeros when all rewards are zero") {
    TabularMdp mdp = two_state_chain();
    mdp.actions[0][0].transitions[0].reward = 0.0;
    mdp.actions[1][0].transitions[0].reward = 0.0;
    const ValueFunction values = policy_evaluation(mdp, zero_policy(mdp));
    CHECK(std::abs(values.value_of[0]) <= 1e-12);
    CHECK(std::abs(values.value_of[1]) <= 1e-12);
}

TEST_CASE("policy evaluation solves the two-state chain") {
    const TabularMdp mdp = two_state_chain();
    const Policy policy = zero_policy(mdp);
    const ValueFunction values = policy_evaluation(mdp, policy, 1e-11);
    CHECK(values.value_of[0] == doctest::Approx(12.0).epsilon(1e-10));
    CHECK(values.value_of[1] == doctest::Approx(10.0).epsilon(1e-10));

    const std::vector<double> oracle = testsupport::evaluate_by_sweeps(mdp, policy, 1e-11);
    CHECK(std::abs(values.value_of[0] - oracle[0]) <= 1e-9);
    CHECK(std::abs(values.value_of[1] - oracle[1]) <= 1e-9);
}

TEST_CASE("policy evaluation rejects unusable inputs") {
    const TabularMdp mdp = two_state_chain();
    Policy policy = zero_policy(mdp);

    SUBCASE("wrong size") {
        policy.action_of.pop_back();
        CHECK_THROWS_AS(policy_evaluation(mdp, policy), std::invalid_argument);
    }
    SUBCASE("action the state does not offer") {
        policy.action_of[0] = 3;
        CHECK_THROWS_AS(policy_evaluation(mdp, policy), std::invalid_argument);
    }
    SUBCASE("non-positive tolerance") {
        CHECK_THROWS_AS(policy_evaluation(mdp, policy, 0.0), std::invalid_argument);
    }
}

TEST_CASE("policy evaluation satisfies the residual contract on random models") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const TabularMdp mdp = testsupport::random_mdp(seed);
        const Policy policy = testsupport::random_policy(mdp, seed + 1000);
        const ValueFunction values = policy_evaluation(mdp, policy, 1e-9);
        CHECK(bellman_residual(mdp, policy, values.value_of) <= 1.001e-9);
    }
}

TEST_CASE("policy evaluation keeps its contract beyond the dense-solve limit") {
    // A ring two states past the direct-solve cutoff: every state earns 1
    // and moves on, so all values are 1 / (1 - 0.9) = 10.
    TabularMdp mdp;
    mdp.num_states = kDenseEvaluationLimit + 2;
    mdp.discount = 0.9;
    mdp.actions.resize(static_cast<size_t>(mdp.num_states));
    for (int s = 0; s < mdp.num_states; ++s) {
        mdp.actions[static_cast<size_t>(s)].push_back(
            Action{0, {Transition{(s + 1) % mdp.num_states, 1.0, 1.0}}});
    }
    const Policy policy = zero_policy(mdp);
    const ValueFunction values = policy_evaluation(mdp, policy, 1e-9);
    CHECK(bellman_residual(mdp, policy, values.value_of) <= 1.001e-9);
    for (double v : values.value_of) {
        CHECK(std::abs(v - 10.0) <= 2e-8);
    }
}

TEST_CASE("policy improvement maximizes immediate reward when discount is zero") {
    TabularMdp mdp;
    mdp.num_states = 1;
    mdp.discount = 0.0;
    mdp.actions.resize(1);
    mdp.actions[0].push_back(Action{0, {Transition{0, 1.0, 1.0}}});
    mdp.actions[0].push_back(Action{1, {Transition{0, 1.0, 5.0}}});
    const Policy policy = policy_improvement(mdp, ValueFunction{{0.0}});
    CHECK(policy.action_of[0] == 1);
}

TEST_CASE("policy improvement breaks near-ties toward the lowest action id") {
    TabularMdp mdp;
    mdp.num_states = 1;
    mdp.discount = 0.0;
    mdp.actions.resize(1);
    // Listed in descending id order on purpose; both actions earn the
    // same reward up to a sub-tolerance wiggle.
    mdp.actions[0].push_back(Action{2, {Transition{0, 1.0, 5.0 + 1e-12}}});
    mdp.actions[0].push_back(Action{1, {Transition{0, 1.0, 5.0}}});
    mdp.actions[0].push_back(Action{0, {Transition{0, 1.0, 5.0 - 1e-12}}});
    const Policy policy = policy_improvement(mdp, ValueFunction{{0.0}});
    CHECK(policy.action_of[0] == 0);
}

TEST_CASE("policy improvement returns the only available action") {
    const TabularMdp mdp = two_state_chain();
    const Policy policy = policy_improvement(mdp, ValueFunction{{1.0, 2.0}});
    CHECK(policy.action_of == std::vector<int>{0, 0});
}

TEST_CASE("policy improvement validates its inputs") {
    const TabularMdp mdp = two_state_chain();
    CHECK_THROWS_AS(policy_improvement(mdp, ValueFunction{{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(policy_improvement(mdp, ValueFunction{{1.0, std::nan("")}}),
                    std::invalid_argument);
}

TEST_CASE("policy iteration solves the two-state chain") {
    const PolicyIterationResult result = policy_iteration(two_state_chain());
    CHECK(result.iterations >= 1);
    CHECK(result.policy.action_of == std::vector<int>{0, 0});
    CHECK(result.values.value_of[0] == doctest::Approx(12.0).epsilon(1e-9));
    CHECK(result.values.value_of[1] == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("policy iteration matches exhaustive enumeration on small models") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const TabularMdp mdp = testsupport::random_mdp(seed, 5, 3);
        const PolicyIterationResult result = policy_iteration(mdp);

        std::vector<double> best(static_cast<size_t>(mdp.num_states),
                                 -std::numeric_limits<double>::infinity());
        for (const Policy& policy : testsupport::all_policies(mdp)) {
            const std::vector<double> values = testsupport::evaluate_by_sweeps(mdp, policy);
            for (int s = 0; s < mdp.num_states; ++s) {
                best[static_cast<size_t>(s)] =
                    std::max(best[static_cast<size_t>(s)], values[static_cast<size_t>(s)]);
            }
        }
        for (int s = 0; s < mdp.num_states; ++s) {
            CHECK(std::abs(result.values.value_of[static_cast<size_t>(s)] -
                           best[static_cast<size_t>(s)]) <= 1e-7);
        }
    }
}

TEST_CASE("policy iteration agrees with value iteration on seeded models") {
    for (std::uint64_t seed = 21; seed <= 25; ++seed) {
        const TabularMdp mdp = testsupport::random_mdp(seed, 20, 4);
        const PolicyIterationResult pi = policy_iteration(mdp);
        const ValueIterationResult vi = value_iteration(mdp, 1e-8, 1000000);
        REQUIRE(vi.converged);

        for (int s = 0; s < mdp.num_states; ++s) {
            CHECK(std::abs(pi.values.value_of[static_cast<size_t>(s)] -
                           vi.values.value_of[static_cast<size_t>(s)]) <= 1e-6);

            // Where the best action is clear-cut, both solvers must pick it.
            const auto& actions = mdp.actions[static_cast<size_t>(s)];
            double best = -std::numeric_limits<double>::infinity();
            double second = best;
            for (const Action& action : actions) {
                const double q = testsupport::action_value(mdp, pi.values.value_of, action);
                if (q > best) {
                    second = best;
                    best = q;
                } else if (q > second) {
                    second = q;
                }
            }
            if (actions.size() > 1 && best - second > 1e-9) {
                CHECK(pi.policy.action_of[static_cast<size_t>(s)] ==
                      vi.policy.action_of[static_cast<size_t>(s)]);
            }
        }
    }
}

TEST_CASE("policy iteration improves on any warm start") {
    for (std::uint64_t seed = 31; seed <= 35; ++seed) {
        const TabularMdp mdp = testsupport::random_mdp(seed, 12, 4);
        const Policy start = testsupport::random_policy(mdp, seed + 77);
        const std::vector<double> start_values = testsupport::evaluate_by_sweeps(mdp, start);

        const PolicyIterationResult cold = policy_iteration(mdp);
        const PolicyIterationResult warm = policy_iteration(mdp, start);
        for (int s = 0; s < mdp.num_states; ++s) {
            CHECK(std::abs(cold.values.value_of[static_cast<size_t>(s)] -
                           warm.values.value_of[static_cast<size_t>(s)]) <= 1e-7);
            CHECK(start_values[static_cast<size_t>(s)] <=
                  warm.values.value_of[static_cast<size_t>(s)] + 1e-7);
        }
    }
}

TEST_CASE("policy iteration rejects invalid models and starts") {
    TabularMdp broken = two_state_chain();
    broken.actions[0][0].transitions[0].probability = 0.5;
    CHECK_THROWS_AS(policy_iteration(broken), std::invalid_argument);

    Policy bad_start;
    bad_start.action_of = {0, 9};
    CHECK_THROWS_AS(policy_iteration(two_state_chain(), bad_start), std::invalid_argument);
}

TEST_CASE("optimal values dominate every sampled policy") {
    for (std::uint64_t seed = 41; seed <= 43; ++seed) {
        const TabularMdp mdp = testsupport::random_mdp(seed, 15, 4);
        const PolicyIterationResult result = policy_iteration(mdp);
        for (std::uint64_t k = 0; k < 20; ++k) {
            const Policy policy = testsupport::random_policy(mdp, 1000 * seed + k);
            const ValueFunction values = policy_evaluation(mdp, policy, 1e-10);
            for (int s = 0; s < mdp.num_states; ++s) {
                CHECK(values.value_of[static_cast<size_t>(s)] <=
                      result.values.value_of[static_cast<size_t>(s)] + 1e-8);
            }
        }
    }
}

TEST_CASE("value iteration matches the geometric series") {
    const ValueIterationResult result = value_iteration(self_loop(1.0, 0.5), 1e-9, 1000);
    CHECK(result.converged);
    CHECK(std::abs(result.values.value_of[0] - 2.0) <= 1e-9);
}

TEST_CASE("value iteration converges after one sweep when discount is zero") {
    TabularMdp mdp;
    mdp.num_states = 1;
    mdp.discount = 0.0;
    mdp.actions.resize(1);
    mdp.actions[0].push_back(Action{0, {Transition{0, 1.0, 1.0}}});
    mdp.actions[0].push_back(Action{1, {Transition{0, 1.0, 4.0}}});
    const ValueIterationResult result = value_iteration(mdp, 1e-9, 50);
    CHECK(result.converged);
    CHECK(result.sweeps == 1);
    CHECK(result.values.value_of[0] == doctest::Approx(4.0));
    CHECK(result.policy.action_of[0] == 1);
}

TEST_CASE("value iteration reports when the sweep budget runs out") {
    const ValueIterationResult result = value_iteration(self_loop(1.0, 0.9), 1e-12, 3);
    CHECK_FALSE(result.converged);
    CHECK(result.sweeps == 3);
}

TEST_CASE("value iteration meets its accuracy target on random models") {
    for (std::uint64_t seed = 51; seed <= 55; ++seed) {
        const TabularMdp mdp = testsupport::random_mdp(seed, 20, 4);
        const ValueIterationResult result = value_iteration(mdp, 1e-6, 1000000);
        REQUIRE(result.converged);
        const std::vector<double> oracle = testsupport::optimal_values_by_sweeps(mdp, 1e-10);
        for (int s = 0; s < mdp.num_states; ++s) {
            CHECK(std::abs(result.values.value_of[static_cast<size_t>(s)] -
                           oracle[static_cast<size_t>(s)]) <= 1e-6);
        }
    }
}

TEST_CASE("value iteration validates its inputs") {
    CHECK_THROWS_AS(value_iteration(self_loop(1.0, 0.9), 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(value_iteration(self_loop(1.0, 0.9), 1e-9, 0), std::invalid_argument);
    TabularMdp broken = self_loop(1.0, 0.9);
    broken.actions[0][0].transitions[0].probability = 2.0;
    CHECK_THROWS_AS(value_iteration(broken, 1e-9, 10), std::invalid_argument);
}

TEST_CASE("solver outputs are bit-identical across repeat runs") {
    const TabularMdp mdp = testsupport::random_mdp(99, 25, 4);
    const PolicyIterationResult first = policy_iteration(mdp);
    const PolicyIterationResult second = policy_iteration(mdp);
    CHECK(first.policy == second.policy);
    CHECK(first.iterations == second.iterations);
    REQUIRE(first.values.value_of.size() == second.values.value_of.size());
    CHECK(std::memcmp(first.values.value_of.data(), second.values.value_of.data(),
                      first.values.value_of.size() * sizeof(double)) == 0);
}
