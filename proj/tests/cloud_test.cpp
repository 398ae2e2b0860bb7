#include <doctest.h>

#include <random>
#include <stdexcept>

#include "vcprov/cloud.hpp"

using namespace vcprov;

namespace {

Topology two_nodes() { return Topology({{"n1", 4}, {"n2", 3}}); }

Configuration config(const Topology& topology, std::vector<int> units) {
    return Configuration(topology, std::move(units));
}

} // namespace

TEST_CASE("topology construction validates nodes") {
    CHECK_THROWS_AS(Topology(std::vector<RsuNode>{}), std::invalid_argument);
    CHECK_THROWS_AS(Topology({{"", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Topology({{"a", 1}, {"a", 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Topology({{"a", -1}}), std::invalid_argument);

    const Topology topology = two_nodes();
    CHECK(topology.total_capacity() == 7);
    CHECK(topology.find_node("n2") == 1);
    CHECK_FALSE(topology.find_node("n3").has_value());
}

TEST_CASE("total_allocated sums leased units") {
    const Topology topology = two_nodes();
    CHECK(total_allocated(config(topology, {0, 0})) == 0);
    CHECK(total_allocated(config(topology, {2, 1})) == 3);
}

TEST_CASE("configurations validate against the topology") {
    const Topology topology = two_nodes();
    CHECK_THROWS_AS(config(topology, {1}), std::invalid_argument);
    CHECK_THROWS_AS(config(topology, {-1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(config(topology, {5, 0}), std::invalid_argument);

    const Configuration from_map = Configuration::from_entries(topology, {{"n2", 2}});
    CHECK(from_map.units() == std::vector<int>{0, 2});
    CHECK_THROWS_AS(Configuration::from_entries(topology, {{"nx", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Configuration::from_entries(topology, {{"n2", 9}}), std::invalid_argument);
}

TEST_CASE("migration_count counts only placements") {
    const Topology topology = two_nodes();
    const Configuration a = config(topology, {2, 0});
    const Configuration b = config(topology, {0, 2});
    CHECK(migration_count(a, a) == 0);
    CHECK(migration_count(a, b) == 2);
    CHECK(migration_count(b, a) == 2);
    CHECK(migration_count(config(topology, {1, 1}), config(topology, {2, 0})) == 1);

    const Topology other({{"solo", 2}});
    CHECK_THROWS_AS(migration_count(a, config(other, {1})), std::invalid_argument);
}

TEST_CASE("migration_count is bounded and satisfies the triangle inequality") {
    const Topology topology({{"a", 3}, {"b", 2}, {"c", 4}});
    std::mt19937_64 rng(7);
    const auto random_config = [&]() {
        std::vector<int> units;
        for (const RsuNode& node : topology.nodes()) {
            units.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(node.capacity + 1)));
        }
        return Configuration(topology, std::move(units));
    };
    for (int trial = 0; trial < 200; ++trial) {
        const Configuration x = random_config();
        const Configuration y = random_config();
        const Configuration z = random_config();
        CHECK(migration_count(x, y) >= 0);
        CHECK(migration_count(x, y) <= total_allocated(y));
        CHECK(migration_count(x, z) <= migration_count(x, y) + migration_count(y, z));
    }
}

TEST_CASE("feasibility compares total allocation with the level requirement") {
    const Topology topology = two_nodes();
    const DemandModel demand({{"low", 1}, {"high", 5}}, {{0.5, 0.5}, {0.5, 0.5}});

    CHECK(is_feasible(config(topology, {1, 0}), 0, demand));
    CHECK_FALSE(is_feasible(config(topology, {1, 0}), 1, demand));
    CHECK(is_feasible(config(topology, {4, 1}), "high", demand));
    CHECK_THROWS_AS(is_feasible(config(topology, {1, 0}), 2, demand), std::invalid_argument);
    CHECK_THROWS_AS(is_feasible(config(topology, {1, 0}), "absent", demand),
                    std::invalid_argument);
}

TEST_CASE("adding units never breaks feasibility") {
    const Topology topology = two_nodes();
    const DemandModel demand({{"low", 2}, {"high", 5}}, {{0.5, 0.5}, {0.5, 0.5}});
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> units;
        std::vector<int> more;
        for (const RsuNode& node : topology.nodes()) {
            const int u = static_cast<int>(rng() % static_cast<std::uint64_t>(node.capacity + 1));
            units.push_back(u);
            more.push_back(u + (u < node.capacity ? 1 : 0));
        }
        const Configuration base(topology, units);
        const Configuration grown(topology, more);
        for (int level = 0; level < demand.num_levels(); ++level) {
            if (is_feasible(base, level, demand)) {
                CHECK(is_feasible(grown, level, demand));
            }
        }
    }
}

TEST_CASE("demand model construction validates the chain") {
    CHECK_THROWS_AS(DemandModel({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(DemandModel({{"a", 1}, {"a", 2}}, {{0.5, 0.5}, {0.5, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DemandModel({{"a", -1}}, {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(DemandModel({{"a", 1}}, {{0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(DemandModel({{"a", 1}}, {{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(DemandModel({{"a", 1}, {"b", 2}}, {{0.5, 0.5}, {1.2, -0.2}}),
                    std::invalid_argument);

    const DemandModel demand({{"a", 1}, {"b", 2}}, {{0.25, 0.75}, {1.0, 0.0}});
    CHECK(demand.level_index("b") == 1);
    CHECK_THROWS_AS(demand.level_index("c"), std::invalid_argument);
}

TEST_CASE("enumerate_configurations walks the unit grid in order") {
    const Topology pair({{"a", 1}, {"b", 1}});
    const std::vector<Configuration> configs = enumerate_configurations(pair, 1);
    REQUIRE(configs.size() == 4);
    CHECK(configs[0].units() == std::vector<int>{0, 0});
    CHECK(configs[1].units() == std::vector<int>{0, 1});
    CHECK(configs[2].units() == std::vector<int>{1, 0});
    CHECK(configs[3].units() == std::vector<int>{1, 1});

    const Topology triple({{"a", 2}, {"b", 2}, {"c", 2}});
    const std::vector<Configuration> cube = enumerate_configurations(triple, 1);
    CHECK(cube.size() == 27);
    CHECK(cube.front().units() == std::vector<int>{0, 0, 0});
    CHECK(cube.back().units() == std::vector<int>{2, 2, 2});
}

TEST_CASE("enumerate_configurations honors the granularity") {
    const Topology pair({{"a", 2}, {"b", 2}});
    const std::vector<Configuration> configs = enumerate_configurations(pair, 2);
    REQUIRE(configs.size() == 4);
    CHECK(configs[0].units() == std::vector<int>{0, 0});
    CHECK(configs[1].units() == std::vector<int>{0, 2});
    CHECK(configs[2].units() == std::vector<int>{2, 0});
    CHECK(configs[3].units() == std::vector<int>{2, 2});
}

TEST_CASE("enumerate_configurations matches a brute-force grid") {
    const Topology pair({{"a", 3}, {"b", 3}});
    const std::vector<Configuration> configs = enumerate_configurations(pair, 1);
    std::vector<std::vector<int>> expected;
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; b <= 3; ++b) {
            expected.push_back({a, b});
        }
    }
    REQUIRE(configs.size() == expected.size());
    for (size_t i = 0; i < configs.size(); ++i) {
        CHECK(configs[i].units() == expected[i]);
    }
}

TEST_CASE("enumerate_configurations rejects bad granularities and huge grids") {
    const Topology pair({{"a", 3}, {"b", 3}});
    CHECK_THROWS_AS(enumerate_configurations(pair, 0), std::invalid_argument);
    CHECK_THROWS_WITH_AS(enumerate_configurations(pair, 2),
                         doctest::Contains("does not divide capacity of node 'a'"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(enumerate_configurations(pair, 1, 10),
                         doctest::Contains("state space too large"), std::length_error);

    std::vector<RsuNode> many;
    for (int i = 0; i < 6; ++i) {
        many.push_back({"node" + std::to_string(i), 9});
    }
    CHECK_THROWS_AS(enumerate_configurations(Topology(std::move(many)), 1), std::length_error);
}
