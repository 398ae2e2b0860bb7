#include "vcprov/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace vcprov {

Topology::Topology(std::vector<RsuNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) {
        throw std::invalid_argument("topology: at least one node is required");
    }
    std::unordered_set<std::string_view> seen;
    for (const RsuNode& node : nodes_) {
        if (node.id.empty()) {
            throw std::invalid_argument("topology: node ids must be non-empty");
        }
        if (!seen.insert(node.id).second) {
            throw std::invalid_argument("topology: duplicate node id '" + node.id + "'");
        }
        if (node.capacity < 0) {
            throw std::invalid_argument("topology: node '" + node.id +
                                        "' has negative capacity");
        }
        total_capacity_ += node.capacity;
    }
}

std::optional<int> Topology::find_node(std::string_view id) const {
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id == id) return static_cast<int>(i);
    }
    return std::nullopt;
}

Configuration::Configuration(const Topology& topology, std::vector<int> units)
    : units_(std::move(units)) {
    if (units_.size() != static_cast<size_t>(topology.num_nodes())) {
        throw std::invalid_argument("configuration: expected " +
                                    std::to_string(topology.num_nodes()) + " entries, got " +
                                    std::to_string(units_.size()));
    }
    for (size_t i = 0; i < units_.size(); ++i) {
        const RsuNode& node = topology.nodes()[i];
        if (units_[i] < 0 || units_[i] > node.capacity) {
            throw std::invalid_argument("configuration: " + std::to_string(units_[i]) +
                                        " units on node '" + node.id + "' is outside [0, " +
                                        std::to_string(node.capacity) + "]");
        }
    }
}

Configuration Configuration::from_entries(const Topology& topology,
                                          const std::map<std::string, int>& entries) {
    std::vector<int> units(static_cast<size_t>(topology.num_nodes()), 0);
    for (const auto& [id, count] : entries) {
        std::optional<int> index = topology.find_node(id);
        if (!index.has_value()) {
            throw std::invalid_argument("configuration: unknown node '" + id + "'");
        }
        units[static_cast<size_t>(*index)] = count;
    }
    return Configuration(topology, std::move(units));
}

DemandModel::DemandModel(std::vector<DemandLevel> levels,
                         std::vector<std::vector<double>> transition_matrix)
    : levels_(std::move(levels)), matrix_(std::move(transition_matrix)) {
    if (levels_.empty()) {
        throw std::invalid_argument("demand model: at least one level is required");
    }
    std::unordered_set<std::string_view> seen;
    for (const DemandLevel& level : levels_) {
        if (level.id.empty()) {
            throw std::invalid_argument("demand model: level ids must be non-empty");
        }
        if (!seen.insert(level.id).second) {
            throw std::invalid_argument("demand model: duplicate level id '" + level.id + "'");
        }
        if (level.required_units < 0) {
            throw std::invalid_argument("demand model: level '" + level.id +
                                        "' has negative required_units");
        }
    }
    const size_t n = levels_.size();
    if (matrix_.size() != n) {
        throw std::invalid_argument("demand model: transition matrix must have one row per level");
    }
    for (size_t i = 0; i < n; ++i) {
        if (matrix_[i].size() != n) {
            throw std::invalid_argument("demand model: transition matrix row " +
                                        std::to_string(i) + " must have one entry per level");
        }
        double mass = 0.0;
        for (double p : matrix_[i]) {
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                throw std::invalid_argument("demand model: transition probabilities must lie in [0, 1]");
            }
            mass += p;
        }
        if (std::abs(mass - 1.0) > 1e-12) {
            throw std::invalid_argument("demand model: transition matrix row " +
                                        std::to_string(i) + " sums to " + std::to_string(mass));
        }
    }
}

std::optional<int> DemandModel::find_level(std::string_view id) const {
    for (size_t i = 0; i < levels_.size(); ++i) {
        if (levels_[i].id == id) return static_cast<int>(i);
    }
    return std::nullopt;
}

int DemandModel::level_index(std::string_view id) const {
    std::optional<int> index = find_level(id);
    if (!index.has_value()) {
        throw std::invalid_argument("demand model: unknown level '" + std::string(id) + "'");
    }
    return *index;
}

int total_allocated(const Configuration& config) {
    int total = 0;
    for (int units : config.units()) total += units;
    return total;
}

int migration_count(const Configuration& from, const Configuration& to) {
    if (from.units().size() != to.units().size()) {
        throw std::invalid_argument("migration_count: configurations span different topologies");
    }
    int placements = 0;
    for (size_t i = 0; i < from.units().size(); ++i) {
        placements += std::max(0, to.units()[i] - from.units()[i]);
    }
    return placements;
}

bool is_feasible(const Configuration& config, int level_index, const DemandModel& demand) {
    if (level_index < 0 || level_index >= demand.num_levels()) {
        throw std::invalid_argument("is_feasible: level index " + std::to_string(level_index) +
                                    " is out of range");
    }
    return total_allocated(config) >=
           demand.levels()[static_cast<size_t>(level_index)].required_units;
}

bool is_feasible(const Configuration& config, std::string_view level_id,
                 const DemandModel& demand) {
    return is_feasible(config, demand.level_index(level_id), demand);
}

std::vector<Configuration> enumerate_configurations(const Topology& topology, int granularity,
                                                    std::size_t max_configurations) {
    if (granularity < 1) {
        throw std::invalid_argument("enumerate_configurations: granularity must be positive");
    }
    std::vector<int> steps;
    steps.reserve(static_cast<size_t>(topology.num_nodes()));
    std::size_t count = 1;
    for (const RsuNode& node : topology.nodes()) {
        if (node.capacity % granularity != 0) {
            throw std::invalid_argument("enumerate_configurations: granularity " +
                                        std::to_string(granularity) +
                                        " does not divide capacity of node '" + node.id + "'");
        }
        const std::size_t levels = static_cast<std::size_t>(node.capacity / granularity) + 1;
        if (count > max_configurations / levels) {
            throw std::length_error("state space too large: more than " +
                                    std::to_string(max_configurations) + " configurations");
        }
        count *= levels;
        steps.push_back(static_cast<int>(levels));
    }

    std::vector<Configuration> configurations;
    configurations.reserve(count);
    std::vector<int> units(static_cast<size_t>(topology.num_nodes()), 0);
    while (true) {
        configurations.push_back(Configuration(topology, units));
        int node = topology.num_nodes() - 1;
        while (node >= 0) {
            units[static_cast<size_t>(node)] += granularity;
            if (units[static_cast<size_t>(node)] <= topology.nodes()[static_cast<size_t>(node)].capacity) {
                break;
            }
            units[static_cast<size_t>(node)] = 0;
            --node;
        }
        if (node < 0) break;
    }
    return configurations;
}

} // namespace vcprov
