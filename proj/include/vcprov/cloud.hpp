#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vcprov {

/// A roadside unit that can host VM instances.
struct RsuNode {
    std::string id;
    int capacity = 0; ///< maximum VM units this node can host
};

/// Static network of roadside units. Node order is fixed at construction
/// and defines the canonical layout of Configuration vectors.
class Topology {
public:
    Topology() = default;
    /// Throws std::invalid_argument on empty node list, duplicate or empty
    /// ids, or negative capacities.
    explicit Topology(std::vector<RsuNode> nodes);

    const std::vector<RsuNode>& nodes() const { return nodes_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int total_capacity() const { return total_capacity_; }
    std::optional<int> find_node(std::string_view id) const;

private:
    std::vector<RsuNode> nodes_;
    int total_capacity_ = 0;
};

/// Per-node count of leased VM units, aligned with the topology's node
/// order. Value semantics; equality is element-wise.
class Configuration {
public:
    Configuration() = default;
    /// Throws std::invalid_argument if the vector does not match the node
    /// count or any entry is negative or above its node's capacity.
    Configuration(const Topology& topology, std::vector<int> units);

    /// Builds a configuration from (node id -> units); omitted nodes get 0.
    /// Throws std::invalid_argument on unknown ids or capacity violations.
    static Configuration from_entries(const Topology& topology,
                                      const std::map<std::string, int>& entries);

    const std::vector<int>& units() const { return units_; }
    bool operator==(const Configuration&) const = default;

private:
    std::vector<int> units_;
};

/// A named demand intensity and the VM units needed to serve it.
struct DemandLevel {
    std::string id;
    int required_units = 0;
};

/// First-order Markov chain over demand levels. transition_matrix()[i][j]
/// is the probability of moving from level i to level j in one epoch.
class DemandModel {
public:
    DemandModel() = default;
    /// Throws std::invalid_argument on empty or duplicate level ids,
    /// negative requirements, a matrix that is not LxL, entries outside
    /// [0, 1], or rows that do not sum to one within 1e-12.
    DemandModel(std::vector<DemandLevel> levels,
                std::vector<std::vector<double>> transition_matrix);

    const std::vector<DemandLevel>& levels() const { return levels_; }
    const std::vector<std::vector<double>>& transition_matrix() const { return matrix_; }
    int num_levels() const { return static_cast<int>(levels_.size()); }
    std::optional<int> find_level(std::string_view id) const;
    /// Like find_level but throws std::invalid_argument for unknown ids.
    int level_index(std::string_view id) const;

private:
    std::vector<DemandLevel> levels_;
    std::vector<std::vector<double>> matrix_;
};

/// Sum of leased units across all nodes.
int total_allocated(const Configuration& config);

/// VM placements needed to reach `to` from `from`: sum over nodes of
/// max(0, to_i - from_i). Releases are free, placements each count once.
/// Throws std::invalid_argument when the vectors differ in length.
int migration_count(const Configuration& from, const Configuration& to);

/// Whether the configuration's total allocation covers the level's
/// requirement. Capacity is fungible across nodes.
bool is_feasible(const Configuration& config, int level_index, const DemandModel& demand);
bool is_feasible(const Configuration& config, std::string_view level_id,
                 const DemandModel& demand);

/// All configurations whose per-node units are multiples of `granularity`,
/// in lexicographic order by node with units ascending (the all-zero
/// configuration is first). `granularity` must divide every capacity.
/// Throws std::invalid_argument on a non-positive or non-dividing
/// granularity, and std::length_error with "state space too large" when
/// the count would exceed max_configurations.
std::vector<Configuration> enumerate_configurations(const Topology& topology, int granularity,
                                                    std::size_t max_configurations = 100000);

} // namespace vcprov
