#include "vcprov/scenario_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace vcprov {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ScenarioError(path, message);
}

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string element(const std::string& path, size_t index) {
    return path + "[" + std::to_string(index) + "]";
}

/// Strict object check: every present key must be declared, every required
/// key must be present.
void check_keys(const json& node, const std::string& path,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
    if (!node.is_object()) {
        fail(path.empty() ? "(document)" : path, "expected an object");
    }
    for (const auto& item : node.items()) {
        bool known = false;
        for (const char* key : required) {
            if (item.key() == key) known = true;
        }
        for (const char* key : optional) {
            if (item.key() == key) known = true;
        }
        if (!known) {
            fail(child(path, item.key()), "unknown key");
        }
    }
    for (const char* key : required) {
        if (!node.contains(key)) {
            fail(path.empty() ? "(document)" : path,
                 std::string("missing required key '") + key + "'");
        }
    }
}

int read_int(const json& node, const std::string& path) {
    if (!node.is_number_integer() && !node.is_number_unsigned()) {
        fail(path, "expected an integer");
    }
    const std::int64_t value = node.get<std::int64_t>();
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
        fail(path, "integer is out of range");
    }
    return static_cast<int>(value);
}

double read_number(const json& node, const std::string& path) {
    if (!node.is_number()) {
        fail(path, "expected a number");
    }
    return node.get<double>();
}

std::string read_string(const json& node, const std::string& path) {
    if (!node.is_string()) {
        fail(path, "expected a string");
    }
    return node.get<std::string>();
}

std::vector<RsuNode> read_nodes(const json& document) {
    const json& nodes_node = document.at("nodes");
    if (!nodes_node.is_array() || nodes_node.empty()) {
        fail("nodes", "expected a non-empty array");
    }
    std::vector<RsuNode> nodes;
    nodes.reserve(nodes_node.size());
    for (size_t i = 0; i < nodes_node.size(); ++i) {
        const std::string path = element("nodes", i);
        check_keys(nodes_node[i], path, {"id", "capacity"});
        RsuNode node;
        node.id = read_string(nodes_node[i]["id"], child(path, "id"));
        if (node.id.empty()) {
            fail(child(path, "id"), "node id must be non-empty");
        }
        node.capacity = read_int(nodes_node[i]["capacity"], child(path, "capacity"));
        if (node.capacity < 0) {
            fail(child(path, "capacity"), "capacity must be non-negative");
        }
        for (const RsuNode& earlier : nodes) {
            if (earlier.id == node.id) {
                fail(child(path, "id"), "duplicate node id '" + node.id + "'");
            }
        }
        nodes.push_back(std::move(node));
    }
    return nodes;
}

std::vector<DemandLevel> read_levels(const json& demand_node) {
    const json& levels_node = demand_node.at("levels");
    if (!levels_node.is_array() || levels_node.empty()) {
        fail("demand.levels", "expected a non-empty array");
    }
    std::vector<DemandLevel> levels;
    levels.reserve(levels_node.size());
    for (size_t i = 0; i < levels_node.size(); ++i) {
        const std::string path = element("demand.levels", i);
        check_keys(levels_node[i], path, {"id", "required_units"});
        DemandLevel level;
        level.id = read_string(levels_node[i]["id"], child(path, "id"));
        if (level.id.empty()) {
            fail(child(path, "id"), "level id must be non-empty");
        }
        level.required_units =
            read_int(levels_node[i]["required_units"], child(path, "required_units"));
        if (level.required_units < 0) {
            fail(child(path, "required_units"), "required_units must be non-negative");
        }
        for (const DemandLevel& earlier : levels) {
            if (earlier.id == level.id) {
                fail(child(path, "id"), "duplicate level id '" + level.id + "'");
            }
        }
        levels.push_back(std::move(level));
    }
    return levels;
}

std::vector<std::vector<double>> read_matrix(const json& demand_node, size_t num_levels) {
    const json& matrix_node = demand_node.at("transition_matrix");
    if (!matrix_node.is_array() || matrix_node.size() != num_levels) {
        fail("demand.transition_matrix", "expected one row per demand level");
    }
    std::vector<std::vector<double>> matrix;
    matrix.reserve(num_levels);
    for (size_t i = 0; i < num_levels; ++i) {
        const std::string row_path = element("demand.transition_matrix", i);
        const json& row_node = matrix_node[i];
        if (!row_node.is_array() || row_node.size() != num_levels) {
            fail(row_path, "expected one entry per demand level");
        }
        std::vector<double> row;
        row.reserve(num_levels);
        double mass = 0.0;
        for (size_t j = 0; j < num_levels; ++j) {
            const double p = read_number(row_node[j], element(row_path, j));
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                fail(element(row_path, j), "probability must lie in [0, 1]");
            }
            row.push_back(p);
            mass += p;
        }
        if (std::abs(mass - 1.0) > 1e-9) {
            fail(row_path, "stochasticity violation at " + row_path);
        }
        // Accept tiny drift but hand the model an exactly stochastic row.
        if (std::abs(mass - 1.0) > 1e-12) {
            for (double& p : row) p /= mass;
        }
        matrix.push_back(std::move(row));
    }
    return matrix;
}

RewardParams read_reward(const json& document) {
    const json& reward_node = document.at("reward");
    check_keys(reward_node, "reward", {"max_resources"},
               {"alpha", "beta", "violation_penalty"});
    RewardParams reward;
    const auto read_term = [&reward_node](const char* key, double fallback) {
        if (!reward_node.contains(key)) return fallback;
        const std::string path = child("reward", key);
        const double value = read_number(reward_node.at(key), path);
        if (!std::isfinite(value) || value < 0.0) {
            fail(path, "must be a finite non-negative number");
        }
        return value;
    };
    reward.max_resources = read_term("max_resources", 0.0);
    reward.alpha = read_term("alpha", 1.0);
    reward.beta = read_term("beta", 0.0);
    reward.violation_penalty = read_term("violation_penalty", 0.0);
    return reward;
}

} // namespace

ProvisioningSpec scenario_from_json(const json& document, std::vector<std::string>* warnings) {
    check_keys(document, "", {"nodes", "granularity", "demand", "reward"}, {"discount"});

    std::vector<RsuNode> nodes = read_nodes(document);

    const int granularity = read_int(document.at("granularity"), "granularity");
    if (granularity < 1) {
        fail("granularity", "granularity must be positive");
    }
    for (const RsuNode& node : nodes) {
        if (node.capacity % granularity != 0) {
            fail("granularity", "granularity " + std::to_string(granularity) +
                                    " does not divide capacity of node '" + node.id + "'");
        }
    }

    check_keys(document.at("demand"), "demand", {"levels", "transition_matrix"});
    std::vector<DemandLevel> levels = read_levels(document.at("demand"));
    std::vector<std::vector<double>> matrix = read_matrix(document.at("demand"), levels.size());

    RewardParams reward = read_reward(document);

    double discount = 0.95;
    if (document.contains("discount")) {
        discount = read_number(document.at("discount"), "discount");
        if (!(discount >= 0.0) || !(discount < 1.0)) {
            fail("discount", "discount must lie in [0, 1)");
        }
    }

    int total_capacity = 0;
    for (const RsuNode& node : nodes) total_capacity += node.capacity;
    for (size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].required_units > total_capacity) {
            fail(element("demand.levels", i),
                 "scenario infeasible for level '" + levels[i].id + "': requires " +
                     std::to_string(levels[i].required_units) + " units but total capacity is " +
                     std::to_string(total_capacity));
        }
    }

    ProvisioningSpec spec;
    spec.topology = Topology(std::move(nodes));
    spec.demand = DemandModel(std::move(levels), std::move(matrix));
    spec.granularity = granularity;
    spec.reward = reward;
    spec.discount = discount;

    SpecReport report = validate_spec(spec);
    if (!report.errors.empty()) {
        // Everything else was checked above with a precise path; only the
        // configuration-count cap can still fire, and it stems from nodes.
        fail("nodes", report.errors.front());
    }
    if (warnings != nullptr) {
        for (std::string& warning : report.warnings) {
            warnings->push_back(std::move(warning));
        }
    }
    return spec;
}

ProvisioningSpec load_scenario(const std::filesystem::path& path,
                               std::vector<std::string>* warnings) {
    std::ifstream stream(path);
    if (!stream.is_open()) {
        throw IoError("cannot open scenario file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    if (stream.bad()) {
        throw IoError("cannot read scenario file: " + path.string());
    }

    json document;
    try {
        document = json::parse(buffer.str());
    } catch (const json::parse_error& error) {
        throw ScenarioError("", std::string("malformed JSON: ") + error.what());
    }
    return scenario_from_json(document, warnings);
}

json scenario_to_json(const ProvisioningSpec& spec) {
    json document = json::object();

    json nodes = json::array();
    for (const RsuNode& node : spec.topology.nodes()) {
        nodes.push_back({{"id", node.id}, {"capacity", node.capacity}});
    }
    document["nodes"] = std::move(nodes);
    document["granularity"] = spec.granularity;

    json levels = json::array();
    for (const DemandLevel& level : spec.demand.levels()) {
        levels.push_back({{"id", level.id}, {"required_units", level.required_units}});
    }
    document["demand"] = {{"levels", std::move(levels)},
                          {"transition_matrix", spec.demand.transition_matrix()}};

    document["reward"] = {{"max_resources", spec.reward.max_resources},
                          {"alpha", spec.reward.alpha},
                          {"beta", spec.reward.beta},
                          {"violation_penalty", spec.reward.violation_penalty}};
    document["discount"] = spec.discount;
    return document;
}

std::string spec_hash(const ProvisioningSpec& spec) {
    const std::string canonical = scenario_to_json(spec).dump();
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char byte : canonical) {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    }
    char digits[17];
    std::snprintf(digits, sizeof(digits), "%016llx",
                  static_cast<unsigned long long>(hash));
    return std::string(digits);
}

} // namespace vcprov
