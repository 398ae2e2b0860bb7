#pragma once

// Shared problem instances used across suites.

#include <filesystem>

#include "vcprov/provisioner.hpp"

namespace testsupport {

/// Single RSU with room for two units. Demand has just risen ("risen",
/// needs 1 unit) and tends to keep rising ("surge", needs 2, sticky at
/// 0.8). Placements are charged (beta > 0) and under-provisioning is
/// expensive, so looking ahead pays for jumping straight to the full
/// configuration while a myopic policy leases one unit at a time.
inline vcprov::ProvisioningSpec rising_demand_spec() {
    vcprov::ProvisioningSpec spec;
    spec.topology = vcprov::Topology({{"rsu0", 2}});
    spec.demand = vcprov::DemandModel({{"risen", 1}, {"surge", 2}},
                                      {{0.5, 0.5}, {0.2, 0.8}});
    spec.granularity = 1;
    spec.reward = {10.0, 1.0, 2.0, 20.0};
    spec.discount = 0.95;
    return spec;
}

/// Two RSUs, a single steady demand level, and no placement charge. The
/// violation penalty keeps under-provisioning off the table, and with
/// nothing to anticipate a myopic policy is already optimal.
inline vcprov::ProvisioningSpec single_level_spec() {
    vcprov::ProvisioningSpec spec;
    spec.topology = vcprov::Topology({{"east", 2}, {"west", 2}});
    spec.demand = vcprov::DemandModel({{"steady", 2}}, {{1.0}});
    spec.granularity = 1;
    spec.reward = {10.0, 1.0, 0.0, 20.0};
    spec.discount = 0.95;
    return spec;
}

inline std::filesystem::path scenario_dir() {
    return std::filesystem::path(VCPROV_SCENARIO_DIR);
}

inline std::filesystem::path fixture_dir() {
    return std::filesystem::path(VCPROV_FIXTURE_DIR);
}

inline std::filesystem::path three_rsu_scenario() {
    return scenario_dir() / "three_rsu.json";
}

} // namespace testsupport
