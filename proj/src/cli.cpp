#include "vcprov/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vcprov/errors.hpp"
#include "vcprov/provisioner.hpp"
#include "vcprov/results_io.hpp"
#include "vcprov/scenario_io.hpp"
#include "vcprov/sim.hpp"
#include "vcprov/version.hpp"

namespace vcprov {

namespace {

struct CliOptions {
    std::string scenario;
    std::string out_dir = "./out";
    std::string policy = "both";
    int epochs = 10000;
    std::string seeds = "1";
    std::string initial_level;
    double gamma = 0.0;
    bool gamma_given = false;
    double tolerance = 1e-9;
};

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        const size_t begin = token.find_first_not_of(" \t");
        const size_t end = token.find_last_not_of(" \t");
        if (begin == std::string::npos) {
            throw std::invalid_argument("seed list contains an empty entry");
        }
        token = token.substr(begin, end - begin + 1);
        if (token.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("seed '" + token + "' is not a non-negative integer");
        }
        try {
            seeds.push_back(std::stoull(token));
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("seed '" + token + "' does not fit in 64 bits");
        }
    }
    if (seeds.empty()) {
        throw std::invalid_argument("at least one seed is required");
    }
    return seeds;
}

ProvisioningSpec load_spec(const CliOptions& options) {
    std::vector<std::string> warnings;
    ProvisioningSpec spec = load_scenario(options.scenario, &warnings);
    for (const std::string& warning : warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    if (options.gamma_given) {
        if (!(options.gamma >= 0.0) || !(options.gamma < 1.0)) {
            throw std::invalid_argument("--gamma must lie in [0, 1)");
        }
        spec.discount = options.gamma;
    }
    if (!(options.tolerance > 0.0)) {
        throw std::invalid_argument("--tolerance must be positive");
    }
    const StateIndex index = build_state_index(spec);
    std::cout << "scenario " << options.scenario << ": " << index.num_configurations()
              << " configurations, " << index.num_levels() << " demand levels, "
              << index.num_states() << " states\n";
    return spec;
}

std::filesystem::path write_policy_json(const ProvisioningSpec& spec, const StateIndex& index,
                                        const Policy& policy, const ValueFunction& values,
                                        int iterations, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + out_dir.string() +
                      "': " + ec.message());
    }
    const std::vector<Configuration> configs =
        enumerate_configurations(spec.topology, spec.granularity);

    nlohmann::json document;
    document["discount"] = rounded_real(spec.discount);
    document["iterations"] = iterations;
    document["scenario_hash"] = spec_hash(spec);
    document["tool_version"] = kToolVersion;
    nlohmann::json states = nlohmann::json::array();
    for (int s = 0; s < index.num_states(); ++s) {
        const auto [config, level] = index.pair_of(s);
        const int target = policy.action_of[static_cast<size_t>(s)];
        states.push_back(
            {{"state", s},
             {"config", config},
             {"units", configs[static_cast<size_t>(config)].units()},
             {"demand_level", spec.demand.levels()[static_cast<size_t>(level)].id},
             {"target_config", target},
             {"target_units", configs[static_cast<size_t>(target)].units()},
             {"value", rounded_real(values.value_of[static_cast<size_t>(s)])}});
    }
    document["states"] = std::move(states);

    const std::filesystem::path path = out_dir / "policy.json";
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream.is_open()) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    stream << document.dump(2) << '\n';
    stream.flush();
    if (!stream.good()) {
        throw IoError("failed while writing '" + path.string() + "'");
    }
    return path;
}

struct SeedRun {
    std::uint64_t seed = 0;
    std::vector<RunResult> results;
    RunSummary summary;
};

std::vector<SeedRun> run_all_seeds(const ProvisioningSpec& spec, const StateIndex& index,
                                   const std::vector<std::pair<std::string, Policy>>& policies,
                                   int epochs, const std::vector<std::uint64_t>& seeds,
                                   const std::string& initial_level) {
    const auto run_one = [&](std::uint64_t seed) {
        const DemandTrace trace = generate_trace(spec.demand, epochs, seed, initial_level);
        SeedRun run;
        run.seed = seed;
        for (const auto& [label, policy] : policies) {
            run.results.push_back(simulate(policy, index, spec, trace, 0, label));
        }
        run.summary = summarize(run.results);
        return run;
    };

    // Seeds are independent; run a window of them concurrently but collect
    // in order so downstream output stays deterministic.
    const size_t window = std::max<unsigned>(1, std::thread::hardware_concurrency());
    std::vector<std::future<SeedRun>> futures(seeds.size());
    std::vector<SeedRun> runs;
    runs.reserve(seeds.size());
    size_t launched = 0;
    for (size_t i = 0; i < seeds.size(); ++i) {
        while (launched < seeds.size() && launched < i + window) {
            futures[launched] = std::async(std::launch::async, run_one, seeds[launched]);
            ++launched;
        }
        runs.push_back(futures[i].get());
    }
    return runs;
}

void emit_seed_runs(const std::vector<SeedRun>& runs, const std::string& hash,
                    const std::filesystem::path& out_dir) {
    for (const SeedRun& run : runs) {
        const WrittenPaths paths = write_results(run.results, run.summary, hash, out_dir,
                                                 "results_seed" + std::to_string(run.seed));
        std::cout << "seed " << run.seed << ": wrote " << paths.csv.string() << " and "
                  << paths.summary.string() << "\n";
        for (const RunSummaryRow& row : run.summary.rows) {
            std::cout << "  " << row.policy << ": migrations=" << row.total_migrations
                      << " violations=" << row.violations
                      << " mean_allocated=" << format_real(row.mean_allocated) << "\n";
        }
    }
}

int do_solve(const CliOptions& options) {
    const ProvisioningSpec spec = load_spec(options);
    const auto [mdp, index] = build_mdp(spec);
    const PolicyIterationResult solved = policy_iteration(mdp);
    std::cout << "policy iteration converged in " << solved.iterations << " iterations\n";
    const ValueFunction values = policy_evaluation(mdp, solved.policy, options.tolerance);
    const std::filesystem::path path =
        write_policy_json(spec, index, solved.policy, values, solved.iterations, options.out_dir);
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int do_simulate(const CliOptions& options) {
    const ProvisioningSpec spec = load_spec(options);
    if (options.epochs < 1) {
        throw std::invalid_argument("--epochs must be positive");
    }
    const std::vector<std::uint64_t> seeds = parse_seeds(options.seeds);

    StateIndex index = build_state_index(spec);
    std::vector<std::pair<std::string, Policy>> policies;
    if (options.policy == "mdp" || options.policy == "both") {
        ProvisioningSolution solution = mdp_policy(spec);
        std::cout << "policy iteration converged in " << solution.iterations << " iterations\n";
        policies.emplace_back("mdp", std::move(solution.policy));
    }
    if (options.policy == "greedy" || options.policy == "both") {
        policies.emplace_back("greedy", greedy_policy(spec, index));
    }

    const std::vector<SeedRun> runs =
        run_all_seeds(spec, index, policies, options.epochs, seeds, options.initial_level);
    emit_seed_runs(runs, spec_hash(spec), options.out_dir);
    return 0;
}

int do_compare(const CliOptions& options) {
    const ProvisioningSpec spec = load_spec(options);
    if (options.epochs < 1) {
        throw std::invalid_argument("--epochs must be positive");
    }
    const std::vector<std::uint64_t> seeds = parse_seeds(options.seeds);

    const auto [mdp, index] = build_mdp(spec);
    const PolicyIterationResult solved = policy_iteration(mdp);
    std::cout << "policy iteration converged in " << solved.iterations << " iterations\n";
    const ValueFunction values = policy_evaluation(mdp, solved.policy, options.tolerance);
    const std::filesystem::path policy_path =
        write_policy_json(spec, index, solved.policy, values, solved.iterations, options.out_dir);
    std::cout << "wrote " << policy_path.string() << "\n";

    std::vector<std::pair<std::string, Policy>> policies;
    policies.emplace_back("mdp", solved.policy);
    policies.emplace_back("greedy", greedy_policy(spec, index));

    const std::vector<SeedRun> runs =
        run_all_seeds(spec, index, policies, options.epochs, seeds, options.initial_level);
    emit_seed_runs(runs, spec_hash(spec), options.out_dir);

    for (const auto& [label, policy] : policies) {
        std::int64_t migrations = 0;
        std::int64_t violations = 0;
        double mean_allocated = 0.0;
        for (const SeedRun& run : runs) {
            for (const RunSummaryRow& row : run.summary.rows) {
                if (row.policy != label) continue;
                migrations += row.total_migrations;
                violations += row.violations;
                mean_allocated += row.mean_allocated;
            }
        }
        mean_allocated /= static_cast<double>(runs.size());
        std::cout << "total " << label << ": migrations=" << migrations
                  << " violations=" << violations
                  << " mean_allocated=" << format_real(mean_allocated) << "\n";
    }

    const PolicyComparison gap =
        compare_policies(mdp, policies[0].second, policies[1].second, options.tolerance);
    std::cout << "value gap (mdp minus greedy): min=" << format_real(gap.min_difference)
              << " mean=" << format_real(gap.mean_difference)
              << " max=" << format_real(gap.max_difference) << "\n";
    return 0;
}

void add_common_options(CLI::App* command, CliOptions& options) {
    command->add_option("--scenario", options.scenario, "Scenario JSON file")->required();
    command->add_option("--out", options.out_dir, "Output directory (default ./out)");
    command->add_option("--gamma", options.gamma, "Override the scenario's discount factor")
        ->each([&options](const std::string&) { options.gamma_given = true; });
    command->add_option("--tolerance", options.tolerance,
                        "Bellman residual tolerance for reported values (default 1e-9)");
}

void add_simulation_options(CLI::App* command, CliOptions& options, bool with_policy) {
    if (with_policy) {
        command->add_option("--policy", options.policy, "Which policies to run (default both)")
            ->check(CLI::IsMember({"mdp", "greedy", "both"}));
    }
    command->add_option("--epochs", options.epochs, "Epochs per run (default 10000)");
    command->add_option("--seeds", options.seeds,
                        "Comma-separated list of trace seeds (default 1)");
    command->add_option("--initial-level", options.initial_level,
                        "Starting demand level id (default: the scenario's first level)");
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Vehicular cloud VM provisioning: MDP solver and policy simulator", "vcprov"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    CliOptions options;
    CLI::App* solve = app.add_subcommand(
        "solve", "Compute the optimal provisioning policy and write it as JSON");
    add_common_options(solve, options);
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Replay provisioning policies over seeded demand traces");
    add_common_options(simulate, options);
    add_simulation_options(simulate, options, true);
    CLI::App* compare = app.add_subcommand(
        "compare", "Solve, then run the optimal and greedy policies on the same traces");
    add_common_options(compare, options);
    add_simulation_options(compare, options, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) return do_solve(options);
        if (simulate->parsed()) return do_simulate(options);
        if (compare->parsed()) return do_compare(options);
        std::cerr << "error: no subcommand given\n";
        return 1;
    } catch (const ScenarioError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    } catch (const IoError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
}

} // namespace vcprov
