#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vcprov/errors.hpp"
#include "vcprov/sim.hpp"

namespace vcprov {

/// Formats a real with 9 significant digits ("%.9g"), the precision used
/// in every emitted file so reruns are byte-identical.
std::string format_real(double value);

/// The double that format_real's text parses back to; used when a real is
/// stored into a JSON document instead of printed directly.
double rounded_real(double value);

struct WrittenPaths {
    std::filesystem::path csv;
    std::filesystem::path summary;
};

/// Writes the per-epoch ledger of all runs to <stem>.csv and the run
/// totals plus metadata (epoch count, generator, scenario hash, tool
/// version) to <stem>_summary.json under out_dir, creating the directory
/// if needed. The CSV columns are
/// epoch,demand_level,config_id,allocated,migrations,cumulative_migrations,violation,policy,seed
/// with runs concatenated in order. Output depends only on the arguments.
/// Throws std::invalid_argument when summary does not match results and
/// IoError when the directory or files cannot be written.
WrittenPaths write_results(const std::vector<RunResult>& results, const RunSummary& summary,
                           const std::string& scenario_hash,
                           const std::filesystem::path& out_dir,
                           const std::string& stem = "results");

} // namespace vcprov
