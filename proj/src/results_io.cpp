#include "vcprov/results_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "vcprov/version.hpp"

namespace vcprov {

std::string format_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return std::string(buffer);
}

double rounded_real(double value) {
    return std::strtod(format_real(value).c_str(), nullptr);
}

WrittenPaths write_results(const std::vector<RunResult>& results, const RunSummary& summary,
                           const std::string& scenario_hash,
                           const std::filesystem::path& out_dir, const std::string& stem) {
    if (results.empty()) {
        throw std::invalid_argument("write_results: no runs given");
    }
    if (summary.rows.size() != results.size() ||
        summary.cumulative_migrations.size() != results.size()) {
        throw std::invalid_argument("write_results: summary does not cover the given runs");
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + out_dir.string() +
                      "': " + ec.message());
    }

    WrittenPaths paths;
    paths.csv = out_dir / (stem + ".csv");
    paths.summary = out_dir / (stem + "_summary.json");

    std::ofstream csv(paths.csv, std::ios::binary | std::ios::trunc);
    if (!csv.is_open()) {
        throw IoError("cannot open '" + paths.csv.string() + "' for writing");
    }
    csv << "epoch,demand_level,config_id,allocated,migrations,cumulative_migrations,"
           "violation,policy,seed\n";
    for (size_t r = 0; r < results.size(); ++r) {
        const RunResult& run = results[r];
        const auto& cumulative = summary.cumulative_migrations[r];
        if (cumulative.size() != run.epochs.size()) {
            throw std::invalid_argument("write_results: summary does not cover the given runs");
        }
        for (size_t t = 0; t < run.epochs.size(); ++t) {
            const EpochRecord& record = run.epochs[t];
            csv << record.epoch << ','
                << run.level_ids[static_cast<size_t>(record.demand_level)] << ','
                << record.config << ',' << record.allocated << ',' << record.migrations << ','
                << cumulative[t] << ',' << (record.violation ? 1 : 0) << ','
                << run.policy_label << ',' << run.seed << '\n';
        }
    }
    csv.flush();
    if (!csv.good()) {
        throw IoError("failed while writing '" + paths.csv.string() + "'");
    }
    csv.close();

    nlohmann::json document;
    document["metadata"] = {{"epochs", results.front().epochs.size()},
                            {"generator", results.front().generator},
                            {"spec_hash", scenario_hash},
                            {"tool_version", kToolVersion}};
    nlohmann::json rows = nlohmann::json::array();
    for (const RunSummaryRow& row : summary.rows) {
        rows.push_back({{"policy", row.policy},
                        {"seed", row.seed},
                        {"total_migrations", row.total_migrations},
                        {"mean_allocated", rounded_real(row.mean_allocated)},
                        {"violations", row.violations}});
    }
    document["results"] = std::move(rows);

    std::ofstream json_stream(paths.summary, std::ios::binary | std::ios::trunc);
    if (!json_stream.is_open()) {
        throw IoError("cannot open '" + paths.summary.string() + "' for writing");
    }
    json_stream << document.dump(2) << '\n';
    json_stream.flush();
    if (!json_stream.good()) {
        throw IoError("failed while writing '" + paths.summary.string() + "'");
    }
    return paths;
}

} // namespace vcprov
