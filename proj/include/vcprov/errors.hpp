#pragma once

#include <stdexcept>
#include <string>

namespace vcprov {

namespace detail {
inline std::string scenario_error_text(const std::string& json_path,
                                       const std::string& message) {
    // Guarantee the final text names the offending path exactly once.
    if (json_path.empty() || message.find(json_path) != std::string::npos) return message;
    return json_path + ": " + message;
}
} // namespace detail

/// A scenario file that parses but violates the schema or its invariants.
/// `json_path()` points at the offending element (empty when the defect is
/// not tied to one, e.g. malformed JSON); what() always includes it.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string json_path, const std::string& message)
        : std::runtime_error(detail::scenario_error_text(json_path, message)),
          json_path_(std::move(json_path)) {}

    const std::string& json_path() const { return json_path_; }

private:
    std::string json_path_;
};

/// Filesystem-level failure: missing input, unreadable stream, unwritable
/// output directory.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace vcprov
