#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

namespace tempo::cli {

inline constexpr const char* kToolVersion = "tempo_bell 1.0.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

enum class Format { Plain, Json, Csv };

/// Everything a subcommand reports. `result` is an object whose members are
/// scalars, flat numeric arrays, or a "rows" table (array of objects with
/// identical keys).
struct OutputRecord {
    std::string command;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    nlohmann::ordered_json result = nlohmann::ordered_json::object();
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    nlohmann::ordered_json to_json() const;
};

void render(const OutputRecord& record, Format format, std::ostream& out);

/// Parses argv, runs one subcommand, writes the record to `out` and
/// diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tempo::cli
