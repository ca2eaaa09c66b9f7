#pragma once

#include <chrono>
#include <ctime>
#include <string>

#include <json.hpp>

#include "infs/config.hpp"
#include "infs/json_io.hpp"

namespace infs {

constexpr const char* kToolName = "infs_micc";
constexpr const char* kToolVersion = "1.0.0";

inline std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Every report is {metadata, results}. Time lives in metadata only, so the
// results block is byte-identical across repeated runs with the same inputs.
inline nlohmann::json report_envelope(const std::string& command, const RunConfig& config,
                                      nlohmann::json results) {
    return {{"metadata",
             {{"tool", kToolName},
              {"version", kToolVersion},
              {"command", command},
              {"generated_at", utc_timestamp()},
              {"config", to_json(config)}}},
            {"results", std::move(results)}};
}

inline void write_report(const std::string& path, const nlohmann::json& envelope) {
    save_json_file(path, envelope);
}

}  // namespace infs
