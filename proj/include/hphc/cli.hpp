#pragma once

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hphc {

inline constexpr const char* kVersion = "hphc 0.1.0";
inline constexpr const char* kOutputDirEnv = "HPHC_OUTPUT_DIR";

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitSizeBound = 3,
    kExitVerifyFailed = 4,
};

/// Every parameter that influences an artifact's bytes. Execution knobs
/// (worker count, output path) are deliberately absent.
struct RunConfig {
    std::string command;
    std::string format = "csv";
    std::string mode = "log";
    long n = 0;
    std::vector<long> grid;
    long exact_bound = 512;
    std::uint64_t seed = 1;
    std::string profile = "hphc";
    std::string engine = "kernel";
    long steps = 0;
    long replicas = 1;
    std::string start = "0,0";
    std::string quantity;
    long r = -1;
    std::string task;
    std::string ratio;
    std::string measure = "reciprocal";
    long radius = 20;
    std::string models;
    long max_n = 10;
    std::string inject_fault;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

/// Reads a run config from a JSON file, or from the embedded config of a
/// CSV or JSON artifact written by this tool.
RunConfig load_run_config(const std::string& path);

/// Runs the command line (argv[0] included); artifacts go to `out` unless
/// --out or the output-directory environment variable redirects them.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hphc
