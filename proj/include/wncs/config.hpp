#pragma once

// JSON config loading (with include merging and run-manifest re-execution),
// CSV emission, and run manifests for reproducibility.

#include "wncs/model.hpp"
#include "wncs/sim.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace wncs {

inline constexpr const char* kToolName = "wncs";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kManifestKey = "wncs_manifest";

struct PowerConfig {
    ChannelModel channel;
    double tau_bar = 0.0;
    double delta = 1e-6;
    double gamma = 0.0;
    double l = 0.0;
    double eta = 0.0;
    std::size_t grid = 0;  // 0 picks the per-link-count default
};

struct Config {
    std::optional<LtiPlant> plant;
    std::optional<LtiController> controller;
    Wiring wiring = Wiring::Full;
    std::optional<NetworkTopology> network;
    ProtocolKind protocol = ProtocolKind::RoundRobin;
    std::optional<double> omega;    // transmission rate
    std::optional<double> tau_bar;  // or its reciprocal bound
    std::optional<Vector> x0, e0;
    double horizon = 5.0;
    double sim_dt = 0.0;
    std::size_t grid_points = 500;
    std::size_t trials = 100;
    std::optional<PowerConfig> power;
    nlohmann::json annotations;  // free-form, echoed into reports
};

struct LoadedConfig {
    nlohmann::json doc;             // resolved config object
    nlohmann::json manifest_flags;  // recorded flags when doc came from a manifest
    bool from_manifest = false;
    std::string path;
};

// Reads a JSON file; follows "include" chains (paths relative to the
// including file); when handed a run manifest, unwraps its stored resolved
// config instead. ConfigError on anything malformed.
LoadedConfig load_config_file(const std::string& path);

Config parse_config(const nlohmann::json& doc);

// Closed-loop system per the config's wiring. ConfigError when plant or
// controller is missing.
LtiWncs build_system(const Config& cfg);

Matrix parse_matrix(const nlohmann::json& j, const std::string& context);

// Columns of equal length, comma separated, 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Vector>& columns);

struct RunManifest {
    std::string command;
    nlohmann::json config;  // resolved config document
    nlohmann::json flags;   // effective flag values of the run
    std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

std::string iso8601_utc_now();

} // namespace wncs
