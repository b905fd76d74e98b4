#include "wncs/config.hpp"
#include "wncs/error.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace wncs;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "wncs_config_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream f(p);
    f << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

} // namespace

TEST_CASE("minimal config parses with defaults") {
    const json doc = json::parse(R"({
        "network": {"nodes": [{"links": [{"f": 0.5, "coords": [0]}]}]},
        "transmission": {"omega": 100.0}
    })");
    const Config cfg = parse_config(doc);
    CHECK_FALSE(cfg.plant.has_value());
    REQUIRE(cfg.network.has_value());
    CHECK(cfg.network->ne == 1);
    CHECK(cfg.network->n_nodes() == 1);
    REQUIRE(cfg.omega.has_value());
    CHECK(*cfg.omega == 100.0);
    CHECK(cfg.protocol == ProtocolKind::RoundRobin);
    CHECK(cfg.wiring == Wiring::Full);
    CHECK(cfg.horizon == 5.0);
    CHECK(cfg.grid_points == 500);
    CHECK(cfg.trials == 100);
    CHECK(cfg.annotations.is_null());
}

TEST_CASE("full config with plant, simulation, and annotations") {
    const json doc = json::parse(R"({
        "plant": {"a": [[0]], "b": [[1]], "c": [[1]]},
        "controller": {"a": [[-1]], "b": [[-1]], "c": [[1]]},
        "wiring": "sensor-only",
        "protocol": "stochastic",
        "network": {"nodes": [{"links": [{"f": 1.0, "coords": [0]}]}]},
        "transmission": {"tau_bar": 0.005},
        "simulation": {"x0": [1, 2], "e0": [3], "horizon": 2.5, "dt": 1e-4,
                       "grid_points": 50, "trials": 7},
        "annotations": {"note": "kept verbatim", "values": [1, 2, 3]}
    })");
    const Config cfg = parse_config(doc);
    CHECK(cfg.wiring == Wiring::SensorOnly);
    CHECK(cfg.protocol == ProtocolKind::StochasticUniform);
    REQUIRE(cfg.tau_bar.has_value());
    CHECK(*cfg.tau_bar == 0.005);
    CHECK_FALSE(cfg.omega.has_value());
    REQUIRE(cfg.x0.has_value());
    CHECK(*cfg.x0 == Vector{1.0, 2.0});
    CHECK(*cfg.e0 == Vector{3.0});
    CHECK(cfg.horizon == 2.5);
    CHECK(cfg.sim_dt == 1e-4);
    CHECK(cfg.grid_points == 50);
    CHECK(cfg.trials == 7);
    CHECK(cfg.annotations["note"] == "kept verbatim");

    const LtiWncs sys = build_system(cfg);
    CHECK(sys.nx == 2);
    CHECK(sys.ne == 1); // sensor-only
}

TEST_CASE("matrix parsing") {
    CHECK(parse_matrix(json::parse("[[1,2],[3,4]]"), "m").rows() == 2);
    CHECK(parse_matrix(json::parse("[[1,2],[3,4]]"), "m")(1, 1) == 4.0);
    CHECK(parse_matrix(json::parse("[]"), "m").empty());
    CHECK_THROWS_AS((void)parse_matrix(json::parse("[[1,2],[3]]"), "m"), ConfigError);
    CHECK_THROWS_AS((void)parse_matrix(json::parse("[1,2]"), "m"), ConfigError);
    CHECK_THROWS_AS((void)parse_matrix(json::parse("[[\"x\"]]"), "m"), ConfigError);
}

TEST_CASE("include chains merge overlays over the base") {
    write_file("base.json", R"({
        "network": {"nodes": [{"links": [{"f": 0.5, "coords": [0]}]}]},
        "transmission": {"omega": 100.0},
        "simulation": {"horizon": 5.0, "trials": 10}
    })");
    const fs::path overlay = write_file("overlay.json", R"({
        "include": "base.json",
        "transmission": {"omega": 300.0},
        "simulation": {"trials": 99}
    })");

    const LoadedConfig lc = load_config_file(overlay.string());
    CHECK_FALSE(lc.from_manifest);
    const Config cfg = parse_config(lc.doc);
    CHECK(*cfg.omega == 300.0);      // overlay wins
    CHECK(cfg.horizon == 5.0);       // base survives inside merged objects
    CHECK(cfg.trials == 99);
    REQUIRE(cfg.network.has_value()); // untouched block inherited
}

TEST_CASE("include cycles and missing files are config errors") {
    write_file("a.json", R"({"include": "b.json"})");
    write_file("b.json", R"({"include": "a.json"})");
    CHECK_THROWS_AS((void)load_config_file((scratch_dir() / "a.json").string()), ConfigError);
    CHECK_THROWS_AS((void)load_config_file((scratch_dir() / "nope.json").string()),
                    ConfigError);
    const fs::path bad = write_file("bad.json", "{not json");
    CHECK_THROWS_AS((void)load_config_file(bad.string()), ConfigError);
}

TEST_CASE("bad configs raise ConfigError with the offending context") {
    CHECK_THROWS_AS((void)parse_config(json::parse(R"({"wiring": "banana"})")), ConfigError);
    CHECK_THROWS_AS((void)parse_config(json::parse(R"({"protocol": "banana"})")), ConfigError);
    CHECK_THROWS_AS(
        (void)parse_config(json::parse(R"({"network": {"nodes": []}})")),
        ConfigError);
    CHECK_THROWS_AS(
        (void)parse_config(json::parse(
            R"({"network": {"nodes": [{"links": [{"f": 2.0, "coords": [0]}]}]}})")),
        ConfigError);
    // plant without controller cannot build a system
    const Config cfg =
        parse_config(json::parse(R"({"plant": {"a": [[0]], "b": [[1]], "c": [[1]]}})"));
    CHECK_THROWS_AS((void)build_system(cfg), ConfigError);
}

TEST_CASE("manifest files unwrap to their stored config") {
    RunManifest m;
    m.command = "simulate";
    m.config = json::parse(R"({
        "network": {"nodes": [{"links": [{"f": 0.5, "coords": [0]}]}]},
        "transmission": {"omega": 123.0}
    })");
    m.flags = json::parse(R"({"seed": 77, "trials": 5})");
    m.outputs = {"trajectory.csv"};
    const fs::path p = scratch_dir() / "manifest.json";
    write_manifest(p.string(), m);

    const json raw = json::parse(slurp(p));
    CHECK(raw.contains(kManifestKey));
    CHECK(raw["tool"] == kToolName);
    CHECK(raw["command"] == "simulate");
    CHECK(raw["outputs"][0] == "trajectory.csv");

    const LoadedConfig lc = load_config_file(p.string());
    CHECK(lc.from_manifest);
    CHECK(lc.manifest_flags["seed"] == 77);
    const Config cfg = parse_config(lc.doc);
    CHECK(*cfg.omega == 123.0);
}

TEST_CASE("csv emission: 17 significant digits, rectangular only") {
    const fs::path p = scratch_dir() / "out.csv";
    write_csv(p.string(), {"t", "v"}, {{0.1, 0.2}, {1.0 / 3.0, 2.0 / 3.0}});
    const std::string text = slurp(p);
    CHECK(text.find("t,v\n") == 0);
    CHECK(text.find("0.33333333333333331") != std::string::npos);

    // a value that round-trips exactly through 17 digits
    double parsed = 0.0;
    std::sscanf(text.c_str() + text.find('\n') + 1, "%lf", &parsed);
    CHECK(parsed == 0.1);

    CHECK_THROWS_AS(write_csv(p.string(), {"a", "b"}, {{1.0}, {1.0, 2.0}}), DimensionError);
    CHECK_THROWS_AS(write_csv("/nonexistent_dir/x.csv", {"a"}, {{1.0}}), ConfigError);
}

TEST_CASE("shipped configs all load, parse, and validate") {
    const fs::path dir = fs::path(WNCS_SOURCE_DIR) / "configs";
    std::size_t seen = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        ++seen;
        INFO("config: ", entry.path().string());
        const LoadedConfig lc = load_config_file(entry.path().string());
        const Config cfg = parse_config(lc.doc);
        REQUIRE(cfg.network.has_value());
        CHECK_NOTHROW(validate_topology(*cfg.network));
        if (cfg.plant && cfg.controller) {
            const LtiWncs sys = build_system(cfg);
            CHECK(sys.ne == cfg.network->ne);
        }
        if (cfg.power) CHECK_NOTHROW(validate_channel(cfg.power->channel));
    }
    CHECK(seen >= 6);
}

TEST_CASE("timestamps are ISO 8601 UTC") {
    const std::string t = iso8601_utc_now();
    REQUIRE(t.size() == 20);
    CHECK(t[4] == '-');
    CHECK(t[10] == 'T');
    CHECK(t.back() == 'Z');
}
