#include "wncs/config.hpp"

#include "wncs/error.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace wncs {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
}

void deep_merge(json& base, const json& overlay) {
    if (!base.is_object() || !overlay.is_object()) {
        base = overlay;
        return;
    }
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        if (base.contains(it.key()) && base[it.key()].is_object() && it.value().is_object()) {
            deep_merge(base[it.key()], it.value());
        } else {
            base[it.key()] = it.value();
        }
    }
}

json resolve_includes(json doc, const std::filesystem::path& dir, int depth) {
    if (depth > 10) throw ConfigError("include chain deeper than 10 files");
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    if (!doc.contains("include")) return doc;
    if (!doc["include"].is_string()) throw ConfigError("'include' must be a file name");
    const std::filesystem::path inc = dir / doc["include"].get<std::string>();
    json base = resolve_includes(read_json(inc.string()), inc.parent_path(), depth + 1);
    doc.erase("include");
    deep_merge(base, doc);
    return base;
}

const json& require(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(ctx + " is missing '" + key + "'");
    return *it;
}

double as_number(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw ConfigError(ctx + " must be a number");
    return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& ctx) {
    if (!j.is_number_unsigned()) throw ConfigError(ctx + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

Vector parse_vector(const json& j, const std::string& ctx) {
    if (!j.is_array()) throw ConfigError(ctx + " must be an array of numbers");
    Vector out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(as_number(v, ctx + " entry"));
    return out;
}

LtiPlant parse_plant(const json& j) {
    LtiPlant p;
    p.ap = parse_matrix(require(j, "a", "plant"), "plant.a");
    p.bp = parse_matrix(require(j, "b", "plant"), "plant.b");
    p.cp = parse_matrix(require(j, "c", "plant"), "plant.c");
    p.ep = j.contains("e") ? parse_matrix(j["e"], "plant.e") : Matrix(p.ap.rows(), 0);
    if (p.ep.empty() && p.ep.rows() != p.ap.rows()) p.ep = Matrix(p.ap.rows(), 0);
    return p;
}

LtiController parse_controller(const json& j) {
    LtiController c;
    c.ac = parse_matrix(require(j, "a", "controller"), "controller.a");
    c.bc = parse_matrix(require(j, "b", "controller"), "controller.b");
    c.cc = parse_matrix(require(j, "c", "controller"), "controller.c");
    return c;
}

NetworkTopology parse_network(const json& j) {
    NetworkTopology topo;
    const json& nodes = require(j, "nodes", "network");
    if (!nodes.is_array() || nodes.empty()) {
        throw ConfigError("network.nodes must be a non-empty array");
    }
    std::size_t coords = 0;
    for (const auto& jn : nodes) {
        NetworkNode node;
        const json& links = require(jn, "links", "network node");
        if (!links.is_array() || links.empty()) {
            throw ConfigError("every network node needs a non-empty 'links' array");
        }
        for (const auto& jl : links) {
            NetworkLink link;
            link.f = as_number(require(jl, "f", "network link"), "link.f");
            const json& jc = require(jl, "coords", "network link");
            if (!jc.is_array() || jc.empty()) {
                throw ConfigError("link.coords must be a non-empty array of indices");
            }
            for (const auto& c : jc) link.coords.push_back(as_count(c, "link coordinate"));
            coords += link.coords.size();
            node.links.push_back(std::move(link));
        }
        topo.nodes.push_back(std::move(node));
    }
    topo.ne = coords;
    validate_topology(topo);
    return topo;
}

ChannelModel parse_channel(const json& j) {
    ChannelModel ch;
    ch.g = parse_matrix(require(j, "g", "channel"), "channel.g");
    ch.sigma2 = parse_vector(require(j, "sigma2", "channel"), "channel.sigma2");
    if (j.contains("a")) ch.a = as_number(j["a"], "channel.a");
    ch.p_max = as_number(require(j, "p_max", "channel"), "channel.p_max");
    validate_channel(ch);
    return ch;
}

PowerConfig parse_power(const json& j) {
    PowerConfig p;
    p.channel = parse_channel(require(j, "channel", "power"));
    p.tau_bar = as_number(require(j, "tau_bar", "power"), "power.tau_bar");
    p.gamma = as_number(require(j, "gamma", "power"), "power.gamma");
    if (j.contains("delta")) p.delta = as_number(j["delta"], "power.delta");
    if (j.contains("l")) p.l = as_number(j["l"], "power.l");
    if (j.contains("eta")) p.eta = as_number(j["eta"], "power.eta");
    if (j.contains("grid")) p.grid = as_count(j["grid"], "power.grid");
    return p;
}

} // namespace

Matrix parse_matrix(const json& j, const std::string& context) {
    if (!j.is_array()) throw ConfigError(context + " must be an array of rows");
    if (j.empty()) return Matrix();
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    if (!j[0].is_array()) throw ConfigError(context + " rows must be arrays");
    cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw ConfigError(context + " rows have inconsistent lengths");
        }
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = as_number(j[i][k], context + " entry");
        }
    }
    return m;
}

LoadedConfig load_config_file(const std::string& path) {
    LoadedConfig out;
    out.path = path;
    json doc = read_json(path);
    if (doc.is_object() && doc.contains(kManifestKey)) {
        out.from_manifest = true;
        const json& cfg = require(doc, "config", "run manifest");
        if (!cfg.is_object()) throw ConfigError("run manifest 'config' must be an object");
        out.doc = cfg;
        out.manifest_flags = doc.value("flags", json::object());
        return out;
    }
    out.doc = resolve_includes(std::move(doc),
                               std::filesystem::path(path).parent_path(), 0);
    out.manifest_flags = json::object();
    return out;
}

Config parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    Config cfg;
    try {
        if (doc.contains("plant")) cfg.plant = parse_plant(doc["plant"]);
        if (doc.contains("controller")) cfg.controller = parse_controller(doc["controller"]);
        if (doc.contains("wiring")) {
            const std::string w = doc["wiring"].get<std::string>();
            if (w == "full") {
                cfg.wiring = Wiring::Full;
            } else if (w == "sensor-only") {
                cfg.wiring = Wiring::SensorOnly;
            } else {
                throw ConfigError("wiring must be 'full' or 'sensor-only', got '" + w + "'");
            }
        }
        if (doc.contains("network")) cfg.network = parse_network(doc["network"]);
        if (doc.contains("protocol")) {
            const std::string p = doc["protocol"].get<std::string>();
            if (p == "round-robin") {
                cfg.protocol = ProtocolKind::RoundRobin;
            } else if (p == "stochastic") {
                cfg.protocol = ProtocolKind::StochasticUniform;
            } else {
                throw ConfigError("protocol must be 'round-robin' or 'stochastic', got '" + p +
                                  "'");
            }
        }
        if (doc.contains("transmission")) {
            const json& t = doc["transmission"];
            if (t.contains("omega")) cfg.omega = as_number(t["omega"], "transmission.omega");
            if (t.contains("tau_bar")) {
                cfg.tau_bar = as_number(t["tau_bar"], "transmission.tau_bar");
            }
        }
        if (doc.contains("simulation")) {
            const json& s = doc["simulation"];
            if (s.contains("x0")) cfg.x0 = parse_vector(s["x0"], "simulation.x0");
            if (s.contains("e0")) cfg.e0 = parse_vector(s["e0"], "simulation.e0");
            if (s.contains("horizon")) cfg.horizon = as_number(s["horizon"], "horizon");
            if (s.contains("dt")) cfg.sim_dt = as_number(s["dt"], "simulation.dt");
            if (s.contains("grid_points")) {
                cfg.grid_points = as_count(s["grid_points"], "grid_points");
            }
            if (s.contains("trials")) cfg.trials = as_count(s["trials"], "trials");
        }
        if (doc.contains("power")) cfg.power = parse_power(doc["power"]);
        cfg.annotations = doc.value("annotations", json());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
    return cfg;
}

LtiWncs build_system(const Config& cfg) {
    if (!cfg.plant || !cfg.controller) {
        throw ConfigError("this operation needs both 'plant' and 'controller' in the config");
    }
    return cfg.wiring == Wiring::Full ? build_closed_loop(*cfg.plant, *cfg.controller)
                                      : build_sensor_only_loop(*cfg.plant, *cfg.controller);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Vector>& columns) {
    if (header.size() != columns.size() || columns.empty()) {
        throw DimensionError("csv header and column counts disagree");
    }
    const std::size_t n = columns[0].size();
    for (const auto& c : columns) {
        if (c.size() != n) throw DimensionError("csv columns have unequal lengths");
    }
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ConfigError("cannot write file: " + path);
    for (std::size_t j = 0; j < header.size(); ++j) {
        std::fprintf(f, "%s%s", header[j].c_str(), j + 1 < header.size() ? "," : "\n");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            std::fprintf(f, "%.17g%s", columns[j][i], j + 1 < columns.size() ? "," : "\n");
        }
    }
    std::fclose(f);
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    json m;
    m[kManifestKey] = 1;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = manifest.command;
    m["created"] = iso8601_utc_now();
    m["flags"] = manifest.flags;
    m["config"] = manifest.config;
    m["outputs"] = manifest.outputs;
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write file: " + path);
    f << m.dump(2) << "\n";
}

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace wncs
