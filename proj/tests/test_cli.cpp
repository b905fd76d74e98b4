#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

// end-to-end tests against the installed binary: exit codes, output files,
// and byte-for-byte reproducibility of seeded runs and manifest re-runs

namespace fs = std::filesystem;

namespace {

fs::path work_root() {
    static const fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "wncs_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

std::string config_path(const char* name) {
    return (fs::path(WNCS_SOURCE_DIR) / "configs" / name).string();
}

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(WNCS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f), {});
}

} // namespace

TEST_CASE("validate accepts every shipped config") {
    for (const auto& entry : fs::directory_iterator(fs::path(WNCS_SOURCE_DIR) / "configs")) {
        if (entry.path().extension() != ".json") continue;
        INFO("config: ", entry.path().string());
        CHECK(run_cli("validate --config " + entry.path().string()) == 0);
    }
}

TEST_CASE("validate rejects broken input with exit 1") {
    const fs::path bad = work_root() / "broken.json";
    std::ofstream(bad) << R"({"network": {"nodes": [{"links": [{"f": 7, "coords": [0]}]}]}})";
    CHECK(run_cli("validate --config " + bad.string()) == 1);
    CHECK(run_cli("validate --config " + (work_root() / "missing.json").string()) == 1);
}

TEST_CASE("missing blocks exit with the config error code") {
    const fs::path thin = work_root() / "thin.json";
    std::ofstream(thin) << R"({"transmission": {"omega": 100.0}})";
    CHECK(run_cli("rate --config " + thin.string() + " --out " +
                  (work_root() / "thin_out").string()) == 4);
    CHECK(run_cli("rate --config " + (work_root() / "missing.json").string() + " --out " +
                  (work_root() / "thin_out").string()) == 4);
}

TEST_CASE("infeasible power design exits with code 2") {
    // delta = 1 exceeds any success-probability requirement
    const fs::path out = work_root() / "power_infeasible";
    CHECK(run_cli("power --config " + config_path("power_two_link.json") + " --delta 1.0" +
                  " --out " + out.string()) == 2);
}

TEST_CASE("rate analysis writes its reports deterministically") {
    const fs::path o1 = work_root() / "rate1";
    const fs::path o2 = work_root() / "rate2";
    REQUIRE(run_cli("rate --config " + config_path("rate_full_loop.json") + " --out " +
                    o1.string()) == 0);
    REQUIRE(run_cli("rate --config " + config_path("rate_full_loop.json") + " --out " +
                    o2.string()) == 0);
    for (const char* f : {"rate_report.json", "lhs_stochastic.csv", "lhs_deterministic.csv",
                          "manifest.json"}) {
        CHECK(fs::exists(o1 / f));
    }
    CHECK(slurp(o1 / "lhs_stochastic.csv") == slurp(o2 / "lhs_stochastic.csv"));
    CHECK(slurp(o1 / "lhs_deterministic.csv") == slurp(o2 / "lhs_deterministic.csv"));

    // reference rates from the published example ride along as annotations
    const std::string rep = slurp(o1 / "rate_report.json");
    CHECK(rep.find("annotations") != std::string::npos);
    CHECK(rep.find("omega_star") != std::string::npos);
}

TEST_CASE("power sweep solves the two-link design") {
    const fs::path out = work_root() / "power_lp";
    REQUIRE(run_cli("power --config " + config_path("power_two_link.json") + " --grid 50" +
                    " --out " + out.string()) == 0);
    const std::string sol = slurp(out / "solution.json");
    CHECK(sol.find("q_star") != std::string::npos);
    CHECK(sol.find("phi_product") != std::string::npos);

    const fs::path out2 = work_root() / "power_two_link_mode";
    REQUIRE(run_cli("power --mode two-link --config " + config_path("power_two_link.json") +
                    " --out " + out2.string()) == 0);
    const std::string sol2 = slurp(out2 / "solution.json");
    CHECK(sol2.find("epsilon_star") != std::string::npos);
    CHECK(sol2.find("tau_bar_bound") != std::string::npos);

    const fs::path out3 = work_root() / "power_region";
    REQUIRE(run_cli("power --mode region --config " + config_path("power_two_link.json") +
                    " --grid 25 --out " + out3.string()) == 0);
    CHECK(fs::exists(out3 / "region.csv"));
    const std::string region = slurp(out3 / "region.csv");
    CHECK(region.rfind("p1,p2,feasible\n", 0) == 0);
}

TEST_CASE("seeded single-trial simulation is byte reproducible") {
    const std::string cfg = config_path("sim_full_loop.json");
    const fs::path a = work_root() / "sim_a";
    const fs::path b = work_root() / "sim_b";
    const fs::path c = work_root() / "sim_c";
    REQUIRE(run_cli("simulate --config " + cfg + " --trials 1 --seed 7 --grid 101 --out " +
                    a.string()) == 0);
    REQUIRE(run_cli("simulate --config " + cfg + " --trials 1 --seed 7 --grid 101 --out " +
                    b.string()) == 0);
    REQUIRE(run_cli("simulate --config " + cfg + " --trials 1 --seed 8 --grid 101 --out " +
                    c.string()) == 0);
    CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
    CHECK(slurp(a / "trajectory.csv") != slurp(c / "trajectory.csv"));
}

TEST_CASE("a run manifest reproduces the run byte for byte") {
    const std::string cfg = config_path("sim_full_loop.json");
    const fs::path first = work_root() / "mc_first";
    const fs::path rerun = work_root() / "mc_rerun";
    REQUIRE(run_cli("simulate --config " + cfg +
                    " --trials 3 --seed 11 --grid 81 --out " + first.string()) == 0);
    REQUIRE(fs::exists(first / "decay.csv"));

    // no flags besides the manifest: trials, seed, and grid are restored
    REQUIRE(run_cli("simulate --config " + (first / "manifest.json").string() + " --out " +
                    rerun.string()) == 0);
    CHECK(slurp(first / "decay.csv") == slurp(rerun / "decay.csv"));
    CHECK(slurp(first / "decay_report.json") == slurp(rerun / "decay_report.json"));
}

TEST_CASE("cover statistics stream is seed reproducible") {
    const std::string cfg = config_path("cover_two_node.json");
    const fs::path a = work_root() / "cover_a";
    const fs::path b = work_root() / "cover_b";
    REQUIRE(run_cli("cover --config " + cfg + " --trials 20000 --seed 5 --out " +
                    a.string()) == 0);
    REQUIRE(run_cli("cover --config " + cfg + " --trials 20000 --seed 5 --out " +
                    b.string()) == 0);
    CHECK(slurp(a / "cover_hist.csv") == slurp(b / "cover_hist.csv"));
    CHECK(slurp(a / "cover_report.json") == slurp(b / "cover_report.json"));
    const std::string rep = slurp(a / "cover_report.json");
    CHECK(rep.find("formula_mean") != std::string::npos);
    CHECK(rep.find("chain_cover_mean") != std::string::npos);
}

TEST_CASE("unknown flags are a usage error") {
    CHECK(run_cli("simulate --config x --frobnicate") != 0);
    CHECK(run_cli("") != 0); // a subcommand is required
}
