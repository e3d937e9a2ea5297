// Command-line front end; all computation goes through the C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sispatch.h"

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string out_dir;
    double tol_rel = 0.0; // 0 = keep config value
    double tol_abs = 0.0;
    double lmax_cap = 0.0;
    int points = 0;
    long seed = -1;
};

int fail(const char* what, sisp_status st) {
    std::cerr << "error: " << what << ": " << sisp_last_error() << "\n";
    return static_cast<int>(st);
}

// Applies flag overrides to the raw config text. Overrides go through the
// same fail-closed parser as everything else.
std::string load_config(const GlobalFlags& g, std::string& err) {
    std::ifstream in(g.config_path);
    if (!in) {
        err = "cannot read config file '" + g.config_path + "'";
        return {};
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (g.tol_rel <= 0.0 && g.tol_abs <= 0.0 && g.seed < 0) return text;
    try {
        auto j = nlohmann::json::parse(text);
        if (g.tol_rel > 0.0) j["tolerances"]["rel"] = g.tol_rel;
        if (g.tol_abs > 0.0) j["tolerances"]["abs"] = g.tol_abs;
        if (g.seed >= 0) j["seed"] = g.seed;
        return j.dump();
    } catch (const std::exception& e) {
        err = std::string("config is not valid JSON: ") + e.what();
        return {};
    }
}

int emit(const GlobalFlags& g, const std::string& name, const char* doc) {
    if (g.out_dir.empty()) {
        std::cout << doc;
        if (*doc && doc[std::string(doc).size() - 1] != '\n') std::cout << "\n";
        return 0;
    }
    std::filesystem::create_directories(g.out_dir);
    const auto path = std::filesystem::path(g.out_dir) / name;
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write '" << path.string() << "'\n";
        return 2;
    }
    out << doc;
    return 0;
}

struct Scenario {
    sisp_scenario* handle = nullptr;
    ~Scenario() { sisp_scenario_destroy(handle); }
};

int open_scenario(const GlobalFlags& g, Scenario& sc) {
    std::string err;
    const std::string text = load_config(g, err);
    if (!err.empty()) {
        std::cerr << "error: BadConfig: " << err << "\n";
        return 2;
    }
    const sisp_status st = sisp_scenario_create(text.c_str(), &sc.handle);
    if (st != SISP_OK) return fail("config", st);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIS patch-model analysis"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("-c,--config", g.config_path, "scenario config JSON")->required();
    app.add_option("--out", g.out_dir, "output directory (default: stdout)");
    app.add_option("--tol-rel", g.tol_rel, "relative tolerance override");
    app.add_option("--tol-abs", g.tol_abs, "absolute tolerance override");
    app.add_option("--lmax-cap", g.lmax_cap, "cap for the equilibrium family scan");
    app.add_option("--points", g.points, "grid points / output samples");
    app.add_option("--seed", g.seed, "seed override for randomized suites");

    auto* cmd_r0 = app.add_subcommand("r0", "reproduction-number analysis");
    auto* cmd_dfe = app.add_subcommand("dfe", "disease-free equilibrium and classification");
    auto* cmd_eq = app.add_subcommand("equilibria", "all endemic equilibria with stability");
    auto* cmd_sim = app.add_subcommand("simulate", "integrate the model from S0/I0");
    double horizon = 200.0;
    cmd_sim->add_option("--horizon", horizon, "integration horizon");
    auto* cmd_sweep = app.add_subcommand("sweep", "equilibrium count across a dS grid");
    std::string sweep_param = "dS";
    double sweep_from = 0.0, sweep_to = 0.0;
    cmd_sweep->add_option("--param", sweep_param, "swept parameter (only dS)");
    cmd_sweep->add_option("--from", sweep_from, "grid start")->required();
    cmd_sweep->add_option("--to", sweep_to, "grid end")->required();
    auto* cmd_asym = app.add_subcommand("asymptotics", "dispersal-limit profiles");
    std::string limit;
    cmd_asym->add_option("--limit", limit, "dS0 or dI0")->required();
    auto* cmd_sigma = app.add_subcommand("sigma-profile", "joint-limit profile at dI/dS -> sigma");
    double sigma = 0.0;
    cmd_sigma->add_option("--sigma", sigma, "dispersal ratio")->required();
    auto* cmd_critn = app.add_subcommand("critical-n", "critical total-population estimate");

    // global flags may appear after the subcommand name
    for (CLI::App* sub : {cmd_r0, cmd_dfe, cmd_eq, cmd_sim, cmd_sweep, cmd_asym, cmd_sigma,
                          cmd_critn})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    Scenario sc;
    if (int rc = open_scenario(g, sc); rc != 0) return rc;

    char* doc = nullptr;
    sisp_status st = SISP_OK;
    int rc = 0;

    if (cmd_r0->parsed()) {
        st = sisp_reproduction_json(sc.handle, &doc);
        if (st != SISP_OK) return fail("r0", st);
        rc = emit(g, "r0.json", doc);
    } else if (cmd_dfe->parsed()) {
        st = sisp_dfe_json(sc.handle, &doc);
        if (st != SISP_OK) return fail("dfe", st);
        rc = emit(g, "dfe.json", doc);
    } else if (cmd_eq->parsed()) {
        st = sisp_equilibria_json(sc.handle, g.points, g.lmax_cap, &doc);
        if (st != SISP_OK) return fail("equilibria", st);
        rc = emit(g, "equilibria.json", doc);
        sisp_string_free(doc);
        doc = nullptr;
        if (rc == 0) {
            st = sisp_equilibria_csv(sc.handle, g.points, g.lmax_cap, &doc);
            if (st != SISP_OK) return fail("equilibria", st);
            rc = emit(g, "equilibria.csv", doc);
        }
    } else if (cmd_sim->parsed()) {
        st = sisp_simulate_csv(sc.handle, horizon, g.points, &doc);
        if (st != SISP_OK) return fail("simulate", st);
        rc = emit(g, "trajectory.csv", doc);
    } else if (cmd_sweep->parsed()) {
        if (sweep_param != "dS") {
            std::cerr << "error: BadConfig: only '--param dS' sweeps are supported\n";
            return 2;
        }
        st = sisp_sweep_ds_csv(sc.handle, sweep_from, sweep_to, g.points > 0 ? g.points : 25,
                               &doc);
        if (st != SISP_OK) return fail("sweep", st);
        rc = emit(g, "sweep.csv", doc);
    } else if (cmd_asym->parsed()) {
        if (limit == "dS0")
            st = sisp_asymptotics_ds0_json(sc.handle, &doc);
        else if (limit == "dI0")
            st = sisp_asymptotics_di0_json(sc.handle, &doc);
        else {
            std::cerr << "error: BadConfig: --limit must be dS0 or dI0\n";
            return 2;
        }
        if (st != SISP_OK) return fail("asymptotics", st);
        rc = emit(g, "asymptotics.json", doc);
    } else if (cmd_sigma->parsed()) {
        st = sisp_sigma_profile_json(sc.handle, sigma, &doc);
        if (st != SISP_OK) return fail("sigma-profile", st);
        rc = emit(g, "sigma_profile.json", doc);
    } else if (cmd_critn->parsed()) {
        st = sisp_critical_n_json(sc.handle, &doc);
        if (st != SISP_OK) return fail("critical-n", st);
        rc = emit(g, "critical_n.json", doc);
    }

    sisp_string_free(doc);
    return rc;
}
