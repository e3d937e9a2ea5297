#include "sispatch.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "sispatch/asymptotics.hpp"
#include "sispatch/dynamics.hpp"
#include "sispatch/equilibria.hpp"
#include "sispatch/io.hpp"
#include "sispatch/model.hpp"

namespace {

using namespace sispatch;

thread_local std::string tl_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
sisp_status guarded(char** out, Fn&& fn) {
    tl_last_error.clear();
    if (out) *out = nullptr;
    try {
        const std::string doc = fn();
        if (out) *out = dup_string(doc);
        return SISP_OK;
    } catch (const Error& e) {
        tl_last_error = e.what();
        return e.is_validation() ? SISP_VALIDATION_ERROR : SISP_NUMERIC_ERROR;
    } catch (const std::exception& e) {
        tl_last_error = e.what();
        return SISP_NUMERIC_ERROR;
    }
}

void write_equilibrium(JsonWriter& w, const EquilibriumSolution& eq) {
    w.begin_object();
    w.key("kind").value(eq.kind == EquilibriumKind::DFE ? "dfe" : "endemic");
    w.key("l").value(eq.l);
    w.key("kappa_star").value(eq.kappa_star);
    w.key("S").value(eq.S);
    w.key("I").value(eq.I);
    w.key("stability").value(to_string(eq.stability));
    w.end_object();
}

std::vector<std::string> state_header(int n) {
    std::vector<std::string> h;
    for (int i = 1; i <= n; ++i) h.push_back("S_" + std::to_string(i));
    for (int i = 1; i <= n; ++i) h.push_back("I_" + std::to_string(i));
    return h;
}

} // namespace

struct sisp_scenario {
    ScenarioConfig cfg;
    Model model;
};

extern "C" {

sisp_status sisp_scenario_create(const char* config_json, sisp_scenario** out) {
    tl_last_error.clear();
    if (out) *out = nullptr;
    if (!config_json || !out) {
        tl_last_error = "null argument";
        return SISP_VALIDATION_ERROR;
    }
    try {
        auto cfg = parse_scenario_config(config_json);
        auto model = model_from_config(cfg);
        *out = new sisp_scenario{std::move(cfg), std::move(model)};
        return SISP_OK;
    } catch (const Error& e) {
        tl_last_error = e.what();
        return e.is_validation() ? SISP_VALIDATION_ERROR : SISP_NUMERIC_ERROR;
    } catch (const std::exception& e) {
        tl_last_error = e.what();
        return SISP_NUMERIC_ERROR;
    }
}

void sisp_scenario_destroy(sisp_scenario* s) { delete s; }

const char* sisp_last_error(void) { return tl_last_error.c_str(); }

void sisp_string_free(char* s) { std::free(s); }

sisp_status sisp_reproduction_json(const sisp_scenario* s, char** out) {
    return guarded(out, [&] {
        const auto rep = reproduction_analysis(s->model);
        JsonWriter w;
        w.begin_object();
        w.key("r0").value(rep.r0);
        w.key("sigma_star").value(rep.sigma_star);
        w.key("limit_dI_zero").value(rep.limit_dI_zero);
        w.key("limit_dI_inf").value(rep.limit_dI_inf);
        w.key("alpha").value(s->model.alpha());
        w.key("r").value(s->model.r);
        w.end_object();
        return w.str();
    });
}

sisp_status sisp_dfe_json(const sisp_scenario* s, char** out) {
    return guarded(out, [&] {
        auto eq = dfe(s->model);
        eq.stability = jacobian_stability(s->model, eq).tag;
        const auto cls = classify_dfe_global_stability(s->model);
        const auto nox = ee_nonexistence_check(s->model);
        JsonWriter w;
        w.begin_object();
        w.key("equilibrium");
        write_equilibrium(w, eq);
        w.key("global_stability");
        w.begin_object();
        w.key("small_population").value(cls.cond_i);
        w.key("large_dS_possible").value(cls.cond_ii_possible);
        w.key("equal_dispersal").value(cls.cond_iii);
        w.key("proportional_rates").value(cls.cond_iv);
        w.key("proportionality_constant").value(cls.cond_iv_m);
        w.key("rho_beta_vinv").value(cls.rho_beta_vinv);
        w.key("conclusive").value(cls.conclusive());
        w.end_object();
        w.key("no_endemic_equilibrium");
        w.begin_object();
        w.key("subthreshold_fast_dS").value(nox.cond_i);
        w.key("population_below_min_risk").value(nox.cond_ii);
        w.key("guaranteed").value(nox.no_ee_guaranteed());
        w.end_object();
        w.end_object();
        return w.str();
    });
}

sisp_status sisp_equilibria_json(const sisp_scenario* s, int scan_points, double l_cap,
                                 char** out) {
    return guarded(out, [&] {
        FindRootsOptions opts;
        if (scan_points > 0) opts.scan_points = scan_points;
        if (l_cap > 0) opts.l_cap = l_cap;
        const auto eqs = find_endemic_equilibria(s->model, opts);
        JsonWriter w;
        w.begin_object();
        w.key("count").value(static_cast<long>(eqs.size()));
        w.key("equilibria").begin_array();
        for (const auto& eq : eqs) write_equilibrium(w, eq);
        w.end_array();
        w.end_object();
        return w.str();
    });
}

sisp_status sisp_equilibria_csv(const sisp_scenario* s, int scan_points, double l_cap,
                                char** out) {
    return guarded(out, [&] {
        FindRootsOptions opts;
        if (scan_points > 0) opts.scan_points = scan_points;
        if (l_cap > 0) opts.l_cap = l_cap;
        const auto eqs = find_endemic_equilibria(s->model, opts);
        std::vector<std::string> header = {"index", "l", "kappa_star", "stability"};
        for (const auto& h : state_header(s->model.n())) header.push_back(h);
        std::string doc = csv_row(header);
        for (size_t k = 0; k < eqs.size(); ++k) {
            std::vector<std::string> row = {std::to_string(k), format_double(eqs[k].l),
                                            format_double(eqs[k].kappa_star),
                                            to_string(eqs[k].stability)};
            for (int i = 0; i < s->model.n(); ++i) row.push_back(format_double(eqs[k].S(i)));
            for (int i = 0; i < s->model.n(); ++i) row.push_back(format_double(eqs[k].I(i)));
            doc += csv_row(row);
        }
        return doc;
    });
}

sisp_status sisp_simulate_csv(const sisp_scenario* s, double horizon, int samples, char** out) {
    return guarded(out, [&] {
        if (!s->cfg.S0 || !s->cfg.I0)
            throw Error(ErrorCode::BadConfig, "simulate requires S0 and I0 in the config");
        SimulateOptions opts;
        opts.rel_tol = s->cfg.tol_rel;
        opts.abs_tol = s->cfg.tol_abs;
        if (samples > 0) opts.output_samples = samples;
        const auto traj = simulate(s->model, *s->cfg.S0, *s->cfg.I0, horizon, opts);
        std::vector<std::string> header = {"t"};
        for (const auto& h : state_header(s->model.n())) header.push_back(h);
        std::string doc = csv_row(header);
        for (size_t k = 0; k < traj.times.size(); ++k) {
            std::vector<std::string> row = {format_double(traj.times[k])};
            for (int i = 0; i < s->model.n(); ++i) row.push_back(format_double(traj.S[k](i)));
            for (int i = 0; i < s->model.n(); ++i) row.push_back(format_double(traj.I[k](i)));
            doc += csv_row(row);
        }
        return doc;
    });
}

sisp_status sisp_sweep_ds_csv(const sisp_scenario* s, double from, double to, int points,
                              char** out) {
    return guarded(out, [&] {
        if (!(from > 0.0) || !(to > from) || points < 2)
            throw Error(ErrorCode::BadConfig, "sweep needs 0 < from < to and points >= 2");
        std::vector<double> grid(points);
        for (int k = 0; k < points; ++k)
            grid[k] = from * std::pow(to / from, double(k) / (points - 1));
        const auto sweep = bifurcation_sweep_dS(s->model, grid);
        std::string doc = csv_row({"dS", "count", "l_roots", "stability"});
        for (const auto& pt : sweep.points) {
            std::string roots, tags;
            for (size_t k = 0; k < pt.equilibria.size(); ++k) {
                if (k) {
                    roots += ';';
                    tags += ';';
                }
                roots += format_double(pt.equilibria[k].l);
                tags += to_string(pt.equilibria[k].stability);
            }
            doc += csv_row({format_double(pt.dS), std::to_string(pt.equilibria.size()), roots,
                            tags});
        }
        if (sweep.d1_hat) doc += "# d1_hat=" + format_double(*sweep.d1_hat) + "\n";
        if (sweep.d2_hat) doc += "# d2_hat=" + format_double(*sweep.d2_hat) + "\n";
        return doc;
    });
}

sisp_status sisp_asymptotics_ds0_json(const sisp_scenario* s, char** out) {
    return guarded(out, [&] {
        const auto p = profile_dS_to_zero(s->model);
        JsonWriter w;
        w.begin_object();
        const char* branch = p.branch == DsZeroCase::AboveTotalRisk ? "above_total_risk"
                             : p.branch == DsZeroCase::AtTotalRisk  ? "at_total_risk"
                                                                    : "below_total_risk";
        w.key("branch").value(branch);
        w.key("S_limit").value(p.S_limit);
        w.key("I_limit").value(p.I_limit);
        w.key("S_limit_alt");
        if (p.S_limit_alt)
            w.value(*p.S_limit_alt);
        else
            w.null_value();
        w.key("I_bar");
        if (p.I_bar)
            w.value(*p.I_bar);
        else
            w.null_value();
        w.end_object();
        return w.str();
    });
}

sisp_status sisp_asymptotics_di0_json(const sisp_scenario* s, char** out) {
    return guarded(out, [&] {
        const auto p = profile_dI_to_zero(s->model);
        JsonWriter w;
        w.begin_object();
        w.key("high_risk_patches").begin_array();
        for (int i : p.omega) w.value(static_cast<long>(i));
        w.end_array();
        w.key("S_limit").value(p.S_limit);
        w.key("I_total").value(p.I_total);
        w.key("I_star").value(p.I_star);
        w.key("C_star").value(p.C_star);
        w.key("C_star_bracket").begin_array().value(p.bracket_lo).value(p.bracket_hi).end_array();
        w.end_object();
        return w.str();
    });
}

sisp_status sisp_sigma_profile_json(const sisp_scenario* s, double sigma, char** out) {
    return guarded(out, [&] {
        const auto p = sigma_profile(s->model, sigma);
        JsonWriter w;
        w.begin_object();
        w.key("sigma").value(p.sigma);
        w.key("l_sigma").value(p.l_sigma);
        w.key("S_limit").value(p.S_limit);
        w.key("I_limit").value(p.I_limit);
        w.end_object();
        return w.str();
    });
}

sisp_status sisp_critical_n_json(const sisp_scenario* s, char** out) {
    return guarded(out, [&] {
        const auto est = critical_N_estimate(s->model);
        JsonWriter w;
        w.begin_object();
        w.key("estimate").value(est.estimate);
        w.key("bracket").begin_array().value(est.bracket_lo).value(est.bracket_hi).end_array();
        w.key("lambda_at_max").value(est.lambda_at_max);
        w.key("interior_max").value(est.interior_max);
        w.end_object();
        return w.str();
    });
}

} // extern "C"
