#include "sispatch/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sispatch/equilibria.hpp"
#include "sispatch/logistic.hpp"

namespace sispatch {

namespace {

constexpr double kRatioTieTolRel = 1e-9;

Vector risk_ratios(const Model& m) {
    return m.r.cwiseQuotient(m.alpha());
}

bool r_in_span_alpha(const Model& m) {
    const Vector ratio = risk_ratios(m);
    return (ratio.maxCoeff() - ratio.minCoeff()) <= kRatioTieTolRel * ratio.maxCoeff();
}

// Matrix 1-norm (max absolute column sum).
double one_norm(const Matrix& a) {
    double best = 0.0;
    for (int j = 0; j < a.cols(); ++j) best = std::max(best, a.col(j).cwiseAbs().sum());
    return best;
}

// Sorted breakpoints l_j = r_j / (N alpha_j) with the alpha-mass attached to
// each distinct breakpoint (ties merged so slope updates apply once).
std::vector<std::pair<double, double>> merged_breakpoints(const Model& m) {
    std::vector<std::pair<double, double>> bp(m.n());
    for (int j = 0; j < m.n(); ++j)
        bp[j] = {m.r(j) / (m.N * m.alpha()(j)), m.alpha()(j)};
    std::sort(bp.begin(), bp.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& [l, a] : bp) {
        if (!merged.empty() && merged.back().first == l)
            merged.back().second += a;
        else
            merged.emplace_back(l, a);
    }
    return merged;
}

} // namespace

double min_risk_ratio(const Model& m) { return risk_ratios(m).minCoeff(); }

std::vector<int> omega_star(const Model& m) {
    const Vector ratio = risk_ratios(m);
    const double lo = ratio.minCoeff();
    std::vector<int> idx;
    for (int i = 0; i < m.n(); ++i)
        if (ratio(i) <= lo * (1.0 + kRatioTieTolRel)) idx.push_back(i);
    return idx;
}

Vector solve_barI(const Model& m) {
    const int n = m.n();
    const Vector base = m.N * m.alpha() - m.r; // growth offsets before the nonlocal term
    auto rhs = [&](const Vector& I) -> Vector {
        const double total = I.sum();
        const Vector local = base + m.dI * (total * m.alpha() - I);
        return m.dI * (m.L() * I) + m.beta.cwiseProduct(local).cwiseProduct(I);
    };

    Vector I = m.N * m.alpha();
    const double blow_up = 1e9 * m.N;
    int calm = 0;
    for (int it = 0; it < 400000; ++it) {
        const Vector f = rhs(I);
        double rate = 1e-12;
        const double total = I.sum();
        for (int i = 0; i < n; ++i) {
            const double local = base(i) + m.dI * (total * m.alpha()(i) - 2.0 * I(i));
            rate = std::max(rate, std::abs(m.dI * m.L()(i, i) + m.beta(i) * local) +
                                      m.dI * m.beta(i) * m.alpha()(i) * I(i));
        }
        const double dt = 0.5 / rate;
        // projected Euler step: the nonnegative orthant is invariant for the flow
        Vector next = (I + dt * f).cwiseMax(0.0);
        const double change = (next - I).lpNorm<Eigen::Infinity>();
        I = next;
        if (I.lpNorm<Eigen::Infinity>() > blow_up)
            throw Error(ErrorCode::NoConvergence, "reduced infected system diverged");
        if (change <= 1e-10 * std::max(I.lpNorm<Eigen::Infinity>(), 1e-12 * m.N)) {
            if (++calm >= 3) break;
        } else {
            calm = 0;
        }
    }

    if (I.lpNorm<Eigen::Infinity>() <= 1e-10 * m.N) return Vector::Zero(n);

    // Newton polish; irreducibility forces interior solutions, so positivity
    // can be enforced by damping.
    for (int it = 0; it < 100; ++it) {
        const Vector f = rhs(I);
        if (f.lpNorm<Eigen::Infinity>() <= 1e-12 * m.N * (1.0 + m.beta.lpNorm<Eigen::Infinity>() * m.N))
            break;
        const double total = I.sum();
        Matrix jac = m.dI * m.L();
        jac.diagonal() += m.beta.cwiseProduct(base + m.dI * (total * m.alpha() - 2.0 * I));
        jac += m.dI * (m.beta.cwiseProduct(m.alpha()).cwiseProduct(I)) * Vector::Ones(n).transpose();
        Vector step = Eigen::PartialPivLU<Matrix>(jac).solve(-f);
        if (!step.allFinite()) break;
        double damp = 1.0;
        while (((I + damp * step).array() <= 0.0).any() && damp > 1e-12) damp *= 0.5;
        if (damp <= 1e-12) break;
        I += damp * step;
    }

    if (rhs(I).lpNorm<Eigen::Infinity>() > 1e-9)
        throw Error(ErrorCode::NoConvergence, "reduced infected system residual too large");
    return I;
}

DsZeroProfile profile_dS_to_zero(const Model& m) {
    DsZeroProfile p;
    const double sum_r = m.r.sum();
    const double gap = m.N - sum_r;

    if (std::abs(gap) <= 1e-9 * m.N) {
        p.branch = DsZeroCase::AtTotalRisk;
        p.S_limit = m.r;
        p.I_limit = Vector::Zero(m.n());
        const Vector Ibar = solve_barI(m);
        p.I_bar = Ibar;
        p.S_limit_alt = (m.N + m.dI * Ibar.sum()) * m.alpha() - m.dI * Ibar;
        return p;
    }
    if (gap > 0.0) {
        p.branch = DsZeroCase::AboveTotalRisk;
        p.S_limit = m.r;
        p.I_limit = gap * m.alpha();
        return p;
    }
    p.branch = DsZeroCase::BelowTotalRisk;
    const Vector Ibar = solve_barI(m);
    p.I_bar = Ibar;
    p.S_limit = (m.N + m.dI * Ibar.sum()) * m.alpha() - m.dI * Ibar;
    p.I_limit = Vector::Zero(m.n());
    return p;
}

DiZeroProfile profile_dI_to_zero(const Model& m) {
    if (r_in_span_alpha(m))
        throw Error(ErrorCode::DegenerateOmegaStar,
                    "risk ratios are uniform; the concentration set is all patches");
    DiZeroProfile p;
    p.omega = omega_star(m);
    const double rm = min_risk_ratio(m);
    if (m.N <= rm)
        throw Error(ErrorCode::NoPositiveSolution,
                    "total population does not exceed the minimal risk ratio");
    p.S_limit = rm * m.alpha();
    p.I_total = m.N - rm;

    const int k = static_cast<int>(p.omega.size());
    Matrix Lsub(k, k);
    Vector asub(k), bsub(k);
    for (int a = 0; a < k; ++a) {
        asub(a) = m.alpha()(p.omega[a]);
        bsub(a) = m.beta(p.omega[a]);
        for (int b = 0; b < k; ++b) Lsub(a, b) = m.L()(p.omega[a], p.omega[b]);
    }
    const int im = p.omega.front();
    p.bracket_lo = p.I_total / asub.sum();
    p.bracket_hi = (p.I_total * m.beta(im) + m.dS * one_norm(Lsub)) / (m.alpha()(im) * m.beta(im));

    if (k == 1) {
        // scalar reduction: dS L11 I + beta (C a - I) I = 0 with I = I_total
        p.I_star = Vector::Constant(1, p.I_total);
        p.C_star = (p.I_total - m.dS * Lsub(0, 0) / bsub(0)) / asub(0);
        return p;
    }

    auto reduced = [&](double C) -> Vector {
        const Vector a = C * bsub.cwiseProduct(asub);
        if (spectral_bound(m.dS * Lsub + Matrix(a.asDiagonal()), true) <= 0.0)
            return Vector::Zero(k);
        const double target = 1e-10 * C * (1.0 + bsub.lpNorm<Eigen::Infinity>());
        return solve_cooperative_logistic(m.dS * Lsub, a, bsub, C * asub, target);
    };
    auto defect = [&](double C) { return reduced(C).sum() - p.I_total; };

    double lo = p.bracket_lo * (1.0 - 1e-9);
    double hi = p.bracket_hi * (1.0 + 1e-9);
    double flo = defect(lo), fhi = defect(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw Error(ErrorCode::NoBracket,
                    "normalization defect does not change sign on the analytic bracket");
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (defect(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    p.C_star = 0.5 * (lo + hi);
    p.I_star = reduced(p.C_star);
    return p;
}

SigmaProfile sigma_profile(const Model& m, double sigma) {
    if (!(sigma > 0.0))
        throw Error(ErrorCode::NonPositiveParameter, "sigma must be positive");
    const int n = m.n();
    SigmaProfile p;
    p.sigma = sigma;

    // G(l) = sum_j [min{l N a_j, r_j} + (l N a_j - r_j)_+ / sigma] is piecewise
    // linear, strictly increasing, G(0) = 0; invert the active piece exactly.
    const auto bp = merged_breakpoints(m);
    double l_lo = 0.0, g_lo = 0.0;
    double slope = m.N; // below every breakpoint all patches contribute N alpha_j
    double l = -1.0;
    for (size_t seg = 0; seg <= bp.size(); ++seg) {
        const double l_hi =
            (seg < bp.size()) ? bp[seg].first : std::numeric_limits<double>::infinity();
        if (seg == bp.size() || g_lo + slope * (l_hi - l_lo) >= m.N) {
            l = l_lo + (m.N - g_lo) / slope;
            break;
        }
        g_lo += slope * (l_hi - l_lo);
        l_lo = l_hi;
        // crossing a breakpoint trades slope N a_j for N a_j / sigma
        slope += m.N * bp[seg].second * (1.0 / sigma - 1.0);
    }
    p.l_sigma = l;
    p.S_limit = (l * m.N * m.alpha()).cwiseMin(m.r);
    p.I_limit = (l * m.N * m.alpha() - m.r).cwiseMax(0.0) / sigma;
    return p;
}

double sigma_inf_l_root(const Model& m) {
    if (m.N >= m.r.sum() * (1.0 - 1e-12))
        throw Error(ErrorCode::NoInteriorRoot,
                    "sum_j min{l N alpha_j, r_j} saturates below the total population");
    const auto bp = merged_breakpoints(m);
    double l_lo = 0.0, g_lo = 0.0, slope = m.N;
    for (const auto& [l_hi, mass] : bp) {
        if (g_lo + slope * (l_hi - l_lo) >= m.N) break;
        g_lo += slope * (l_hi - l_lo);
        l_lo = l_hi;
        slope -= m.N * mass;
    }
    return l_lo + (m.N - g_lo) / slope;
}

SigmaSublimits sigma_sublimits(const Model& m) {
    SigmaSublimits s;
    const int n = m.n();
    const double rm = min_risk_ratio(m);
    s.S_sigma_zero = rm * m.alpha();
    s.I_sigma_zero = Vector::Zero(n);
    const auto omega = omega_star(m);
    double mass = 0.0;
    for (int i : omega) mass += m.alpha()(i);
    for (int i : omega) s.I_sigma_zero(i) = (m.N - rm) / mass * m.alpha()(i);

    const double sum_r = m.r.sum();
    if (std::abs(m.N - sum_r) <= 1e-9 * m.N) {
        s.inf_case = 2;
        s.l_inf = risk_ratios(m).maxCoeff() / m.N;
        s.S_inf = m.r;
        s.I_inf = Vector::Zero(n);
    } else if (m.N < sum_r) {
        s.inf_case = 1;
        s.l_inf = sigma_inf_l_root(m);
        s.S_inf = (s.l_inf * m.N * m.alpha()).cwiseMin(m.r);
        s.I_inf = Vector::Zero(n);
    } else {
        s.inf_case = 3;
        s.l_inf = std::numeric_limits<double>::infinity();
        s.S_inf = m.r;
        s.I_inf = (m.N - sum_r) * m.alpha();
    }
    return s;
}

CriticalNEstimate critical_N_estimate(const Model& m) {
    if (r_in_span_alpha(m))
        throw Error(ErrorCode::DegenerateOmegaStar,
                    "risk ratios are uniform; the limit profile is population-independent");
    CriticalNEstimate est;
    const double r_star = m.N / basic_reproduction_number(m); // threshold of l N, N-independent
    est.bracket_lo = std::max(m.r.sum(), r_star);
    est.bracket_hi = risk_ratios(m).maxCoeff();

    // The family sum depends on (l, N) only through l N, so scan the single
    // effective variable Lambda = l N with l = 1.
    auto family_sum = [&](double lambda) -> double {
        Model scaled = m;
        scaled.N = lambda;
        return capital_N(scaled, 1.0);
    };

    const double lam_lo = r_star * (1.0 + 1e-6);
    const double lam_hi = r_star * 1e4;
    const int grid = 200;
    double best = -1.0, best_lam = 0.0;
    int best_idx = -1;
    std::vector<double> lams(grid), vals(grid, -1.0);
    for (int k = 0; k < grid; ++k) {
        lams[k] = lam_lo * std::pow(lam_hi / lam_lo, double(k) / (grid - 1));
        try {
            vals[k] = family_sum(lams[k]);
        } catch (const Error&) {
            continue;
        }
        if (vals[k] > best) {
            best = vals[k];
            best_lam = lams[k];
            best_idx = k;
        }
    }

    if (best_idx >= 0) {
        // golden-section refinement in log(Lambda) around the grid maximizer
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = std::log(lams[std::max(best_idx - 1, 0)]);
        double b = std::log(lams[std::min(best_idx + 1, grid - 1)]);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = family_sum(std::exp(x1)), f2 = family_sum(std::exp(x2));
        for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a);
                f2 = family_sum(std::exp(x2));
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a);
                f1 = family_sum(std::exp(x1));
            }
        }
        const double lam = std::exp(0.5 * (a + b));
        const double val = family_sum(lam);
        if (val > best) {
            best = val;
            best_lam = lam;
        }
    }

    // boundary limits: Lambda -> R_* gives R_* alpha, Lambda -> inf gives r
    est.interior_max = best > est.bracket_lo;
    est.estimate = std::max(best, est.bracket_lo);
    est.lambda_at_max = est.interior_max ? best_lam : 0.0;
    return est;
}

} // namespace sispatch
