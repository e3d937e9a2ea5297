#include "sispatch/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "sispatch/logistic.hpp"

namespace sispatch {

namespace {

// Tolerance on |F(dS,l) - N| accepted when assembling an EE from a root.
constexpr double kRootTolRel = 1e-8;

struct FamilyProblem {
    Matrix m;  // dI * L
    Vector a;  // l * N * beta o alpha - gamma
    Vector b;  // l * dI * beta
};

FamilyProblem family_problem(const Model& m, double l) {
    FamilyProblem p;
    p.m = m.dI * m.L();
    p.a = l * m.N * m.beta.cwiseProduct(m.alpha()) - m.gamma;
    p.b = l * m.dI * m.beta;
    return p;
}

double family_residual_bound(const Model& m, const Vector& u) {
    return 1e-9 * (1.0 + m.gamma.lpNorm<Eigen::Infinity>()) * u.lpNorm<Eigen::Infinity>();
}

// Subsolution-based initial guess; a small positive multiple of alpha when
// the subsolution is not positive.
Vector family_guess(const Model& m, double l) {
    const double ratio_max = m.r.cwiseQuotient(m.alpha()).maxCoeff();
    const double eps = 1e-6 * m.N / m.dI;
    const double scale = std::max((l * m.N - ratio_max) / (l * m.dI), eps);
    return scale * m.alpha();
}

std::optional<FamilySolution> solve_family_impl(const Model& m, double l, const Vector* warm) {
    if (!(l > 0.0))
        throw Error(ErrorCode::NonPositiveParameter, "family parameter l must be positive");
    FamilyProblem p = family_problem(m, l);
    // Exact existence criterion: the trivial solution must be unstable.
    if (spectral_bound(p.m + Matrix(p.a.asDiagonal()), true) <= 0.0)
        return std::nullopt;

    Vector guess = (warm && warm->size() == m.n()) ? *warm : family_guess(m, l);
    Vector u = solve_cooperative_logistic(p.m, p.a, p.b, guess, 1.0); // tolerance checked below

    FamilySolution fam;
    fam.l = l;
    fam.U = u;
    fam.Z = l * (m.N * m.alpha() - m.dI * u);
    fam.residual = (p.m * u + (p.a - p.b.cwiseProduct(u)).cwiseProduct(u)).lpNorm<Eigen::Infinity>();
    if (fam.residual > family_residual_bound(m, u))
        throw Error(ErrorCode::NoConvergence, "family residual above tolerance");
    return fam;
}

double balance_from(const Model& m, double dS, const FamilySolution& fam) {
    return fam.Z.sum() + dS * fam.l * fam.U.sum();
}

} // namespace

EquilibriumSolution dfe(const Model& m) {
    EquilibriumSolution eq;
    eq.S = m.N * m.alpha();
    eq.I = Vector::Zero(m.n());
    eq.kind = EquilibriumKind::DFE;
    return eq;
}

std::optional<FamilySolution> solve_family(const Model& m, double l) {
    return solve_family_impl(m, l, nullptr);
}

double capital_N(const Model& m, double l) {
    auto fam = solve_family(m, l);
    if (!fam)
        throw Error(ErrorCode::NoPositiveSolution, "capital_N needs l > 1/R0");
    return fam->Z.sum();
}

double balance_F(const Model& m, double dS, double l) {
    auto fam = solve_family(m, l);
    if (!fam)
        throw Error(ErrorCode::NoPositiveSolution, "balance_F needs l > 1/R0");
    return balance_from(m, dS, *fam);
}

double steady_state_residual(const Model& m, const Vector& S, const Vector& I) {
    const Vector infections = m.beta.cwiseProduct(S).cwiseProduct(I);
    const Vector recoveries = m.gamma.cwiseProduct(I);
    const Vector rs = m.dS * (m.L() * S) - infections + recoveries;
    const Vector ri = m.dI * (m.L() * I) + infections - recoveries;
    return std::max(rs.lpNorm<Eigen::Infinity>(), ri.lpNorm<Eigen::Infinity>());
}

EquilibriumSolution ee_from_l(const Model& m, double l) {
    auto fam = solve_family(m, l);
    if (!fam)
        throw Error(ErrorCode::NoPositiveSolution, "ee_from_l needs l > 1/R0");
    const double balance = balance_from(m, m.dS, *fam);
    if (std::abs(balance - m.N) > kRootTolRel * m.N)
        throw Error(ErrorCode::NotARoot, "F(dS,l) does not balance the total population");

    EquilibriumSolution eq;
    eq.S = fam->Z;
    eq.I = m.dS * l * fam->U;
    eq.l = l;
    eq.kappa_star = l * m.dS;
    eq.kind = EquilibriumKind::EE;

    const double res_bound = 1e-9 * m.N *
        (1.0 + m.beta.lpNorm<Eigen::Infinity>() * m.N + m.gamma.lpNorm<Eigen::Infinity>());
    if (steady_state_residual(m, eq.S, eq.I) > res_bound)
        throw Error(ErrorCode::NoConvergence, "assembled EE violates the steady-state residual bound");
    return eq;
}

StabilityReport jacobian_stability(const Model& m, const EquilibriumSolution& eq) {
    const int n = m.n();
    Matrix jac(2 * n, 2 * n);
    jac.topLeftCorner(n, n) = m.dS * m.L() - Matrix(m.beta.cwiseProduct(eq.I).asDiagonal());
    jac.topRightCorner(n, n) = Matrix((m.gamma - m.beta.cwiseProduct(eq.S)).asDiagonal());
    jac.bottomLeftCorner(n, n) = Matrix(m.beta.cwiseProduct(eq.I).asDiagonal());
    jac.bottomRightCorner(n, n) = m.dI * m.L() + Matrix((m.beta.cwiseProduct(eq.S) - m.gamma).asDiagonal());

    // The conserved total forces the left null vector 1; restrict to the
    // invariant hyperplane sum(S+I) = N spanned by e_k - e_{2n}.
    const int d = 2 * n;
    Matrix basis = Matrix::Zero(d, d - 1);
    for (int k = 0; k < d - 1; ++k) {
        basis(k, k) = 1.0;
        basis(d - 1, k) = -1.0;
    }
    const Matrix gram = basis.transpose() * basis;
    const Matrix restricted = gram.ldlt().solve(basis.transpose() * (jac * basis));

    StabilityReport rep;
    rep.sigma_star = spectral_bound(restricted, false);
    if (rep.sigma_star < -1e-8)
        rep.tag = Stability::Stable;
    else if (rep.sigma_star > 1e-8)
        rep.tag = Stability::Unstable;
    else
        rep.tag = Stability::Marginal;
    return rep;
}

std::vector<EquilibriumSolution> find_endemic_equilibria(const Model& m,
                                                         const FindRootsOptions& opts) {
    const double r0 = basic_reproduction_number(m);
    const double l_lo = (1.0 + 1e-6) / r0;

    // Grow the cap geometrically until the balance exceeds N (F -> infinity).
    double l_cap = opts.l_cap > 0.0 ? opts.l_cap : 100.0 / r0;
    l_cap = std::max(l_cap, 2.0 * l_lo);
    for (int grow = 0; grow < 60; ++grow) {
        if (balance_F(m, m.dS, l_cap) > m.N) break;
        l_cap *= 4.0;
    }

    // Logarithmic scan of F - N with warm-started family solves.
    const int pts = std::max(opts.scan_points, 8);
    std::vector<double> ls(pts), gs(pts);
    const double log_lo = std::log(l_lo), log_hi = std::log(l_cap);
    Vector warm;
    for (int k = 0; k < pts; ++k) {
        ls[k] = std::exp(log_lo + (log_hi - log_lo) * k / (pts - 1));
        auto fam = solve_family_impl(m, ls[k], warm.size() ? &warm : nullptr);
        if (!fam) {  // numerically below threshold at the left edge
            gs[k] = m.N / r0 - m.N;
            continue;
        }
        warm = fam->U;
        gs[k] = balance_from(m, m.dS, *fam) - m.N;
    }

    auto refine = [&](double a, double b, double ga) {
        // Bisection on the sign of F - N.
        double fa = ga;
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(a * b);
            const double fm = balance_F(m, m.dS, mid) - m.N;
            if ((fa <= 0.0) == (fm <= 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
            if ((b - a) <= opts.bisect_tol_rel * b) break;
        }
        return 0.5 * (a + b);
    };

    std::vector<double> roots;
    for (int k = 0; k + 1 < pts; ++k) {
        if ((gs[k] <= 0.0) != (gs[k + 1] <= 0.0))
            roots.push_back(refine(ls[k], ls[k + 1], gs[k]));
    }
    // Tangential (double) roots: |F - N| dips below tolerance without a sign change.
    for (int k = 1; k + 1 < pts; ++k) {
        if (std::abs(gs[k]) <= kRootTolRel * m.N &&
            (gs[k - 1] <= 0.0) == (gs[k + 1] <= 0.0) &&
            std::abs(gs[k]) < std::abs(gs[k - 1]) && std::abs(gs[k]) < std::abs(gs[k + 1]))
            roots.push_back(ls[k]);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double l : roots) {
        if (merged.empty() || l - merged.back() > opts.merge_tol_rel * l)
            merged.push_back(l);
    }

    std::vector<EquilibriumSolution> out;
    for (double l : merged) {
        EquilibriumSolution eq = ee_from_l(m, l);
        eq.stability = jacobian_stability(m, eq).tag;
        out.push_back(std::move(eq));
    }
    return out;
}

double sensitivity_K(const Model& m, double l) {
    auto fam = solve_family(m, l);
    if (!fam)
        throw Error(ErrorCode::NoPositiveSolution, "sensitivity_K needs l > 1/R0");
    const Vector& u = fam->U;
    const Vector slack = m.N * m.alpha() - m.dI * u;
    Matrix a = m.dI * m.L();
    a.diagonal() += l * m.beta.cwiseProduct(slack) - m.gamma - l * m.dI * m.beta.cwiseProduct(u);
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible())
        throw Error(ErrorCode::SingularSystem, "sensitivity system singular; l too close to 1/R0");
    const Vector v = lu.solve(Vector(-l * m.beta.cwiseProduct(slack).cwiseProduct(u)));
    return (v + u).sum();
}

double sensitivity_K_fd(const Model& m, double l) {
    const double h = 1e-6 * l;
    auto lo = solve_family(m, l - h);
    auto hi = solve_family(m, l + h);
    auto mid = solve_family(m, l);
    if (!lo || !hi || !mid)
        throw Error(ErrorCode::NoPositiveSolution, "sensitivity_K_fd needs l - h > 1/R0");
    return l * (hi->U.sum() - lo->U.sum()) / (2.0 * h) + mid->U.sum();
}

double uniqueness_margin(const Model& m) {
    const Vector ratio = m.gamma.cwiseQuotient(m.beta.cwiseProduct(m.alpha()));
    const double spread = (ratio.maxCoeff() - ratio.minCoeff()) / ratio.minCoeff();
    if (spread <= 1e-9) return 1.0; // gamma = m * beta o alpha: exact by theory

    const double r0 = basic_reproduction_number(m);
    const double lo = (1.0 + 1e-6) / r0;
    const double hi = 1e4 / r0;
    double sup = 0.0;
    const int pts = 200;
    for (int k = 0; k < pts; ++k) {
        const double l = lo * std::pow(hi / lo, static_cast<double>(k) / (pts - 1));
        sup = std::max(sup, sensitivity_K(m, l));
    }
    return std::min(1.0, m.N / (m.dI * sup));
}

SweepResult bifurcation_sweep_dS(const Model& m, const std::vector<double>& grid,
                                 const FindRootsOptions& opts) {
    if (grid.empty())
        throw Error(ErrorCode::DimensionMismatch, "sweep grid must be nonempty");
    for (size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0) || (k > 0 && grid[k] <= grid[k - 1]))
            throw Error(ErrorCode::NonPositiveParameter, "sweep grid must be strictly increasing and positive");
    }

    auto count_at = [&](double dS) {
        Model mm = m;
        mm.dS = dS;
        return find_endemic_equilibria(mm, opts);
    };

    SweepResult res;
    for (double dS : grid) {
        SweepPoint pt;
        pt.dS = dS;
        pt.equilibria = count_at(dS);
        res.points.push_back(std::move(pt));
    }

    auto threshold = [&](size_t min_count) -> std::optional<double> {
        int last = -1;
        for (size_t k = 0; k < res.points.size(); ++k)
            if (res.points[k].equilibria.size() >= min_count) last = static_cast<int>(k);
        if (last < 0) return std::nullopt;
        if (last + 1 >= static_cast<int>(res.points.size()))
            return grid[last]; // no bracket above the grid
        double a = grid[last], b = grid[last + 1];
        while ((b - a) > 1e-4 * b) {
            const double mid = 0.5 * (a + b);
            if (count_at(mid).size() >= min_count)
                a = mid;
            else
                b = mid;
        }
        return 0.5 * (a + b);
    };
    res.d1_hat = threshold(2);
    res.d2_hat = threshold(1);
    return res;
}

EquilibriumSolution special_ee_equal_dispersal(const Model& m) {
    if (m.dS != m.dI)
        throw Error(ErrorCode::InvalidInitialData, "special_ee_equal_dispersal needs dS = dI");
    auto fam = solve_family(m, 1.0);
    if (!fam)
        throw Error(ErrorCode::NoPositiveSolution, "R0 <= 1: no endemic equilibrium");
    EquilibriumSolution eq;
    eq.I = m.dI * fam->U;
    eq.S = m.N * m.alpha() - eq.I;
    eq.l = 1.0;
    eq.kappa_star = m.dS;
    eq.kind = EquilibriumKind::EE;
    return eq;
}

} // namespace sispatch
