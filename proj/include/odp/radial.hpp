#pragma once

// Radial Dirichlet problem on the geodesic-ball complement of S^d(k):
//   -lambda [ d_rr + (d-1) C_k/S_k d_r ] u + u - u^p = 0 on (1, pi/k),
//   u(1) = 0, regular at the north pole.
// Solved by damped Newton on the divergence-form discretization, seeded by
// the cutoff transplant of the exterior ground state.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "odp/exterior.hpp"
#include "odp/geometry.hpp"
#include "odp/scheme1d.hpp"

namespace odp {

struct RadialProfile {
    RadialGrid grid; // sphere grid [1, pi/k]
    ProblemParams params;
    std::vector<double> values;  // u at nodes, values[0] = u(1) = 0
    std::vector<double> dvalues; // central-difference derivative samples
    double du_at_1 = 0.0;        // variational boundary flux / (lambda W_0)
    double residual_sup = 0.0;

    Scheme1D scheme() const {
        return Scheme1D::make(grid, params.lambda, RightClosure::Pole);
    }

    double u_max() const { return *std::max_element(values.begin(), values.end()); }

    /// One-sided derivative at the pole (should vanish by regularity).
    double du_at_pole() const {
        const int n = grid.n();
        return (3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * grid.h());
    }
};

namespace detail {

inline double radial_nonlinearity(double u, double p) {
    return u - (u > 0.0 ? std::pow(u, p) : 0.0);
}
inline double radial_nonlinearity_deriv(double u, double p) {
    return 1.0 - (u > 0.0 ? p * std::pow(u, p - 1.0) : 0.0);
}

inline RadialProfile make_profile(const ProblemParams& params, const RadialGrid& grid,
                                  const Scheme1D& s, const std::vector<double>& unknowns,
                                  double residual_sup) {
    RadialProfile prof;
    prof.grid = grid;
    prof.params = params;
    const int n = grid.n();
    prof.values.assign(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) prof.values[i] = unknowns[i - 1];
    prof.dvalues = fd_derivative(prof.values, grid.h());
    prof.residual_sup = residual_sup;
    prof.du_at_1 = s.lambda * s.w_half[0] * prof.values[1] / s.h() / (s.lambda * s.w0());
    return prof;
}

} // namespace detail

/// Largest curvature for which the cutoff bands (pi/sqrt k, 2 pi/sqrt k) fit
/// inside (1, pi/k).
inline constexpr double cutoff_k_threshold = 0.25;

/// Transplant of the exterior ground state: u~_lambda * chi_k with chi_k = 1
/// below pi/sqrt(k), 0 above 2 pi/sqrt(k), quintic in between
/// (|chi_k'| <= k^{-1/2} holds for every k below the threshold).
inline RadialProfile cutoff_guess(const ExteriorProfile& ext, double k, int n) {
    if (!(k > 0.0) || k >= cutoff_k_threshold)
        throw ConfigError("cutoff_guess: require 0 < k < " +
                          std::to_string(cutoff_k_threshold) +
                          " so the cutoff bands are ordered");
    ProblemParams params;
    params.d = ext.d;
    params.p = ext.p;
    params.k = k;
    params.lambda = ext.lambda;
    params.validate();
    RadialGrid grid = RadialGrid::sphere(k, ext.d, n);
    const double band_lo = pi / std::sqrt(k), band_hi = 2.0 * pi / std::sqrt(k);
    Scheme1D s = Scheme1D::make(grid, params.lambda, RightClosure::Pole);
    std::vector<double> unknowns(grid.n(), 0.0);
    for (int i = 1; i <= grid.n(); ++i) {
        const double r = grid.nodes[i];
        const double chi = 1.0 - smoothstep5(r, band_lo, band_hi);
        unknowns[i - 1] = ext.value_at(r) * chi;
    }
    auto res = residual_rows(s, unknowns, 0.0,
                             [&](double u, double) { return detail::radial_nonlinearity(u, params.p); });
    return detail::make_profile(params, grid, s, unknowns, res.sup);
}

/// Newton solve of the sphere problem from a nonnegative guess. The guess is
/// returned unchanged when it already satisfies the equations (fast path).
/// Collapse to the trivial solution and Newton divergence are reported as
/// distinct errors.
inline RadialProfile solve_radial(const ProblemParams& params, const RadialGrid& grid,
                                  const std::vector<double>& guess,
                                  const NewtonOptions& opt = {}) {
    params.validate();
    if (!(params.k > 0.0)) throw ConfigError("solve_radial: k must be > 0");
    if (int(guess.size()) != grid.n() + 1)
        throw ConfigError("solve_radial: guess does not match grid");
    Scheme1D s = Scheme1D::make(grid, params.lambda, RightClosure::Pole);
    auto f = [&](double u, double) { return detail::radial_nonlinearity(u, params.p); };
    auto df = [&](double u, double) { return detail::radial_nonlinearity_deriv(u, params.p); };

    std::vector<double> unknowns(guess.begin() + 1, guess.end());
    auto res0 = residual_rows(s, unknowns, 0.0, f);
    if (res0.sup < 1e-10)
        return detail::make_profile(params, grid, s, unknowns, res0.sup);

    NewtonReport rep;
    try {
        rep = newton_solve(s, unknowns, 0.0, f, df, opt);
    } catch (const SolverError& e) {
        throw SolverError(std::string("solve_radial: Newton divergence (") + e.what() + ")");
    }
    double umax = 0.0;
    for (double v : unknowns) umax = std::max(umax, v);
    if (umax < 1e-4)
        throw TrivialBranchError("solve_radial: converged to the trivial solution");
    return detail::make_profile(params, grid, s, unknowns, rep.residual_sup);
}

/// Convenience driver: solve the exterior companion, transplant, solve.
inline RadialProfile solve_radial(const ProblemParams& params, int n,
                                  const ExteriorProfile* ext = nullptr) {
    ExteriorProfile local;
    if (!ext) {
        ExteriorOptions eo;
        eo.n = n;
        local = solve_exterior_radial(params, params.lambda, eo);
        ext = &local;
    }
    RadialProfile guess = cutoff_guess(*ext, params.k, n);
    return solve_radial(params, guess.grid, guess.values);
}

/// Discrete energy identity residual of a solved profile:
///   | integral(lambda u'^2 + u^2) W - integral u^{p+1} W | relative to the
/// right-hand side, with the quadrature matched to the stencil. Exact (up to
/// roundoff and the Newton tolerance) for solutions.
inline double energy_identity_residual(const RadialProfile& prof) {
    const Scheme1D s = prof.scheme();
    const int n = s.n();
    const double h = s.h();
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < n; ++i) {
        const double slope = (prof.values[i + 1] - prof.values[i]) / h;
        lhs += s.lambda * s.w_half[i] * slope * slope * h;
    }
    for (int i = 1; i <= n; ++i) {
        const double u = prof.values[i];
        lhs += s.mass[i] * u * u;
        rhs += s.mass[i] * (u > 0.0 ? std::pow(u, prof.params.p + 1.0) : 0.0);
    }
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

struct ConvergenceRow {
    double k = 0.0;
    double error = 0.0; // || u_{k,lambda} - u~_lambda ||_k
    bool ok = false;
    std::string note;
};

/// Table of e(k) = || u_{k,lambda} - u~_lambda ||_k along a decreasing k list
/// (the transplanted exterior profile extended by zero past its truncation).
/// Throws if e(k) fails to decrease monotonically.
inline std::vector<ConvergenceRow> convergence_study(const ProblemParams& base,
                                                     const std::vector<double>& k_list,
                                                     int n = 2000) {
    for (std::size_t i = 1; i < k_list.size(); ++i)
        if (!(k_list[i] < k_list[i - 1]))
            throw ConfigError("convergence_study: k_list must decrease");
    ExteriorOptions eo;
    eo.n = n;
    ExteriorProfile ext = solve_exterior_radial(base, base.lambda, eo);
    std::vector<ConvergenceRow> table;
    const RadialProfile* prev = nullptr;
    RadialProfile prev_store;
    for (double k : k_list) {
        ConvergenceRow row;
        row.k = k;
        try {
            ProblemParams params = base;
            params.k = k;
            RadialGrid grid = RadialGrid::sphere(k, base.d, n);
            std::vector<double> guess;
            if (prev) {
                guess.assign(grid.n() + 1, 0.0);
                const double prev_pole = prev->grid.r1();
                for (int i = 0; i <= grid.n(); ++i) {
                    const double r = grid.nodes[i];
                    if (r < prev_pole) {
                        const double h = prev->grid.h();
                        const int j = std::min(int((r - 1.0) / h), prev->grid.n() - 1);
                        const double t = (r - prev->grid.nodes[j]) / h;
                        guess[i] = (1.0 - t) * prev->values[j] + t * prev->values[j + 1];
                    }
                }
            }
            RadialProfile prof;
            try {
                if (guess.empty()) throw SolverError("no previous profile");
                prof = solve_radial(params, grid, guess);
            } catch (const SolverError&) {
                RadialProfile cg = cutoff_guess(ext, k, n);
                prof = solve_radial(params, grid, cg.values);
            }
            // e(k) in the || . ||_k norm with the exterior profile transplanted
            std::vector<double> diff(grid.n() + 1), ddiff(grid.n() + 1);
            for (int i = 0; i <= grid.n(); ++i) {
                const double r = grid.nodes[i];
                diff[i] = prof.values[i] - ext.value_at(r);
                ddiff[i] = prof.dvalues[i] - ext.deriv_at(r);
            }
            row.error = k_norm(diff, ddiff, grid);
            row.ok = true;
            prev_store = std::move(prof);
            prev = &prev_store;
        } catch (const SolverError& e) {
            row.note = e.what();
        }
        table.push_back(row);
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!table[i].ok || !table[i - 1].ok) continue;
        if (table[i].error > table[i - 1].error * (1.0 + 1e-9))
            throw SolverError("convergence_study: e(k) not decreasing between k = " +
                              std::to_string(table[i - 1].k) + " and k = " +
                              std::to_string(table[i].k));
    }
    return table;
}

} // namespace odp
