#pragma once

// Shared second-order radial discretization in divergence (energy) form.
//
// All radial operators in the project are built from the same pieces:
//   flux term      lambda * W_{i+1/2} (u_{i+1}-u_i)/h          (half nodes)
//   cell masses    m_0 = W_0 h/2,  m_i = W_i h,  pole/robin closure at r_N
// with W = S_k^{d-1}. The nonlinear residual rows are the exact gradient of
// the discrete energy, so linearizations are symmetric after weighting and
// summation by parts holds without quadrature slack. Boundary fluxes are
// evaluated variationally (the discrete Green identity), which keeps them
// second-order accurate at the Dirichlet boundary.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "odp/geometry.hpp"
#include "odp/tridiag.hpp"

namespace odp {

enum class RightClosure {
    Robin, // lambda (u' + beta u) = 0 at r_N, truncated exterior
    Pole   // regular north pole at r_N = pi/k (symmetric ghost node)
};

/// Grid-bound weights for one (k, d, lambda) radial operator.
struct Scheme1D {
    RadialGrid grid;
    double lambda = 1.0;
    RightClosure right = RightClosure::Pole;
    double robin_beta = 0.0; // used by Robin closure

    std::vector<double> w_half; // W_{i+1/2}, i = 0..N-1
    std::vector<double> w_node; // W_i
    std::vector<double> mass;   // FV cell masses m_i

    int n() const { return grid.n(); }
    double h() const { return grid.h(); }
    double w0() const { return w_node.front(); }

    static Scheme1D make(const RadialGrid& grid, double lambda, RightClosure right,
                         double robin_beta = 0.0) {
        Scheme1D s;
        s.grid = grid;
        s.lambda = lambda;
        s.right = right;
        s.robin_beta = robin_beta;
        const int n = grid.n();
        const double h = grid.h();
        s.w_half.resize(n);
        s.w_node.resize(n + 1);
        for (int i = 0; i < n; ++i)
            s.w_half[i] = grid.weight(grid.nodes[i] + 0.5 * h);
        for (int i = 0; i <= n; ++i) s.w_node[i] = grid.weight(grid.nodes[i]);
        s.mass.assign(n + 1, 0.0);
        s.mass[0] = 0.5 * s.w_node[0] * h;
        for (int i = 1; i < n; ++i) s.mass[i] = s.w_node[i] * h;
        if (right == RightClosure::Pole) {
            // pole cap volume to leading order; makes the pole row the energy
            // gradient of the flux into the cap
            s.mass[n] = s.w_half[n - 1] * h / (2.0 * grid.d);
        } else {
            s.mass[n] = 0.5 * s.w_node[n] * h;
        }
        return s;
    }
};

/// Energy-gradient residual rows i = 1..N of
///   -lambda div(W grad u) + W f(u) = 0,  u(r_0) = u_left,
/// scaled to pointwise PDE units (divided by m_i). f and df are the
/// pointwise nonlinearity and its derivative.
struct Residual1D {
    std::vector<double> rows;   // PDE-scaled residual, index 0 <-> node 1
    double sup = 0.0;
};

template <class F>
Residual1D residual_rows(const Scheme1D& s, std::span<const double> u, double u_left, F&& f) {
    const int n = s.n();
    const double h = s.h(), lam = s.lambda;
    Residual1D res;
    res.rows.assign(n, 0.0);
    for (int i = 1; i <= n; ++i) {
        const double ui = u[i - 1];
        const double um = (i == 1) ? u_left : u[i - 2];
        double g = lam * s.w_half[i - 1] * (ui - um) / h;
        if (i < n) g -= lam * s.w_half[i] * (u[i] - ui) / h;
        if (i == n && s.right == RightClosure::Robin)
            g += lam * s.w_node[n] * s.robin_beta * ui;
        g += s.mass[i] * f(ui, s.grid.nodes[i]);
        res.rows[i - 1] = g / s.mass[i];
        res.sup = std::max(res.sup, std::abs(res.rows[i - 1]));
    }
    return res;
}

/// Jacobian of the scaled residual rows (tridiagonal over nodes 1..N).
template <class DF>
Tridiag jacobian_rows(const Scheme1D& s, std::span<const double> u, DF&& df) {
    const int n = s.n();
    const double h = s.h(), lam = s.lambda;
    Tridiag J = Tridiag::zeros(n);
    for (int i = 1; i <= n; ++i) {
        double diag = lam * s.w_half[i - 1] / h;
        if (i < n) diag += lam * s.w_half[i] / h;
        if (i == n && s.right == RightClosure::Robin) diag += lam * s.w_node[n] * s.robin_beta;
        diag += s.mass[i] * df(u[i - 1], s.grid.nodes[i]);
        J.diag[i - 1] = diag / s.mass[i];
        if (i > 1) J.sub[i - 2] = -lam * s.w_half[i - 1] / h / s.mass[i];
        if (i < n) J.sup[i - 1] = -lam * s.w_half[i] / h / s.mass[i];
    }
    return J;
}

struct NewtonReport {
    int iterations = 0;
    double residual_sup = 0.0;
    bool converged = false;
};

struct NewtonOptions {
    double tol_residual = 1e-12;
    double tol_step = 1e-14;
    int max_iterations = 60;
    int max_halvings = 12;
};

/// Damped Newton on the interior/right unknowns (u_1..u_N); u_left is the
/// Dirichlet datum at r_0. Throws SolverError on divergence.
template <class F, class DF>
NewtonReport newton_solve(const Scheme1D& s, std::vector<double>& u, double u_left, F&& f,
                          DF&& df, const NewtonOptions& opt = {}) {
    NewtonReport rep;
    auto res = residual_rows(s, u, u_left, f);
    for (rep.iterations = 0; rep.iterations < opt.max_iterations; ++rep.iterations) {
        if (res.sup < opt.tol_residual) {
            rep.converged = true;
            break;
        }
        Tridiag J = jacobian_rows(s, u, df);
        std::vector<double> step = tridiag_solve(J, res.rows);
        double step_sup = 0.0;
        for (double v : step) step_sup = std::max(step_sup, std::abs(v));
        double alpha = 1.0;
        std::vector<double> trial(u.size());
        Residual1D trial_res;
        bool accepted = false;
        for (int halve = 0; halve <= opt.max_halvings; ++halve) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] - alpha * step[i];
            trial_res = residual_rows(s, trial, u_left, f);
            if (trial_res.sup < res.sup || trial_res.sup < opt.tol_residual) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted)
            throw SolverError("newton_solve: damping failed at residual " +
                              std::to_string(res.sup));
        u.swap(trial);
        res = trial_res;
        if (alpha * step_sup < opt.tol_step) {
            rep.converged = res.sup < 1e-8;
            break;
        }
    }
    rep.residual_sup = res.sup;
    if (!rep.converged && res.sup >= opt.tol_residual)
        throw SolverError("newton_solve: no convergence after " +
                          std::to_string(rep.iterations) + " iterations (residual " +
                          std::to_string(res.sup) + ")");
    rep.converged = true;
    return rep;
}

/// Variational boundary flux of a nodal field phi with boundary value phi0 at
/// r_0: G = a_h(phi, e_0). For solutions of the interior equations,
///   G = lambda W_0 * (outward normal derivative at r_0) + O(h^2),
/// with the outward normal of the domain pointing in -r.
/// pot0 is the zeroth-order coefficient c(r_0) of the operator at the boundary.
inline double variational_flux(const Scheme1D& s, double phi0, double phi1, double pot0) {
    return -s.lambda * s.w_half[0] * (phi1 - phi0) / s.h() + s.mass[0] * pot0 * phi0;
}

} // namespace odp
