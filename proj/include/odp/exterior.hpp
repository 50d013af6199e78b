#pragma once

// The k -> 0 limit problem on the exterior of the unit ball in R^d:
// the positive radial ground state u~_lambda, its linearized radial spectrum
// (tau~, z~), the mode-wise limit Dirichlet-to-Neumann values h~_l, and the
// selection of the working window [lambda0, lambda1].

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "odp/geometry.hpp"
#include "odp/rootfind.hpp"
#include "odp/scheme1d.hpp"
#include "odp/tridiag.hpp"

namespace odp {

/// Radial ground state of the truncated exterior problem, with Robin closure
/// u' + u/sqrt(lambda) = 0 at r_max standing in for the exponential decay.
struct ExteriorProfile {
    RadialGrid grid;                // Euclidean weight r^{d-1}
    int d = 2;
    double p = 3.0;
    double lambda = 1.0;
    double robin_coeff = 1.0;       // 1/sqrt(lambda)
    std::vector<double> values;     // u at grid nodes (values[0] = u(1) = 0)
    std::vector<double> dvalues;    // central-difference derivative samples
    double du_at_1 = 0.0;           // variational boundary flux / (lambda W_0)
    double residual_sup = 0.0;
    double u_max = 0.0;

    /// Cubic Hermite evaluation; 0 beyond the truncation radius.
    double value_at(double r) const {
        if (r >= grid.r1()) return 0.0;
        if (r <= grid.r0()) return values.front();
        const double h = grid.h();
        const int i = std::min(int((r - grid.r0()) / h), grid.n() - 1);
        const double t = (r - grid.nodes[i]) / h;
        const double u0 = values[i], u1 = values[i + 1];
        const double m0 = dvalues[i] * h, m1 = dvalues[i + 1] * h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * m0 +
               (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * m1;
    }

    double deriv_at(double r) const {
        if (r >= grid.r1() || r <= grid.r0()) return 0.0;
        const double h = grid.h();
        const int i = std::min(int((r - grid.r0()) / h), grid.n() - 1);
        const double t = (r - grid.nodes[i]) / h;
        const double u0 = values[i], u1 = values[i + 1];
        const double m0 = dvalues[i] * h, m1 = dvalues[i + 1] * h;
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * u0 + (3 * t2 - 4 * t + 1) * m0 +
                (-6 * t2 + 6 * t) * u1 + (3 * t2 - 2 * t) * m1) / h;
    }

    Scheme1D scheme() const {
        return Scheme1D::make(grid, lambda, RightClosure::Robin, robin_coeff);
    }
};

namespace detail {

inline void fill_profile_diagnostics(ExteriorProfile& prof, const Scheme1D& s,
                                     const std::vector<double>& unknowns, double res_sup) {
    const int n = s.n();
    prof.values.assign(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) prof.values[i] = unknowns[i - 1];
    prof.dvalues = fd_derivative(prof.values, s.h());
    prof.residual_sup = res_sup;
    prof.u_max = *std::max_element(prof.values.begin(), prof.values.end());
    // u(1) = 0, so the zeroth-order boundary term in the flux vanishes
    prof.du_at_1 = s.lambda * s.w_half[0] * prof.values[1] / s.h() / (s.lambda * s.w0());
}

inline std::vector<double> bump_guess(const RadialGrid& grid, double lambda, double p,
                                      double amplitude_scale) {
    // c (r-1) exp(-(r-1)/sqrt(lambda)) scaled so the peak is near the flat
    // homoclinic amplitude ((p+1)/2)^{1/(p-1)}
    const double peak = std::pow(0.5 * (p + 1.0), 1.0 / (p - 1.0));
    const double c = amplitude_scale * peak * std::exp(1.0) / std::sqrt(lambda);
    std::vector<double> u(grid.n(), 0.0);
    for (int i = 1; i <= grid.n(); ++i) {
        const double s = grid.nodes[i] - grid.r0();
        u[i - 1] = c * s * std::exp(-s / std::sqrt(lambda));
    }
    return u;
}

} // namespace detail

struct ExteriorOptions {
    double r_max = 0.0;  // 0: use 1 + 40 sqrt(lambda)
    int n = 2000;
    NewtonOptions newton{};
};

/// Solve the radial exterior problem for given (d, p, lambda). Retries with
/// larger bump amplitudes if Newton lands on the trivial branch, then falls
/// back to continuation in lambda.
inline ExteriorProfile solve_exterior_radial(const ProblemParams& base, double lambda,
                                             ExteriorOptions opt = {}) {
    ProblemParams params = base;
    params.k = 0.0;
    params.lambda = lambda;
    params.validate();
    const double r_max = opt.r_max > 0.0 ? opt.r_max : 1.0 + 40.0 * std::sqrt(lambda);
    if (r_max < 1.0 + 30.0 * std::sqrt(lambda))
        throw ConfigError("solve_exterior_radial: r_max too small for decay closure");
    RadialGrid grid = RadialGrid::exterior(r_max, base.d, opt.n);
    const double beta = 1.0 / std::sqrt(lambda);
    Scheme1D s = Scheme1D::make(grid, lambda, RightClosure::Robin, beta);

    const double pp = base.p;
    auto f = [pp](double u, double) {
        return u - (u > 0.0 ? std::pow(u, pp) : 0.0);
    };
    auto df = [pp](double u, double) {
        return 1.0 - (u > 0.0 ? pp * std::pow(u, pp - 1.0) : 0.0);
    };

    auto attempt = [&](std::vector<double> u0) -> std::optional<ExteriorProfile> {
        try {
            NewtonReport rep = newton_solve(s, u0, 0.0, f, df, opt.newton);
            double umax = 0.0;
            for (double v : u0) umax = std::max(umax, v);
            if (umax < 1e-4) return std::nullopt; // trivial branch
            ExteriorProfile prof;
            prof.grid = grid;
            prof.d = base.d;
            prof.p = base.p;
            prof.lambda = lambda;
            prof.robin_coeff = beta;
            detail::fill_profile_diagnostics(prof, s, u0, rep.residual_sup);
            return prof;
        } catch (const SolverError&) {
            return std::nullopt;
        }
    };

    for (double amp : {1.0, 1.5, 2.25, 3.4, 5.0, 0.6}) {
        if (auto prof = attempt(detail::bump_guess(grid, lambda, base.p, amp))) {
            if (prof->values[1] <= 0.0)
                throw SolverError("solve_exterior_radial: nonpositive Hopf derivative");
            return *prof;
        }
    }

    // continuation in lambda from a unit-diffusion solve
    double lam_s = 1.0;
    ExteriorOptions base_opt = opt;
    base_opt.r_max = 0.0;
    ExteriorProfile cur = solve_exterior_radial(base, lam_s, base_opt);
    int guard = 0;
    while (std::abs(std::log(lam_s / lambda)) > 1e-12) {
        if (++guard > 200) throw SolverError("solve_exterior_radial: continuation stalled");
        const double ratio = lambda > lam_s ? std::min(1.25, lambda / lam_s)
                                            : std::max(0.8, lambda / lam_s);
        lam_s *= ratio;
        if ((ratio > 1 && lam_s > lambda) || (ratio < 1 && lam_s < lambda)) lam_s = lambda;
        const double rm = 1.0 + 40.0 * std::sqrt(lam_s);
        RadialGrid g2 = RadialGrid::exterior(rm, base.d, opt.n);
        Scheme1D s2 = Scheme1D::make(g2, lam_s, RightClosure::Robin, 1.0 / std::sqrt(lam_s));
        std::vector<double> u0(g2.n());
        for (int i = 1; i <= g2.n(); ++i) u0[i - 1] = cur.value_at(g2.nodes[i]);
        NewtonReport rep = newton_solve(s2, u0, 0.0, f, df, opt.newton);
        double umax = 0.0;
        for (double v : u0) umax = std::max(umax, v);
        if (umax < 1e-4)
            throw TrivialBranchError("solve_exterior_radial: trivial branch during "
                                     "continuation at lambda = " + std::to_string(lam_s));
        cur = ExteriorProfile{};
        cur.grid = g2;
        cur.d = base.d;
        cur.p = base.p;
        cur.lambda = lam_s;
        cur.robin_coeff = 1.0 / std::sqrt(lam_s);
        detail::fill_profile_diagnostics(cur, s2, u0, rep.residual_sup);
    }
    return cur;
}

/// Assemble the symmetric weighted matrix and diagonal mass of the mode-l
/// linearized exterior operator (Dirichlet at r = 1, Robin at r_max):
///   -lambda [phi'' + (d-1)/r phi' - mu/r^2 phi] + (1 - p u^{p-1}) phi.
inline std::pair<SymTridiag, std::vector<double>>
exterior_mode_matrices(const ExteriorProfile& prof, int degree) {
    const Scheme1D s = prof.scheme();
    const int n = s.n();
    const double h = s.h(), lam = s.lambda;
    const double mu = sphere_eigen(degree, prof.d).mu;
    SymTridiag A;
    A.diag.resize(n);
    A.off.resize(n - 1);
    std::vector<double> mass(n);
    for (int i = 1; i <= n; ++i) {
        const double r = s.grid.nodes[i];
        const double u = prof.values[i];
        const double pot = 1.0 - (u > 0.0 ? prof.p * std::pow(u, prof.p - 1.0) : 0.0) +
                           lam * mu / (r * r);
        double diag = lam * s.w_half[i - 1] / h;
        if (i < n) diag += lam * s.w_half[i] / h;
        if (i == n) diag += lam * s.w_node[n] * s.robin_beta;
        diag += s.mass[i] * pot;
        A.diag[i - 1] = diag;
        if (i < n) A.off[i - 1] = -lam * s.w_half[i] / h;
        mass[i - 1] = s.mass[i];
    }
    return {A, mass};
}

/// Reduce A x = tau M x (diagonal M) to a standard symmetric tridiagonal.
inline SymTridiag mass_scaled(const SymTridiag& A, const std::vector<double>& mass) {
    SymTridiag T = A;
    const int n = A.size();
    for (int i = 0; i < n; ++i) T.diag[i] /= mass[i];
    for (int i = 0; i + 1 < n; ++i) T.off[i] /= std::sqrt(mass[i] * mass[i + 1]);
    return T;
}

/// Principal Dirichlet pair of the limit problem: tau~ < 0 < second eigenvalue
/// (Morse index one, nondegenerate), z~ positive and H^1-normalized.
struct LimitSpectrum {
    double tau_tilde = 0.0;
    double second_eig = 0.0;
    std::vector<double> z; // on all grid nodes, z[0] = 0
    double z_l2 = 0.0;     // weighted L2 norm before normalization
};

inline LimitSpectrum exterior_linearized_spectrum(const ExteriorProfile& prof) {
    auto [A, mass] = exterior_mode_matrices(prof, 0);
    SymTridiag T = mass_scaled(A, mass);
    LimitSpectrum out;
    out.tau_tilde = sym_tridiag_eigenvalue(T, 0);
    out.second_eig = sym_tridiag_eigenvalue(T, 1);
    if (!(out.tau_tilde < 0.0) || !(out.second_eig > 0.0))
        throw SolverError("exterior_linearized_spectrum: sign pattern violated "
                          "(tau1 = " + std::to_string(out.tau_tilde) +
                          ", tau2 = " + std::to_string(out.second_eig) +
                          "), discretization suspect");
    std::vector<double> y = sym_tridiag_eigenvector(T, out.tau_tilde);
    const int n = T.size();
    out.z.assign(n + 1, 0.0);
    for (int i = 0; i < n; ++i) out.z[i + 1] = y[i] / std::sqrt(mass[i]);
    // orient positive, then normalize in the weighted H^1 norm
    double lo = 0.0, hi = 0.0;
    for (double v : out.z) { lo = std::min(lo, v); hi = std::max(hi, v); }
    if (std::abs(lo) > hi)
        for (double& v : out.z) v = -v;
    const double h1 = k_norm(out.z, prof.grid);
    double l2 = 0.0;
    for (int i = 0; i < n; ++i) l2 += mass[i] * out.z[i + 1] * out.z[i + 1];
    out.z_l2 = std::sqrt(l2) / h1;
    for (double& v : out.z) v /= h1;
    return out;
}

/// Mode-l DtN value of the limit operator: h~_l = dnu psi(1) - (d-1) where
/// psi solves the mode-l linearized equation with psi(1) = 1 and decays.
/// cond_out receives a condition estimate of the mode solve when provided.
inline double limit_dtn_value(const ExteriorProfile& prof, int degree,
                              double* cond_out = nullptr,
                              std::vector<double>* psi_out = nullptr) {
    if (degree < 1) throw ConfigError("limit_dtn_value: mode degree must be >= 1");
    auto [A, mass] = exterior_mode_matrices(prof, degree);
    Tridiag At = A.as_tridiag();
    TridiagLU lu(At);
    const Scheme1D s = prof.scheme();
    const double cond = lu.inv_norm_estimate() * A.inf_norm();
    if (cond_out) *cond_out = cond;
    if (cond > 1e13)
        throw SolverError("limit_dtn_value: mode-" + std::to_string(degree) +
                          " Dirichlet operator near-singular (cond ~ " +
                          std::to_string(cond) + ")");
    // move the boundary datum psi(1) = 1 into the right-hand side
    std::vector<double> rhs(A.size(), 0.0);
    rhs[0] = s.lambda * s.w_half[0] / s.h();
    std::vector<double> psi = lu.solve(std::move(rhs));
    const double mu = sphere_eigen(degree, prof.d).mu;
    const double pot0 = 1.0 + s.lambda * mu / (s.grid.r0() * s.grid.r0());
    const double flux = variational_flux(s, 1.0, psi[0], pot0);
    if (psi_out) {
        psi_out->assign(A.size() + 1, 0.0);
        (*psi_out)[0] = 1.0;
        for (int i = 0; i < A.size(); ++i) (*psi_out)[i + 1] = psi[i];
    }
    return flux / (s.lambda * s.w0()) - double(prof.d - 1);
}

struct WindowScanRow {
    double lambda;
    double h_first;   // h~_{i_1}(lambda)
    double tau_tilde;
};

struct WindowSelection {
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double limit_crossing = 0.0; // zero of h~_{i_1}
    double dirichlet_margin = 0.0;
    std::vector<WindowScanRow> scan;
};

struct WindowOptions {
    double scan_lo = 0.05;
    double scan_hi = 20.0;
    int scan_points = 40;
    int n = 2000;
    double width_lo = 0.75; // lambda0 = width_lo * crossing
    double width_hi = 1.5;  // lambda1 = width_hi * crossing
};

/// Smallest eigenvalue of the mode-l limit Dirichlet operator (l >= 1), or
/// the second radial eigenvalue for l = 0; used for window margin checks.
inline double limit_mode_margin(const ExteriorProfile& prof, int degree) {
    auto [A, mass] = exterior_mode_matrices(prof, degree);
    SymTridiag T = mass_scaled(A, mass);
    return sym_tridiag_eigenvalue(T, degree == 0 ? 1 : 0);
}

/// Bracket and refine the zero of lambda -> h~_{i_1}(lambda), then place a
/// window [lambda0, lambda1] around it on which every relevant mode-wise
/// Dirichlet operator keeps a positive margin.
inline WindowSelection select_window(const ProblemParams& base, const SymmetryGroup& group,
                                     WindowOptions opt = {}) {
    group.validate();
    const int i1 = group.first_degree();
    WindowSelection sel;
    auto eval_h = [&](double lam) {
        ExteriorOptions eo;
        eo.n = opt.n;
        ExteriorProfile prof = solve_exterior_radial(base, lam, eo);
        const double h = limit_dtn_value(prof, i1);
        return std::pair<ExteriorProfile, double>(std::move(prof), h);
    };
    double prev_lam = 0.0, prev_h = 0.0;
    double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
    bool bracketed = false;
    for (int j = 0; j < opt.scan_points; ++j) {
        const double t = double(j) / (opt.scan_points - 1);
        const double lam = opt.scan_lo * std::pow(opt.scan_hi / opt.scan_lo, t);
        auto [prof, h] = eval_h(lam);
        LimitSpectrum spec = exterior_linearized_spectrum(prof);
        sel.scan.push_back({lam, h, spec.tau_tilde});
        if (j > 0 && !bracketed && prev_h * h < 0.0) {
            lo = prev_lam; hi = lam; flo = prev_h; fhi = h;
            bracketed = true;
        }
        prev_lam = lam;
        prev_h = h;
    }
    if (!bracketed) {
        std::ostringstream os;
        os << "select_window: no sign change of h~_" << i1 << " on ["
           << opt.scan_lo << ", " << opt.scan_hi << "]; scan:";
        for (const auto& row : sel.scan)
            os << " (" << row.lambda << ", " << row.h_first << ")";
        throw SolverError(os.str());
    }
    BrentResult br = brent_root([&](double lam) { return eval_h(lam).second; }, lo, hi, flo,
                                fhi, 1e-10, 1e-12);
    sel.limit_crossing = br.root;

    double wlo = opt.width_lo, whi = opt.width_hi;
    for (int attempt = 0; attempt < 6; ++attempt) {
        sel.lambda0 = wlo * sel.limit_crossing;
        sel.lambda1 = whi * sel.limit_crossing;
        double margin = std::numeric_limits<double>::infinity();
        bool sign_ok = true;
        for (double lam : {sel.lambda0, 0.5 * (sel.lambda0 + sel.lambda1), sel.lambda1}) {
            ExteriorOptions eo;
            eo.n = opt.n;
            ExteriorProfile prof = solve_exterior_radial(base, lam, eo);
            margin = std::min(margin, limit_mode_margin(prof, 0));
            margin = std::min(margin, limit_mode_margin(prof, 1));
            for (const auto& slot : group.allowed_modes)
                margin = std::min(margin, limit_mode_margin(prof, slot.degree));
            if (lam == sel.lambda0 && !(limit_dtn_value(prof, i1) < 0.0)) sign_ok = false;
            if (lam == sel.lambda1 && !(limit_dtn_value(prof, i1) > 0.0)) sign_ok = false;
        }
        if (sign_ok && margin > 1e-10) {
            sel.dirichlet_margin = margin;
            return sel;
        }
        wlo = 0.5 * (wlo + 1.0);
        whi = 0.5 * (whi + 1.0);
    }
    throw SolverError("select_window: could not validate a nondegenerate window around "
                      "lambda = " + std::to_string(sel.limit_crossing));
}

} // namespace odp
