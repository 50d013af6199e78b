#pragma once

// Small tridiagonal toolkit: pivoted LU solves, Sturm-sequence bisection for
// the lowest eigenvalues of a symmetric tridiagonal pencil, and shifted
// inverse iteration for eigenvectors.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "odp/errors.hpp"

namespace odp {

/// General tridiagonal matrix: sub[i] = A(i+1,i), diag[i] = A(i,i),
/// sup[i] = A(i,i+1).
struct Tridiag {
    std::vector<double> sub, diag, sup;

    int size() const { return int(diag.size()); }

    static Tridiag zeros(int n) {
        Tridiag t;
        t.sub.assign(std::max(n - 1, 0), 0.0);
        t.diag.assign(n, 0.0);
        t.sup.assign(std::max(n - 1, 0), 0.0);
        return t;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        const int n = size();
        std::vector<double> y(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double v = diag[i] * x[i];
            if (i > 0) v += sub[i - 1] * x[i - 1];
            if (i + 1 < n) v += sup[i] * x[i + 1];
            y[i] = v;
        }
        return y;
    }
};

/// LU factorization of a tridiagonal matrix with partial pivoting
/// (LAPACK dgttrf style; fill-in adds one superdiagonal).
class TridiagLU {
public:
    explicit TridiagLU(const Tridiag& t)
        : n_(t.size()), dl_(t.sub), d_(t.diag), du_(t.sup), du2_(std::max(n_ - 2, 0), 0.0),
          piv_(n_, 0) {
        singular_ = false;
        for (int i = 0; i < n_ - 1; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                piv_[i] = 0;
                if (d_[i] == 0.0) { singular_ = true; d_[i] = tiny(); }
                const double fact = dl_[i] / d_[i];
                dl_[i] = fact; // store multiplier
                d_[i + 1] -= fact * du_[i];
                if (i < n_ - 2) du2_[i] = 0.0;
            } else {
                piv_[i] = 1;
                const double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const double tmp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = tmp - fact * d_[i + 1];
                if (i < n_ - 2) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
            }
        }
        if (n_ > 0 && d_[n_ - 1] == 0.0) { singular_ = true; d_[n_ - 1] = tiny(); }
    }

    bool near_singular() const { return singular_; }

    std::vector<double> solve(std::vector<double> b) const {
        for (int i = 0; i < n_ - 1; ++i) {
            if (piv_[i] == 0) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                std::swap(b[i], b[i + 1]);
                b[i + 1] -= dl_[i] * b[i];
            }
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double v = b[i];
            if (i + 1 < n_) v -= du_[i] * b[i + 1];
            if (i + 2 < n_) v -= du2_[i] * b[i + 2];
            b[i] = v / d_[i];
        }
        return b;
    }

    /// Rough 1-norm of the inverse via two solves (Hager-style probe).
    double inv_norm_estimate() const {
        std::vector<double> e(n_, 1.0);
        auto x = solve(e);
        double s = 0.0;
        for (double v : x) s = std::max(s, std::abs(v));
        for (int i = 0; i < n_; ++i) e[i] = (x[i] >= 0 ? 1.0 : -1.0);
        auto y = solve(std::move(e));
        for (double v : y) s = std::max(s, std::abs(v));
        return s;
    }

private:
    static double tiny() { return std::numeric_limits<double>::min() * 1e4; }
    int n_;
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<int> piv_;
    bool singular_;
};

inline std::vector<double> tridiag_solve(const Tridiag& t, std::vector<double> rhs) {
    return TridiagLU(t).solve(std::move(rhs));
}

/// Symmetric tridiagonal matrix (diag, off) used for the weighted,
/// self-adjoint form of the mode operators.
struct SymTridiag {
    std::vector<double> diag, off;
    int size() const { return int(diag.size()); }

    Tridiag as_tridiag() const {
        Tridiag t;
        t.diag = diag;
        t.sub = off;
        t.sup = off;
        return t;
    }

    double inf_norm() const {
        double s = 0.0;
        for (int i = 0; i < size(); ++i) {
            double row = std::abs(diag[i]);
            if (i > 0) row += std::abs(off[i - 1]);
            if (i + 1 < size()) row += std::abs(off[i]);
            s = std::max(s, row);
        }
        return s;
    }
};

/// Number of eigenvalues of T strictly below x (Sturm sequence count).
inline int sturm_count(const SymTridiag& T, double x) {
    const int n = T.size();
    int count = 0;
    double q = T.diag[0] - x;
    if (q < 0) ++count;
    const double eps = std::numeric_limits<double>::min() * 4;
    for (int i = 1; i < n; ++i) {
        if (q == 0.0) q = eps;
        q = (T.diag[i] - x) - T.off[i - 1] * T.off[i - 1] / q;
        if (q < 0) ++count;
    }
    return count;
}

/// m-th smallest eigenvalue (0-based) of a symmetric tridiagonal matrix by
/// bisection on the Sturm count.
inline double sym_tridiag_eigenvalue(const SymTridiag& T, int m, double tol = 0.0) {
    const int n = T.size();
    if (m < 0 || m >= n) throw SolverError("sym_tridiag_eigenvalue: index out of range");
    // Gershgorin bounds
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
        double rad = 0.0;
        if (i > 0) rad += std::abs(T.off[i - 1]);
        if (i + 1 < n) rad += std::abs(T.off[i]);
        lo = std::min(lo, T.diag[i] - rad);
        hi = std::max(hi, T.diag[i] + rad);
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (tol <= 0.0) tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (sturm_count(T, mid) > m)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Eigenvector by shifted inverse iteration; eig is refined by one Rayleigh step.
inline std::vector<double> sym_tridiag_eigenvector(const SymTridiag& T, double eig) {
    const int n = T.size();
    const double shift_eps = 1e-11 * std::max(T.inf_norm(), 1.0);
    SymTridiag S = T;
    for (int i = 0; i < n; ++i) S.diag[i] -= (eig + shift_eps);
    TridiagLU lu(S.as_tridiag());
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = 1.0 / std::sqrt(double(n)) * (1.0 + 1e-3 * ((i * 2654435761u) % 97));
    for (int it = 0; it < 6; ++it) {
        v = lu.solve(std::move(v));
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw SolverError("inverse iteration breakdown");
        for (double& x : v) x /= nrm;
    }
    return v;
}

} // namespace odp
