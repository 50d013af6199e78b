#pragma once

// Coordinates, metric factors, radial grids, quadrature, sphere eigendata
// and symmetry-group mode filters on the geodesic-ball complement of the
// round sphere of curvature k (pure functions, safe to share across threads).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "odp/errors.hpp"

namespace odp {

inline constexpr double pi = std::numbers::pi_v<double>;

/// Problem tuple (d, p, k, lambda). k = 0 denotes the Euclidean exterior
/// limit; k > 0 is the sphere of radius 1/k.
struct ProblemParams {
    int d = 2;           // spatial dimension, >= 2
    double p = 3.0;      // nonlinearity exponent, subcritical
    double k = 0.05;     // curvature parameter, unit ball must fit: k < pi
    double lambda = 1.0; // diffusion parameter, > 0

    double critical_exponent() const {
        return d <= 2 ? std::numeric_limits<double>::infinity()
                      : double(d + 2) / double(d - 2);
    }

    void validate() const {
        if (d < 2)
            throw ConfigError("d must be >= 2 (got d=" + std::to_string(d) + ")");
        if (!(p > 1.0))
            throw ConfigError("p must be > 1 (got p=" + std::to_string(p) + ")");
        if (d >= 3 && !(p < critical_exponent()))
            throw ConfigError("supercritical exponent: require p < (d+2)/(d-2) = " +
                              std::to_string(critical_exponent()) + " for d=" +
                              std::to_string(d) + " (got p=" + std::to_string(p) + ")");
        if (k < 0.0)
            throw ConfigError("k must be >= 0");
        if (k >= pi)
            throw ConfigError("unit geodesic ball does not fit: require k < pi");
        if (!(lambda > 0.0))
            throw ConfigError("lambda must be > 0");
    }
};

/// sin(kr)/k with the convention S_k = 0 for r >= pi/k; k = 0 gives r.
inline double sk(double k, double r) {
    if (k == 0.0) return r;
    if (r >= pi / k) return 0.0;
    return std::sin(k * r) / k;
}

/// cos(kr) with the convention C_k = 0 for r >= pi/k; k = 0 gives 1.
inline double ck(double k, double r) {
    if (k == 0.0) return 1.0;
    if (r >= pi / k) return 0.0;
    return std::cos(k * r);
}

/// (S_k(r), C_k(r)). Total function: the pole clamp handles r >= pi/k.
inline std::pair<double, double> metric_factors(double k, double r) {
    if (!(k > 0.0)) throw ConfigError("metric_factors: k must be > 0");
    if (r < 0.0) throw ConfigError("metric_factors: r must be >= 0");
    return {sk(k, r), ck(k, r)};
}

/// Mean curvature (d-1) k / tan(k) of the unit geodesic sphere.
inline double mean_curvature(double k, int d) {
    if (!(k > 0.0) || k >= pi)
        throw ConfigError("mean_curvature: require 0 < k < pi");
    return (d - 1) * k / std::tan(k);
}

/// Surface measure of the unit sphere S^{d-1}: omega_{d-1} = 2 pi^{d/2} / Gamma(d/2).
inline double unit_sphere_measure(int d) {
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

struct SphereEigen {
    double mu;         // i (i + d - 2)
    std::int64_t mult; // dimension of degree-i spherical harmonics on S^{d-1}
};

/// Laplace-Beltrami eigendata of S^{d-1} at harmonic degree i.
inline SphereEigen sphere_eigen(int i, int d) {
    if (i < 0 || d < 2) throw ConfigError("sphere_eigen: require i >= 0, d >= 2");
    const double mu = double(i) * double(i + d - 2);
    if (i == 0) return {mu, 1};
    if (d == 2) return {mu, 2};
    // dim = C(i+d-1, d-1) - C(i+d-3, d-1), harmonic polynomials of degree i in d vars
    auto binom = [](std::int64_t n, std::int64_t r) {
        if (r < 0 || r > n) return std::int64_t(0);
        std::int64_t v = 1;
        for (std::int64_t j = 1; j <= r; ++j) v = v * (n - r + j) / j;
        return v;
    };
    const std::int64_t mult = binom(i + d - 1, d - 1) - binom(i + d - 3, d - 1);
    return {mu, mult};
}

/// One admissible harmonic degree of a symmetry group, with the dimension of
/// its G-invariant eigenspace.
struct ModeSlot {
    int degree; // harmonic degree i_l
    int mult;   // multiplicity m_l within G-invariant functions
};

/// Symmetry group acting on S^{d-1}, described by its admissible mode list.
struct SymmetryGroup {
    std::string name;
    std::vector<ModeSlot> allowed_modes; // strictly increasing degrees

    int first_degree() const { return allowed_modes.front().degree; }
    int first_mult() const { return allowed_modes.front().mult; }

    // Assumption (G): i_1 >= 2 and m_1 odd, degrees strictly increasing.
    void validate() const {
        if (allowed_modes.empty())
            throw ConfigError("symmetry group '" + name + "': empty mode list");
        if (allowed_modes.front().degree < 2)
            throw ConfigError("symmetry group '" + name +
                              "': first admissible degree must be >= 2 (assumption (G))");
        if (allowed_modes.front().mult % 2 == 0)
            throw ConfigError("symmetry group '" + name +
                              "': first multiplicity must be odd (assumption (G))");
        for (std::size_t l = 0; l < allowed_modes.size(); ++l) {
            if (allowed_modes[l].mult <= 0)
                throw ConfigError("symmetry group '" + name + "': nonpositive multiplicity");
            if (l > 0 && allowed_modes[l].degree <= allowed_modes[l - 1].degree)
                throw ConfigError("symmetry group '" + name + "': degrees must increase");
        }
    }
};

/// Dihedral group D_n on S^1 (d = 2): admissible degrees n, 2n, 3n, ...,
/// each with multiplicity one (cosine line after the reflection).
inline SymmetryGroup dihedral_group(int n, int d = 2, int max_degree = 16) {
    if (d != 2) throw ConfigError("dihedral_group: only defined for d = 2");
    if (n < 2) throw ConfigError("dihedral_group: require n >= 2, the first admissible "
                                 "degree i_1 = n must satisfy i_1 >= 2 (assumption (G))");
    SymmetryGroup g;
    g.name = "dihedral:" + std::to_string(n);
    for (int i = n; i <= std::max(max_degree, n); i += n) g.allowed_modes.push_back({i, 1});
    if (g.allowed_modes.empty()) g.allowed_modes.push_back({n, 1});
    g.validate();
    return g;
}

/// Symmetry group from an explicit degree:multiplicity list (d >= 3 groups
/// are never synthesized here; callers supply the decomposition).
inline SymmetryGroup explicit_group(std::string name, std::vector<ModeSlot> modes) {
    SymmetryGroup g{std::move(name), std::move(modes)};
    g.validate();
    return g;
}

/// Uniform radial grid on [r0, r1] with composite-Simpson quadrature weights
/// for plain dr integrals. The surface-measure factor S_k^{d-1} enters through
/// weight(); the pole node (r1 = pi/k) carries weight 0 there automatically.
struct RadialGrid {
    double k = 0.0; // 0 = Euclidean exterior weight r^{d-1}
    int d = 2;
    std::vector<double> nodes;
    std::vector<double> quad_weights; // Simpson weights for integral f(r) dr
    bool pole_flag = false;           // last node is the north pole pi/k

    int n() const { return int(nodes.size()) - 1; }
    double h() const { return (nodes.back() - nodes.front()) / n(); }
    double r0() const { return nodes.front(); }
    double r1() const { return nodes.back(); }

    /// S_k^{d-1}(r)
    double weight(double r) const {
        return d == 2 ? sk(k, r) : std::pow(sk(k, r), d - 1);
    }

    static RadialGrid uniform(double r0, double r1, int n, double k, int d) {
        if (n < 8) throw ConfigError("RadialGrid: need at least 8 intervals");
        if (!(r1 > r0)) throw ConfigError("RadialGrid: require r1 > r0");
        if (n % 2 != 0) ++n; // composite Simpson needs an even interval count
        RadialGrid g;
        g.k = k;
        g.d = d;
        g.nodes.resize(n + 1);
        g.quad_weights.assign(n + 1, 0.0);
        const double h = (r1 - r0) / n;
        for (int i = 0; i <= n; ++i) g.nodes[i] = r0 + i * h;
        g.nodes[n] = r1;
        for (int i = 0; i < n; i += 2) {
            g.quad_weights[i] += h / 3.0;
            g.quad_weights[i + 1] += 4.0 * h / 3.0;
            g.quad_weights[i + 2] += h / 3.0;
        }
        g.pole_flag = (k > 0.0) && std::abs(r1 - pi / k) < 1e-12 * std::max(1.0, r1);
        return g;
    }

    /// Sphere grid [1, pi/k].
    static RadialGrid sphere(double k, int d, int n) {
        if (!(k > 0.0)) throw ConfigError("RadialGrid::sphere: k must be > 0");
        return uniform(1.0, pi / k, n, k, d);
    }

    /// Truncated exterior grid [1, r_max] with Euclidean weight.
    static RadialGrid exterior(double r_max, int d, int n) {
        return uniform(1.0, r_max, n, 0.0, d);
    }

    /// integral of f(r) S_k^{d-1}(r) dr by composite Simpson.
    double integrate_weighted(std::span<const double> f) const {
        if (f.size() != nodes.size())
            throw ConfigError("RadialGrid: integrand size does not match grid");
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            acc += quad_weights[i] * weight(nodes[i]) * f[i];
        return acc;
    }

    /// integral of f(r) dr by composite Simpson.
    double integrate(std::span<const double> f) const {
        if (f.size() != nodes.size())
            throw ConfigError("RadialGrid: integrand size does not match grid");
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) acc += quad_weights[i] * f[i];
        return acc;
    }
};

/// Second-order finite differences of nodal values (central inside,
/// one-sided at both ends).
inline std::vector<double> fd_derivative(std::span<const double> u, double h) {
    const std::size_t n = u.size();
    std::vector<double> du(n);
    if (n < 3) throw ConfigError("fd_derivative: need at least 3 nodes");
    du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) du[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    return du;
}

/// Weighted H^1 norm ( integral S_k^{d-1} [ (du)^2 + u^2 ] dr )^{1/2}; equals
/// the H^1(S^d(k) \ B_1) norm of the axisymmetric extension divided by
/// sqrt(omega_{d-1}).
inline double k_norm(std::span<const double> u, std::span<const double> du,
                     const RadialGrid& grid) {
    if (u.size() != grid.nodes.size() || du.size() != grid.nodes.size())
        throw ConfigError("k_norm: profile does not match grid");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += grid.quad_weights[i] * grid.weight(grid.nodes[i]) *
               (du[i] * du[i] + u[i] * u[i]);
    return std::sqrt(acc);
}

inline double k_norm(std::span<const double> u, const RadialGrid& grid) {
    auto du = fd_derivative(u, grid.h());
    return k_norm(u, du, grid);
}

/// C^2 monotone step: 0 at x <= a, 1 at x >= b (quintic smoothstep).
inline double smoothstep5(double x, double a, double b) {
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    const double s = (x - a) / (b - a);
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

/// Derivative of smoothstep5 with respect to x.
inline double smoothstep5_deriv(double x, double a, double b) {
    if (x <= a || x >= b) return 0.0;
    const double s = (x - a) / (b - a);
    return 30.0 * s * s * (1.0 + s * (-2.0 + s)) / (b - a);
}

} // namespace odp
