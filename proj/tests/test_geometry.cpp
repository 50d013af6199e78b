#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "odp/geometry.hpp"

using namespace odp;

namespace {

// Independent oracle for the dimension of degree-i spherical harmonics in d
// variables: kernel dimension of the Laplacian acting on homogeneous
// polynomials of degree i (rank computation over the monomial basis).
int harmonic_dimension_oracle(int i, int d) {
    // enumerate monomial exponents of total degree n in d variables
    auto monomials = [](int n, int dim) {
        std::vector<std::vector<int>> out;
        std::vector<int> e(dim, 0);
        std::function<void(int, int)> rec = [&](int pos, int left) {
            if (pos == dim - 1) {
                e[pos] = left;
                out.push_back(e);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                e[pos] = v;
                rec(pos + 1, left - v);
            }
        };
        rec(0, n);
        return out;
    };
    auto hi = monomials(i, d);
    if (i < 2) return int(hi.size());
    auto lo = monomials(i - 2, d);
    auto index_of = [&](const std::vector<int>& e) {
        for (std::size_t j = 0; j < lo.size(); ++j)
            if (lo[j] == e) return int(j);
        return -1;
    };
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(lo.size(), hi.size());
    for (std::size_t c = 0; c < hi.size(); ++c) {
        for (int ax = 0; ax < d; ++ax) {
            if (hi[c][ax] < 2) continue;
            auto e = hi[c];
            const double coef = e[ax] * (e[ax] - 1);
            e[ax] -= 2;
            L(index_of(e), c) += coef;
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(L);
    return int(hi.size()) - int(lu.rank());
}

} // namespace

TEST_CASE("metric factors: exact trig values and clamps") {
    auto [s, c] = metric_factors(1.0, pi / 2.0);
    CHECK(s == Catch::Approx(1.0).margin(1e-15));
    CHECK(c == Catch::Approx(0.0).margin(1e-15));

    // flat limit S_k -> r, C_k -> 1
    for (double r : {0.3, 1.0, 2.5}) {
        auto [sk_, ck_] = metric_factors(1e-6, r);
        CHECK(std::abs(sk_ - r) < 1e-10);
        CHECK(std::abs(ck_ - 1.0) < 1e-10);
    }

    // pole clamp at r >= pi/k
    auto [s0, c0] = metric_factors(0.5, 2.0 * pi);
    CHECK(s0 == 0.0);
    CHECK(c0 == 0.0);
}

TEST_CASE("mean curvature of the unit geodesic sphere") {
    CHECK(mean_curvature(1e-9, 2) == Catch::Approx(1.0).margin(1e-12));
    CHECK(mean_curvature(pi / 4.0, 3) == Catch::Approx(pi / 2.0).margin(1e-12));
    CHECK_THROWS_AS(mean_curvature(pi, 2), ConfigError);
    CHECK_THROWS_AS(mean_curvature(3.5, 2), ConfigError);

    // monotone decreasing in k on (0, pi/2] at fixed d
    double prev = mean_curvature(1e-4, 3);
    for (int j = 1; j <= 40; ++j) {
        const double k = j * (pi / 2.0) / 40.0;
        const double h = mean_curvature(k, 3);
        CHECK(h < prev);
        prev = h;
    }
}

TEST_CASE("sphere eigenvalues and multiplicities") {
    for (int d : {2, 3, 4, 5}) {
        auto [mu, mult] = sphere_eigen(0, d);
        CHECK(mu == 0.0);
        CHECK(mult == 1);
    }
    // Fourier pair {cos 2t, sin 2t} on the circle
    auto e22 = sphere_eigen(2, 2);
    CHECK(e22.mu == 4.0);
    CHECK(e22.mult == 2);
    // brute-force harmonic polynomial dimensions
    for (int d : {3, 4}) {
        for (int i : {1, 2, 3, 4}) {
            auto [mu, mult] = sphere_eigen(i, d);
            CHECK(mu == double(i) * (i + d - 2));
            CHECK(mult == harmonic_dimension_oracle(i, d));
        }
    }
    // monotonicity of mu, positivity of multiplicities
    for (int d : {2, 3, 6}) {
        double prev = -1.0;
        for (int i = 0; i <= 12; ++i) {
            auto [mu, mult] = sphere_eigen(i, d);
            CHECK(mu > prev);
            CHECK(mult > 0);
            prev = mu;
        }
    }
}

TEST_CASE("dihedral groups satisfy assumption (G)") {
    auto g2 = dihedral_group(2);
    CHECK(g2.first_degree() == 2);
    CHECK(g2.first_mult() == 1);
    CHECK_NOTHROW(g2.validate());
    auto g3 = dihedral_group(3);
    CHECK(g3.first_degree() == 3);
    CHECK(g3.allowed_modes[1].degree == 6);
    CHECK_THROWS_AS(dihedral_group(1), ConfigError);
    CHECK_THROWS_AS(explicit_group("bad", {{1, 1}}), ConfigError);
    CHECK_THROWS_AS(explicit_group("bad", {{2, 2}}), ConfigError);
}

TEST_CASE("quadrature exactness against the surface weight") {
    const double k = 0.05;
    SECTION("d = 2, moments 0..2") {
        auto grid = RadialGrid::sphere(k, 2, 2000);
        const double R = pi / k;
        std::vector<double> f0(grid.nodes.size(), 1.0), f1, f2;
        for (double r : grid.nodes) {
            f1.push_back(r);
            f2.push_back(r * r);
        }
        const double i0 = (1.0 + std::cos(k)) / (k * k);
        const double i1 = (pi + k * std::cos(k) - std::sin(k)) / (k * k * k);
        const double i2 = (pi * pi - 2.0 - 2.0 * k * std::sin(k) -
                           (2.0 - k * k) * std::cos(k)) / (k * k * k * k);
        (void)R;
        CHECK(grid.integrate_weighted(f0) == Catch::Approx(i0).epsilon(1e-10));
        CHECK(grid.integrate_weighted(f1) == Catch::Approx(i1).epsilon(1e-10));
        CHECK(grid.integrate_weighted(f2) == Catch::Approx(i2).epsilon(1e-10));
    }
    SECTION("d = 3, volume integral") {
        auto grid = RadialGrid::sphere(k, 3, 2000);
        std::vector<double> one(grid.nodes.size(), 1.0);
        // integral sin^2(kr)/k^2 dr over [1, pi/k]
        const double exact = (pi / (2.0 * k) - 0.5 + std::sin(2.0 * k) / (4.0 * k)) / (k * k);
        CHECK(grid.integrate_weighted(one) == Catch::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("k_norm basics") {
    SECTION("zero profile") {
        auto grid = RadialGrid::exterior(2.0, 2, 200);
        std::vector<double> z(grid.nodes.size(), 0.0);
        CHECK(k_norm(z, grid) == 0.0);
    }
    SECTION("constant profile on [1,2], Euclidean weight") {
        auto grid = RadialGrid::exterior(2.0, 2, 400);
        std::vector<double> one(grid.nodes.size(), 1.0);
        CHECK(k_norm(one, grid) == Catch::Approx(std::sqrt(1.5)).epsilon(1e-12));
    }
    SECTION("refined-grid stability for a smooth profile") {
        auto norm_at = [](int n) {
            auto grid = RadialGrid::exterior(5.0, 2, n);
            std::vector<double> u, du;
            for (double r : grid.nodes) {
                u.push_back(std::exp(-(r - 1.0)) * std::sin(r));
                du.push_back(std::exp(-(r - 1.0)) * (std::cos(r) - std::sin(r)));
            }
            return k_norm(u, du, grid);
        };
        CHECK(std::abs(norm_at(2000) - norm_at(4000)) < 1e-8);
    }
    SECTION("grid mismatch rejected") {
        auto grid = RadialGrid::exterior(2.0, 2, 100);
        std::vector<double> bad(17, 1.0);
        CHECK_THROWS_AS(k_norm(bad, grid), ConfigError);
    }
}

TEST_CASE("problem parameter validation") {
    ProblemParams ok;
    CHECK_NOTHROW(ok.validate());
    ProblemParams bad = ok;
    bad.d = 3;
    bad.p = 5.0; // critical for d = 3
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.k = 3.2;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ok;
    bad.p = 0.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("smoothstep cutoff shape") {
    CHECK(smoothstep5(0.9, 1.0, 2.0) == 0.0);
    CHECK(smoothstep5(2.1, 1.0, 2.0) == 1.0);
    CHECK(smoothstep5(1.5, 1.0, 2.0) == Catch::Approx(0.5).margin(1e-15));
    // derivative consistent with finite differences
    for (double x : {1.2, 1.5, 1.8}) {
        const double fd =
            (smoothstep5(x + 1e-6, 1.0, 2.0) - smoothstep5(x - 1e-6, 1.0, 2.0)) / 2e-6;
        CHECK(smoothstep5_deriv(x, 1.0, 2.0) == Catch::Approx(fd).margin(1e-8));
    }
}
