// dev scratch: inspect one exterior solve closely
#include <cstdio>
#include <cstdlib>

#include "odp/exterior.hpp"

using namespace odp;

int main(int argc, char** argv) {
    ProblemParams base;
    base.d = 2;
    base.p = 3.0;
    const double lam = argc > 1 ? std::atof(argv[1]) : 1.0;
    ExteriorOptions eo;
    eo.n = argc > 2 ? std::atoi(argv[2]) : 2000;
    ExteriorProfile prof = solve_exterior_radial(base, lam, eo);
    std::printf("lambda=%g n=%d rmax=%g umax=%g residual=%g du1=%g\n", lam, eo.n,
                prof.grid.r1(), prof.u_max, prof.residual_sup, prof.du_at_1);
    const Scheme1D s = prof.scheme();
    double grad = 0.0, massu = 0.0, pow4 = 0.0;
    for (int i = 0; i < s.n(); ++i) {
        const double du = (prof.values[i + 1] - prof.values[i]) / s.h();
        grad += s.lambda * s.w_half[i] * du * du * s.h();
    }
    for (int i = 1; i <= s.n(); ++i) {
        massu += s.mass[i] * prof.values[i] * prof.values[i];
        pow4 += s.mass[i] * std::pow(std::max(prof.values[i], 0.0), 4.0);
    }
    const double robin = s.lambda * s.w_node[s.n()] * s.robin_beta * prof.values[s.n()] *
                         prof.values[s.n()];
    std::printf("grad=%g massu=%g robin=%g lhs=%g rhs=%g rel=%g\n", grad, massu, robin,
                grad + massu + robin, pow4,
                std::abs(grad + massu + robin - pow4) / pow4);
    for (int i = 0; i <= s.n(); i += s.n() / 20)
        std::printf("  r=%8.4f u=%12.6g\n", prof.grid.nodes[i], prof.values[i]);

    // second eigenvalue sanity: count eigenvalues below 0 of the radial op
    auto [A0, mass0] = exterior_mode_matrices(prof, 0);
    SymTridiag T0 = mass_scaled(A0, mass0);
    std::printf("sturm_count(0) = %d, eig0=%g eig1=%g eig2=%g\n", sturm_count(T0, 0.0),
                sym_tridiag_eigenvalue(T0, 0), sym_tridiag_eigenvalue(T0, 1),
                sym_tridiag_eigenvalue(T0, 2));
    return 0;
}
