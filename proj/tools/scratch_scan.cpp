// dev scratch: fine lambda scan of the limit DtN and mode Dirichlet margins
#include <cstdio>
#include <cstdlib>

#include "odp/exterior.hpp"

using namespace odp;

int main(int argc, char** argv) {
    ProblemParams base;
    base.d = 2;
    base.p = 3.0;
    double lo = argc > 1 ? std::atof(argv[1]) : 0.02;
    double hi = argc > 2 ? std::atof(argv[2]) : 2.0;
    int npts = argc > 3 ? std::atoi(argv[3]) : 120;
    int n = argc > 4 ? std::atoi(argv[4]) : 2000;
    std::printf("# lambda  h2  eig1_mode2  tau0  tau0_2nd  umax  argmax  du1\n");
    for (int j = 0; j < npts; ++j) {
        const double t = double(j) / (npts - 1);
        const double lam = lo * std::pow(hi / lo, t);
        try {
            ExteriorOptions eo;
            eo.n = n;
            ExteriorProfile prof = solve_exterior_radial(base, lam, eo);
            double h2 = 1e99;
            try {
                h2 = limit_dtn_value(prof, 2);
            } catch (const SolverError&) {
            }
            auto [A, mass] = exterior_mode_matrices(prof, 2);
            SymTridiag T = mass_scaled(A, mass);
            const double e1 = sym_tridiag_eigenvalue(T, 0);
            auto [A0, mass0] = exterior_mode_matrices(prof, 0);
            SymTridiag T0 = mass_scaled(A0, mass0);
            const double t1 = sym_tridiag_eigenvalue(T0, 0);
            const double t2 = sym_tridiag_eigenvalue(T0, 1);
            int am = 0;
            for (int i = 0; i < int(prof.values.size()); ++i)
                if (prof.values[i] > prof.values[am]) am = i;
            std::printf("%12.6g %12.6g %12.6g %12.6g %12.6g %10.4f %10.4f %10.4f\n", lam, h2,
                        e1, t1, t2, prof.u_max, prof.grid.nodes[am], prof.du_at_1);
        } catch (const std::exception& e) {
            std::printf("%12.6g  FAIL %s\n", lam, e.what());
        }
    }
    return 0;
}
