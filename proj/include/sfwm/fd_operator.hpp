#pragma once

#include <complex>
#include <vector>

namespace sfwm::modes {

/// Boundary of the computational window. An electric wall forces tangential E
/// to zero (outer window edge, or a mirror plane where the mode's tangential
/// E is odd); a magnetic wall is a mirror plane where tangential E is even.
enum class Wall { Electric, Magnetic };

/// Cell-wise relative permittivity on a uniform staggered (Yee) mesh.
/// Material interfaces must lie on cell boundaries.
struct FdProblem {
    int nx = 0;
    int ny = 0;
    double dx_um = 0.0;
    double dy_um = 0.0;
    std::vector<double> eps; // row-major, j * nx + i
    Wall left = Wall::Electric;
    Wall right = Wall::Electric;
    Wall bottom = Wall::Electric;
    Wall top = Wall::Electric;
};

/// One eigenmode with its fields interpolated to the cell centres of the
/// problem mesh (unnormalised; E_t real, E_z and H_z imaginary).
struct FdMode {
    double n_eff = 0.0;
    std::vector<std::complex<double>> ex, ey, ez, hx, hy, hz;
};

struct FdSolveOptions {
    int nev = 4;
    int krylov_dim = 30;
    int max_restarts = 80;
    double tolerance = 1e-12;
};

/// Eigenmodes with β² nearest to (k0·shift_index)², sorted by decreasing n_eff.
/// Only eigenpairs that converged to `tolerance` are returned; throws
/// NotConverged when none did.
std::vector<FdMode> solve_fd_modes(const FdProblem& problem, double lambda_um, double shift_index,
                                   const FdSolveOptions& opts = {});

} // namespace sfwm::modes
