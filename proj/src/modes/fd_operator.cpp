#include "sfwm/fd_operator.hpp"

#include "arnoldi.hpp"
#include "sfwm/constants.hpp"
#include "sfwm/error.hpp"

#include <Eigen/Sparse>
#include <Eigen/UmfPackSupport>

#include <algorithm>
#include <cmath>

// Full-vector transverse-E formulation on a staggered mesh:
//   Ex at (i+½, j), Ey at (i, j+½), Ez ∝ d at nodes (i, j), Hz ∝ c at centres.
//   c = ∂x Ey − ∂y Ex,  d = (1/εz)(∂x(εx Ex) + ∂y(εy Ey)) = jβ Ez
//   β² Ex = k0² εx Ex − ∂y c + ∂x d
//   β² Ey = k0² εy Ey + ∂x c + ∂y d

namespace sfwm::modes {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;

class Mesh {
public:
    explicit Mesh(const FdProblem& p) : p_(p) {
        const int nx = p.nx;
        const int ny = p.ny;
        ex_.assign(static_cast<std::size_t>(nx) * (ny + 1), -1);
        ey_.assign(static_cast<std::size_t>(nx + 1) * ny, -1);
        node_.assign(static_cast<std::size_t>(nx + 1) * (ny + 1), -1);
        int k = 0;
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const bool wall = (j == 0 && p.bottom == Wall::Electric) || (j == ny && p.top == Wall::Electric);
                if (!wall)
                    ex_[exslot(i, j)] = k++;
            }
        n_ex_ = k;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i <= nx; ++i) {
                const bool wall = (i == 0 && p.left == Wall::Electric) || (i == nx && p.right == Wall::Electric);
                if (!wall)
                    ey_[eyslot(i, j)] = k++;
            }
        n_unknowns_ = k;
        int kn = 0;
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i) {
                const bool wall = (i == 0 && p.left == Wall::Electric) || (i == nx && p.right == Wall::Electric) ||
                                  (j == 0 && p.bottom == Wall::Electric) || (j == ny && p.top == Wall::Electric);
                if (!wall)
                    node_[nodeslot(i, j)] = kn++;
            }
        n_nodes_ = kn;
    }

    int nx() const { return p_.nx; }
    int ny() const { return p_.ny; }
    int unknowns() const { return n_unknowns_; }
    int ex_count() const { return n_ex_; }
    int nodes() const { return n_nodes_; }

    std::size_t exslot(int i, int j) const { return static_cast<std::size_t>(j) * p_.nx + i; }
    std::size_t eyslot(int i, int j) const { return static_cast<std::size_t>(j) * (p_.nx + 1) + i; }
    std::size_t nodeslot(int i, int j) const { return static_cast<std::size_t>(j) * (p_.nx + 1) + i; }

    int ex(int i, int j) const { return ex_[exslot(i, j)]; }
    int ey(int i, int j) const { return ey_[eyslot(i, j)]; }
    int node(int i, int j) const { return node_[nodeslot(i, j)]; }

    // Mirror-extended cell permittivity.
    double eps(int i, int j) const {
        if (i < 0)
            i = -1 - i;
        if (i >= p_.nx)
            i = 2 * p_.nx - 1 - i;
        if (j < 0)
            j = -1 - j;
        if (j >= p_.ny)
            j = 2 * p_.ny - 1 - j;
        return p_.eps[static_cast<std::size_t>(j) * p_.nx + i];
    }
    double eps_x(int i, int j) const { return 0.5 * (eps(i, j - 1) + eps(i, j)); }
    double eps_y(int i, int j) const { return 0.5 * (eps(i - 1, j) + eps(i, j)); }
    double eps_z(int i, int j) const {
        return 0.25 * (eps(i - 1, j - 1) + eps(i, j - 1) + eps(i - 1, j) + eps(i, j));
    }

private:
    const FdProblem& p_;
    std::vector<int> ex_, ey_, node_;
    int n_ex_ = 0;
    int n_unknowns_ = 0;
    int n_nodes_ = 0;
};

struct Operators {
    SpMat grad; // active nodes ← unknowns, yields d
    SpMat curl; // centres ← unknowns, yields c
    SpMat system;
    Eigen::VectorXd eps_unknown;
};

Operators assemble(const Mesh& m, double dx, double dy, double k0) {
    const int nx = m.nx();
    const int ny = m.ny();
    const int nu = m.unknowns();
    const int nn = m.nodes();
    const int nc = nx * ny;

    Operators ops;
    ops.eps_unknown.resize(nu);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (int k = m.ex(i, j); k >= 0)
                ops.eps_unknown(k) = m.eps_x(i, j);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i)
            if (int k = m.ey(i, j); k >= 0)
                ops.eps_unknown(k) = m.eps_y(i, j);

    // d at nodes. Ghost values past a magnetic wall are the negated mirror
    // (normal E is odd there); electric-wall nodes carry d = 0 and are absent.
    std::vector<Trip> tg;
    tg.reserve(static_cast<std::size_t>(nn) * 4);
    auto add_ex = [&](int row, int i, int j, double coef) {
        if (i < 0) {
            i = -1 - i;
            coef = -coef;
        } else if (i >= nx) {
            i = 2 * nx - 1 - i;
            coef = -coef;
        }
        if (int k = m.ex(i, j); k >= 0)
            tg.emplace_back(row, k, coef * m.eps_x(i, j));
    };
    auto add_ey = [&](int row, int i, int j, double coef) {
        if (j < 0) {
            j = -1 - j;
            coef = -coef;
        } else if (j >= ny) {
            j = 2 * ny - 1 - j;
            coef = -coef;
        }
        if (int k = m.ey(i, j); k >= 0)
            tg.emplace_back(row, k, coef * m.eps_y(i, j));
    };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const int row = m.node(i, j);
            if (row < 0)
                continue;
            const double iz = 1.0 / m.eps_z(i, j);
            add_ex(row, i, j, iz / dx);
            add_ex(row, i - 1, j, -iz / dx);
            add_ey(row, i, j, iz / dy);
            add_ey(row, i, j - 1, -iz / dy);
        }
    ops.grad.resize(nn, nu);
    ops.grad.setFromTriplets(tg.begin(), tg.end());

    std::vector<Trip> tc;
    tc.reserve(static_cast<std::size_t>(nc) * 4);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int row = j * nx + i;
            if (int k = m.ey(i + 1, j); k >= 0)
                tc.emplace_back(row, k, 1.0 / dx);
            if (int k = m.ey(i, j); k >= 0)
                tc.emplace_back(row, k, -1.0 / dx);
            if (int k = m.ex(i, j + 1); k >= 0)
                tc.emplace_back(row, k, -1.0 / dy);
            if (int k = m.ex(i, j); k >= 0)
                tc.emplace_back(row, k, 1.0 / dy);
        }
    ops.curl.resize(nc, nu);
    ops.curl.setFromTriplets(tc.begin(), tc.end());

    // Rows of the eigen-equations: curl part (acts on c) and divergence part
    // (acts on d). c is odd across a magnetic mirror.
    std::vector<Trip> ec, ed;
    ec.reserve(static_cast<std::size_t>(nu) * 2);
    ed.reserve(static_cast<std::size_t>(nu) * 2);
    auto add_c = [&](int row, int i, int j, double coef) {
        if (i < 0) {
            i = -1 - i;
            coef = -coef;
        } else if (i >= nx) {
            i = 2 * nx - 1 - i;
            coef = -coef;
        }
        if (j < 0) {
            j = -1 - j;
            coef = -coef;
        } else if (j >= ny) {
            j = 2 * ny - 1 - j;
            coef = -coef;
        }
        ec.emplace_back(row, j * nx + i, coef);
    };
    auto add_d = [&](int row, int i, int j, double coef) {
        if (int k = m.node(i, j); k >= 0)
            ed.emplace_back(row, k, coef);
    };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int row = m.ex(i, j);
            if (row < 0)
                continue;
            add_c(row, i, j, -1.0 / dy);
            add_c(row, i, j - 1, 1.0 / dy);
            add_d(row, i + 1, j, 1.0 / dx);
            add_d(row, i, j, -1.0 / dx);
        }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const int row = m.ey(i, j);
            if (row < 0)
                continue;
            add_c(row, i, j, 1.0 / dx);
            add_c(row, i - 1, j, -1.0 / dx);
            add_d(row, i, j + 1, 1.0 / dy);
            add_d(row, i, j, -1.0 / dy);
        }
    SpMat eq_c(nu, nc), eq_d(nu, nn);
    eq_c.setFromTriplets(ec.begin(), ec.end());
    eq_d.setFromTriplets(ed.begin(), ed.end());

    SpMat diag(nu, nu);
    {
        std::vector<Trip> td;
        td.reserve(static_cast<std::size_t>(nu));
        for (int k = 0; k < nu; ++k)
            td.emplace_back(k, k, k0 * k0 * ops.eps_unknown(k));
        diag.setFromTriplets(td.begin(), td.end());
    }
    ops.system = diag + SpMat(eq_c * ops.curl) + SpMat(eq_d * ops.grad);
    ops.system.makeCompressed();
    return ops;
}

FdMode reconstruct(const Mesh& m, const Operators& ops, const Eigen::VectorXd& u, double beta, double k0,
                   double dx, double dy) {
    const int nx = m.nx();
    const int ny = m.ny();
    const Eigen::VectorXd dn = ops.grad * u;
    const Eigen::VectorXd cc = ops.curl * u;

    auto exv = [&](int i, int j) { int k = m.ex(i, j); return k >= 0 ? u(k) : 0.0; };
    auto eyv = [&](int i, int j) { int k = m.ey(i, j); return k >= 0 ? u(k) : 0.0; };
    auto dv = [&](int i, int j) { int k = m.node(i, j); return k >= 0 ? dn(k) : 0.0; };
    // Transverse H on the E sub-grids.
    auto hx_at = [&](int i, int j) { return (dv(i, j + 1) - dv(i, j)) / dy / (k0 * beta) - beta / k0 * eyv(i, j); };
    auto hy_at = [&](int i, int j) { return beta / k0 * exv(i, j) - (dv(i + 1, j) - dv(i, j)) / dx / (k0 * beta); };

    const std::complex<double> I(0.0, 1.0);
    FdMode mode;
    const std::size_t nc = static_cast<std::size_t>(nx) * ny;
    mode.ex.resize(nc);
    mode.ey.resize(nc);
    mode.ez.resize(nc);
    mode.hx.resize(nc);
    mode.hy.resize(nc);
    mode.hz.resize(nc);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t c = static_cast<std::size_t>(j) * nx + i;
            mode.ex[c] = 0.5 * (exv(i, j) + exv(i, j + 1));
            mode.ey[c] = 0.5 * (eyv(i, j) + eyv(i + 1, j));
            const double dz = 0.25 * (dv(i, j) + dv(i + 1, j) + dv(i, j + 1) + dv(i + 1, j + 1));
            mode.ez[c] = -I * dz / beta;
            mode.hz[c] = I * cc(static_cast<Eigen::Index>(c)) / k0;
            mode.hx[c] = 0.5 * (hx_at(i, j) + hx_at(i + 1, j));
            mode.hy[c] = 0.5 * (hy_at(i, j) + hy_at(i, j + 1));
        }
    return mode;
}

} // namespace

std::vector<FdMode> solve_fd_modes(const FdProblem& problem, double lambda_um, double shift_index,
                                   const FdSolveOptions& opts) {
    if (problem.nx < 1 || problem.ny < 1 || !(problem.dx_um > 0.0) || !(problem.dy_um > 0.0))
        throw Error(ErrorCode::InvalidArgument, "degenerate finite-difference mesh");
    if (problem.eps.size() != static_cast<std::size_t>(problem.nx) * problem.ny)
        throw Error(ErrorCode::InvalidArgument, "permittivity array does not match mesh");
    if (!(lambda_um > 0.0))
        throw Error(ErrorCode::OutOfRange, "wavelength must be positive");

    const double k0 = 2.0 * kPi / lambda_um;
    const Mesh mesh(problem);
    const Operators ops = assemble(mesh, problem.dx_um, problem.dy_um, k0);
    const int nu = mesh.unknowns();

    const double sigma = k0 * k0 * shift_index * shift_index;
    SpMat shifted = ops.system;
    for (int k = 0; k < nu; ++k)
        shifted.coeffRef(k, k) -= sigma;
    shifted.makeCompressed();

    Eigen::UmfPackLU<SpMat> lu;
    // Iterative refinement roughly doubles the cost of every solve and buys
    // nothing once the Arnoldi residual test is applied.
    lu.umfpackControl()(UMFPACK_IRSTEP) = 0;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success)
        throw Error(ErrorCode::NotConverged, "sparse LU factorisation failed");

    const double eps_min = ops.eps_unknown.minCoeff();
    Eigen::VectorXd start = ops.eps_unknown.array() - eps_min;
    if (!(start.norm() > 0.0))
        start.setOnes();

    detail::LinearOp op = [&lu](const Eigen::VectorXd& in, Eigen::VectorXd& out) { out = lu.solve(in); };
    bool converged = false;
    auto ritz = detail::arnoldi_largest(op, start, opts.nev, opts.krylov_dim, opts.max_restarts, opts.tolerance,
                                        converged);

    std::vector<FdMode> modes;
    for (const auto& r : ritz) {
        if (r.residual > opts.tolerance)
            continue;
        const double beta2 = sigma + 1.0 / r.value;
        if (!(beta2 > 0.0))
            continue;
        const double beta = std::sqrt(beta2);
        FdMode mode = reconstruct(mesh, ops, r.vector, beta, k0, problem.dx_um, problem.dy_um);
        mode.n_eff = beta / k0;
        modes.push_back(std::move(mode));
    }
    if (modes.empty())
        throw Error(ErrorCode::NotConverged, "shift-invert Arnoldi did not converge");
    std::stable_sort(modes.begin(), modes.end(), [](const FdMode& a, const FdMode& b) { return a.n_eff > b.n_eff; });
    return modes;
}

} // namespace sfwm::modes
