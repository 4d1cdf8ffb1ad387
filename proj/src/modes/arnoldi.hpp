#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace sfwm::modes::detail {

struct RitzPair {
    double value;
    Eigen::VectorXd vector;
    double residual; // relative to |value|
};

using LinearOp = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Explicitly restarted Arnoldi iteration for the `nev` eigenvalues of largest
/// magnitude of a real operator whose wanted spectrum is real. Ritz pairs are
/// returned in order of decreasing magnitude; `converged` reports whether all
/// of them met `tol`.
std::vector<RitzPair> arnoldi_largest(const LinearOp& op, Eigen::VectorXd start, int nev, int krylov_dim,
                                      int max_restarts, double tol, bool& converged);

} // namespace sfwm::modes::detail
