#include "arnoldi.hpp"

#include "sfwm/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sfwm::modes::detail {

std::vector<RitzPair> arnoldi_largest(const LinearOp& op, Eigen::VectorXd start, int nev, int krylov_dim,
                                      int max_restarts, double tol, bool& converged) {
    const Eigen::Index n = start.size();
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "empty operator");
    const int m = static_cast<int>(std::min<Eigen::Index>(krylov_dim, n));
    nev = std::min(nev, m - 1 > 0 ? m - 1 : 1);

    double snorm = start.norm();
    if (!(snorm > 0.0)) {
        start.setOnes();
        snorm = start.norm();
    }
    Eigen::VectorXd v = start / snorm;

    Eigen::MatrixXd V(n, m + 1);
    Eigen::MatrixXd H(m + 1, m);
    Eigen::VectorXd w(n);
    std::vector<RitzPair> out;

    for (int restart = 0; restart <= max_restarts; ++restart) {
        V.setZero();
        H.setZero();
        V.col(0) = v;
        int k = m;
        for (int j = 0; j < m; ++j) {
            op(V.col(j), w);
            // Classical Gram-Schmidt with one full reorthogonalisation pass.
            for (int pass = 0; pass < 2; ++pass) {
                Eigen::VectorXd h = V.leftCols(j + 1).transpose() * w;
                w.noalias() -= V.leftCols(j + 1) * h;
                H.col(j).head(j + 1) += h;
            }
            const double beta = w.norm();
            H(j + 1, j) = beta;
            if (beta < 1e-14 * H.col(j).head(j + 1).norm()) {
                k = j + 1;
                break;
            }
            V.col(j + 1) = w / beta;
        }

        Eigen::EigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(k, k));
        const Eigen::VectorXcd theta = es.eigenvalues();
        const Eigen::MatrixXcd Y = es.eigenvectors();
        std::vector<int> order(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return std::abs(theta(a)) > std::abs(theta(b)); });

        const int want = std::min(nev, k);
        const double hlast = k < m + 1 ? H(k, k - 1) : 0.0;
        bool all = true;
        out.clear();
        Eigen::VectorXd restart_vec = Eigen::VectorXd::Zero(k);
        for (int r = 0; r < want; ++r) {
            const int idx = order[static_cast<std::size_t>(r)];
            const std::complex<double> t = theta(idx);
            const Eigen::VectorXcd y = Y.col(idx) / Y.col(idx).norm();
            const double res = std::abs(hlast) * std::abs(y(k - 1)) / std::max(std::abs(t), 1e-300);
            if (res > tol)
                all = false;
            const Eigen::VectorXd yr = y.real();
            restart_vec += yr / std::max(yr.norm(), 1e-300);
            if (std::abs(t.imag()) <= 1e-8 * std::abs(t)) {
                Eigen::VectorXd x = V.leftCols(k) * yr;
                x /= x.norm();
                out.push_back({t.real(), std::move(x), res});
            }
        }
        if (all || restart == max_restarts || k < m) {
            converged = all || k < m;
            return out;
        }
        v = V.leftCols(k) * restart_vec;
        v /= v.norm();
    }
    converged = false;
    return out;
}

} // namespace sfwm::modes::detail
