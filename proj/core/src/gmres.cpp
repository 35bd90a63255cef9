/*
 Copyright 2026 The detumble Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "detumble/gmres.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace detumble {
namespace {

// Arnoldi vectors shorter than this fraction of their pre-orthogonalisation
// length are treated as a collapsed Krylov space.
constexpr double kBreakdownRatio = 1e-14;

struct Givens {
    double c = 1.0;
    double s = 0.0;
};

Givens make_givens(double a, double b) {
    if (b == 0.0) {
        return {a >= 0.0 ? 1.0 : -1.0, 0.0};
    }
    const double r = std::hypot(a, b);
    return {a / r, b / r};
}

}  // namespace

GmresResult gmres_solve(const LinearOperator& apply, const Eigen::VectorXd& rhs, int max_iters,
                        double tol, const Eigen::VectorXd& x0) {
    if (max_iters < 1) {
        throw std::invalid_argument("gmres_solve: max_iters must be at least 1");
    }
    const Eigen::Index n = rhs.size();
    GmresResult result;
    result.x = x0.size() == n ? x0 : Eigen::VectorXd::Zero(n);

    const double rhs_norm = rhs.norm();
    Eigen::VectorXd r0 = rhs;
    if (x0.size() == n && x0.squaredNorm() > 0.0) {
        r0 -= apply(result.x);
    }
    const double beta = r0.norm();
    const double target = tol * rhs_norm;
    if (beta == 0.0 || beta <= target) {
        result.residual_norm = beta;
        result.converged = true;
        return result;
    }

    const int m = static_cast<int>(std::min<Eigen::Index>(max_iters, n));
    Eigen::MatrixXd basis(n, m + 1);
    Eigen::MatrixXd hessenberg = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    std::vector<Givens> rotations(static_cast<std::size_t>(m));

    basis.col(0) = r0 / beta;
    g[0] = beta;

    int k = 0;
    bool collapsed = false;
    while (k < m) {
        Eigen::VectorXd w = apply(basis.col(k));
        ++result.iterations;
        const double w_norm = w.norm();

        // Modified Gram-Schmidt with one reorthogonalisation pass.
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j <= k; ++j) {
                const double proj = basis.col(j).dot(w);
                hessenberg(j, k) += proj;
                w -= proj * basis.col(j);
            }
        }
        const double next_norm = w.norm();
        hessenberg(k + 1, k) = next_norm;

        for (int j = 0; j < k; ++j) {
            const auto [c, s] = rotations[static_cast<std::size_t>(j)];
            const double upper = hessenberg(j, k);
            const double lower = hessenberg(j + 1, k);
            hessenberg(j, k) = c * upper + s * lower;
            hessenberg(j + 1, k) = -s * upper + c * lower;
        }
        const Givens rot = make_givens(hessenberg(k, k), hessenberg(k + 1, k));
        rotations[static_cast<std::size_t>(k)] = rot;
        hessenberg(k, k) = rot.c * hessenberg(k, k) + rot.s * hessenberg(k + 1, k);
        hessenberg(k + 1, k) = 0.0;
        g[k + 1] = -rot.s * g[k];
        g[k] = rot.c * g[k];
        ++k;

        if (std::abs(g[k]) <= target) {
            break;
        }
        if (next_norm <= kBreakdownRatio * w_norm || next_norm == 0.0) {
            collapsed = true;
            break;
        }
        if (k < m) {
            basis.col(k) = w / next_norm;
        }
    }

    // Back substitution; a vanishing pivot means the projected operator is
    // singular, so only the leading nonsingular block is used.
    int usable = k;
    const double scale = hessenberg.topLeftCorner(k, k).cwiseAbs().maxCoeff();
    for (int j = 0; j < k; ++j) {
        if (std::abs(hessenberg(j, j)) <= kBreakdownRatio * scale || scale == 0.0) {
            usable = j;
            break;
        }
    }
    if (usable > 0) {
        const Eigen::VectorXd y = hessenberg.topLeftCorner(usable, usable)
                                      .triangularView<Eigen::Upper>()
                                      .solve(g.head(usable));
        result.x += basis.leftCols(usable) * y;
    }

    result.residual_norm = (rhs - apply(result.x)).norm();
    const double estimate = usable == k ? std::abs(g[k]) : beta;
    result.converged = usable == k && estimate <= target;
    result.breakdown = usable < k || (collapsed && estimate > target);
    return result;
}

}  // namespace detumble
