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

#ifndef DETUMBLE_GMRES_HPP
#define DETUMBLE_GMRES_HPP

#include <functional>

#include <Eigen/Core>

namespace detumble {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GmresResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;  // true |b - A x|, recomputed after the solve
    int iterations = 0;          // operator applications inside the Arnoldi loop
    bool converged = false;
    bool breakdown = false;      // Krylov space collapsed without solving the system
};

/// Unrestarted GMRES on a matrix-free operator. Iterates until the
/// least-squares residual estimate falls below `tol * |rhs|` or `max_iters`
/// Arnoldi vectors have been generated. `x0` defaults to zero.
GmresResult gmres_solve(const LinearOperator& apply, const Eigen::VectorXd& rhs, int max_iters,
                        double tol, const Eigen::VectorXd& x0 = Eigen::VectorXd());

}  // namespace detumble

#endif  // DETUMBLE_GMRES_HPP
