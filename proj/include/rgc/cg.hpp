#pragma once

#include <functional>

#include "rgc/graph.hpp"

namespace rgc {

using LinearOperator = std::function<Vector(const Vector&)>;
// In-place projection onto the subspace where the operator is SPD.
using Projector = std::function<void(Vector&)>;

struct CgResult {
  Vector x;
  double residual = 0.0;  // true residual ||b - A x|| at exit
  int iterations = 0;
  bool converged = false;
};

// Conjugate gradient from a zero initial guess. With a projector, b, every
// iterate, residual and search direction are re-projected each step. If the
// recursive residual meets `tolerance` but the true residual does not, CG is
// restarted from the current iterate, within the same iteration budget.
CgResult conjugate_gradient(const LinearOperator& apply, const Vector& b,
                            double tolerance, int max_iterations,
                            const Projector& project = {});

}  // namespace rgc
