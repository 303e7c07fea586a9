#include "rgc/cg.hpp"

#include <cmath>

namespace rgc {

namespace {

constexpr int kMaxRestarts = 4;

}  // namespace

CgResult conjugate_gradient(const LinearOperator& apply, const Vector& b,
                            double tolerance, int max_iterations,
                            const Projector& project) {
  auto proj = [&](Vector& v) {
    if (project) project(v);
  };
  Vector rhs = b;
  proj(rhs);

  CgResult out;
  out.x = Vector::Zero(b.size());
  Vector r = rhs;
  for (int restart = 0; restart <= kMaxRestarts; ++restart) {
    double rr = r.squaredNorm();
    if (std::sqrt(rr) <= tolerance) {
      out.residual = std::sqrt(rr);
      out.converged = true;
      return out;
    }
    Vector p = r;
    bool inner_converged = false;
    while (out.iterations < max_iterations) {
      Vector ap = apply(p);
      proj(ap);
      const double curvature = p.dot(ap);
      if (!(curvature > 0.0)) break;  // operator not SPD on this direction
      const double alpha = rr / curvature;
      out.x += alpha * p;
      proj(out.x);
      r -= alpha * ap;
      proj(r);
      ++out.iterations;
      const double rr_next = r.squaredNorm();
      if (std::sqrt(rr_next) <= tolerance) {
        inner_converged = true;
        break;
      }
      p = r + (rr_next / rr) * p;
      proj(p);
      rr = rr_next;
    }
    r = rhs - apply(out.x);
    proj(r);
    out.residual = r.norm();
    if (out.residual <= tolerance) {
      out.converged = true;
      return out;
    }
    if (!inner_converged) return out;
  }
  return out;
}

}  // namespace rgc
