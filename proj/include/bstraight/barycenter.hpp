#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "bstraight/measure.hpp"

namespace bstraight {

// Newton hit max_iterations: ill-conditioned measure or too-coarse grid.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// det K fell below threshold: measure not effectively fully supported.
class DegenerateHessianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverSettings {
  double grad_tol = 1e-10;
  int max_iterations = 100;
  double backtrack_factor = 0.5;
  double initial_damping = 1.0;
};

struct BarycenterResult {
  Point point;
  double gradient_norm = 0.0;
  int iterations = 0;
  double g_value = 0.0;  // at the solution, basepoint o
  std::vector<double> g_history;
  double min_det_K = 0.0;
};

// Per-point evaluation kernel shared by the solver and the Jacobian
// analysis: one-form and two-form integrals of the Busemann family over a
// fixed atom set, assembled in an orthonormal tangent basis at y.
struct BusemannKernel {
  Model model;
  Eigen::MatrixXd basis;  // n x ambient, rows orthonormal
  Eigen::MatrixXd raw_d;  // N x n: <b_a, xi_j> / <y_f, xi_j> per factor
  Eigen::MatrixXd dB;     // N x n: dB_j(b_a) (factor-weighted raw_d)
  Eigen::VectorXd B0;     // N: B_o(y, theta_j)
  std::vector<std::pair<int, int>> factor_cols;  // [begin, end) per factor

  double g_of(const Eigen::VectorXd& masses) const;
  Eigen::VectorXd gradient_coords(const Eigen::VectorXd& masses) const;
  Eigen::MatrixXd second_moment(const Eigen::VectorXd& masses) const;  // H
  Eigen::MatrixXd hessian(const Eigen::VectorXd& masses) const;        // K
};

BusemannKernel make_kernel(const AtomSet& atoms, const Point& y);

// g_mu(y) = integral of B_p(y, .) against mu.
double g_value(const BoundaryMeasure& mu, const Point& y, const Point& p);

// Metric dual of u -> integral of dB_(y,theta)(u); basepoint-free.
TangentVector g_gradient(const BoundaryMeasure& mu, const Point& y);

// K and H as matrices in orthonormal_tangent_basis(y) order.
Eigen::MatrixXd hessian_K(const BoundaryMeasure& mu, const Point& y);
Eigen::MatrixXd moment_H(const BoundaryMeasure& mu, const Point& y);

// Newton with backtracking on the convex functional g_mu; returns the
// minimizer with gradient norm <= settings.grad_tol.
BarycenterResult barycenter(const BoundaryMeasure& mu,
                            const SolverSettings& settings = {},
                            const std::optional<Point>& init = std::nullopt);

constexpr double kDegenerateDetThreshold = 1e-14;

}  // namespace bstraight
