#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "bstraight/grid.hpp"

namespace bstraight {

// Finitely supported approximation of a boundary probability measure:
// positive masses of total 1 on a shared atom set.
struct BoundaryMeasure {
  std::shared_ptr<const AtomSet> atoms;
  Eigen::VectorXd masses;

  Eigen::Index size() const { return masses.size(); }
  const Model& model() const { return atoms->model; }
};

// Discretized conformal density at x: masses proportional to
// w_j * exp(-h * B_o(x, theta_j)), renormalized to total mass 1.
BoundaryMeasure ps_density(const QuadratureGrid& grid, const Point& x);

// The quadrature value of the total density mass before renormalization; the
// continuous integral is exactly 1 in H^n (Poisson kernel identity).
double ps_prenormalized_mass(const QuadratureGrid& grid, const Point& x);

// sum_i coeffs[i]^2 * measures[i]; requires a shared atom set and
// sum coeffs^2 = 1 within 1e-10.
BoundaryMeasure weighted_combination(const Eigen::VectorXd& coeffs,
                                     const std::vector<BoundaryMeasure>& ms);

// Transports atoms, keeps masses (integrals against transported test
// functions are exact).
BoundaryMeasure pushforward(const Isometry& g, const BoundaryMeasure& mu);

// sum_j mass_j f(theta_j) with a fixed pairwise summation order.
double integrate(const BoundaryMeasure& mu,
                 const std::function<double(const BoundaryPoint&)>& f);
double integrate_values(const BoundaryMeasure& mu, const Eigen::VectorXd& v);

}  // namespace bstraight
