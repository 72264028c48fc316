#include "bstraight/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "bstraight/rng.hpp"

namespace bstraight {

namespace {

// log density exponent: -sum_f h_f log(-<x_f, xi_j^f>)
Eigen::VectorXd log_density(const AtomSet& atoms, const Point& x) {
  const Model& m = atoms.model;
  Eigen::VectorXd le = Eigen::VectorXd::Zero(atoms.count);
  for (int f = 0; f < m.factors(); ++f) {
    const Eigen::VectorXd s =
        atoms.atoms_mink[f] *
        x.v.segment(m.factor_offset(f), m.factor_size(f));
    le -= m.factor_entropy(f) * (-s.array()).log().matrix();
  }
  return le;
}

}  // namespace

BoundaryMeasure ps_density(const QuadratureGrid& grid, const Point& x) {
  Eigen::VectorXd le = log_density(*grid.atoms, x);
  const double shift = le.maxCoeff();
  Eigen::VectorXd masses =
      grid.weights.array() * (le.array() - shift).exp();
  masses /= pairwise_sum(masses);
  return BoundaryMeasure{grid.atoms, std::move(masses)};
}

double ps_prenormalized_mass(const QuadratureGrid& grid, const Point& x) {
  const Eigen::VectorXd le = log_density(*grid.atoms, x);
  const Eigen::VectorXd terms = grid.weights.array() * le.array().exp();
  return pairwise_sum(terms);
}

BoundaryMeasure weighted_combination(const Eigen::VectorXd& coeffs,
                                     const std::vector<BoundaryMeasure>& ms) {
  if (ms.empty() || coeffs.size() != static_cast<Eigen::Index>(ms.size()))
    throw std::invalid_argument("weighted_combination: size mismatch");
  if (std::abs(coeffs.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument(
        "weighted_combination: coefficients must satisfy sum a_i^2 = 1");
  const auto& atoms = ms[0].atoms;
  for (const auto& mu : ms)
    if (mu.atoms != atoms)
      throw std::invalid_argument(
          "weighted_combination: measures do not share an atom set");
  Eigen::VectorXd masses = Eigen::VectorXd::Zero(ms[0].size());
  for (std::size_t i = 0; i < ms.size(); ++i)
    masses += coeffs[i] * coeffs[i] * ms[i].masses;
  return BoundaryMeasure{atoms, std::move(masses)};
}

BoundaryMeasure pushforward(const Isometry& g, const BoundaryMeasure& mu) {
  return BoundaryMeasure{transport_atoms(*mu.atoms, g), mu.masses};
}

double integrate(const BoundaryMeasure& mu,
                 const std::function<double(const BoundaryPoint&)>& f) {
  Eigen::VectorXd vals(mu.size());
  for (Eigen::Index j = 0; j < mu.size(); ++j) vals[j] = f(mu.atoms->atom(j));
  return integrate_values(mu, vals);
}

double integrate_values(const BoundaryMeasure& mu, const Eigen::VectorXd& v) {
  if (v.size() != mu.size())
    throw std::invalid_argument("integrate_values: size mismatch");
  const Eigen::VectorXd terms = mu.masses.array() * v.array();
  return pairwise_sum(terms);
}

}  // namespace bstraight
