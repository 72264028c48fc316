#include "bstraight/barycenter.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "bstraight/rng.hpp"

namespace bstraight {

BusemannKernel make_kernel(const AtomSet& atoms, const Point& y) {
  const Model& m = atoms.model;
  const int n = m.dimension();
  BusemannKernel k{m,
                   tangent_basis_matrix(m, y),
                   Eigen::MatrixXd(atoms.count, n),
                   Eigen::MatrixXd(atoms.count, n),
                   Eigen::VectorXd::Zero(atoms.count),
                   {}};
  int col = 0;
  for (int f = 0; f < m.factors(); ++f) {
    const auto yf = y.v.segment(m.factor_offset(f), m.factor_size(f));
    const Eigen::VectorXd s = atoms.atoms_mink[f] * yf;  // <xi_j, y_f> < 0
    k.B0 += m.factor_weight(f) * (-s.array()).log().matrix();
    const int begin = col;
    for (int a = 0; a < m.factor_dim(f); ++a, ++col) {
      const auto ba =
          k.basis.row(col).segment(m.factor_offset(f), m.factor_size(f));
      k.raw_d.col(col) =
          (atoms.atoms_mink[f] * ba.transpose()).array() / s.array();
      k.dB.col(col) = m.factor_weight(f) * k.raw_d.col(col);
    }
    k.factor_cols.emplace_back(begin, col);
  }
  return k;
}

double BusemannKernel::g_of(const Eigen::VectorXd& masses) const {
  const Eigen::VectorXd terms = masses.array() * B0.array();
  return pairwise_sum(terms);
}

Eigen::VectorXd BusemannKernel::gradient_coords(
    const Eigen::VectorXd& masses) const {
  return dB.transpose() * masses;
}

Eigen::MatrixXd BusemannKernel::second_moment(
    const Eigen::VectorXd& masses) const {
  return dB.transpose() * masses.asDiagonal() * dB;
}

Eigen::MatrixXd BusemannKernel::hessian(const Eigen::VectorXd& masses) const {
  const int n = static_cast<int>(dB.cols());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int f = 0; f < model.factors(); ++f) {
    const auto [b, e] = factor_cols[f];
    const double w = model.factor_weight(f);
    const auto block = raw_d.middleCols(b, e - b);
    K.block(b, b, e - b, e - b) =
        w * (Eigen::MatrixXd::Identity(e - b, e - b) -
             block.transpose() * masses.asDiagonal() * block);
  }
  return K;
}

double g_value(const BoundaryMeasure& mu, const Point& y, const Point& p) {
  const Model& m = mu.model();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mu.size());
  for (int f = 0; f < m.factors(); ++f) {
    const auto yf = y.v.segment(m.factor_offset(f), m.factor_size(f));
    const auto pf = p.v.segment(m.factor_offset(f), m.factor_size(f));
    const Eigen::VectorXd sy = mu.atoms->atoms_mink[f] * yf;
    const Eigen::VectorXd sp = mu.atoms->atoms_mink[f] * pf;
    b += m.factor_weight(f) *
         ((-sy.array()).log() - (-sp.array()).log()).matrix();
  }
  return integrate_values(mu, b);
}

TangentVector g_gradient(const BoundaryMeasure& mu, const Point& y) {
  const Model& m = mu.model();
  Eigen::VectorXd out(m.ambient());
  for (int f = 0; f < m.factors(); ++f) {
    const auto yf = y.v.segment(m.factor_offset(f), m.factor_size(f));
    const Eigen::VectorXd s = mu.atoms->atoms_mink[f] * yf;
    const Eigen::VectorXd coef = mu.masses.array() / s.array();
    Eigen::VectorXd w = mu.atoms->atoms[f].transpose() * coef;
    out.segment(m.factor_offset(f), m.factor_size(f)) =
        m.factor_weight(f) * (w + mink(yf, w) * yf);
  }
  return TangentVector{y, std::move(out)};
}

Eigen::MatrixXd hessian_K(const BoundaryMeasure& mu, const Point& y) {
  return make_kernel(*mu.atoms, y).hessian(mu.masses);
}

Eigen::MatrixXd moment_H(const BoundaryMeasure& mu, const Point& y) {
  return make_kernel(*mu.atoms, y).second_moment(mu.masses);
}

BarycenterResult barycenter(const BoundaryMeasure& mu,
                            const SolverSettings& settings,
                            const std::optional<Point>& init) {
  const Model& m = mu.model();

  // An atom holding at least half the mass makes g unbounded below (running
  // toward it decreases g forever): the quadrature no longer resolves the
  // density peak.
  const double max_mass = mu.masses.maxCoeff();
  if (max_mass >= 0.5)
    throw DegenerateHessianError(
        "barycenter: a single atom carries " + std::to_string(max_mass) +
        " of the total mass; quadrature too coarse for this density");

  Point y = init ? *init : origin(m);

  BarycenterResult res;
  res.min_det_K = std::numeric_limits<double>::infinity();

  BusemannKernel kernel = make_kernel(*mu.atoms, y);
  double g0 = kernel.g_of(mu.masses);
  res.g_history.push_back(g0);

  for (int it = 0; it < settings.max_iterations; ++it) {
    const Eigen::VectorXd gc = kernel.gradient_coords(mu.masses);
    const double gn = gc.norm();
    if (gn <= settings.grad_tol) {
      res.point = y;
      res.gradient_norm = gn;
      res.iterations = it;
      res.g_value = g0;
      return res;
    }

    const Eigen::MatrixXd K = kernel.hessian(mu.masses);
    const double det = K.determinant();
    res.min_det_K = std::min(res.min_det_K, det);
    if (!(det > kDegenerateDetThreshold))
      throw DegenerateHessianError(
          "barycenter: det K = " + std::to_string(det) +
          " at iterate " + std::to_string(it) +
          " (measure not effectively fully supported)");

    const Eigen::VectorXd sc = K.ldlt().solve(-gc);
    const TangentVector step{y, kernel.basis.transpose() * sc};
    // Once the predicted decrease g^T K^{-1} g drops below the float
    // resolution of g, the backtracking comparison is rounding noise; the
    // full Newton step is the terminal refinement.
    const double predicted = -gc.dot(sc);
    const double resolution = 4e-16 * (1.0 + std::abs(g0));

    double t = settings.initial_damping;
    Point y1 = y;
    BusemannKernel k1 = kernel;
    double g1 = g0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      y1 = exp_map(m, step, t);
      k1 = make_kernel(*mu.atoms, y1);
      g1 = k1.g_of(mu.masses);
      if (predicted <= resolution ||
          g1 <= g0 + 1e-15 * (1.0 + std::abs(g0))) {
        accepted = true;
        break;
      }
      t *= settings.backtrack_factor;
    }
    if (!accepted)
      throw NonConvergenceError(
          "barycenter: backtracking failed to decrease g at iterate " +
          std::to_string(it));
    y = y1;
    kernel = std::move(k1);
    g0 = g1;
    res.g_history.push_back(g0);

    // Coordinates grow like e^d, so the kernel loses e^{2d} eps of accuracy;
    // past this radius the evaluations are untrustworthy and the run-away
    // indicates a near-collapsed measure.
    if (distance(m, origin(m), y) > 12.0)
      throw NonConvergenceError(
          "barycenter: iterate escaped the reliable numerical domain "
          "(near-collapsed measure or too-coarse grid)");
  }

  const double gn = kernel.gradient_coords(mu.masses).norm();
  if (gn <= settings.grad_tol) {
    res.point = y;
    res.gradient_norm = gn;
    res.iterations = settings.max_iterations;
    res.g_value = g0;
    return res;
  }
  throw NonConvergenceError(
      "barycenter: gradient norm " + std::to_string(gn) + " after " +
      std::to_string(settings.max_iterations) + " iterations");
}

}  // namespace bstraight
