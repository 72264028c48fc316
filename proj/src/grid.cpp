#include "bstraight/grid.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace bstraight {

BoundaryPoint AtomSet::atom(Eigen::Index j) const {
  Eigen::VectorXd xi(model.ambient());
  for (int f = 0; f < model.factors(); ++f)
    xi.segment(model.factor_offset(f), model.factor_size(f)) =
        atoms[f].row(j).transpose();
  return BoundaryPoint{std::move(xi)};
}

std::shared_ptr<const AtomSet> make_atom_set(
    const Model& m, std::vector<Eigen::MatrixXd> factor_atoms) {
  auto set = std::make_shared<AtomSet>(AtomSet{m, {}, {}, 0});
  set->count = factor_atoms[0].rows();
  set->atoms = std::move(factor_atoms);
  for (int f = 0; f < m.factors(); ++f) {
    Eigen::MatrixXd flip = set->atoms[f];
    flip.col(flip.cols() - 1) *= -1.0;
    set->atoms_mink.push_back(std::move(flip));
  }
  return set;
}

std::shared_ptr<const AtomSet> transport_atoms(const AtomSet& atoms,
                                               const Isometry& g) {
  const Model& m = atoms.model;
  std::vector<Eigen::MatrixXd> moved;
  for (int f = 0; f < m.factors(); ++f) {
    Eigen::MatrixXd a = atoms.atoms[f] * g.blocks[f].transpose();
    a.array().colwise() /= a.col(a.cols() - 1).array();
    moved.push_back(std::move(a));
  }
  return make_atom_set(m, std::move(moved));
}

std::string scheme_name(GridScheme s) {
  switch (s) {
    case GridScheme::Circle: return "circle";
    case GridScheme::Fibonacci: return "fibonacci";
    case GridScheme::GaussCircle: return "gauss-circle";
    case GridScheme::Frames: return "frames";
    case GridScheme::ProductCircle: return "product-circle";
  }
  return "?";
}

GridScheme default_scheme(const Model& m) {
  switch (m.kind()) {
    case ModelKind::H2: return GridScheme::Circle;
    case ModelKind::H3: return GridScheme::GaussCircle;
    case ModelKind::H4:
    case ModelKind::H5: return GridScheme::Frames;
    case ModelKind::H2xH2: return GridScheme::ProductCircle;
  }
  return GridScheme::Circle;
}

int default_resolution(const Model& m) {
  switch (m.kind()) {
    case ModelKind::H2: return 512;
    case ModelKind::H3: return 48;
    case ModelKind::H4: return 4096;
    case ModelKind::H5: return 5120;
    case ModelKind::H2xH2: return 128;
  }
  return 512;
}

namespace {

Eigen::MatrixXd circle_nodes(int n) {
  Eigen::MatrixXd a(n, 3);
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * M_PI * k / n;
    a(k, 0) = std::cos(phi);
    a(k, 1) = std::sin(phi);
    a(k, 2) = 1.0;
  }
  return a;
}

// Standard golden-angle lattice; callers symmetrize.
Eigen::MatrixXd fibonacci_nodes(int n) {
  Eigen::MatrixXd a(n, 3);
  const double step = M_PI * (std::sqrt(5.0) + 1.0);
  for (int k = 0; k < n; ++k) {
    const double z = -1.0 + (2.0 * k + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = step * k;
    a(k, 0) = r * std::cos(phi);
    a(k, 1) = r * std::sin(phi);
    a(k, 2) = z;
  }
  return a;
}

void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
}

}  // namespace

QuadratureGrid build_grid(const Model& m, int resolution, std::uint64_t seed) {
  return build_grid(m, resolution, seed, default_scheme(m));
}

QuadratureGrid build_grid(const Model& m, int resolution, std::uint64_t seed,
                          GridScheme scheme) {
  const int min_res = (scheme == GridScheme::GaussCircle) ? 4 : 16;
  if (resolution < min_res)
    throw std::invalid_argument("grid resolution " + std::to_string(resolution) +
                                " too small (minimum " +
                                std::to_string(min_res) + " for scheme " +
                                scheme_name(scheme) + ")");

  QuadratureGrid grid;
  grid.scheme = scheme;
  grid.resolution = resolution;
  grid.seed = seed;

  switch (scheme) {
    case GridScheme::Circle: {
      if (m.dimension() != 2 || m.factors() != 1)
        throw std::invalid_argument("circle scheme requires h2");
      grid.atoms = make_atom_set(m, {circle_nodes(resolution)});
      grid.weights = Eigen::VectorXd::Constant(resolution, 1.0 / resolution);
      break;
    }
    case GridScheme::Fibonacci: {
      if (m.dimension() != 3 || m.factors() != 1)
        throw std::invalid_argument("fibonacci scheme requires h3");
      const int half = (resolution + 1) / 2;
      const Eigen::MatrixXd base = fibonacci_nodes(half);
      Eigen::MatrixXd a(2 * half, 4);
      a.topLeftCorner(half, 3) = base;
      a.bottomLeftCorner(half, 3) = -base;
      a.col(3).setOnes();
      grid.atoms = make_atom_set(m, {std::move(a)});
      grid.weights =
          Eigen::VectorXd::Constant(2 * half, 1.0 / (2.0 * half));
      break;
    }
    case GridScheme::GaussCircle: {
      if (m.dimension() != 3 || m.factors() != 1)
        throw std::invalid_argument("gauss-circle scheme requires h3");
      const int kz = resolution;
      const int na = 2 * resolution;
      Eigen::VectorXd z, wz;
      gauss_legendre(kz, z, wz);
      Eigen::MatrixXd a(kz * na, 4);
      Eigen::VectorXd w(kz * na);
      for (int i = 0; i < kz; ++i) {
        const double r = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
        for (int j = 0; j < na; ++j) {
          const double phi = 2.0 * M_PI * j / na;
          const int row = i * na + j;
          a(row, 0) = r * std::cos(phi);
          a(row, 1) = r * std::sin(phi);
          a(row, 2) = z[i];
          a(row, 3) = 1.0;
          w[row] = wz[i] / (2.0 * na);
        }
      }
      grid.atoms = make_atom_set(m, {std::move(a)});
      grid.weights = std::move(w);
      break;
    }
    case GridScheme::Frames: {
      if (m.factors() != 1 || m.dimension() < 4)
        throw std::invalid_argument("frames scheme requires h4 or h5");
      const int n = m.dimension();
      const int per_frame = 2 * n;
      const int frames = (resolution + per_frame - 1) / per_frame;
      const int count = frames * per_frame;
      Rng rng(mix_seed(seed, 0xF7A));
      Eigen::MatrixXd a(count, n + 1);
      for (int fr = 0; fr < frames; ++fr) {
        Eigen::MatrixXd g(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd q = qr.householderQ();
        const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < n; ++i)
          if (r(i, i) < 0) q.col(i) *= -1.0;
        for (int i = 0; i < n; ++i) {
          a.row(fr * per_frame + 2 * i).head(n) = q.col(i).transpose();
          a.row(fr * per_frame + 2 * i + 1).head(n) = -q.col(i).transpose();
        }
      }
      a.col(n).setOnes();
      grid.atoms = make_atom_set(m, {std::move(a)});
      grid.weights = Eigen::VectorXd::Constant(count, 1.0 / count);
      break;
    }
    case GridScheme::ProductCircle: {
      if (m.factors() != 2)
        throw std::invalid_argument("product-circle scheme requires h2xh2");
      const int r = resolution;
      const Eigen::MatrixXd base = circle_nodes(r);
      Eigen::MatrixXd a1(r * r, 3), a2(r * r, 3);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          a1.row(i * r + j) = base.row(i);
          a2.row(i * r + j) = base.row(j);
        }
      grid.atoms = make_atom_set(m, {std::move(a1), std::move(a2)});
      grid.weights =
          Eigen::VectorXd::Constant(r * r, 1.0 / (double(r) * double(r)));
      break;
    }
  }
  return grid;
}

}  // namespace bstraight
