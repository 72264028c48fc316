#include "bstraight/model.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace bstraight {

Model::Model(ModelKind kind) : kind_(kind) {
  switch (kind) {
    case ModelKind::H2: fdims_ = {2}; break;
    case ModelKind::H3: fdims_ = {3}; break;
    case ModelKind::H4: fdims_ = {4}; break;
    case ModelKind::H5: fdims_ = {5}; break;
    case ModelKind::H2xH2: fdims_ = {2, 2}; break;
  }
  offsets_.resize(fdims_.size());
  int off = 0;
  for (std::size_t f = 0; f < fdims_.size(); ++f) {
    offsets_[f] = off;
    off += fdims_[f] + 1;
  }
}

Model Model::from_id(const std::string& id) {
  if (id == "h2") return Model(ModelKind::H2);
  if (id == "h3") return Model(ModelKind::H3);
  if (id == "h4") return Model(ModelKind::H4);
  if (id == "h5") return Model(ModelKind::H5);
  if (id == "h2xh2") return Model(ModelKind::H2xH2);
  throw std::invalid_argument("unknown model '" + id +
                              "' (expected h2|h3|h4|h5|h2xh2)");
}

std::string Model::id() const {
  switch (kind_) {
    case ModelKind::H2: return "h2";
    case ModelKind::H3: return "h3";
    case ModelKind::H4: return "h4";
    case ModelKind::H5: return "h5";
    case ModelKind::H2xH2: return "h2xh2";
  }
  return "?";
}

int Model::dimension() const {
  int n = 0;
  for (int d : fdims_) n += d;
  return n;
}

int Model::ambient() const { return dimension() + factors(); }

double Model::factor_entropy(int f) const { return fdims_[f] - 1.0; }

double Model::entropy() const {
  double s = 0.0;
  for (int f = 0; f < factors(); ++f) {
    double h = factor_entropy(f);
    s += h * h;
  }
  return std::sqrt(s);
}

double Model::factor_weight(int f) const {
  return factor_entropy(f) / entropy();
}

double mink(const Eigen::Ref<const Eigen::VectorXd>& a,
            const Eigen::Ref<const Eigen::VectorXd>& b) {
  const Eigen::Index n = a.size() - 1;
  return a.head(n).dot(b.head(n)) - a[n] * b[n];
}

namespace {

Eigen::Ref<const Eigen::VectorXd> seg(const Model& m, const Eigen::VectorXd& v,
                                      int f) {
  return v.segment(m.factor_offset(f), m.factor_size(f));
}

Eigen::Ref<Eigen::VectorXd> seg(const Model& m, Eigen::VectorXd& v, int f) {
  return v.segment(m.factor_offset(f), m.factor_size(f));
}

// Projection of an ambient vector onto T_x H (one factor).
Eigen::VectorXd project_tangent(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& w) {
  return w + mink(x, w) * x;
}

// Drift control for points near unit scale.  Far out on the sheet the
// computed form carries an inherent e^{2d} eps defect, where renormalizing
// would destroy the point; distances stay accurate without it.
void normalize_factor(Eigen::Ref<Eigen::VectorXd> x) {
  const double q = -mink(x, x);
  if (q > 0.5 && q < 1.5) x /= std::sqrt(q);
  if (x[x.size() - 1] < 0) x = -x;
}

}  // namespace

Point origin(const Model& m) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m.ambient());
  for (int f = 0; f < m.factors(); ++f)
    v[m.factor_offset(f) + m.factor_dim(f)] = 1.0;
  return Point{std::move(v)};
}

double point_defect(const Model& m, const Point& x) {
  double worst = 0.0;
  for (int f = 0; f < m.factors(); ++f) {
    auto xf = seg(m, x.v, f);
    worst = std::max(worst, std::abs(mink(xf, xf) + 1.0));
    if (xf[xf.size() - 1] <= 0) worst = std::max(worst, 1.0);
  }
  return worst;
}

double tangent_defect(const Model& m, const TangentVector& u) {
  double worst = 0.0;
  for (int f = 0; f < m.factors(); ++f)
    worst = std::max(worst, std::abs(mink(seg(m, u.base.v, f), seg(m, u.u, f))));
  return worst;
}

double boundary_defect(const Model& m, const BoundaryPoint& t) {
  double worst = 0.0;
  for (int f = 0; f < m.factors(); ++f) {
    auto xf = seg(m, t.xi, f);
    worst = std::max(worst, std::abs(mink(xf, xf)));
    worst = std::max(worst, std::abs(xf[xf.size() - 1] - 1.0));
  }
  return worst;
}

double isometry_defect(const Model& m, const Isometry& g) {
  double worst = 0.0;
  for (int f = 0; f < m.factors(); ++f) {
    const int s = m.factor_size(f);
    Eigen::VectorXd jd = Eigen::VectorXd::Ones(s);
    jd[s - 1] = -1.0;
    const Eigen::MatrixXd J = jd.asDiagonal();
    const Eigen::MatrixXd r = g.blocks[f].transpose() * J * g.blocks[f] - J;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
    if (g.blocks[f](s - 1, s - 1) <= 0) worst = std::max(worst, 1.0);
  }
  return worst;
}

double metric(const Model& m, const TangentVector& a, const TangentVector& b) {
  double s = 0.0;
  for (int f = 0; f < m.factors(); ++f)
    s += mink(seg(m, a.u, f), seg(m, b.u, f));
  return s;
}

double norm(const Model& m, const TangentVector& a) {
  return std::sqrt(std::max(0.0, metric(m, a, a)));
}

double distance(const Model& m, const Point& x, const Point& y) {
  double sq = 0.0;
  for (int f = 0; f < m.factors(); ++f) {
    // arccosh(-<x,y>) loses all precision near zero and the difference form
    // 2 asinh(|x-y|_M / 2) loses precision far out; branch on the regime.
    const double c = -mink(seg(m, x.v, f), seg(m, y.v, f));
    double df;
    if (c < 1.5) {
      const Eigen::VectorXd d = seg(m, x.v, f) - seg(m, y.v, f);
      const double q = std::max(0.0, mink(d, d));
      df = 2.0 * std::asinh(0.5 * std::sqrt(q));
    } else {
      df = std::acosh(c);
    }
    sq += df * df;
  }
  return std::sqrt(sq);
}

Point exp_map(const Model& m, const TangentVector& u, double t) {
  Eigen::VectorXd out(m.ambient());
  for (int f = 0; f < m.factors(); ++f) {
    auto xf = seg(m, u.base.v, f);
    auto uf = seg(m, u.u, f);
    const double nu = std::sqrt(std::max(0.0, mink(uf, uf)));
    auto of = seg(m, out, f);
    if (std::abs(t) * nu < 1e-300) {
      of = xf;
    } else {
      of = std::cosh(t * nu) * xf + (std::sinh(t * nu) / nu) * uf;
      normalize_factor(of);
    }
  }
  return Point{std::move(out)};
}

TangentVector log_map(const Model& m, const Point& x, const Point& y) {
  Eigen::VectorXd out(m.ambient());
  for (int f = 0; f < m.factors(); ++f) {
    auto xf = seg(m, x.v, f);
    auto yf = seg(m, y.v, f);
    Eigen::VectorXd perp = project_tangent(xf, yf);
    const double pn = std::sqrt(std::max(0.0, mink(perp, perp)));
    const Eigen::VectorXd dv = xf - yf;
    const double d = 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, mink(dv, dv))));
    auto of = seg(m, out, f);
    if (pn < 1e-300) {
      of.setZero();
    } else {
      of = (d / pn) * perp;
    }
  }
  return TangentVector{x, std::move(out)};
}

double busemann(const Model& m, const Point& p, const Point& x,
                const BoundaryPoint& theta) {
  double b = 0.0;
  for (int f = 0; f < m.factors(); ++f) {
    auto tf = seg(m, theta.xi, f);
    const double bx = std::log(-mink(seg(m, x.v, f), tf));
    const double bp = std::log(-mink(seg(m, p.v, f), tf));
    b += m.factor_weight(f) * (bx - bp);
  }
  return b;
}

double busemann_one_form(const Model& m, const Point& x,
                         const BoundaryPoint& theta, const TangentVector& u) {
  double s = 0.0;
  for (int f = 0; f < m.factors(); ++f) {
    auto tf = seg(m, theta.xi, f);
    s += m.factor_weight(f) * mink(seg(m, u.u, f), tf) /
         mink(seg(m, x.v, f), tf);
  }
  return s;
}

double busemann_two_form(const Model& m, const Point& x,
                         const BoundaryPoint& theta, const TangentVector& u,
                         const TangentVector& v) {
  double s = 0.0;
  for (int f = 0; f < m.factors(); ++f) {
    auto tf = seg(m, theta.xi, f);
    auto uf = seg(m, u.u, f);
    auto vf = seg(m, v.u, f);
    const double denom = mink(seg(m, x.v, f), tf);
    const double du = mink(uf, tf) / denom;
    const double dv = mink(vf, tf) / denom;
    s += m.factor_weight(f) * (mink(uf, vf) - du * dv);
  }
  return s;
}

TangentVector busemann_gradient(const Model& m, const Point& x,
                                const BoundaryPoint& theta) {
  Eigen::VectorXd out(m.ambient());
  for (int f = 0; f < m.factors(); ++f) {
    auto xf = seg(m, x.v, f);
    auto tf = seg(m, theta.xi, f);
    const Eigen::VectorXd q = tf / mink(xf, tf);
    seg(m, out, f) = m.factor_weight(f) * project_tangent(xf, q);
  }
  return TangentVector{x, std::move(out)};
}

Point apply(const Model& m, const Isometry& g, const Point& x) {
  Eigen::VectorXd out(m.ambient());
  for (int f = 0; f < m.factors(); ++f) {
    seg(m, out, f) = g.blocks[f] * seg(m, x.v, f);
    normalize_factor(seg(m, out, f));
  }
  return Point{std::move(out)};
}

TangentVector apply(const Model& m, const Isometry& g,
                    const TangentVector& u) {
  Eigen::VectorXd out(m.ambient());
  for (int f = 0; f < m.factors(); ++f)
    seg(m, out, f) = g.blocks[f] * seg(m, u.u, f);
  return TangentVector{apply(m, g, u.base), std::move(out)};
}

BoundaryPoint apply(const Model& m, const Isometry& g,
                    const BoundaryPoint& t) {
  Eigen::VectorXd out(m.ambient());
  for (int f = 0; f < m.factors(); ++f) {
    Eigen::VectorXd y = g.blocks[f] * seg(m, t.xi, f);
    seg(m, out, f) = y / y[y.size() - 1];
  }
  return BoundaryPoint{std::move(out)};
}

Isometry identity_isometry(const Model& m) {
  Isometry g;
  for (int f = 0; f < m.factors(); ++f)
    g.blocks.push_back(Eigen::MatrixXd::Identity(m.factor_size(f),
                                                 m.factor_size(f)));
  return g;
}

Isometry isometry_from_generators(const Model& m,
                                  const std::vector<Eigen::MatrixXd>& gens) {
  Isometry g;
  for (int f = 0; f < m.factors(); ++f) {
    Eigen::MatrixXd e = gens[f].exp();
    g.blocks.push_back(std::move(e));
  }
  return g;
}

Isometry random_isometry(const Model& m, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x150));
  std::vector<Eigen::MatrixXd> gens;
  for (int f = 0; f < m.factors(); ++f) {
    const int n = m.factor_dim(f);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        a(i, j) = rng.uniform(-1.0, 1.0);
        a(j, i) = -a(i, j);
      }
    for (int i = 0; i < n; ++i) {
      a(i, n) = rng.uniform(-1.0, 1.0);
      a(n, i) = a(i, n);
    }
    gens.push_back(std::move(a));
  }
  return isometry_from_generators(m, gens);
}

Isometry inverse(const Model& m, const Isometry& g) {
  Isometry out;
  for (int f = 0; f < m.factors(); ++f) {
    const int s = m.factor_size(f);
    Eigen::VectorXd jd = Eigen::VectorXd::Ones(s);
    jd[s - 1] = -1.0;
    const Eigen::MatrixXd J = jd.asDiagonal();
    // A^{-1} = J A^T J for form-preserving A.
    out.blocks.push_back(J * g.blocks[f].transpose() * J);
  }
  return out;
}

Eigen::MatrixXd tangent_basis_matrix(const Model& m, const Point& x) {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m.dimension(), m.ambient());
  int row = 0;
  for (int f = 0; f < m.factors(); ++f) {
    auto xf = seg(m, x.v, f);
    const int s = m.factor_size(f);
    int have = 0;
    for (int k = 0; k < s && have < m.factor_dim(f); ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(s);
      e[k] = 1.0;
      Eigen::VectorXd v = project_tangent(xf, e);
      for (int r = row; r < row + have; ++r) {
        auto b = basis.row(r).segment(m.factor_offset(f), s);
        v -= mink(b.transpose(), v) * b.transpose();
      }
      const double q = mink(v, v);
      if (q > 1e-8) {
        basis.row(row + have).segment(m.factor_offset(f), s) = v / std::sqrt(q);
        ++have;
      }
    }
    row += m.factor_dim(f);
  }
  return basis;
}

std::vector<TangentVector> orthonormal_tangent_basis(const Model& m,
                                                     const Point& x) {
  const Eigen::MatrixXd basis = tangent_basis_matrix(m, x);
  std::vector<TangentVector> out;
  out.reserve(basis.rows());
  for (Eigen::Index r = 0; r < basis.rows(); ++r)
    out.push_back(TangentVector{x, basis.row(r).transpose()});
  return out;
}

TangentVector tangent_from_coords(const Model& m, const Point& x,
                                  const Eigen::MatrixXd& basis,
                                  const Eigen::VectorXd& coords) {
  return TangentVector{x, basis.transpose() * coords};
}

Point random_point_in_ball(const Model& m, Rng& rng, double radius) {
  const Point o = origin(m);
  if (radius <= 0.0) return o;
  const Eigen::MatrixXd basis = tangent_basis_matrix(m, o);
  const Eigen::VectorXd dir = rng.unit_sphere(m.dimension());
  const double r = radius * rng.uniform01();
  const TangentVector u = tangent_from_coords(m, o, basis, dir);
  return exp_map(m, u, r);
}

BoundaryPoint random_boundary_point(const Model& m, Rng& rng) {
  Eigen::VectorXd xi(m.ambient());
  for (int f = 0; f < m.factors(); ++f) {
    const int n = m.factor_dim(f);
    Eigen::VectorXd v = rng.unit_sphere(n);
    auto s = xi.segment(m.factor_offset(f), n + 1);
    s.head(n) = v;
    s[n] = 1.0;
  }
  return BoundaryPoint{std::move(xi)};
}

TangentVector random_unit_tangent(const Model& m, const Point& x, Rng& rng) {
  const Eigen::MatrixXd basis = tangent_basis_matrix(m, x);
  return tangent_from_coords(m, x, basis, rng.unit_sphere(m.dimension()));
}

}  // namespace bstraight
