#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "bstraight/rng.hpp"

namespace bstraight {

enum class ModelKind { H2, H3, H4, H5, H2xH2 };

// A concrete coordinate model: H^n as the unit timelike sheet in Minkowski
// space R^{n,1} (time coordinate last), or the metric product H^2 x H^2.
// Points of a product are stored as stacked per-factor vectors.
class Model {
 public:
  explicit Model(ModelKind kind);
  static Model from_id(const std::string& id);

  ModelKind kind() const { return kind_; }
  std::string id() const;

  int factors() const { return static_cast<int>(fdims_.size()); }
  int factor_dim(int f) const { return fdims_[f]; }
  int factor_size(int f) const { return fdims_[f] + 1; }
  int factor_offset(int f) const { return offsets_[f]; }

  int dimension() const;  // sum of factor dimensions
  int ambient() const;    // stacked coordinate size
  int rank() const { return factors(); }

  double entropy() const;               // volume entropy h
  double factor_entropy(int f) const;   // h_f of one factor
  double factor_weight(int f) const;    // h_f / h

  bool operator==(const Model& o) const { return kind_ == o.kind_; }
  bool operator!=(const Model& o) const { return kind_ != o.kind_; }

 private:
  ModelKind kind_;
  std::vector<int> fdims_;
  std::vector<int> offsets_;
};

struct Point {
  Eigen::VectorXd v;
};

struct TangentVector {
  Point base;
  Eigen::VectorXd u;
};

// Null vector per factor, normalized so the time coordinate is 1, i.e.
// <o, xi> = -1 at the standard basepoint.
struct BoundaryPoint {
  Eigen::VectorXd xi;
};

// Form-preserving linear map per factor with positive time-time entry.
struct Isometry {
  std::vector<Eigen::MatrixXd> blocks;
};

// Minkowski form on one factor block (spatial coordinates first, time last).
double mink(const Eigen::Ref<const Eigen::VectorXd>& a,
            const Eigen::Ref<const Eigen::VectorXd>& b);

Point origin(const Model& m);

// Constraint defects, used by tests and validation.
double point_defect(const Model& m, const Point& x);
double tangent_defect(const Model& m, const TangentVector& u);
double boundary_defect(const Model& m, const BoundaryPoint& t);
double isometry_defect(const Model& m, const Isometry& g);

// Riemannian inner product of tangent vectors with a common base point.
double metric(const Model& m, const TangentVector& a, const TangentVector& b);
double norm(const Model& m, const TangentVector& a);

double distance(const Model& m, const Point& x, const Point& y);

Point exp_map(const Model& m, const TangentVector& u, double t);
TangentVector log_map(const Model& m, const Point& x, const Point& y);

// B_p(x, theta); the closed form log(-<x,xi>) - log(-<p,xi>) per factor,
// combined with weights h_f/h in the product model.
double busemann(const Model& m, const Point& p, const Point& x,
                const BoundaryPoint& theta);

double busemann_one_form(const Model& m, const Point& x,
                         const BoundaryPoint& theta, const TangentVector& u);
double busemann_two_form(const Model& m, const Point& x,
                         const BoundaryPoint& theta, const TangentVector& u,
                         const TangentVector& v);
// Metric dual of the one-form at (x, theta).
TangentVector busemann_gradient(const Model& m, const Point& x,
                                const BoundaryPoint& theta);

Point apply(const Model& m, const Isometry& g, const Point& x);
TangentVector apply(const Model& m, const Isometry& g, const TangentVector& u);
BoundaryPoint apply(const Model& m, const Isometry& g, const BoundaryPoint& t);

Isometry identity_isometry(const Model& m);
// exp of per-factor Minkowski-antisymmetric generators.
Isometry isometry_from_generators(const Model& m,
                                  const std::vector<Eigen::MatrixXd>& gens);
// Generator entries drawn uniformly from [-1, 1], deterministically per seed.
Isometry random_isometry(const Model& m, std::uint64_t seed);
Isometry inverse(const Model& m, const Isometry& g);

// Rows are the basis vectors of T_x X, orthonormal for the model metric;
// per-factor vectors padded with zeros in the other factor block.
Eigen::MatrixXd tangent_basis_matrix(const Model& m, const Point& x);
std::vector<TangentVector> orthonormal_tangent_basis(const Model& m,
                                                     const Point& x);

TangentVector tangent_from_coords(const Model& m, const Point& x,
                                  const Eigen::MatrixXd& basis,
                                  const Eigen::VectorXd& coords);

// Seeded samplers used by scans and tests.
Point random_point_in_ball(const Model& m, Rng& rng, double radius);
BoundaryPoint random_boundary_point(const Model& m, Rng& rng);
TangentVector random_unit_tangent(const Model& m, const Point& x, Rng& rng);

}  // namespace bstraight
