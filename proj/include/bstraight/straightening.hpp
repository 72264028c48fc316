#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "bstraight/barycenter.hpp"

namespace bstraight {

// sigma = sum a_i e_i on the spherical simplex: a_i >= 0, |a| = 1.
struct SimplexPoint {
  Eigen::VectorXd a;
  int k() const { return static_cast<int>(a.size()) - 1; }
};

SimplexPoint simplex_point(Eigen::VectorXd a);  // validates and normalizes
SimplexPoint simplex_vertex(int k, int i);
// a_i = sqrt(b_i) for b uniform on the Euclidean simplex.
SimplexPoint sqrt_simplex_sample(int k, Rng& rng);
// normalized componentwise-absolute Gaussian: uniform on the spherical orthant.
SimplexPoint orthant_sample(int k, Rng& rng);

// Ordered vertices with their cached densities on one shared atom set.  The
// straightened simplex depends only on this data.
class VertexTuple {
 public:
  VertexTuple(std::vector<Point> vertices,
              std::vector<BoundaryMeasure> measures);
  static VertexTuple create(const std::vector<Point>& vertices,
                            const QuadratureGrid& grid);

  const Model& model() const { return measures_[0].model(); }
  int k() const { return static_cast<int>(vertices_.size()) - 1; }
  const Point& vertex(int i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const BoundaryMeasure& measure(int i) const { return measures_[i]; }
  const std::shared_ptr<const AtomSet>& atoms() const {
    return measures_[0].atoms;
  }

  // gamma V with the cached measures transported (pushforward), matching the
  // change-of-variables identity the equivariance verification exercises.
  VertexTuple transformed(const Isometry& g) const;
  VertexTuple face(int i) const;  // omits vertex i
  VertexTuple permuted(const std::vector<int>& perm) const;

  BoundaryMeasure combined(const SimplexPoint& sigma) const;
  // Normalized Minkowski average of the vertices, weighted by a_i^2.
  Point initial_guess(const SimplexPoint& sigma) const;

 private:
  std::vector<Point> vertices_;
  std::vector<BoundaryMeasure> measures_;
};

// st_V(sigma): barycenter of sum a_i^2 nu(x_i).
Point straighten_point(const VertexTuple& v, const SimplexPoint& sigma,
                       const SolverSettings& settings = {},
                       BarycenterResult* info = nullptr);

struct FaceCompatReport {
  double max_discrepancy = 0.0;
  int samples = 0;
};
// Compares st_V at boundary points a_i = 0 against st over face(V, i).
FaceCompatReport verify_face_compatibility(const VertexTuple& v,
                                           int samples_per_face,
                                           std::uint64_t seed,
                                           const SolverSettings& settings = {});

struct EquivarianceReport {
  double max_distance = 0.0;
  int samples = 0;
};
// max over sigma samples of d(st_{gamma V}(sigma), gamma st_V(sigma)).
EquivarianceReport verify_equivariance(const VertexTuple& v, const Isometry& g,
                                       int samples, std::uint64_t seed,
                                       const SolverSettings& settings = {});

// Continuous test input; straightening only ever consumes its vertices.
struct SingularSimplex {
  VertexTuple vertices;
  std::function<Point(const SimplexPoint&)> map;
};

// Iterated geodesic cone over the vertex tuple (vertex i is reached at e_i).
SingularSimplex geodesic_cone_simplex(const VertexTuple& v);

// exp_{f(sigma)}(s log_{f(sigma)} st_V(sigma)): f at s=0, st_V at s=1.
Point geodesic_homotopy(const SingularSimplex& f, double s,
                        const SimplexPoint& sigma,
                        const SolverSettings& settings = {});

struct ChainTerm {
  double coefficient;
  VertexTuple simplex;
};
struct Chain {
  std::vector<ChainTerm> terms;
};

double chain_l1_norm(const Chain& c);
// Keeps coefficients, replaces simplices by their vertex data, and merges
// terms whose tuples coincide exactly.
Chain straighten_chain(const Chain& c);

}  // namespace bstraight
