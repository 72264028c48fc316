#pragma once

#include <vector>

#include "bstraight/grid.hpp"
#include "bstraight/model.hpp"
#include "bstraight/rng.hpp"

namespace test_helpers {

using namespace bstraight;

inline std::vector<Model> all_models() {
  return {Model(ModelKind::H2), Model(ModelKind::H3), Model(ModelKind::H4),
          Model(ModelKind::H5), Model(ModelKind::H2xH2)};
}

inline std::vector<Model> rank_one_models() {
  return {Model(ModelKind::H2), Model(ModelKind::H3), Model(ModelKind::H4),
          Model(ModelKind::H5)};
}

// H^2 point (sinh t, 0, cosh t) and friends.
inline Point h2_ray_point(double t) {
  Eigen::Vector3d v(std::sinh(t), 0.0, std::cosh(t));
  return Point{v};
}

inline Point product_pair(const Point& a, const Point& b) {
  Eigen::VectorXd v(6);
  v << a.v, b.v;
  return Point{v};
}

}  // namespace test_helpers
