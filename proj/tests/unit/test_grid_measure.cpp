#include <doctest.h>

#include "bstraight/measure.hpp"
#include "helpers.hpp"

using namespace bstraight;
using test_helpers::all_models;
using test_helpers::h2_ray_point;

TEST_CASE("circle grid layout") {
  const Model h2(ModelKind::H2);
  const QuadratureGrid g = build_grid(h2, 512, 0);
  CHECK(g.size() == 512);
  CHECK(g.weights.minCoeff() == 1.0 / 512);
  CHECK(g.weights.maxCoeff() == 1.0 / 512);
  CHECK(pairwise_sum(g.weights) == 1.0);
  for (Eigen::Index j = 0; j < g.size(); j += 37)
    CHECK(boundary_defect(h2, g.atoms->atom(j)) < 1e-12);
}

TEST_CASE("product grid layout") {
  const Model p(ModelKind::H2xH2);
  const QuadratureGrid g = build_grid(p, 128, 0);
  CHECK(g.size() == 128 * 128);
  CHECK(g.weights.maxCoeff() == 1.0 / (128.0 * 128.0));
  CHECK(std::abs(pairwise_sum(g.weights) - 1.0) < 1e-15);
}

TEST_CASE("grid weights are normalized on every scheme") {
  for (const Model& m : all_models()) {
    const QuadratureGrid g = build_grid(m, default_resolution(m), 3);
    CHECK(g.size() >= 16);
    CHECK(g.weights.minCoeff() > 0.0);
    CHECK(std::abs(pairwise_sum(g.weights) - 1.0) < 1e-14);
  }
  // the fibonacci alternative for h3 as well
  const Model h3(ModelKind::H3);
  const QuadratureGrid fib = build_grid(h3, 2000, 0, GridScheme::Fibonacci);
  CHECK(fib.size() == 2000);
  CHECK(std::abs(pairwise_sum(fib.weights) - 1.0) < 1e-14);
  for (Eigen::Index j = 0; j < fib.size(); j += 101)
    CHECK(boundary_defect(h3, fib.atoms->atom(j)) < 1e-12);
}

TEST_CASE("resolution validation") {
  const Model h2(ModelKind::H2);
  CHECK_THROWS_AS((void)build_grid(h2, 8, 0), std::invalid_argument);
}

TEST_CASE("density at the basepoint is uniform") {
  const Model h2(ModelKind::H2);
  const QuadratureGrid g = build_grid(h2, 512, 0);
  const BoundaryMeasure mu = ps_density(g, origin(h2));
  CHECK((mu.masses.array() - 1.0 / 512).abs().maxCoeff() < 1e-16);
}

TEST_CASE("poisson kernel unit mass") {
  // Pre-normalization mass is 1 exactly in the continuum; quadrature error
  // only.  Fibonacci 2000 at distance 2, as well as the default grids.
  const Model h3(ModelKind::H3);
  const QuadratureGrid fib = build_grid(h3, 2000, 0, GridScheme::Fibonacci);
  Rng rng(61);
  const Point o = origin(h3);
  TangentVector u = random_unit_tangent(h3, o, rng);
  const Point x = exp_map(h3, u, 2.0);
  CHECK(std::abs(ps_prenormalized_mass(fib, x) - 1.0) < 1e-3);

  for (const Model& m : all_models()) {
    const QuadratureGrid g = build_grid(m, default_resolution(m), 5);
    Rng r2(mix_seed(62, m.dimension()));
    const Point y = random_point_in_ball(m, r2, 1.0);
    const double tol = m.kind() == ModelKind::H4 || m.kind() == ModelKind::H5
                           ? 5e-2
                           : 1e-6;
    CHECK(std::abs(ps_prenormalized_mass(g, y) - 1.0) < tol);
  }
}

TEST_CASE("product density is the tensor of factor densities") {
  const Model p(ModelKind::H2xH2);
  const Model h2(ModelKind::H2);
  const int res = 64;
  const QuadratureGrid gp = build_grid(p, res, 0);
  const QuadratureGrid g2 = build_grid(h2, res, 0);
  Rng rng(63);
  const Point x = random_point_in_ball(p, rng, 1.5);
  const BoundaryMeasure mu = ps_density(gp, x);
  const BoundaryMeasure m1 = ps_density(g2, Point{Eigen::VectorXd(x.v.head(3))});
  const BoundaryMeasure m2 = ps_density(g2, Point{Eigen::VectorXd(x.v.tail(3))});
  double worst = 0.0;
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j)
      worst = std::max(worst, std::abs(mu.masses[i * res + j] -
                                       m1.masses[i] * m2.masses[j]));
  CHECK(worst < 1e-12);
}

TEST_CASE("weighted combination arithmetic") {
  const Model h2(ModelKind::H2);
  const QuadratureGrid g = build_grid(h2, 128, 0);
  const BoundaryMeasure nu_o = ps_density(g, origin(h2));
  const BoundaryMeasure nu_x = ps_density(g, h2_ray_point(1.0));

  Eigen::VectorXd e1(2);
  e1 << 1.0, 0.0;
  const BoundaryMeasure only = weighted_combination(e1, {nu_o, nu_x});
  CHECK((only.masses - nu_o.masses).cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXd half(2);
  half << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const BoundaryMeasure same = weighted_combination(half, {nu_o, nu_o});
  CHECK((same.masses - nu_o.masses).cwiseAbs().maxCoeff() < 1e-16);

  const BoundaryMeasure mix = weighted_combination(half, {nu_o, nu_x});
  CHECK((mix.masses - 0.5 * (nu_o.masses + nu_x.masses)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(std::abs(pairwise_sum(mix.masses) - 1.0) < 1e-10);
  CHECK(mix.masses.minCoeff() > 0.0);
}

TEST_CASE("weighted combination validates inputs") {
  const Model h2(ModelKind::H2);
  const QuadratureGrid g = build_grid(h2, 64, 0);
  const QuadratureGrid g2 = build_grid(h2, 128, 0);
  const BoundaryMeasure a = ps_density(g, origin(h2));
  const BoundaryMeasure b = ps_density(g2, origin(h2));
  Eigen::VectorXd bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS((void)weighted_combination(bad, {a, a}),
                  std::invalid_argument);
  Eigen::VectorXd ok(2);
  ok << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS((void)weighted_combination(ok, {a, b}),
                  std::invalid_argument);
}

TEST_CASE("pushforward by the identity is the identity") {
  const Model h3(ModelKind::H3);
  const QuadratureGrid g = build_grid(h3, default_resolution(h3), 0);
  const BoundaryMeasure mu = ps_density(g, origin(h3));
  const BoundaryMeasure pf = pushforward(identity_isometry(h3), mu);
  CHECK((pf.masses - mu.masses).cwiseAbs().maxCoeff() == 0.0);
  for (int f = 0; f < h3.factors(); ++f)
    CHECK((pf.atoms->atoms[f] - mu.atoms->atoms[f]).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("integral against a dense reference grid") {
  const Model h2(ModelKind::H2);
  const Point o = origin(h2);
  const Point x = h2_ray_point(1.0);
  auto f = [&](const BoundaryPoint& t) { return busemann(h2, o, x, t); };
  const BoundaryMeasure coarse = ps_density(build_grid(h2, 512, 0), o);
  const BoundaryMeasure dense = ps_density(build_grid(h2, 8192, 0), o);
  CHECK(std::abs(integrate(coarse, f) - integrate(dense, f)) < 1e-6);
}

TEST_CASE("pushforward equivariance of the conformal density") {
  // integral f d nu(gx) == integral f d g_* nu(x), up to grid transport.
  const Model h3(ModelKind::H3);
  const QuadratureGrid g = build_grid(h3, 4000, 0, GridScheme::Fibonacci);
  const Point o = origin(h3);
  Rng rng(77);
  for (int i = 0; i < 20; ++i) {
    const Isometry iso = random_isometry(h3, rng.next_u64());
    const Point x = random_point_in_ball(h3, rng, 1.0);
    const Point y = random_point_in_ball(h3, rng, 1.0);
    auto f = [&](const BoundaryPoint& t) { return busemann(h3, o, y, t); };
    const double lhs = integrate(ps_density(g, apply(h3, iso, x)), f);
    const double rhs = integrate(pushforward(iso, ps_density(g, x)), f);
    CHECK(std::abs(lhs - rhs) < 5e-3);
  }
}

TEST_CASE("pushforward transports integrals exactly") {
  const Model h3(ModelKind::H3);
  const QuadratureGrid g = build_grid(h3, default_resolution(h3), 0);
  const Point o = origin(h3);
  Rng rng(78);
  const Isometry iso = random_isometry(h3, 902);
  const Point x = random_point_in_ball(h3, rng, 1.0);
  const Point y = random_point_in_ball(h3, rng, 1.5);
  const BoundaryMeasure mu = ps_density(g, x);
  auto f = [&](const BoundaryPoint& t) { return busemann(h3, o, y, t); };
  auto f_pre = [&](const BoundaryPoint& t) {
    return f(apply(h3, iso, t));
  };
  CHECK(std::abs(integrate(pushforward(iso, mu), f) - integrate(mu, f_pre)) <
        1e-13);
}

TEST_CASE("refinement halves the integral error") {
  // Smooth integrand, three refinement levels, error ratio >= 2 per level.
  const Model h2(ModelKind::H2);
  const Point o = origin(h2);
  const Point x = h2_ray_point(1.0);
  auto f = [&](const BoundaryPoint& t) { return busemann(h2, o, x, t); };
  {
    const double ref = integrate(ps_density(build_grid(h2, 1 << 14, 0), o), f);
    double prev = -1.0;
    for (int res : {16, 32, 64}) {
      const double err =
          std::abs(integrate(ps_density(build_grid(h2, res, 0), o), f) - ref);
      if (prev >= 0.0) CHECK(err <= prev / 2.0);
      prev = err;
    }
  }
  {
    const Model h3(ModelKind::H3);
    const Point o3 = origin(h3);
    Rng rng(81);
    const Point x3 = random_point_in_ball(h3, rng, 1.0);
    auto f3 = [&](const BoundaryPoint& t) { return busemann(h3, o3, x3, t); };
    const double ref =
        integrate(ps_density(build_grid(h3, 96, 0), o3), f3);
    double prev = -1.0;
    for (int res : {6, 12, 24}) {
      const double err =
          std::abs(integrate(ps_density(build_grid(h3, res, 0), o3), f3) - ref);
      if (prev >= 0.0) CHECK(err <= prev / 2.0);
      prev = err;
    }
  }
}
