#include "bstraight/verify.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "bstraight/parallel.hpp"

namespace bstraight {

Eigen::VectorXd coords_in_basis(const Model& m, const Eigen::MatrixXd& basis,
                                const Eigen::VectorXd& ambient) {
  Eigen::VectorXd c(basis.rows());
  for (Eigen::Index r = 0; r < basis.rows(); ++r) {
    double s = 0.0;
    for (int f = 0; f < m.factors(); ++f)
      s += mink(basis.row(r)
                    .segment(m.factor_offset(f), m.factor_size(f))
                    .transpose(),
                ambient.segment(m.factor_offset(f), m.factor_size(f)));
    c[r] = s;
  }
  return c;
}

namespace {

QuadratureGrid suite_grid(const Model& m, const VerifyConfig& cfg,
                          std::uint64_t seed) {
  const int res = cfg.grid_resolution > 0 ? cfg.grid_resolution
                                          : default_resolution(m);
  return build_grid(m, res, seed);
}

std::vector<Point> sample_vertices(const Model& m, int count, double radius,
                                   Rng& rng) {
  std::vector<Point> verts;
  verts.reserve(count);
  for (int i = 0; i < count; ++i)
    verts.push_back(random_point_in_ball(m, rng, radius));
  return verts;
}

template <typename Fn>
SuiteResult run_suite(const std::string& property, int samples, bool parallel,
                      Fn&& sample_fn) {
  struct Slot {
    double worst = 0.0;
    std::vector<std::string> violations;
    std::vector<SuiteRow> rows;
  };
  std::vector<Slot> slots(samples);
  for_each_index(samples, parallel, [&](std::ptrdiff_t i) {
    Slot& s = slots[i];
    try {
      sample_fn(static_cast<int>(i), s.worst, s.violations, s.rows);
    } catch (const NonConvergenceError& e) {
      s.violations.push_back("solver-error sample " + std::to_string(i) +
                             ": " + e.what());
    } catch (const DegenerateHessianError& e) {
      s.violations.push_back("solver-error sample " + std::to_string(i) +
                             ": " + e.what());
    } catch (const std::exception& e) {
      s.violations.push_back("sample " + std::to_string(i) + ": " + e.what());
    }
  });
  SuiteResult out;
  out.property = property;
  out.samples = samples;
  for (const Slot& s : slots) {
    out.worst = std::max(out.worst, s.worst);
    out.violations.insert(out.violations.end(), s.violations.begin(),
                          s.violations.end());
    out.rows.insert(out.rows.end(), s.rows.begin(), s.rows.end());
  }
  return out;
}

}  // namespace

SuiteResult equivariance_suite(const Model& m, const VerifyConfig& cfg,
                               std::uint64_t seed,
                               const SolverSettings& settings, bool parallel) {
  const QuadratureGrid grid = suite_grid(m, cfg, seed);
  const int n = m.dimension();
  return run_suite(
      "equivariance", cfg.samples, parallel,
      [&](int i, double& worst, std::vector<std::string>& violations,
          std::vector<SuiteRow>& rows) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        const VertexTuple tuple =
            VertexTuple::create(sample_vertices(m, n + 1, cfg.radius, rng), grid);
        const Isometry g = random_isometry(m, rng.next_u64());
        const SimplexPoint sigma = sqrt_simplex_sample(n, rng);
        const VertexTuple moved = tuple.transformed(g);
        const Point lhs = straighten_point(moved, sigma, settings);
        const Point rhs = apply(m, g, straighten_point(tuple, sigma, settings));
        const double d = distance(m, lhs, rhs);
        worst = std::max(worst, d);
        const bool ok = d <= cfg.thresholds.equivariance;
        rows.push_back(SuiteRow{i, "equivariance-distance", d, ok});
        if (!ok)
          violations.push_back("sample " + std::to_string(i) +
                               ": equivariance distance " + std::to_string(d));
      });
}

SuiteResult faces_suite(const Model& m, const VerifyConfig& cfg,
                        std::uint64_t seed, const SolverSettings& settings,
                        bool parallel) {
  const QuadratureGrid grid = suite_grid(m, cfg, seed);
  const int n = m.dimension();
  return run_suite(
      "faces", cfg.samples, parallel,
      [&](int i, double& worst, std::vector<std::string>& violations,
          std::vector<SuiteRow>& rows) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        const int k = (n >= 3 && i % 2 == 1) ? 3 : 2;
        const VertexTuple tuple =
            VertexTuple::create(sample_vertices(m, k + 1, cfg.radius, rng), grid);
        const FaceCompatReport fc =
            verify_face_compatibility(tuple, 25, rng.next_u64(), settings);
        worst = std::max(worst, fc.max_discrepancy);
        bool ok = fc.max_discrepancy <= cfg.thresholds.faces;
        rows.push_back(
            SuiteRow{i, "face-discrepancy", fc.max_discrepancy, ok});
        if (!ok)
          violations.push_back("sample " + std::to_string(i) +
                               ": face discrepancy " +
                               std::to_string(fc.max_discrepancy));

        // Homotopy endpoints: s=0 returns f, s=1 returns the straightened map.
        const SingularSimplex f = geodesic_cone_simplex(tuple);
        const SimplexPoint sigma = sqrt_simplex_sample(k, rng);
        const double d0 =
            distance(m, geodesic_homotopy(f, 0.0, sigma, settings), f.map(sigma));
        const double d1 =
            distance(m, geodesic_homotopy(f, 1.0, sigma, settings),
                     straighten_point(tuple, sigma, settings));
        const double dend = std::max(d0, d1);
        worst = std::max(worst, dend);
        ok = dend <= cfg.thresholds.homotopy;
        rows.push_back(SuiteRow{i, "homotopy-endpoint", dend, ok});
        if (!ok)
          violations.push_back("sample " + std::to_string(i) +
                               ": homotopy endpoint mismatch " +
                               std::to_string(dend));
      });
}

SuiteResult c1_suite(const Model& m, const VerifyConfig& cfg,
                     std::uint64_t seed, const SolverSettings& settings,
                     bool parallel) {
  const QuadratureGrid grid = suite_grid(m, cfg, seed);
  const int n = m.dimension();
  const double h = 1e-4;
  return run_suite(
      "c1", cfg.samples, parallel,
      [&](int i, double& worst, std::vector<std::string>& violations,
          std::vector<SuiteRow>& rows) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        const VertexTuple tuple =
            VertexTuple::create(sample_vertices(m, n + 1, cfg.radius, rng), grid);
        const SimplexPoint sigma = sqrt_simplex_sample(n, rng);
        const JacobianContext ctx = jacobian_context(tuple, sigma, settings);

        bool ok = ctx.residual <= cfg.thresholds.c1_residual;
        rows.push_back(SuiteRow{i, "derivative-residual", ctx.residual, ok});
        if (!ok)
          violations.push_back("sample " + std::to_string(i) +
                               ": derivative equation residual " +
                               std::to_string(ctx.residual));

        // Central differences along unit-sphere geodesics of the sigma
        // domain, sharing the tuple's grid so discretization error cancels.
        Eigen::MatrixXd fd(n, n);
        for (int b = 0; b < n; ++b) {
          const Eigen::VectorXd dir = ctx.sigma_basis.row(b).transpose();
          const SimplexPoint sp{std::cos(h) * sigma.a + std::sin(h) * dir};
          const SimplexPoint sm{std::cos(h) * sigma.a - std::sin(h) * dir};
          const Point yp = straighten_point(tuple, sp, settings);
          const Point ym = straighten_point(tuple, sm, settings);
          const Eigen::VectorXd diff =
              (log_map(m, ctx.st, yp).u - log_map(m, ctx.st, ym).u) / (2.0 * h);
          fd.col(b) = coords_in_basis(m, ctx.basis, diff);
        }
        const double dn = ctx.D.jacobiSvd().singularValues()[0];
        const Eigen::MatrixXd diff = ctx.D - fd;
        const double err = diff.jacobiSvd().singularValues()[0];
        const double rel = err / (1.0 + dn);
        worst = std::max(worst, rel);
        ok = rel <= cfg.thresholds.c1_relative;
        rows.push_back(SuiteRow{i, "fd-relative-error", rel, ok});
        if (!ok)
          violations.push_back("sample " + std::to_string(i) +
                               ": derivative vs finite differences " +
                               std::to_string(rel));
      });
}

SuiteResult jacobian_bound_suite(const Model& m, const VerifyConfig& cfg,
                                 std::uint64_t seed,
                                 const SolverSettings& settings,
                                 bool parallel) {
  const QuadratureGrid grid = suite_grid(m, cfg, seed);
  const int n = m.dimension();
  return run_suite(
      "jacobian-bound", cfg.samples, parallel,
      [&](int i, double& worst, std::vector<std::string>& violations,
          std::vector<SuiteRow>& rows) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        const VertexTuple tuple =
            VertexTuple::create(sample_vertices(m, n + 1, cfg.radius, rng), grid);
        const SimplexPoint sigma = orthant_sample(n, rng);
        const JacobianReport jr = jacobian(tuple, sigma, settings);
        worst = std::max(worst, jr.jac_abs - jr.bound);
        rows.push_back(SuiteRow{i, "jac-abs", jr.jac_abs, jr.pass});
        rows.push_back(SuiteRow{i, "bound-2n-J", jr.bound, jr.pass});
        if (!jr.pass)
          for (const auto& f : jr.failures)
            violations.push_back("sample " + std::to_string(i) + ": " + f);
      });
}

std::vector<SuiteResult> run_verify(const Model& m, const std::string& property,
                                    const VerifyConfig& cfg, std::uint64_t seed,
                                    const SolverSettings& settings,
                                    bool parallel) {
  std::vector<SuiteResult> out;
  if (property == "equivariance" || property == "all")
    out.push_back(equivariance_suite(m, cfg, seed, settings, parallel));
  if (property == "faces" || property == "all")
    out.push_back(faces_suite(m, cfg, seed, settings, parallel));
  if (property == "c1" || property == "all")
    out.push_back(c1_suite(m, cfg, seed, settings, parallel));
  if (property == "jacobian-bound" || property == "all")
    out.push_back(jacobian_bound_suite(m, cfg, seed, settings, parallel));
  if (out.empty())
    throw std::invalid_argument(
        "unknown property '" + property +
        "' (expected equivariance|faces|c1|jacobian-bound|all)");
  return out;
}

}  // namespace bstraight
