#include "bstraight/jacobian.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "bstraight/parallel.hpp"

namespace bstraight {

namespace {

// Orthonormal basis of sigma^perp in R^{k+1}, rows in deterministic order.
Eigen::MatrixXd sigma_tangent_basis(const Eigen::VectorXd& a) {
  const int n1 = static_cast<int>(a.size());
  Eigen::MatrixXd basis(n1 - 1, n1);
  int have = 0;
  for (int i = 0; i < n1 && have < n1 - 1; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n1);
    v[i] = 1.0;
    v -= a.dot(v) * a;
    for (int r = 0; r < have; ++r)
      v -= basis.row(r).dot(v) * basis.row(r).transpose();
    const double nv = v.norm();
    if (nv > 1e-8) {
      basis.row(have++) = v.transpose() / nv;
    }
  }
  return basis;
}

bool nearly_equal(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

bool leq_with_tol(double x, double y, double tol) {
  return x <= y + tol * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace

JacobianContext jacobian_context(const VertexTuple& v,
                                 const SimplexPoint& sigma,
                                 const SolverSettings& settings) {
  const int k = v.k();
  JacobianContext ctx;
  ctx.sigma = sigma;

  const BoundaryMeasure mu = v.combined(sigma);
  BarycenterResult res = barycenter(mu, settings, v.initial_guess(sigma));
  ctx.st = res.point;
  ctx.solve_info = std::move(res);

  const BusemannKernel kernel = make_kernel(*v.atoms(), ctx.st);
  ctx.basis = kernel.basis;
  ctx.K = kernel.hessian(mu.masses);
  ctx.H = kernel.second_moment(mu.masses);
  if (!(ctx.K.determinant() > kDegenerateDetThreshold))
    throw DegenerateHessianError("jacobian: det K not positive at st");

  const int n = v.model().dimension();
  ctx.G.resize(n, k + 1);
  ctx.H_vertex.reserve(k + 1);
  for (int i = 0; i <= k; ++i) {
    ctx.G.col(i) = kernel.gradient_coords(v.measure(i).masses);
    ctx.H_vertex.push_back(kernel.second_moment(v.measure(i).masses));
  }

  ctx.sigma_basis = sigma_tangent_basis(sigma.a);
  ctx.L = ctx.G * (2.0 * sigma.a).asDiagonal() * ctx.sigma_basis.transpose();
  ctx.D = ctx.K.ldlt().solve(-ctx.L);
  ctx.residual = (ctx.K * ctx.D + ctx.L).cwiseAbs().maxCoeff();
  return ctx;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> endomorphisms_HK(
    const VertexTuple& v, const SimplexPoint& sigma,
    const SolverSettings& settings) {
  const JacobianContext ctx = jacobian_context(v, sigma, settings);
  return {ctx.H, ctx.K};
}

Eigen::MatrixXd implicit_derivative(const VertexTuple& v,
                                    const SimplexPoint& sigma,
                                    const SolverSettings& settings) {
  return jacobian_context(v, sigma, settings).D;
}

double jacobian_determinant(const VertexTuple& v, const SimplexPoint& sigma,
                            const SolverSettings& settings) {
  const JacobianContext ctx = jacobian_context(v, sigma, settings);
  if (ctx.D.rows() != ctx.D.cols())
    throw std::invalid_argument("jacobian determinant needs dim V = n");
  return ctx.D.determinant();
}

JacobianReport jacobian(const VertexTuple& v, const SimplexPoint& sigma,
                        const SolverSettings& settings) {
  const int n = v.model().dimension();
  if (v.k() != n)
    throw std::invalid_argument("jacobian: tuple dimension must equal n");

  const JacobianContext ctx = jacobian_context(v, sigma, settings);
  JacobianReport rep;
  rep.sigma = sigma.a;
  rep.st = ctx.st;
  rep.residual = ctx.residual;
  rep.det_K = ctx.K.determinant();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ctx.H);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const Eigen::MatrixXd vbasis = eig.eigenvectors();
  rep.det_H = lambda.prod();
  rep.J = std::sqrt(std::max(0.0, rep.det_H)) / rep.det_K;
  rep.bound = std::ldexp(rep.J, n);  // 2^n J

  rep.jac_abs = std::abs(ctx.D.determinant());

  const Eigen::MatrixXd M = ctx.K * ctx.D;
  double col_scale = 1.0;
  for (int j = 0; j < n; ++j) col_scale *= std::max(1e-30, M.col(j).norm());
  const double det_M = M.determinant();

  rep.det_product = std::abs(det_M);
  if (std::abs(det_M) <= 1e-12 * col_scale) {
    // The bases construction needs a nonzero Jacobian; the bound holds
    // trivially at these points.
    rep.zero_jacobian = true;
    rep.pass = rep.jac_abs <= rep.bound + kBoundTol;
    if (!rep.pass) rep.failures.push_back("pointwise bound at zero-Jacobian point");
    return rep;
  }

  if (!nearly_equal(rep.det_K * rep.jac_abs, rep.det_product, kEqTol))
    rep.failures.push_back("det(K)|Jac| != |det(K D)|");

  // Pull the eigenbasis back through K D and orthonormalize in order.
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  Eigen::MatrixXd u(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd t = lu.solve(vbasis.col(j));
    for (int r = 0; r < j; ++r) t -= u.col(r).dot(t) * u.col(r);
    const double tn = t.norm();
    if (tn < 1e-13) {
      rep.failures.push_back("Gram-Schmidt breakdown");
      rep.pass = false;
      return rep;
    }
    u.col(j) = t / tn;
  }

  // u_j as unit vectors of R^{n+1}; their coordinates against e_i drive the
  // first Cauchy-Schwarz factor.
  const Eigen::MatrixXd u_full = ctx.sigma_basis.transpose() * u;  // (n+1) x n
  for (int j = 0; j < n; ++j)
    rep.max_unit_dev =
        std::max(rep.max_unit_dev, std::abs(u_full.col(j).norm() - 1.0));
  if (rep.max_unit_dev > 1e-10)
    rep.failures.push_back("pulled-back basis not unit");

  const Eigen::VectorXd& a = sigma.a;
  double diag = 1.0, expanded = 1.0, coeff = 1.0, moment = 1.0;
  for (int j = 0; j < n; ++j) {
    diag *= std::abs((M * u.col(j)).dot(vbasis.col(j)));

    // sum_i 2 a_i <u_j, e_i> integral dB(v_j) d nu(x_i)
    const Eigen::VectorXd g_vj = ctx.G.transpose() * vbasis.col(j);  // (n+1)
    double s_exp = 0.0, s_unit = 0.0, s_coeff = 0.0, s_mom = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double ue = u_full(i, j);
      s_exp += 2.0 * a[i] * ue * g_vj[i];
      s_unit += ue * ue;
      s_coeff += 4.0 * a[i] * a[i] * g_vj[i] * g_vj[i];
      s_mom += a[i] * a[i] *
               vbasis.col(j).dot(ctx.H_vertex[i] * vbasis.col(j));
    }
    expanded *= std::abs(s_exp);
    coeff *= std::sqrt(s_unit) * std::sqrt(s_coeff);
    moment *= 2.0 * std::sqrt(std::max(0.0, s_mom));
  }
  rep.diag_product = diag;
  rep.expanded_product = expanded;
  rep.cauchy_coeff = coeff;
  rep.cauchy_moment = moment;
  rep.moment_eigen = std::ldexp(std::sqrt(std::max(0.0, rep.det_H)), n);

  if (!nearly_equal(rep.det_product, rep.diag_product, kEqTol))
    rep.failures.push_back("determinant vs diagonal product");
  if (!nearly_equal(rep.diag_product, rep.expanded_product, kEqTol))
    rep.failures.push_back("diagonal product vs derivative-equation expansion");
  if (!leq_with_tol(rep.expanded_product, rep.cauchy_coeff, kIneqTol))
    rep.failures.push_back("expansion exceeds coefficient Cauchy-Schwarz");
  if (!leq_with_tol(rep.cauchy_coeff, rep.cauchy_moment, kIneqTol))
    rep.failures.push_back("coefficient step exceeds moment Cauchy-Schwarz");
  if (!nearly_equal(rep.cauchy_moment, rep.moment_eigen, kEqTol))
    rep.failures.push_back("moment product vs 2^n det(H)^{1/2}");
  if (!(rep.jac_abs <= rep.bound + kBoundTol))
    rep.failures.push_back("pointwise bound |Jac| <= 2^n J");

  rep.pass = rep.failures.empty();
  return rep;
}

double sphere_orthant_area(int n) {
  const double full = 2.0 * std::pow(M_PI, 0.5 * (n + 1)) /
                      std::tgamma(0.5 * (n + 1));
  return std::ldexp(full, -(n + 1));
}

VolumeEstimate simplex_volume(const VertexTuple& v, int mc_samples,
                              std::uint64_t seed,
                              const SolverSettings& settings,
                              bool signed_jacobian, bool parallel) {
  const int n = v.model().dimension();
  if (v.k() != n)
    throw std::invalid_argument("simplex_volume: tuple dimension must equal n");
  Eigen::VectorXd vals(mc_samples);
  for_each_index(mc_samples, parallel, [&](std::ptrdiff_t s) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    const SimplexPoint sigma = orthant_sample(n, rng);
    const double det = jacobian_determinant(v, sigma, settings);
    vals[s] = signed_jacobian ? det : std::abs(det);
  });
  const double area = sphere_orthant_area(n);
  const double mean = pairwise_sum(vals) / mc_samples;
  const Eigen::VectorXd sq = (vals.array() - mean).square();
  const double var = pairwise_sum(sq) / std::max(1, mc_samples - 1);
  VolumeEstimate est;
  est.value = area * mean;
  est.std_error = area * std::sqrt(var / mc_samples);
  est.samples = mc_samples;
  return est;
}

ScanReport jscan(const Model& m, const ScanConfig& config, std::uint64_t seed,
                 const SolverSettings& settings, bool parallel) {
  const int n = m.dimension();
  const int res = config.grid_resolution > 0 ? config.grid_resolution
                                             : default_resolution(m);
  const GridScheme scheme =
      config.scheme ? *config.scheme : default_scheme(m);
  const QuadratureGrid grid = build_grid(m, res, seed, scheme);

  ScanReport rep;
  rep.model_id = m.id();
  rep.config = config;
  rep.seed = seed;
  rep.scheme = scheme_name(scheme);
  rep.resolution = res;
  rep.atom_count = grid.size();
  rep.cprime = config.cprime;
  if (config.cprime)
    rep.bound_2n_cprime = std::ldexp(*config.cprime, n);

  struct Slot {
    double sup_jac = 0.0;
    double sup_J = 0.0;
    double vol = 0.0;
    std::vector<ScanSample> samples;
    std::vector<std::string> violations;
  };
  std::vector<Slot> slots(config.n_samples);

  for_each_index(config.n_samples, parallel, [&](std::ptrdiff_t t) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<Point> verts;
    verts.reserve(n + 1);
    for (int i = 0; i <= n; ++i)
      verts.push_back(random_point_in_ball(m, rng, config.radius));
    Slot& slot = slots[t];
    try {
      const VertexTuple tuple = VertexTuple::create(verts, grid);
      double jac_sum = 0.0;
      for (int s = 0; s < config.sigma_per_tuple; ++s) {
        const SimplexPoint sigma = orthant_sample(n, rng);
        const JacobianReport jr = jacobian(tuple, sigma, settings);
        slot.sup_jac = std::max(slot.sup_jac, jr.jac_abs);
        slot.sup_J = std::max(slot.sup_J, jr.J);
        jac_sum += jr.jac_abs;
        slot.samples.push_back(ScanSample{static_cast<int>(t), s, jr.jac_abs,
                                          jr.J, jr.bound, jr.pass});
        if (!jr.pass)
          for (const auto& f : jr.failures)
            slot.violations.push_back("sample " + std::to_string(t) + "." +
                                      std::to_string(s) + ": " + f);
      }
      slot.vol =
          sphere_orthant_area(n) * jac_sum / config.sigma_per_tuple;
    } catch (const NonConvergenceError& e) {
      slot.violations.push_back("solver-error sample " + std::to_string(t) +
                                ": " + e.what());
    } catch (const DegenerateHessianError& e) {
      slot.violations.push_back("solver-error sample " + std::to_string(t) +
                                ": " + e.what());
    } catch (const std::exception& e) {
      slot.violations.push_back("sample " + std::to_string(t) +
                                ": " + e.what());
    }
  });

  for (const Slot& s : slots) {
    rep.sup_jac = std::max(rep.sup_jac, s.sup_jac);
    rep.sup_J = std::max(rep.sup_J, s.sup_J);
    rep.k_emp = std::max(rep.k_emp, s.vol);
    rep.samples.insert(rep.samples.end(), s.samples.begin(), s.samples.end());
    rep.violations.insert(rep.violations.end(), s.violations.begin(),
                          s.violations.end());
  }
  if (config.cprime && rep.sup_J > *config.cprime) rep.cprime_exceeded = true;
  return rep;
}

ChainBoundReport chain_volume_bound(const Chain& c, double k_emp,
                                    int mc_samples, std::uint64_t seed,
                                    const SolverSettings& settings) {
  if (!(k_emp > 0.0))
    throw std::invalid_argument("chain_volume_bound: K_emp must be positive");
  ChainBoundReport rep;
  rep.k_emp = k_emp;
  double err_sq = 0.0;
  for (std::size_t t = 0; t < c.terms.size(); ++t) {
    const auto& term = c.terms[t];
    const VolumeEstimate est =
        simplex_volume(term.simplex, mc_samples,
                       mix_seed(seed, static_cast<std::uint64_t>(t)), settings,
                       /*signed_jacobian=*/true);
    rep.terms.push_back(
        ChainTermVolume{term.coefficient, est.value, est.std_error});
    rep.signed_total += term.coefficient * est.value;
    rep.l1_norm += std::abs(term.coefficient);
    err_sq += term.coefficient * term.coefficient * est.std_error *
              est.std_error;
  }
  rep.quotient = rep.signed_total / k_emp;
  rep.slack = k_emp * rep.l1_norm - rep.signed_total;
  rep.ok = rep.signed_total <=
           k_emp * rep.l1_norm + 2.0 * std::sqrt(err_sq) + 1e-12;
  return rep;
}

}  // namespace bstraight
