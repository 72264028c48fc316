#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bstraight/straightening.hpp"

namespace bstraight {

// Everything the derivative analysis needs at one (V, sigma): the solved
// point, the endomorphisms K and H of its tangent space, the per-vertex
// one-form integrals, and the implicit derivative D = -K^{-1} L.
struct JacobianContext {
  SimplexPoint sigma;
  Point st;
  BarycenterResult solve_info;
  Eigen::MatrixXd basis;        // n x ambient, tangent basis at st
  Eigen::MatrixXd sigma_basis;  // k x (k+1), rows span T_sigma
  Eigen::MatrixXd K;            // n x n, positive definite
  Eigen::MatrixXd H;            // n x n
  Eigen::MatrixXd G;            // n x (k+1); column i integrates dB against nu(x_i)
  std::vector<Eigen::MatrixXd> H_vertex;  // per-vertex second moments
  Eigen::MatrixXd L;            // n x k
  Eigen::MatrixXd D;            // n x k
  double residual = 0.0;        // max |K D + L|
};

JacobianContext jacobian_context(const VertexTuple& v,
                                 const SimplexPoint& sigma,
                                 const SolverSettings& settings = {});

// (H_sigma, K_sigma) at st_V(sigma), in orthonormal tangent basis order.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> endomorphisms_HK(
    const VertexTuple& v, const SimplexPoint& sigma,
    const SolverSettings& settings = {});

// D(st_V)_sigma as a matrix from T_sigma coords to tangent coords at st.
Eigen::MatrixXd implicit_derivative(const VertexTuple& v,
                                    const SimplexPoint& sigma,
                                    const SolverSettings& settings = {});

// Signed determinant of the implicit derivative in the fixed ordered bases
// (top dimension only).
double jacobian_determinant(const VertexTuple& v, const SimplexPoint& sigma,
                            const SolverSettings& settings = {});

struct JacobianReport {
  Eigen::VectorXd sigma;
  Point st;
  double jac_abs = 0.0;
  double det_K = 0.0;
  double det_H = 0.0;
  double J = 0.0;      // det(H)^{1/2} / det(K)
  double bound = 0.0;  // 2^n J
  // Values along the derivation chain for det(K)|Jac|.  The first three are
  // equal, the inequalities relax them through the two Cauchy-Schwarz steps,
  // and the last two agree at 2^n det(H)^{1/2}:
  //   det_product = diag_product = expanded_product
  //     <= cauchy_coeff <= cauchy_moment = moment_eigen.
  double det_product = 0.0;    // |det(K D)|
  double diag_product = 0.0;   // product of diagonal entries in the
                               // pulled-back orthonormal bases
  double expanded_product = 0.0;  // expansion via the derivative equation
  double cauchy_coeff = 0.0;   // after Cauchy-Schwarz over vertex coefficients
  double cauchy_moment = 0.0;  // after Cauchy-Schwarz in the density L^2
  double moment_eigen = 0.0;   // 2^n det(H)^{1/2} from the eigenbasis
  double residual = 0.0;
  double max_unit_dev = 0.0;  // deviation of the pulled-back basis from unit norm
  bool zero_jacobian = false;
  bool pass = false;
  std::vector<std::string> failures;
};

// Verifies the full inequality chain and the pointwise bound |Jac| <= 2^n J.
JacobianReport jacobian(const VertexTuple& v, const SimplexPoint& sigma,
                        const SolverSettings& settings = {});

constexpr double kEqTol = 1e-8;
constexpr double kIneqTol = 1e-10;
constexpr double kBoundTol = 1e-8;

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

// Monte-Carlo integral of |Jac| (or the signed Jacobian) over the spherical
// simplex: uniform orthant samples, scaled by Area(S^n) / 2^{n+1}.
VolumeEstimate simplex_volume(const VertexTuple& v, int mc_samples,
                              std::uint64_t seed,
                              const SolverSettings& settings = {},
                              bool signed_jacobian = false,
                              bool parallel = true);

double sphere_orthant_area(int n);

struct ScanSample {
  int tuple_index = 0;
  int sigma_index = 0;
  double jac_abs = 0.0;
  double J = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ScanConfig {
  int n_samples = 100;
  int sigma_per_tuple = 4;
  double radius = 3.0;           // vertex sampling ball
  int grid_resolution = 0;       // 0 = model default
  std::optional<GridScheme> scheme;
  std::optional<double> cprime;  // optional theoretical constant
};

struct ScanReport {
  std::string model_id;
  ScanConfig config;
  std::uint64_t seed = 0;
  std::string scheme;
  int resolution = 0;
  Eigen::Index atom_count = 0;
  double sup_jac = 0.0;
  double sup_J = 0.0;
  double k_emp = 0.0;  // sup over tuples of the per-tuple volume estimate
  std::optional<double> cprime;
  std::optional<double> bound_2n_cprime;
  bool cprime_exceeded = false;
  std::vector<std::string> violations;
  std::vector<ScanSample> samples;
};

ScanReport jscan(const Model& m, const ScanConfig& config, std::uint64_t seed,
                 const SolverSettings& settings = {}, bool parallel = true);

struct ChainTermVolume {
  double coefficient = 0.0;
  double volume = 0.0;  // signed MC integral of Jac
  double std_error = 0.0;
};

struct ChainBoundReport {
  double signed_total = 0.0;  // sum a_i * integral Jac
  double l1_norm = 0.0;
  double k_emp = 0.0;
  double quotient = 0.0;  // signed_total / k_emp, vs the L1 norm
  double slack = 0.0;     // k_emp * l1 - signed_total
  bool ok = false;
  std::vector<ChainTermVolume> terms;
};

ChainBoundReport chain_volume_bound(const Chain& c, double k_emp,
                                    int mc_samples, std::uint64_t seed,
                                    const SolverSettings& settings = {});

}  // namespace bstraight
