#pragma once

#include <string>
#include <vector>

#include "bstraight/jacobian.hpp"

namespace bstraight {

// Pass thresholds for the formal-property suites.
struct PropertyThresholds {
  double equivariance = 1e-6;   // d(st_{gV}(s), g st_V(s))
  double faces = 1e-7;          // face restriction discrepancy
  double homotopy = 1e-7;       // homotopy endpoint mismatch
  double c1_relative = 1e-3;    // implicit vs finite-difference derivative
  double c1_residual = 1e-8;    // residual of the derivative equation
};

struct SuiteRow {
  int index = 0;
  std::string metric;
  double value = 0.0;
  bool pass = true;
};

struct SuiteResult {
  std::string property;
  int samples = 0;
  double worst = 0.0;
  std::vector<std::string> violations;
  std::vector<SuiteRow> rows;
};

struct VerifyConfig {
  int samples = 50;
  double radius = 3.0;
  int grid_resolution = 0;  // 0 = model default
  PropertyThresholds thresholds;
};

SuiteResult equivariance_suite(const Model& m, const VerifyConfig& cfg,
                               std::uint64_t seed,
                               const SolverSettings& settings = {},
                               bool parallel = true);
SuiteResult faces_suite(const Model& m, const VerifyConfig& cfg,
                        std::uint64_t seed,
                        const SolverSettings& settings = {},
                        bool parallel = true);
SuiteResult c1_suite(const Model& m, const VerifyConfig& cfg,
                     std::uint64_t seed, const SolverSettings& settings = {},
                     bool parallel = true);
SuiteResult jacobian_bound_suite(const Model& m, const VerifyConfig& cfg,
                                 std::uint64_t seed,
                                 const SolverSettings& settings = {},
                                 bool parallel = true);

// property: equivariance | faces | c1 | jacobian-bound | all
std::vector<SuiteResult> run_verify(const Model& m, const std::string& property,
                                    const VerifyConfig& cfg, std::uint64_t seed,
                                    const SolverSettings& settings = {},
                                    bool parallel = true);

// Coordinates of an ambient tangent vector in a row-orthonormal basis.
Eigen::VectorXd coords_in_basis(const Model& m, const Eigen::MatrixXd& basis,
                                const Eigen::VectorXd& ambient);

}  // namespace bstraight
