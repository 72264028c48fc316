#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bstraight {

struct SourcePos {
  int line = 1;
  int col = 1;
};

class SimvolError : public std::runtime_error {
 public:
  SimvolError(const std::string& msg, SourcePos pos)
      : std::runtime_error("line " + std::to_string(pos.line) + ", col " +
                           std::to_string(pos.col) + ": " + msg),
        pos(pos) {}
  SourcePos pos;
};

class SyntaxError : public SimvolError {
 public:
  using SimvolError::SimvolError;
};

class SemanticError : public SimvolError {
 public:
  using SimvolError::SimvolError;
};

class UnknownConstantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndeterminateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Manifold expression AST.  Dimensions are resolved at parse time so
// semantic errors carry source positions.
struct SimvolExpr {
  enum class Kind { Hyperbolic, Surface, Product, ConnectSum, Opaque };
  Kind kind;
  int dim = 0;
  SourcePos pos;
  // leaf payloads
  int n = 0;           // hyperbolic dimension
  double vol = 0.0;    // hyperbolic / opaque volume
  bool has_vol = false;
  int genus = 0;       // surface
  double lo = 0.0, hi = 0.0;  // opaque interval
  std::vector<SimvolExpr> children;
};

SimvolExpr parse_expression(const std::string& text);

// Interval for a simplicial volume, with the trace of every applied rule and
// every non-exact constant.
struct BoundInterval {
  double lo = 0.0;
  double hi = 0.0;  // may be +infinity
  int dim = 0;
  std::optional<double> vol;
  std::vector<std::string> trace;
};

struct SimvolConfig {
  // v_n registry overrides / extensions (keyed by dimension).
  std::map<int, double> vn_override;
  // Product upper constants keyed by total dimension; default binomial(n, n1).
  std::map<int, double> product_constant_override;
};

// Shipped proportionality constants: the supremal straightened-simplex
// volumes in H^2 and H^3.  v3 is pinned to the Lobachevsky value
// 3 L(pi/3), cross-checked by the quadrature oracle in the tests.
double registry_vn(int n, const SimvolConfig& config);
inline constexpr double kIdealSimplexVolumeH2 = M_PI;
inline constexpr double kIdealSimplexVolumeH3 = 1.0149416064096536;

BoundInterval evaluate(const SimvolExpr& e, const SimvolConfig& config = {});

// floor(N.hi / M.lo); 0 means no positive-degree map exists.
long long degree_bound(const BoundInterval& N, const BoundInterval& M);

// 2^{-dim} * hi: Euler-number bound for flat n-plane bundles.
double euler_bound(const BoundInterval& M);

double binomial(int n, int k);

}  // namespace bstraight
