#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bstraight/model.hpp"

namespace bstraight {

// Where the boundary atoms of a discretization (or of a transported measure)
// live.  Shared between all measures built on the same grid; downstream
// kernels consume the per-factor matrices directly.
struct AtomSet {
  Model model;
  // Per factor f: count x factor_size(f); row j is the null vector of atom j.
  std::vector<Eigen::MatrixXd> atoms;
  // Same with the time column negated, so atoms_mink[f] * x = <xi_j, x>.
  std::vector<Eigen::MatrixXd> atoms_mink;
  Eigen::Index count = 0;

  BoundaryPoint atom(Eigen::Index j) const;
};

std::shared_ptr<const AtomSet> make_atom_set(
    const Model& m, std::vector<Eigen::MatrixXd> factor_atoms);

// Transport all atoms by an isometry (renormalizing representatives).
std::shared_ptr<const AtomSet> transport_atoms(const AtomSet& atoms,
                                               const Isometry& g);

enum class GridScheme {
  Circle,         // S^1: uniform angles, equal weights
  Fibonacci,      // S^2: antipodally symmetrized Fibonacci lattice
  GaussCircle,    // S^2: Gauss-Legendre polar nodes x uniform angles
  Frames,         // S^{n-1}, n>=4: random orthogonal frames with antipodes
  ProductCircle,  // boundary torus of H^2 x H^2: circle x circle
};

std::string scheme_name(GridScheme s);

struct QuadratureGrid {
  std::shared_ptr<const AtomSet> atoms;
  Eigen::VectorXd weights;  // positive, sum 1
  GridScheme scheme;
  int resolution = 0;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return atoms->count; }
  const Model& model() const { return atoms->model; }
};

GridScheme default_scheme(const Model& m);
int default_resolution(const Model& m);

// resolution semantics: atom count for Circle/Fibonacci/Frames, per-factor
// circle size for ProductCircle, polar node count for GaussCircle (which
// yields 2*resolution^2 atoms).  The seed only matters for Frames.
QuadratureGrid build_grid(const Model& m, int resolution, std::uint64_t seed);
QuadratureGrid build_grid(const Model& m, int resolution, std::uint64_t seed,
                          GridScheme scheme);

}  // namespace bstraight
