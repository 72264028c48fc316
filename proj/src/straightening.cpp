#include "bstraight/straightening.hpp"

#include <cmath>
#include <stdexcept>

namespace bstraight {

SimplexPoint simplex_point(Eigen::VectorXd a) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] < 0.0) {
      if (a[i] < -1e-12)
        throw std::invalid_argument("simplex point has negative coordinate");
      a[i] = 0.0;
    }
  const double n = a.norm();
  if (n < 1e-12) throw std::invalid_argument("simplex point is zero");
  return SimplexPoint{a / n};
}

SimplexPoint simplex_vertex(int k, int i) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(k + 1);
  a[i] = 1.0;
  return SimplexPoint{std::move(a)};
}

SimplexPoint sqrt_simplex_sample(int k, Rng& rng) {
  const Eigen::VectorXd b = rng.uniform_simplex(k + 1);
  return SimplexPoint{b.array().sqrt().matrix()};
}

SimplexPoint orthant_sample(int k, Rng& rng) {
  Eigen::VectorXd g = rng.normal_vector(k + 1).cwiseAbs();
  double n = g.norm();
  while (n < 1e-12) {
    g = rng.normal_vector(k + 1).cwiseAbs();
    n = g.norm();
  }
  return SimplexPoint{g / n};
}

VertexTuple::VertexTuple(std::vector<Point> vertices,
                         std::vector<BoundaryMeasure> measures)
    : vertices_(std::move(vertices)), measures_(std::move(measures)) {
  if (vertices_.empty() || vertices_.size() != measures_.size())
    throw std::invalid_argument("vertex tuple: size mismatch");
  for (const auto& mu : measures_)
    if (mu.atoms != measures_[0].atoms)
      throw std::invalid_argument(
          "vertex tuple: measures do not share an atom set");
}

VertexTuple VertexTuple::create(const std::vector<Point>& vertices,
                                const QuadratureGrid& grid) {
  std::vector<BoundaryMeasure> ms;
  ms.reserve(vertices.size());
  for (const auto& x : vertices) ms.push_back(ps_density(grid, x));
  return VertexTuple(vertices, std::move(ms));
}

VertexTuple VertexTuple::transformed(const Isometry& g) const {
  const Model& m = model();
  auto moved = transport_atoms(*atoms(), g);
  std::vector<Point> verts;
  std::vector<BoundaryMeasure> ms;
  verts.reserve(vertices_.size());
  ms.reserve(measures_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    verts.push_back(apply(m, g, vertices_[i]));
    ms.push_back(BoundaryMeasure{moved, measures_[i].masses});
  }
  return VertexTuple(std::move(verts), std::move(ms));
}

VertexTuple VertexTuple::face(int i) const {
  if (k() < 1) throw std::invalid_argument("face of a 0-simplex");
  std::vector<Point> verts;
  std::vector<BoundaryMeasure> ms;
  for (int j = 0; j <= k(); ++j) {
    if (j == i) continue;
    verts.push_back(vertices_[j]);
    ms.push_back(measures_[j]);
  }
  return VertexTuple(std::move(verts), std::move(ms));
}

VertexTuple VertexTuple::permuted(const std::vector<int>& perm) const {
  std::vector<Point> verts;
  std::vector<BoundaryMeasure> ms;
  for (int p : perm) {
    verts.push_back(vertices_[p]);
    ms.push_back(measures_[p]);
  }
  return VertexTuple(std::move(verts), std::move(ms));
}

BoundaryMeasure VertexTuple::combined(const SimplexPoint& sigma) const {
  if (sigma.k() != k())
    throw std::invalid_argument("simplex point dimension != tuple dimension");
  return weighted_combination(sigma.a, measures_);
}

Point VertexTuple::initial_guess(const SimplexPoint& sigma) const {
  const Model& m = model();
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(m.ambient());
  for (int i = 0; i <= k(); ++i)
    avg += sigma.a[i] * sigma.a[i] * vertices_[i].v;
  for (int f = 0; f < m.factors(); ++f) {
    auto af = avg.segment(m.factor_offset(f), m.factor_size(f));
    af /= std::sqrt(-mink(af, af));
  }
  return Point{std::move(avg)};
}

Point straighten_point(const VertexTuple& v, const SimplexPoint& sigma,
                       const SolverSettings& settings,
                       BarycenterResult* info) {
  BarycenterResult res =
      barycenter(v.combined(sigma), settings, v.initial_guess(sigma));
  if (info) *info = res;
  return res.point;
}

FaceCompatReport verify_face_compatibility(const VertexTuple& v,
                                           int samples_per_face,
                                           std::uint64_t seed,
                                           const SolverSettings& settings) {
  const Model& m = v.model();
  FaceCompatReport rep;
  const int k = v.k();
  for (int i = 0; i <= k; ++i) {
    const VertexTuple f = v.face(i);
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    for (int s = 0; s < samples_per_face; ++s) {
      const SimplexPoint on_face = (k - 1 >= 1)
                                       ? sqrt_simplex_sample(k - 1, rng)
                                       : simplex_vertex(0, 0);
      Eigen::VectorXd a = Eigen::VectorXd::Zero(k + 1);
      int c = 0;
      for (int j = 0; j <= k; ++j)
        if (j != i) a[j] = on_face.a[c++];
      const Point via_tuple = straighten_point(v, SimplexPoint{a}, settings);
      const Point via_face = straighten_point(f, on_face, settings);
      rep.max_discrepancy =
          std::max(rep.max_discrepancy, distance(m, via_tuple, via_face));
      ++rep.samples;
    }
  }
  return rep;
}

EquivarianceReport verify_equivariance(const VertexTuple& v, const Isometry& g,
                                       int samples, std::uint64_t seed,
                                       const SolverSettings& settings) {
  const Model& m = v.model();
  const VertexTuple moved = v.transformed(g);
  EquivarianceReport rep;
  Rng rng(mix_seed(seed, 0xE91u));
  for (int s = 0; s < samples; ++s) {
    const SimplexPoint sigma = sqrt_simplex_sample(v.k(), rng);
    const Point lhs = straighten_point(moved, sigma, settings);
    const Point rhs = apply(m, g, straighten_point(v, sigma, settings));
    rep.max_distance = std::max(rep.max_distance, distance(m, lhs, rhs));
    ++rep.samples;
  }
  return rep;
}

namespace {
// Iterated geodesic cone: join the (k-1)-face map to the last vertex.
Point cone_eval(const Model& m, const std::vector<Point>& pts,
                const Eigen::VectorXd& a) {
  if (pts.size() == 1) return pts[0];
  const int k = static_cast<int>(pts.size()) - 1;
  const double t = a[k] * a[k];
  const Eigen::VectorXd rest = a.head(k);
  const double rn = rest.norm();
  if (rn < 1e-14) return pts[k];
  std::vector<Point> sub(pts.begin(), pts.end() - 1);
  const Point base = cone_eval(m, sub, rest / rn);
  return exp_map(m, log_map(m, base, pts[k]), t);
}
}  // namespace

SingularSimplex geodesic_cone_simplex(const VertexTuple& v) {
  const Model m = v.model();
  const std::vector<Point> verts = v.vertices();
  return SingularSimplex{v, [m, verts](const SimplexPoint& s) {
                           return cone_eval(m, verts, s.a);
                         }};
}

Point geodesic_homotopy(const SingularSimplex& f, double s,
                        const SimplexPoint& sigma,
                        const SolverSettings& settings) {
  if (s < 0.0 || s > 1.0)
    throw std::invalid_argument("homotopy parameter outside [0,1]");
  const Model& m = f.vertices.model();
  const Point from = f.map(sigma);
  if (s == 0.0) return from;
  const Point to = straighten_point(f.vertices, sigma, settings);
  return exp_map(m, log_map(m, from, to), s);
}

double chain_l1_norm(const Chain& c) {
  double s = 0.0;
  for (const auto& t : c.terms) s += std::abs(t.coefficient);
  return s;
}

namespace {
bool same_tuple(const VertexTuple& a, const VertexTuple& b) {
  if (a.k() != b.k() || a.atoms() != b.atoms()) return false;
  for (int i = 0; i <= a.k(); ++i)
    if (a.vertex(i).v != b.vertex(i).v) return false;
  return true;
}
}  // namespace

Chain straighten_chain(const Chain& c) {
  Chain out;
  for (const auto& t : c.terms) {
    if (t.coefficient == 0.0) continue;
    bool merged = false;
    for (auto& existing : out.terms)
      if (same_tuple(existing.simplex, t.simplex)) {
        existing.coefficient += t.coefficient;
        merged = true;
        break;
      }
    if (!merged) out.terms.push_back(t);
  }
  std::erase_if(out.terms,
                [](const ChainTerm& t) { return t.coefficient == 0.0; });
  return out;
}

}  // namespace bstraight
