#include "bstraight/report.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include "bstraight/parallel.hpp"

namespace bstraight {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void enumerate_lattice(int coords, int total, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) {
  if (coords == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int m = 0; m <= total; ++m) {
    cur.push_back(m);
    enumerate_lattice(coords - 1, total - m, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> errs;
  try {
    (void)Model::from_id(model_id);
  } catch (const std::exception& e) {
    errs.push_back(e.what());
  }
  if (grid_resolution < 0) errs.push_back("grid resolution must be positive");
  if (!(tol_grad > 0)) errs.push_back("gradient tolerance must be positive");
  if (max_iter < 1) errs.push_back("max iterations must be >= 1");
  if (samples < 1) errs.push_back("samples must be >= 1");
  if (sigma_per_tuple < 1) errs.push_back("sigma-per-tuple must be >= 1");
  if (mc_samples < 1) errs.push_back("mc-samples must be >= 1");
  if (!(radius > 0)) errs.push_back("radius must be positive");
  if (grid_edge < 1) errs.push_back("grid sampling density must be >= 1");
  if (cprime && !(*cprime > 0)) errs.push_back("cprime must be positive");
  if (format != "json" && format != "csv")
    errs.push_back("format must be json or csv");
  return errs;
}

SolverSettings RunConfig::solver() const {
  SolverSettings s;
  s.grad_tol = tol_grad;
  s.max_iterations = max_iter;
  return s;
}

ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  j["model"] = c.model_id;
  j["grid_resolution"] = c.grid_resolution;
  j["seed"] = c.seed;
  j["tol_grad"] = c.tol_grad;
  j["max_iter"] = c.max_iter;
  j["samples"] = c.samples;
  j["sigma_per_tuple"] = c.sigma_per_tuple;
  j["mc_samples"] = c.mc_samples;
  j["radius"] = c.radius;
  j["grid_edge"] = c.grid_edge;
  if (c.cprime)
    j["cprime"] = *c.cprime;
  else
    j["cprime"] = nullptr;
  j["format"] = c.format;
  j["property"] = c.property;
  j["simplex_file"] = c.simplex_file;
  j["expression"] = c.expression;
  j["sigma"] = c.sigma_csv;
  return j;
}

RunConfig config_from_json(const ordered_json& j) {
  RunConfig c;
  c.command = j.value("command", c.command);
  c.model_id = j.value("model", c.model_id);
  c.grid_resolution = j.value("grid_resolution", c.grid_resolution);
  c.seed = j.value("seed", c.seed);
  c.tol_grad = j.value("tol_grad", c.tol_grad);
  c.max_iter = j.value("max_iter", c.max_iter);
  c.samples = j.value("samples", c.samples);
  c.sigma_per_tuple = j.value("sigma_per_tuple", c.sigma_per_tuple);
  c.mc_samples = j.value("mc_samples", c.mc_samples);
  c.radius = j.value("radius", c.radius);
  c.grid_edge = j.value("grid_edge", c.grid_edge);
  if (j.contains("cprime") && !j["cprime"].is_null())
    c.cprime = j["cprime"].get<double>();
  c.format = j.value("format", c.format);
  c.property = j.value("property", c.property);
  c.simplex_file = j.value("simplex_file", c.simplex_file);
  c.expression = j.value("expression", c.expression);
  c.sigma_csv = j.value("sigma", c.sigma_csv);
  return c;
}

ordered_json report_to_json(const Report& r) {
  ordered_json j;
  j["version"] = r.version;
  j["command"] = r.command;
  j["config"] = config_to_json(r.config);
  j["timestamp"] = r.timestamp;
  j["results"] = r.results;
  j["violations"] = r.violations;
  return j;
}

std::string render_report(const Report& r) {
  return report_to_json(r).dump(2) + "\n";
}

std::string current_timestamp_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json scan_report_to_json(const ScanReport& s) {
  ordered_json j;
  j["model"] = s.model_id;
  j["n_samples"] = s.config.n_samples;
  j["sigma_per_tuple"] = s.config.sigma_per_tuple;
  j["radius"] = s.config.radius;
  j["seed"] = s.seed;
  j["quadrature"] = {{"scheme", s.scheme},
                     {"resolution", s.resolution},
                     {"atoms", s.atom_count}};
  j["sup_jac"] = s.sup_jac;
  j["sup_J"] = s.sup_J;
  j["k_emp"] = s.k_emp;
  if (s.cprime) {
    j["cprime"] = *s.cprime;
    j["bound_2n_cprime"] = *s.bound_2n_cprime;
    j["cprime_exceeded"] = s.cprime_exceeded;
  } else {
    j["cprime"] = nullptr;
  }
  j["violations"] = s.violations;
  return j;
}

std::string scan_report_to_csv(const ScanReport& s) {
  std::string out = "tuple,sigma,jac_abs,J,bound,pass\n";
  for (const auto& r : s.samples) {
    out += std::to_string(r.tuple_index) + "," + std::to_string(r.sigma_index) +
           "," + num(r.jac_abs) + "," + num(r.J) + "," + num(r.bound) + "," +
           (r.pass ? "1" : "0") + "\n";
  }
  return out;
}

ordered_json suites_to_json(const std::vector<SuiteResult>& suites) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : suites) {
    ordered_json j;
    j["property"] = s.property;
    j["samples"] = s.samples;
    j["worst"] = s.worst;
    j["violations"] = s.violations;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string suites_to_csv(const std::vector<SuiteResult>& suites) {
  std::string out = "property,sample,metric,value,pass\n";
  for (const auto& s : suites)
    for (const auto& r : s.rows)
      out += s.property + "," + std::to_string(r.index) + "," + r.metric + "," +
             num(r.value) + "," + (r.pass ? "1" : "0") + "\n";
  return out;
}

ordered_json interval_to_json(const BoundInterval& b) {
  ordered_json j;
  j["dim"] = b.dim;
  j["lo"] = b.lo;
  if (std::isinf(b.hi))
    j["hi"] = "inf";
  else
    j["hi"] = b.hi;
  if (b.vol)
    j["vol"] = *b.vol;
  else
    j["vol"] = nullptr;
  j["trace"] = b.trace;
  return j;
}

ordered_json point_to_json(const Model& m, const Point& p) {
  ordered_json coords = ordered_json::array();
  for (Eigen::Index i = 0; i < p.v.size(); ++i) coords.push_back(p.v[i]);
  ordered_json j;
  j["model"] = m.id();
  j["coords"] = coords;
  return j;
}

ordered_json barycenter_to_json(const Model& m, const BarycenterResult& r) {
  ordered_json j;
  j["point"] = point_to_json(m, r.point);
  j["gradient_norm"] = r.gradient_norm;
  j["iterations"] = r.iterations;
  j["g_value"] = r.g_value;
  return j;
}

std::vector<Point> load_simplex_file(const std::string& path,
                                     Model& model_out) {
  std::ifstream in(path);
  if (!in) throw SimplexFileError("cannot open simplex file '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SimplexFileError("simplex file '" + path + "' is not valid JSON: " +
                           e.what());
  }
  if (!j.contains("model") || !j.contains("vertices"))
    throw SimplexFileError("simplex file needs \"model\" and \"vertices\"");
  try {
    model_out = Model::from_id(j["model"].get<std::string>());
  } catch (const std::exception& e) {
    throw SimplexFileError(e.what());
  }
  if (!j["vertices"].is_array() || j["vertices"].empty())
    throw SimplexFileError("\"vertices\" must be a non-empty array");
  std::vector<Point> pts;
  for (const auto& row : j["vertices"]) {
    if (!row.is_array() ||
        static_cast<int>(row.size()) != model_out.ambient())
      throw SimplexFileError(
          "each vertex needs " + std::to_string(model_out.ambient()) +
          " ambient coordinates for model " + model_out.id());
    Eigen::VectorXd v(model_out.ambient());
    for (int i = 0; i < model_out.ambient(); ++i) {
      if (!row[i].is_number())
        throw SimplexFileError("vertex coordinates must be numbers");
      v[i] = row[i].get<double>();
    }
    Point p{std::move(v)};
    if (point_defect(model_out, p) > 1e-6)
      throw SimplexFileError(
          "vertex does not satisfy the hyperboloid constraint (defect > 1e-6)");
    for (int f = 0; f < model_out.factors(); ++f) {
      auto pf = p.v.segment(model_out.factor_offset(f), model_out.factor_size(f));
      pf /= std::sqrt(-mink(pf, pf));
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<StraightenRow> straighten_lattice(const VertexTuple& v,
                                              int per_edge,
                                              const SolverSettings& settings,
                                              bool parallel) {
  std::vector<std::vector<int>> lattice;
  std::vector<int> cur;
  enumerate_lattice(v.k() + 1, per_edge, cur, lattice);
  std::vector<StraightenRow> rows(lattice.size());
  for_each_index(static_cast<std::ptrdiff_t>(lattice.size()), parallel,
                 [&](std::ptrdiff_t i) {
                   Eigen::VectorXd a(v.k() + 1);
                   for (int c = 0; c <= v.k(); ++c)
                     a[c] = std::sqrt(double(lattice[i][c]) / per_edge);
                   const SimplexPoint sigma{a};
                   const Point p = straighten_point(v, sigma, settings);
                   rows[i] = StraightenRow{lattice[i], a, p.v};
                 });
  return rows;
}

std::string straighten_rows_to_csv(const Model& m,
                                   const std::vector<StraightenRow>& rows) {
  std::string out;
  if (rows.empty()) return out;
  const int k1 = static_cast<int>(rows[0].sigma.size());
  for (int i = 0; i < k1; ++i) out += "a" + std::to_string(i + 1) + ",";
  for (int i = 0; i < m.ambient(); ++i) {
    out += "x" + std::to_string(i);
    out += (i + 1 < m.ambient()) ? "," : "\n";
  }
  for (const auto& r : rows) {
    for (int i = 0; i < k1; ++i) out += num(r.sigma[i]) + ",";
    for (int i = 0; i < m.ambient(); ++i) {
      out += num(r.point[i]);
      out += (i + 1 < m.ambient()) ? "," : "\n";
    }
  }
  return out;
}

ordered_json straighten_rows_to_json(const Model& m,
                                     const std::vector<StraightenRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j;
    j["sigma"] = std::vector<double>(r.sigma.data(),
                                     r.sigma.data() + r.sigma.size());
    j["point"] = std::vector<double>(r.point.data(),
                                     r.point.data() + r.point.size());
    arr.push_back(std::move(j));
  }
  ordered_json out;
  out["model"] = m.id();
  out["points"] = std::move(arr);
  return out;
}

}  // namespace bstraight
