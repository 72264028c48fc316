#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bstraight/report.hpp"

namespace {

using namespace bstraight;

constexpr int kExitViolations = 1;
constexpr int kExitSolver = 2;
constexpr int kExitExpression = 3;
constexpr int kExitConfig = 64;
constexpr int kExitSimplexFile = 65;

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << payload;
}

int violations_exit_code(const std::vector<std::string>& violations) {
  if (violations.empty()) return 0;
  for (const auto& v : violations)
    if (v.rfind("solver-error", 0) == 0 || v.find(": solver-error") != std::string::npos)
      return kExitSolver;
  return kExitViolations;
}

int check_config(const RunConfig& cfg) {
  const auto errs = cfg.validate();
  if (errs.empty()) return 0;
  for (const auto& e : errs) std::cerr << "error: " << e << "\n";
  return kExitConfig;
}

Report base_report(const RunConfig& cfg) {
  Report r;
  r.command = cfg.command;
  r.config = cfg;
  r.timestamp = current_timestamp_utc();
  return r;
}

int cmd_verify(RunConfig cfg) {
  if (int rc = check_config(cfg)) return rc;
  const Model m = Model::from_id(cfg.model_id);
  VerifyConfig vc;
  vc.samples = cfg.samples;
  vc.radius = cfg.radius;
  vc.grid_resolution = cfg.grid_resolution;
  const auto suites = run_verify(m, cfg.property, vc, cfg.seed, cfg.solver());

  Report rep = base_report(cfg);
  rep.results = suites_to_json(suites);
  for (const auto& s : suites)
    rep.violations.insert(rep.violations.end(), s.violations.begin(),
                          s.violations.end());
  emit(cfg.format == "csv" ? suites_to_csv(suites) : render_report(rep),
       cfg.out_path);
  return violations_exit_code(rep.violations);
}

int cmd_jscan(RunConfig cfg) {
  if (int rc = check_config(cfg)) return rc;
  const Model m = Model::from_id(cfg.model_id);
  ScanConfig sc;
  sc.n_samples = cfg.samples;
  sc.sigma_per_tuple = cfg.sigma_per_tuple;
  sc.radius = cfg.radius;
  sc.grid_resolution = cfg.grid_resolution;
  sc.cprime = cfg.cprime;
  const ScanReport scan = jscan(m, sc, cfg.seed, cfg.solver());

  Report rep = base_report(cfg);
  rep.results = scan_report_to_json(scan);
  rep.violations = scan.violations;
  emit(cfg.format == "csv" ? scan_report_to_csv(scan) : render_report(rep),
       cfg.out_path);
  return violations_exit_code(rep.violations);
}

int cmd_straighten(RunConfig cfg, bool model_given, bool format_given) {
  if (!format_given && cfg.out_path.size() >= 4 &&
      cfg.out_path.substr(cfg.out_path.size() - 4) == ".csv")
    cfg.format = "csv";
  if (int rc = check_config(cfg)) return rc;
  Model m = Model::from_id(cfg.model_id);
  std::vector<Point> verts;
  try {
    verts = load_simplex_file(cfg.simplex_file, m);
  } catch (const SimplexFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimplexFile;
  }
  if (model_given && m.id() != cfg.model_id) {
    std::cerr << "error: --model " << cfg.model_id
              << " does not match simplex file model " << m.id() << "\n";
    return kExitConfig;
  }
  const int res = cfg.grid_resolution > 0 ? cfg.grid_resolution
                                          : default_resolution(m);
  const QuadratureGrid grid = build_grid(m, res, cfg.seed);
  const VertexTuple tuple = VertexTuple::create(verts, grid);
  try {
    const auto rows = straighten_lattice(tuple, cfg.grid_edge, cfg.solver());
    if (cfg.format == "csv") {
      emit(straighten_rows_to_csv(m, rows), cfg.out_path);
    } else {
      Report rep = base_report(cfg);
      rep.config.model_id = m.id();
      rep.results = straighten_rows_to_json(m, rows);
      emit(render_report(rep), cfg.out_path);
    }
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const DegenerateHessianError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}

int cmd_barycenter(RunConfig cfg, bool model_given) {
  if (int rc = check_config(cfg)) return rc;
  Model m = Model::from_id(cfg.model_id);
  std::vector<Point> verts;
  try {
    verts = load_simplex_file(cfg.simplex_file, m);
  } catch (const SimplexFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimplexFile;
  }
  if (model_given && m.id() != cfg.model_id) {
    std::cerr << "error: --model " << cfg.model_id
              << " does not match simplex file model " << m.id() << "\n";
    return kExitConfig;
  }
  const int res = cfg.grid_resolution > 0 ? cfg.grid_resolution
                                          : default_resolution(m);
  const QuadratureGrid grid = build_grid(m, res, cfg.seed);
  const VertexTuple tuple = VertexTuple::create(verts, grid);

  Eigen::VectorXd a =
      Eigen::VectorXd::Constant(tuple.k() + 1,
                                1.0 / std::sqrt(double(tuple.k() + 1)));
  if (!cfg.sigma_csv.empty()) {
    std::vector<double> vals;
    std::string tok;
    std::stringstream ss(cfg.sigma_csv);
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (static_cast<int>(vals.size()) != tuple.k() + 1) {
      std::cerr << "error: --sigma needs " << tuple.k() + 1 << " weights\n";
      return kExitConfig;
    }
    a = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
  }
  try {
    const SimplexPoint sigma = simplex_point(a);
    BarycenterResult info;
    straighten_point(tuple, sigma, cfg.solver(), &info);
    Report rep = base_report(cfg);
    rep.config.model_id = m.id();
    rep.results = barycenter_to_json(m, info);
    rep.results["sigma"] =
        std::vector<double>(sigma.a.data(), sigma.a.data() + sigma.a.size());
    emit(render_report(rep), cfg.out_path);
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const DegenerateHessianError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}

int cmd_simvol(RunConfig cfg, const std::vector<std::string>& vn_overrides,
               const std::vector<std::string>& c_overrides) {
  SimvolConfig sc;
  for (const auto& kv : {std::make_pair(&vn_overrides, &sc.vn_override),
                         std::make_pair(&c_overrides,
                                        &sc.product_constant_override)}) {
    for (const auto& s : *kv.first) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: override '" << s << "' must look like n=value\n";
        return kExitConfig;
      }
      try {
        (*kv.second)[std::stoi(s.substr(0, eq))] = std::stod(s.substr(eq + 1));
      } catch (const std::exception&) {
        std::cerr << "error: cannot parse override '" << s << "'\n";
        return kExitConfig;
      }
    }
  }
  try {
    const SimvolExpr expr = parse_expression(cfg.expression);
    const BoundInterval interval = evaluate(expr, sc);
    Report rep = base_report(cfg);
    rep.results = interval_to_json(interval);
    emit(render_report(rep), cfg.out_path);
  } catch (const SimvolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExpression;
  } catch (const UnknownConstantError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExpression;
  }
  return 0;
}

CLI::Option* add_common(CLI::App* sub, RunConfig& cfg) {
  CLI::Option* model =
      sub->add_option("--model", cfg.model_id, "model id (h2|h3|h4|h5|h2xh2)");
  sub->add_option("--grid-resolution", cfg.grid_resolution,
                  "quadrature resolution (0 = model default)");
  sub->add_option("--seed", cfg.seed, "scan seed");
  sub->add_option("--samples", cfg.samples, "sample count");
  sub->add_option("--tol-grad", cfg.tol_grad, "barycenter gradient tolerance");
  sub->add_option("--max-iter", cfg.max_iter, "barycenter iteration cap");
  sub->add_option("--radius", cfg.radius, "vertex sampling ball radius");
  sub->add_option("--out", cfg.out_path, "output path (default stdout)");
  return model;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bstraight: barycentric straightening of simplices in symmetric "
      "spaces, with property verification scans and a simplicial-volume "
      "calculator"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> vn_overrides, c_overrides;

  auto* verify = app.add_subcommand(
      "verify", "run a formal-property verification suite");
  add_common(verify, cfg);
  verify->add_option("--property", cfg.property,
                     "equivariance|faces|c1|jacobian-bound|all");
  verify->add_option("--format", cfg.format, "json|csv");

  auto* scan = app.add_subcommand(
      "jscan", "scan vertex tuples for the Jacobian bound and record suprema");
  add_common(scan, cfg);
  scan->add_option("--sigma-per-tuple", cfg.sigma_per_tuple,
                   "simplex points evaluated per vertex tuple");
  scan->add_option("--cprime", cfg.cprime,
                   "optional theoretical constant for the annotated bound");
  scan->add_option("--format", cfg.format, "json|csv");

  auto* straighten = app.add_subcommand(
      "straighten", "sample a straightened simplex on a lattice");
  CLI::Option* straighten_model = add_common(straighten, cfg);
  straighten->add_option("--simplex", cfg.simplex_file,
                         "simplex JSON file {model, vertices}")
      ->required();
  straighten->add_option("--grid", cfg.grid_edge,
                         "lattice points per simplex edge");
  auto* straighten_format =
      straighten->add_option("--format", cfg.format, "json|csv");

  auto* bary = app.add_subcommand(
      "barycenter", "barycenter of the weighted vertex densities");
  CLI::Option* bary_model = add_common(bary, cfg);
  bary->add_option("--simplex", cfg.simplex_file,
                   "simplex JSON file {model, vertices}")
      ->required();
  bary->add_option("--sigma", cfg.sigma_csv,
                   "comma-separated simplex coordinates");

  auto* simvol = app.add_subcommand(
      "simvol", "evaluate a manifold expression to a simplicial-volume "
                "interval");
  simvol->add_option("expression", cfg.expression, "manifold expression")
      ->required();
  simvol->add_option("--out", cfg.out_path, "output path (default stdout)");
  simvol->add_option("--vn", vn_overrides,
                     "v_n override, e.g. --vn 4=0.2689");
  simvol->add_option("--product-constant", c_overrides,
                     "product upper constant override, e.g. 4=6");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      cfg.command = "verify";
      return cmd_verify(cfg);
    }
    if (*scan) {
      cfg.command = "jscan";
      return cmd_jscan(cfg);
    }
    if (*straighten) {
      cfg.command = "straighten";
      return cmd_straighten(cfg, straighten_model->count() > 0,
                            straighten_format->count() > 0);
    }
    if (*bary) {
      cfg.command = "barycenter";
      return cmd_barycenter(cfg, bary_model->count() > 0);
    }
    if (*simvol) {
      cfg.command = "simvol";
      return cmd_simvol(cfg, vn_overrides, c_overrides);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
