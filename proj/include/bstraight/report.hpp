#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bstraight/simvol.hpp"
#include "bstraight/verify.hpp"

namespace bstraight {

using ordered_json = nlohmann::ordered_json;

// Malformed simplex input file (exit 65 at the CLI).
class SimplexFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command = "verify";
  std::string model_id = "h3";
  int grid_resolution = 0;  // 0 = model default
  std::uint64_t seed = 1;
  double tol_grad = 1e-10;
  int max_iter = 100;
  int samples = 100;
  int sigma_per_tuple = 4;
  int mc_samples = 400;
  double radius = 3.0;
  int grid_edge = 20;  // straighten lattice density per edge
  std::optional<double> cprime;
  std::string out_path;
  std::string format = "json";  // json | csv
  std::string property = "all";
  std::string simplex_file;
  std::string expression;
  std::string sigma_csv;  // barycenter weights, comma separated

  std::vector<std::string> validate() const;
  SolverSettings solver() const;
};

ordered_json config_to_json(const RunConfig& c);
RunConfig config_from_json(const ordered_json& j);

struct Report {
  std::string version = "1";
  std::string command;
  RunConfig config;
  std::string timestamp;
  ordered_json results;
  std::vector<std::string> violations;
};

ordered_json report_to_json(const Report& r);
// Stable key order; the timestamp field is the only run-to-run difference
// for a fixed seed.
std::string render_report(const Report& r);

std::string current_timestamp_utc();

ordered_json scan_report_to_json(const ScanReport& s);
std::string scan_report_to_csv(const ScanReport& s);

ordered_json suites_to_json(const std::vector<SuiteResult>& suites);
std::string suites_to_csv(const std::vector<SuiteResult>& suites);

ordered_json interval_to_json(const BoundInterval& b);

ordered_json point_to_json(const Model& m, const Point& p);
ordered_json barycenter_to_json(const Model& m, const BarycenterResult& r);

// {"model": id, "vertices": [[...], ...]}; vertices are validated against the
// hyperboloid constraints and renormalized.
std::vector<Point> load_simplex_file(const std::string& path, Model& model_out);

struct StraightenRow {
  std::vector<int> lattice;
  Eigen::VectorXd sigma;
  Eigen::VectorXd point;
};

// Samples st_V on the sqrt-lattice {sqrt(m/G)} of the spherical simplex,
// per_edge points per edge; lattice corners reproduce the vertices.
std::vector<StraightenRow> straighten_lattice(const VertexTuple& v,
                                              int per_edge,
                                              const SolverSettings& settings,
                                              bool parallel = true);
std::string straighten_rows_to_csv(const Model& m,
                                   const std::vector<StraightenRow>& rows);
ordered_json straighten_rows_to_json(const Model& m,
                                     const std::vector<StraightenRow>& rows);

}  // namespace bstraight
