#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <fstream>

#include "bstraight/report.hpp"
#include "helpers.hpp"

using namespace bstraight;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    char buf[] = "/tmp/bstraight_test_XXXXXX";
    const int fd = mkstemp(buf);
    REQUIRE(fd >= 0);
    path = buf;
    std::ofstream out(path);
    out << contents;
    close(fd);
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config json round trip") {
  RunConfig c;
  c.command = "jscan";
  c.model_id = "h2xh2";
  c.grid_resolution = 96;
  c.seed = 987654321;
  c.samples = 17;
  c.radius = 1.25;
  c.cprime = 3.5;
  c.format = "csv";
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("config validation") {
  RunConfig c;
  c.model_id = "h9";
  CHECK_FALSE(c.validate().empty());
  c.model_id = "h2";
  CHECK(c.validate().empty());
  c.format = "yaml";
  CHECK_FALSE(c.validate().empty());
}

TEST_CASE("report serialization is stable") {
  RunConfig c;
  Report r;
  r.command = "verify";
  r.config = c;
  r.timestamp = "2020-01-01T00:00:00Z";
  r.results = ordered_json::object();
  r.results["x"] = 1.5;
  const std::string a = render_report(r);
  const std::string b = render_report(r);
  CHECK(a == b);
  CHECK(a.find("\"version\": \"1\"") != std::string::npos);
}

TEST_CASE("scan reports are byte stable for a fixed seed") {
  const Model h2(ModelKind::H2);
  ScanConfig cfg;
  cfg.n_samples = 10;
  cfg.sigma_per_tuple = 2;
  cfg.grid_resolution = 128;
  const std::string a =
      scan_report_to_json(jscan(h2, cfg, 33, SolverSettings{}, false)).dump();
  const std::string b =
      scan_report_to_json(jscan(h2, cfg, 33, SolverSettings{}, true)).dump();
  CHECK(a == b);
  const std::string csv_a =
      scan_report_to_csv(jscan(h2, cfg, 33, SolverSettings{}, false));
  const std::string csv_b =
      scan_report_to_csv(jscan(h2, cfg, 33, SolverSettings{}, true));
  CHECK(csv_a == csv_b);
  CHECK(csv_a.rfind("tuple,sigma,jac_abs,J,bound,pass\n", 0) == 0);
}

TEST_CASE("verify suites serialize with violations mirroring exit status") {
  const Model h2(ModelKind::H2);
  VerifyConfig cfg;
  cfg.samples = 5;
  const auto suites = run_verify(h2, "equivariance", cfg, 11);
  const ordered_json sj = suites_to_json(suites);
  CHECK(sj[0]["violations"].empty());
  const std::string csv = suites_to_csv(suites);
  CHECK(csv.rfind("property,sample,metric,value,pass\n", 0) == 0);
}

TEST_CASE("re-running a report's config reproduces the scan") {
  RunConfig c;
  c.command = "jscan";
  c.model_id = "h2";
  c.samples = 6;
  c.sigma_per_tuple = 2;
  c.seed = 77;
  c.grid_resolution = 64;
  const auto run = [](const RunConfig& cfg) {
    ScanConfig sc;
    sc.n_samples = cfg.samples;
    sc.sigma_per_tuple = cfg.sigma_per_tuple;
    sc.radius = cfg.radius;
    sc.grid_resolution = cfg.grid_resolution;
    sc.cprime = cfg.cprime;
    return scan_report_to_json(
               jscan(Model::from_id(cfg.model_id), sc, cfg.seed, cfg.solver()))
        .dump();
  };
  const std::string first = run(c);
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(run(back) == first);
}

TEST_CASE("simplex file loading") {
  const TempFile good(R"({
    "model": "h2",
    "vertices": [[0,0,1],[1.1752011936438014,0,1.5430806348152437],[0,1.1752011936438014,1.5430806348152437]]
  })");
  Model m(ModelKind::H2);
  const auto verts = load_simplex_file(good.path, m);
  CHECK(verts.size() == 3);
  CHECK(m.id() == "h2");
  CHECK(point_defect(m, verts[1]) < 1e-12);

  const TempFile missing_fields(R"({"model": "h2"})");
  CHECK_THROWS_AS((void)load_simplex_file(missing_fields.path, m),
                  SimplexFileError);
  const TempFile bad_model(R"({"model": "h9", "vertices": [[0,0,1]]})");
  CHECK_THROWS_AS((void)load_simplex_file(bad_model.path, m), SimplexFileError);
  const TempFile off_sheet(R"({"model": "h2", "vertices": [[5,0,1]]})");
  CHECK_THROWS_AS((void)load_simplex_file(off_sheet.path, m), SimplexFileError);
  const TempFile not_json("nonsense");
  CHECK_THROWS_AS((void)load_simplex_file(not_json.path, m), SimplexFileError);
  CHECK_THROWS_AS((void)load_simplex_file("/nonexistent/path.json", m),
                  SimplexFileError);
}

TEST_CASE("straighten lattice reproduces the vertices") {
  const Model h3(ModelKind::H3);
  const QuadratureGrid g = build_grid(h3, default_resolution(h3), 0);
  Rng rng(140);
  std::vector<Point> verts;
  for (int i = 0; i < 4; ++i)
    verts.push_back(random_point_in_ball(h3, rng, 1.0));
  const VertexTuple tuple = VertexTuple::create(verts, g);
  const auto rows = straighten_lattice(tuple, 3, SolverSettings{});
  // lattice size: C(3 + 3, 3) compositions of 3 into 4 parts
  CHECK(rows.size() == 20);
  int corner_hits = 0;
  for (const auto& r : rows) {
    for (int i = 0; i < 4; ++i) {
      if (r.lattice[i] == 3) {
        CHECK((r.point - verts[i].v).cwiseAbs().maxCoeff() < 1e-7);
        ++corner_hits;
      }
    }
  }
  CHECK(corner_hits == 4);

  const std::string csv = straighten_rows_to_csv(h3, rows);
  CHECK(csv.rfind("a1,a2,a3,a4,x0,x1,x2,x3\n", 0) == 0);
  const ordered_json j = straighten_rows_to_json(h3, rows);
  CHECK(j["points"].size() == rows.size());
}
