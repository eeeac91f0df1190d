#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistcyl/io.hpp"
#include "twistcyl/verify.hpp"

using namespace twistcyl;

namespace {

CylinderEmbedding quick(const std::string& id, double eps) {
    return assemble(thicken(pattern_catalog(id), eps), default_layer_gap(eps));
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
    int n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) ++n;
    return n;
}

}  // namespace

TEST_CASE("full bundle passes on a built cylinder") {
    const CertificateBundle b = verify_cylinder("P2m", 0.2);
    CHECK(b.pass);
    CHECK(b.failures.empty());
    CHECK(!b.fixture);
    CHECK(b.epsilon == 0.2);
    CHECK(b.lambda == doctest::Approx(2.2));
    CHECK(b.isometry.max_gram_defect <= 1e-12);
    CHECK(b.embedded_pass);
    CHECK(b.embedded.min_separation >= 0.5 * b.layer_gap);
    CHECK(b.linking_checked);
    CHECK(b.linking.crossing_value == 1);  // mirror of P2
    CHECK(b.arc_imbalance <= 1e-12);
    CHECK(b.antisymmetry <= 1e-10);
    const double chain = b.projection.len_c1 + b.projection.len_c2;
    CHECK(b.projection.holds);
    CHECK(chain >= b.chain_floor);
    CHECK(chain <= b.lambda + 1e-9);
    CHECK(b.hull.pass);
    CHECK(b.bigon.pass);
    CHECK(b.bends.pass);
    CHECK(b.bends.min_length >= 1.0 - 1e-9);
    CHECK(b.bends.max_chord_deviation <= 1e-8);
    CHECK(b.endgame.theta_defect <= 0.12);  // measured 5.7e-2 at this width
}

TEST_CASE("zero layer gap verifies the flat-folded fixture") {
    VerifyConfig cfg;
    cfg.layer_gap = 0.0;
    const CertificateBundle b = verify_cylinder("P1", 0.1, cfg);
    CHECK(b.fixture);
    CHECK(b.epsilon == 0.0);
    CHECK(b.layer_gap == 0.0);
    CHECK(!b.pass);
    CHECK(b.embedded.intersects);
    CHECK(!b.embedded_pass);
    CHECK(b.isometry.max_gram_defect <= 1e-12);  // the fixture is isometric
    bool self_intersection_reported = false;
    for (const auto& f : b.failures)
        if (f.rfind("self-intersection", 0) == 0) self_intersection_reported = true;
    CHECK(self_intersection_reported);

    const CertificateBundle via_eps = verify_cylinder("P1", 0.0);
    CHECK(via_eps.fixture);
    CHECK(!via_eps.pass);
}

TEST_CASE("invalid epsilon propagates the domain error") {
    CHECK_THROWS_WITH_AS((void)verify_cylinder("P1", 0.7), "bands collide",
                         std::invalid_argument);
    CHECK_THROWS_AS((void)verify_cylinder("P1", -0.1), std::invalid_argument);
}

TEST_CASE("bend structure report probes the knots") {
    const auto e = quick("P1", 0.2);
    const BendFoliation fol = bend_foliation(e);
    const BendStructureReport rep = bend_structure_report(fol, 64);
    CHECK(rep.pass);
    CHECK(rep.probes >= 64 + static_cast<int>(fol.family.breaks.size()));
    CHECK(rep.max_chord_deviation <= 1e-8);
    CHECK(rep.min_length >= 1.0 - 1e-9);
    CHECK_THROWS_AS((void)bend_structure_report(fol, 1), std::invalid_argument);
}

TEST_CASE("fuzz suites find no violations") {
    const FuzzReport arcs = fuzz_crossing_arcs(150, 7);
    CHECK(arcs.trials == 150);
    CHECK(arcs.violations == 0);
    CHECK(arcs.worst_margin >= -1e-9);

    const FuzzReport hull = fuzz_hull_diameter(100, 7);
    CHECK(hull.violations == 0);
    CHECK(hull.worst_margin >= 0.0);

    const FuzzReport link = fuzz_linking_agreement(60, 7);
    CHECK(link.violations == 0);
    CHECK(link.worst_margin >= 0.0);

    for (const FuzzReport& rep :
         {fuzz_crossing_arcs(0, 42), fuzz_hull_diameter(0, 42), fuzz_linking_agreement(0, 42)}) {
        CHECK(rep.trials == 0);
        CHECK(rep.violations == 0);
        CHECK(rep.worst_margin == 0.0);
    }
    CHECK_THROWS_AS((void)fuzz_crossing_arcs(-1, 42), std::invalid_argument);
}

TEST_CASE("bundle json carries the certificate chain") {
    const CertificateBundle b = verify_cylinder("P1", 0.1);
    const auto j = nlohmann::json::parse(bundle_to_json(b));
    CHECK(j["schema_version"] == 1);
    CHECK(j["pass"] == true);
    CHECK(j["pattern"] == "P1");
    CHECK(j["topology"]["linking"]["crossings"] == 1);
    CHECK(j["topology"]["embedded"]["intersects"] == false);
    CHECK(double(j["topology"]["hull_bound"]["dist_xy"]) >= 0.99);
    CHECK(double(j["topology"]["hull_bound"]["diam_G"]) >= 0.99);
    const auto& chain = j["projection"]["chain"];
    CHECK(double(chain["lambda"]) >= double(chain["sum"]) - 1e-9);
    CHECK(double(chain["sum"]) >= double(chain["floor"]));
    CHECK(double(chain["floor"]) == 1.98);
    CHECK(j["bends"]["pass"] == true);
    CHECK(j["failures"].empty());
}

TEST_CASE("obj export lists surface and boundary loops") {
    const auto e = quick("P1", 0.2);
    const SurfaceMesh mesh = triangulate(e, 32);
    const std::string obj = mesh_to_obj(mesh, e, 128);
    const auto [loop_f, loop_g] = boundary_loops(e, 128);

    const int expect_v = static_cast<int>(mesh.vertices.size() + (loop_f.points.size() - 1) +
                                          (loop_g.points.size() - 1));
    CHECK(count_lines_starting(obj, "v ") == expect_v);
    CHECK(count_lines_starting(obj, "f ") == static_cast<int>(mesh.triangles.size()));
    CHECK(count_lines_starting(obj, "l ") == 2);
    CHECK(obj.find("g surface\n") != std::string::npos);
    CHECK(obj.find("g boundary_f\n") != std::string::npos);
    CHECK(obj.find("g boundary_g\n") != std::string::npos);
    CHECK(obj.rfind("# twisted paper cylinder", 0) == 0);
}

TEST_CASE("csv rows are deterministic") {
    const auto recs = sweep("P1", {0.2, 0.1});
    const std::string csv = records_to_csv(recs);
    CHECK(count_lines_starting(csv, "P1,") == 2);
    CHECK(csv.rfind("pattern,epsilon,hausdorff_to_triangle", 0) == 0);
    CHECK(csv == records_to_csv(sweep("P1", {0.2, 0.1})));
}

TEST_CASE("sweep summary flags monotonicity") {
    const auto recs = sweep("P2", {0.2, 0.1});
    const auto good = nlohmann::json::parse(sweep_summary_json({recs}));
    CHECK(good["schema_version"] == 1);
    CHECK(good["pass"] == true);
    const auto& metrics = good["sweeps"][0]["metrics"];
    CHECK(metrics.size() == ConvergenceRecord::kMetricCount);
    for (const char* name : ConvergenceRecord::metric_names()) {
        CHECK(metrics[name]["values"].size() == 2);
        CHECK(metrics[name]["nonincreasing"] == true);
    }
    CHECK(good["sweeps"][0]["linking_signs"] == nlohmann::json::array({-1, -1}));

    // reversed order must trip the nonincreasing flag
    const std::vector<ConvergenceRecord> reversed = {recs[1], recs[0]};
    const auto bad = nlohmann::json::parse(sweep_summary_json({reversed}));
    CHECK(bad["pass"] == false);
    CHECK(bad["sweeps"][0]["metrics"]["hausdorff_to_triangle"]["nonincreasing"] == false);
}

TEST_CASE("fuzz report json") {
    const auto j = nlohmann::json::parse(
        fuzz_to_json({fuzz_crossing_arcs(25, 42), fuzz_hull_diameter(25, 42)}));
    CHECK(j["schema_version"] == 1);
    CHECK(j["pass"] == true);
    CHECK(j["suites"].size() == 2);
    CHECK(j["suites"][0]["suite"] == "crossing_arcs");
    CHECK(j["suites"][0]["violations"] == 0);
}

TEST_CASE("atomic write lands the whole file") {
    const std::string path = "twistcyl_io_scratch.txt";
    const std::string text = "first line\nsecond line\n";
    write_text_atomic(path, text);
    {
        std::ifstream in(path, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == text);
    }
    write_text_atomic(path, "overwritten\n");  // replace, never append
    {
        std::ifstream in(path, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == "overwritten\n");
    }
    CHECK(!std::ifstream(path + ".tmp").good());
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_text_atomic("no_such_dir/x/y.txt", "boom"), std::runtime_error);
}
