#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "twistcyl/embedding.hpp"
#include "twistcyl/flat_domain.hpp"

using namespace twistcyl;

namespace {

CylinderEmbedding quick(const std::string& id, double eps) {
    return assemble(thicken(pattern_catalog(id), eps), default_layer_gap(eps));
}

}  // namespace

TEST_CASE("chain closes at the seam for every shipped layout") {
    for (const char* id : {"P1", "P2", "P1m", "P2m"}) {
        const CylinderEmbedding e = quick(id, 0.2);
        CHECK(e.closure_defect <= 1e-9);
        CHECK(e.lambda() == doctest::Approx(2.2));
        // heights follow the stacking permutation
        std::set<double> hs(e.layer_height.begin(), e.layer_height.end());
        CHECK(hs.size() == 4);
        CHECK(*hs.begin() == 0.0);
        CHECK(std::abs(*hs.rbegin() - 3.0 * e.layer_gap) <= 1e-15);
    }
}

TEST_CASE("pointwise isometry: gram defect vanishes, differentials match FD") {
    for (const char* id : {"P1", "P2"}) {
        const CylinderEmbedding e = quick(id, 0.2);
        const IsometryReport rep = isometry_report(e, 64);
        CHECK(rep.grid_points > 5000);
        CHECK(rep.fd_points == 100);
        CHECK(rep.max_gram_defect <= 1e-8);
        CHECK(rep.max_fd_error <= 1e-5);
    }
}

TEST_CASE("gram defect detects a stretched chart") {
    // scale one planar piece by 1.01: the metric error must surface as
    // |1.01^2 - 1| ~ 0.0201 at points of that piece
    CylinderEmbedding e = quick("P1", 0.2);
    for (auto& row : e.flat_charts[0].motion.m)
        for (double& v : row) v *= 1.01;
    const double defect = e.eval_differential({0.3, 0.2}).gram_defect();
    CHECK(defect == doctest::Approx(1.01 * 1.01 - 1.0).epsilon(1e-6));
}

TEST_CASE("fold images of interior points, one per piece") {
    // hand-applied reflections for P1 (identity, then across x+y=1, x=1, x=2)
    const CylinderEmbedding e = make_limit_embedding(pattern_catalog("P1"));
    CHECK(dist(e.eval({0.5, 0.25}), {0.5, 0.25, 0.0}) <= 1e-12);
    CHECK(dist(e.eval({0.9, 0.8}), {0.2, 0.1, 0.0}) <= 1e-12);
    CHECK(dist(e.eval({1.3, 0.5}), {0.5, 0.3, 0.0}) <= 1e-12);
    CHECK(dist(e.eval({1.8, 0.5}), {0.2, 0.5, 0.0}) <= 1e-12);
    CHECK(e.closure_defect <= 1e-12);
}

TEST_CASE("limit embedding is exactly isometric and seam-tight") {
    for (const char* id : {"P1", "P2", "P1m", "P2m"}) {
        const CylinderEmbedding e = make_limit_embedding(pattern_catalog(id));
        const IsometryReport rep = isometry_report(e, 64);
        CHECK(rep.max_gram_defect <= 1e-12);
        CHECK(rep.max_fd_error <= 1e-9);
        CHECK(seam_defect(e) <= 1e-12);
        CHECK(junction_defect(e) <= 1e-12);
    }
}

TEST_CASE("charts agree along band junction lines and the seam") {
    for (const char* id : {"P1", "P2m"}) {
        const CylinderEmbedding e = quick(id, 0.2);
        CHECK(seam_defect(e) <= 1e-9);
        CHECK(junction_defect(e) <= 1e-9);
    }
}

TEST_CASE("layer budget rejects an oversized gap") {
    const ThickenedPattern tp = thicken(pattern_catalog("P1"), 0.1);
    CHECK_THROWS_AS(assemble(tp, 0.1), std::runtime_error);
    CHECK_THROWS_AS(assemble(tp, 0.1 / 8.0), std::runtime_error);
    CHECK_NOTHROW(assemble(tp, default_layer_gap(0.1)));
}

TEST_CASE("boundary loops close up and their length converges to lambda") {
    const CylinderEmbedding e = quick("P1", 0.2);
    const double lam = e.lambda();
    double prev_f = 0.0;
    for (int n : {512, 1024, 2048}) {
        const auto [f, g] = boundary_loops(e, n);
        CHECK(dist(f.points.front(), f.points.back()) <= 1e-15);
        CHECK(dist(g.points.front(), g.points.back()) <= 1e-15);
        // the image curve is the isometric image of a circle of length lambda,
        // so inscribed polylines approach lambda from below
        CHECK(f.total_length <= lam + 1e-9);
        CHECK(g.total_length <= lam + 1e-9);
        CHECK(f.total_length >= lam - 2e-3);
        CHECK(f.total_length >= prev_f - 1e-12);
        prev_f = f.total_length;
        for (size_t i = 1; i + 1 < f.domain_x.size(); ++i) CHECK(f.domain_x[i] > f.domain_x[i - 1]);
    }
    const auto [f, g] = boundary_loops(e, 4096);
    CHECK(f.total_length == doctest::Approx(lam).epsilon(1e-4));
    CHECK(g.total_length == doctest::Approx(lam).epsilon(1e-4));
}

TEST_CASE("triangulation is a closed-band manifold mesh") {
    for (const char* id : {"P1", "P2"}) {
        const CylinderEmbedding e = quick(id, 0.2);
        const SurfaceMesh mesh = triangulate(e, 48);
        CHECK(mesh.manifold());
        CHECK(mesh.euler_characteristic() == 0);
        CHECK(mesh.boundary_cycle_count() == 2);
        CHECK(mesh.triangles.size() > 1000);
        for (const Vec2& p : mesh.domain) {
            CHECK(p.x >= -1e-12);
            CHECK(p.x < e.lambda());
            CHECK(p.y >= 0.0);
            CHECK(p.y <= 1.0);
        }
    }
}

TEST_CASE("mesh stays inside the folded slab") {
    const double eps = 0.2;
    const CylinderEmbedding e = quick("P1", eps);
    const SurfaceMesh mesh = triangulate(e, 48);
    double zlo = 1e300, zhi = -1e300, xy = 0.0;
    for (const Vec3& v : mesh.vertices) {
        zlo = std::min(zlo, v.z);
        zhi = std::max(zhi, v.z);
        xy = std::max({xy, std::abs(v.x), std::abs(v.y)});
    }
    CHECK(zlo >= -1e-12);
    CHECK(zhi <= 3.0 * e.layer_gap + 1e-12);  // lift is monotone inside a turn
    CHECK(xy <= 1.0 + eps);                   // bulges stay near the unit triangle
}

TEST_CASE("edge distortion shrinks quadratically with refinement") {
    const CylinderEmbedding e = quick("P1", 0.2);
    const double d1 = triangulate_distortion(e, triangulate(e, 32));
    const double d2 = triangulate_distortion(e, triangulate(e, 64));
    CHECK(d1 < 0.2);
    CHECK(d2 < d1 / 2.5);  // ~h^2
}

TEST_CASE("limit triangulation stays flat and degenerate-free") {
    const CylinderEmbedding e = make_limit_embedding(pattern_catalog("P2"));
    const SurfaceMesh mesh = triangulate(e, 32);
    CHECK(mesh.manifold());
    CHECK(mesh.euler_characteristic() == 0);
    CHECK(mesh.boundary_cycle_count() == 2);
    for (const Vec3& v : mesh.vertices) CHECK(std::abs(v.z) <= 1e-15);
    CHECK(triangulate_distortion(e, mesh) <= 1e-9);
}
