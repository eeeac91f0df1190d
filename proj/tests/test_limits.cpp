#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "twistcyl/embedding.hpp"
#include "twistcyl/limits.hpp"
#include "twistcyl/rng.hpp"
#include "twistcyl/rulings.hpp"
#include "twistcyl/topology.hpp"

using namespace twistcyl;

namespace {

Mat3 axis_angle(const Vec3& axis, double ang) {
    const Vec3 u = normalized(axis);
    const double c = std::cos(ang), s = std::sin(ang);
    Mat3 r;
    r.m[0][0] = c + u.x * u.x * (1 - c);
    r.m[0][1] = u.x * u.y * (1 - c) - u.z * s;
    r.m[0][2] = u.x * u.z * (1 - c) + u.y * s;
    r.m[1][0] = u.y * u.x * (1 - c) + u.z * s;
    r.m[1][1] = c + u.y * u.y * (1 - c);
    r.m[1][2] = u.y * u.z * (1 - c) - u.x * s;
    r.m[2][0] = u.z * u.x * (1 - c) - u.y * s;
    r.m[2][1] = u.z * u.y * (1 - c) + u.x * s;
    r.m[2][2] = c + u.z * u.z * (1 - c);
    return r;
}

// Lattice over the corner triangle {x >= 0, y >= 0, x + y <= 1}, spacing 1/k.
std::vector<Vec3> corner_triangle_cloud(int k) {
    std::vector<Vec3> pts;
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k - i; ++j) pts.push_back({double(i) / k, double(j) / k, 0.0});
    return pts;
}

std::vector<Vec3> posed(const std::vector<Vec3>& pts, const Mat3& r, const Vec3& t) {
    std::vector<Vec3> out;
    out.reserve(pts.size());
    for (const Vec3& p : pts) out.push_back(r.apply(p) + t);
    return out;
}

std::vector<Vec3> helix_cloud(int n = 200) {
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) {
        const double t = 0.07 * i;
        pts.push_back({std::cos(t), std::sin(t), 0.11 * t});
    }
    return pts;
}

CylinderEmbedding quick(const std::string& id, double eps) {
    return assemble(thicken(pattern_catalog(id), eps), default_layer_gap(eps));
}

double corner_mismatch(const TriangleFit& fit, const std::vector<Vec3>& corners) {
    const std::array<Vec3, 3> fitted = {fit.vertex, fit.vertex + fit.leg_length * fit.leg1,
                                        fit.vertex + fit.leg_length * fit.leg2};
    double worst = 0.0;
    for (const Vec3& c : corners) {
        double best = 1e300;
        for (const Vec3& f : fitted) best = std::min(best, norm(c - f));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

TEST_CASE("exact triangle cloud is recovered in any pose") {
    const auto base = corner_triangle_cloud(40);  // 861 samples
    const Mat3 r = axis_angle({1, 2, 3}, 0.83);
    const Vec3 t{3, -1, 2};
    const auto cloud = posed(base, r, t);

    const TriangleFit fit = fit_right_isosceles(cloud);
    CHECK(fit.hausdorff <= 1e-9);
    CHECK(std::abs(dot(fit.leg1, fit.leg2)) <= 1e-9);
    CHECK(std::abs(norm(fit.leg1) - 1.0) <= 1e-9);
    CHECK(std::abs(norm(fit.leg2) - 1.0) <= 1e-9);
    CHECK(std::abs(norm(fit.plane_normal) - 1.0) <= 1e-9);
    CHECK(std::abs(dot(fit.leg1, fit.plane_normal)) <= 1e-9);
    CHECK(fit.leg_length == 1.0);

    // The fitted corner set must land on the posed corners (labels may swap).
    const auto corners = posed({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, r, t);
    CHECK(corner_mismatch(fit, corners) <= 1e-7);

    // Symmetric distance is bounded by the lattice spacing, never below the
    // one-sided value.
    CHECK(fit.hausdorff_symmetric >= fit.hausdorff);
    CHECK(fit.hausdorff_symmetric <= 1.0 / 40);
}

TEST_CASE("triangle fit objective is pose invariant") {
    const auto base = corner_triangle_cloud(40);
    const Mat3 r1 = axis_angle({1, 2, 3}, 0.83);
    const Mat3 r2 = axis_angle({-2, 1, 0.4}, 2.21);
    const Vec3 t1{3, -1, 2}, t2{-5, 0.25, 11};

    const TriangleFit e1 = fit_right_isosceles(posed(base, r1, t1));
    const TriangleFit e2 = fit_right_isosceles(posed(base, r2, t2));
    CHECK(std::abs(e1.hausdorff - e2.hausdorff) <= 1e-12);

    // Same intrinsic cloud with noise baked in before posing: the reported
    // misfit may not depend on where the cloud sits in space.
    Rng rng(7u);
    auto noisy = base;
    for (Vec3& p : noisy) p += 1e-3 * rng.unit_vector3();
    const TriangleFit n1 = fit_right_isosceles(posed(noisy, r1, t1));
    const TriangleFit n2 = fit_right_isosceles(posed(noisy, r2, t2));
    CHECK(std::abs(n1.hausdorff - n2.hausdorff) <= 1e-12);
    CHECK(n1.hausdorff == doctest::Approx(1.056951815e-3).epsilon(1e-6));
}

TEST_CASE("degenerate clouds are rejected") {
    std::vector<Vec3> line;
    for (int i = 0; i < 200; ++i) line.push_back({0.01 * i, 2.0 * 0.01 * i, -0.01 * i});
    CHECK_THROWS_AS((void)fit_right_isosceles(line), std::invalid_argument);

    const std::vector<Vec3> point(150, Vec3{1, 2, 3});
    CHECK_THROWS_AS((void)fit_right_isosceles(point), std::invalid_argument);

    const auto sparse = corner_triangle_cloud(8);  // 45 samples, below the floor
    CHECK_THROWS_AS((void)fit_right_isosceles(sparse), std::invalid_argument);
}

TEST_CASE("alignment recovers rigid motions and reflections") {
    const auto target = helix_cloud();
    const Mat3 r = axis_angle({1, 2, 3}, 0.83);
    CHECK(sup_distance_after_alignment(posed(target, r, {3, -1, 2}), target) <= 1e-9);

    std::vector<Vec3> mirrored;
    for (const Vec3& p : target) mirrored.push_back({p.x, -p.y, p.z});
    CHECK(sup_distance_after_alignment(mirrored, target) <= 1e-9);

    // Residual against a genuinely different cloud is pose independent.
    auto bumped = target;
    Rng rng(9u);
    for (Vec3& p : bumped) p += 0.05 * rng.unit_vector3();
    const double direct = sup_distance_after_alignment(target, bumped);
    const double moved =
        sup_distance_after_alignment(posed(target, axis_angle({-2, 1, 0.4}, 2.21), {-5, 0.25, 11}), bumped);
    CHECK(direct == doctest::Approx(5.706189861e-2).epsilon(1e-6));
    CHECK(std::abs(direct - moved) <= 1e-9);

    CHECK_THROWS_AS((void)sup_distance_after_alignment(target, helix_cloud(17)), std::invalid_argument);
}

TEST_CASE("limit fixtures measure at the noise floor") {
    for (const char* id : {"P1", "P2"}) {
        CAPTURE(id);
        const ConvergenceRecord rec = measure_limit_fixture(id);
        CHECK(rec.epsilon == 0.0);
        CHECK(rec.linking_sign == 0);
        const auto vals = rec.metrics();
        for (int i = 0; i < ConvergenceRecord::kMetricCount; ++i) {
            CAPTURE(ConvergenceRecord::metric_names()[i]);
            CHECK(vals[i] <= 1e-9);
        }
        CHECK(rec.max_gram_defect <= 1e-12);
        CHECK(rec.cross_x_distance <= 1e-9);
    }
}

TEST_CASE("endgame certificate reports the frame angle") {
    const auto e = quick("P1", 0.05);
    const BendFoliation fol = bend_foliation(e);
    const BalancedPairFrame frame = find_balanced_pair(fol, 512);
    const EndgameCertificate cert = endgame_certificate(frame, e);

    CHECK(cert.theta_defect == doctest::Approx(1.455160918608e-2).epsilon(1e-6));
    CHECK(std::abs(cert.theta_variant - (kPi - cert.theta)) <= 1e-12);
    CHECK(cert.square_division_defect == doctest::Approx(0.025).epsilon(1e-9));
    for (double d : cert.arc_defects) {
        CHECK(d >= 0.0);
        CHECK(d <= cert.square_division_defect + 1e-15);
    }
    CHECK(cert.perp_defect <= cert.square_division_defect + 1e-15);

    BalancedPairFrame broken = frame;
    broken.c = broken.a;  // collapse one diagonal
    CHECK_THROWS_AS((void)endgame_certificate(broken, e), std::invalid_argument);

    const auto other = quick("P1", 0.3);  // frame points evaluate elsewhere
    CHECK_THROWS_AS((void)endgame_certificate(frame, other), std::invalid_argument);
}

TEST_CASE("bigon certificate matches both boundary loops") {
    const auto e = quick("P1", 0.05);
    const auto [loop_f, loop_g] = boundary_loops(e, 1024);
    const BendFoliation fol = bend_foliation(e);

    const BigonCertificate cert = bigon_certificate(loop_f, loop_g, fol);
    CHECK(cert.pass);
    CHECK(cert.dist_yz >= 0.99);
    CHECK(cert.halfspace_depth >= -1e-9);
    CHECK(cert.defect_yz == doctest::Approx(1.185815221082e-2).epsilon(1e-6));
    CHECK(cert.g_hausdorff == doctest::Approx(7.429290188241e-3).epsilon(1e-6));
    CHECK(cert.f_hausdorff == doctest::Approx(1.677992728147e-2).epsilon(1e-6));
    CHECK(cert.defect_wz <= 1e-12);  // the seam bend keeps unit length exactly

    // Passing the hull certificate explicitly must not change anything.
    const HullBoundCertificate hull = hull_bound_certificate(loop_f, loop_g, fol);
    const BigonCertificate again = bigon_certificate(loop_f, loop_g, fol, hull);
    CHECK(again.dist_yz == cert.dist_yz);
    CHECK(again.t_at_z == cert.t_at_z);
    CHECK(again.g_hausdorff == cert.g_hausdorff);

    // A plane pushed far past the surface leaves no admissible z.
    HullBoundCertificate doctored = hull;
    doctored.x = {0, 0, 100};
    doctored.y = {0, 0, 99};
    CHECK_THROWS_AS((void)bigon_certificate(loop_f, loop_g, fol, doctored), std::runtime_error);
}

TEST_CASE("epsilon sweep halves every principal metric") {
    const std::vector<double> eps = {0.5, 0.2, 0.1, 0.05};
    const auto recs = sweep("P1", eps);
    REQUIRE(recs.size() == 4);

    for (size_t k = 0; k < recs.size(); ++k) {
        CHECK(recs[k].epsilon == eps[k]);
        CHECK(recs[k].linking_sign == 1);
        CHECK(recs[k].max_gram_defect <= 1e-12);
        CHECK(recs[k].min_separation == doctest::Approx(eps[k] / 40).epsilon(1e-9));
        CHECK(recs[k].cross_x_distance <= eps[k] / 20);  // witness-gap envelope
    }

    for (int m = 0; m < ConvergenceRecord::kMetricCount; ++m) {
        CAPTURE(ConvergenceRecord::metric_names()[m]);
        for (size_t k = 1; k < recs.size(); ++k)
            CHECK(recs[k].metrics()[m] <= 1.1 * recs[k - 1].metrics()[m] + 1e-12);
        CHECK(recs.back().metrics()[m] <= 0.5 * recs.front().metrics()[m] + 1e-12);
    }
    for (size_t k = 1; k < recs.size(); ++k)
        CHECK(recs[k].hausdorff_to_triangle < recs[k - 1].hausdorff_to_triangle);

    // Pin the endpoints of the sweep.
    const std::array<double, 8> at_half = {8.030842408820e-2, 1.630927975763e-1, 1.373025903744e-1,
                                           2.500000000000e-1, 7.372574561815e-2, 1.678390607235e-1,
                                           1.207112118566e-1, 0.0};
    const std::array<double, 8> at_twentieth = {5.482039143886e-3, 1.911058015999e-2, 1.455160918608e-2,
                                                2.500000000000e-2, 7.429290188241e-3, 1.677992728147e-2,
                                                1.185815221082e-2, 0.0};
    for (int m = 0; m < 7; ++m) {
        CAPTURE(ConvergenceRecord::metric_names()[m]);
        CHECK(recs.front().metrics()[m] == doctest::Approx(at_half[m]).epsilon(1e-6));
        CHECK(recs.back().metrics()[m] == doctest::Approx(at_twentieth[m]).epsilon(1e-6));
    }
    CHECK(recs.front().bigon_defect_wz <= 1e-12);
    CHECK(recs.back().bigon_defect_wz <= 1e-12);

    // Roughly first-order decay overall.
    std::vector<double> haus;
    for (const auto& r : recs) haus.push_back(r.hausdorff_to_triangle);
    const double slope = fitted_decay_exponent(eps, haus);
    CHECK(slope >= 0.9);
    CHECK(slope <= 1.4);
}

TEST_CASE("single-record sweep composes with the direct measurement") {
    const auto recs = sweep("P1", {0.2});
    REQUIRE(recs.size() == 1);
    const ConvergenceRecord direct = convergence_record("P1", 0.2);
    for (int m = 0; m < ConvergenceRecord::kMetricCount; ++m)
        CHECK(recs[0].metrics()[m] == direct.metrics()[m]);
    CHECK(recs[0].cross_x_distance == direct.cross_x_distance);
    CHECK(recs[0].linking_sign == direct.linking_sign);
}

TEST_CASE("mirror patterns measure identically with opposite linking") {
    const ConvergenceRecord plain = convergence_record("P1", 0.2);
    const ConvergenceRecord mirror = convergence_record("P1m", 0.2);
    for (int m = 0; m < ConvergenceRecord::kMetricCount; ++m) {
        CAPTURE(ConvergenceRecord::metric_names()[m]);
        CHECK(std::abs(plain.metrics()[m] - mirror.metrics()[m]) <= 1e-8);
    }
    CHECK(plain.linking_sign == 1);
    CHECK(mirror.linking_sign == -1);
}

TEST_CASE("sweep input validation") {
    CHECK_THROWS_AS((void)sweep("P1", {}), std::invalid_argument);
    CHECK_THROWS_AS((void)sweep("P1", {0.2, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS((void)sweep("P1", {0.2, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS((void)sweep("P1", {0.6, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS((void)convergence_record("P1", 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)convergence_record("P1", -0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)convergence_record("P1", 0.51), std::invalid_argument);
    CHECK_THROWS_AS((void)convergence_record("P9", 0.2), std::invalid_argument);
}

TEST_CASE("decay exponent fit") {
    const std::vector<double> eps = {0.5, 0.2, 0.1, 0.05};
    std::vector<double> lin, quad, flat;
    for (double e : eps) {
        lin.push_back(3.7 * e);
        quad.push_back(0.2 * e * e);
        flat.push_back(0.42);
    }
    CHECK(fitted_decay_exponent(eps, lin) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fitted_decay_exponent(eps, quad) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fitted_decay_exponent(eps, flat) == doctest::Approx(0.0));
    CHECK(fitted_decay_exponent({0.5}, {1.0}) == 0.0);
    CHECK(fitted_decay_exponent(eps, {3.7 * 0.5, 0.0, 0.0, 0.0}) == 0.0);  // one positive pair left
    CHECK_THROWS_AS((void)fitted_decay_exponent(eps, {1.0, 2.0}), std::invalid_argument);
}
