#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "twistcyl/embedding.hpp"
#include "twistcyl/flat_domain.hpp"
#include "twistcyl/rng.hpp"
#include "twistcyl/rulings.hpp"

using namespace twistcyl;

TEST_CASE("prebend knots reproduce the hand-built table") {
    const double eps = 0.2;
    const double w = eps / (2.0 + 2.0 * std::sqrt(2.0));
    const double r2w = std::sqrt(2.0) * w;
    const ThickenedPattern tp = thicken(pattern_catalog("P1"), eps);
    const PrebendFamily fam = prebend_family(tp);

    REQUIRE(fam.breaks.size() == 9);
    const double expect_t[9] = {0.0,
                                0.5,
                                0.5 + r2w,
                                1.0 + r2w,
                                1.0 + r2w + w,
                                1.5 + r2w + w,
                                1.5 + 2.0 * r2w + w,
                                2.0 + 2.0 * r2w + w,
                                2.0 + eps};
    const double expect_s[9] = {0.0, -1.0, -1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0};
    for (int i = 0; i < 9; ++i) {
        CHECK(fam.breaks[i].t == doctest::Approx(expect_t[i]).epsilon(1e-12));
        CHECK(fam.breaks[i].x1 - fam.breaks[i].x0 ==
              doctest::Approx(expect_s[i]).epsilon(1e-12));
    }
}

TEST_CASE("every prebend is centered on its parameter") {
    // t is the midpoint of (x0, x1); linear knots keep that exact in between
    const ThickenedPattern tp = thicken(pattern_catalog("P2"), 0.34);
    const PrebendFamily fam = prebend_family(tp);
    Rng rng(7);
    double prev_t = 0.0, prev_x0 = -1.0, prev_x1 = -1.0;
    std::vector<double> ts;
    for (int i = 0; i < 1000; ++i) ts.push_back(rng.uniform(0.0, fam.lambda));
    std::sort(ts.begin(), ts.end());
    for (double t : ts) {
        const double m = 0.5 * (fam.x0(t) + fam.x1(t));
        CHECK(std::abs(m - t) <= 1e-12);
        if (prev_x0 >= 0.0) {
            CHECK(fam.x0(t) >= prev_x0 - 1e-12);  // endpoint tracks never back up
            CHECK(fam.x1(t) >= prev_x1 - 1e-12);
        }
        prev_t = t;
        prev_x0 = fam.x0(t);
        prev_x1 = fam.x1(t);
    }
    (void)prev_t;
}

TEST_CASE("slope difference across half the circumference is antisymmetric") {
    const ThickenedPattern tp = thicken(pattern_catalog("P1m"), 0.18);
    const PrebendFamily fam = prebend_family(tp);
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const double t = rng.uniform(0.0, fam.lambda);
        CHECK(std::abs(fam.balance_defect(t) + fam.balance_defect(t + 0.5 * fam.lambda)) <=
              1e-12);
    }
}

TEST_CASE("bends are straight rigid segments") {
    const CylinderEmbedding e =
        assemble(thicken(pattern_catalog("P1"), 0.2), default_layer_gap(0.2));
    const BendFoliation fol = bend_foliation(e);
    std::vector<double> ts;
    for (int i = 0; i < 97; ++i) ts.push_back(fol.lambda * i / 97.0);
    for (const PrebendBreak& b : fol.family.breaks) {
        ts.push_back(b.t);
        ts.push_back(b.t + 1e-7);
        ts.push_back(b.t - 1e-7);
    }
    for (double t : ts) {
        CHECK(fol.straightness_defect(t) <= 1e-8);
        const double ls = std::hypot(fol.family.slope(t), 1.0);
        CHECK(fol.bend_length(t) == doctest::Approx(ls).epsilon(1e-9));
        CHECK(fol.bend_length(t) >= 1.0 - 1e-9);
    }
}

TEST_CASE("straightness probe flags a warped image") {
    const CylinderEmbedding e =
        assemble(thicken(pattern_catalog("P1"), 0.2), default_layer_gap(0.2));
    BendFoliation fol = bend_foliation(e);
    fol.image = [](const Vec2& p) {
        return Vec3{p.x, p.y, 0.05 * std::sin(3.0 * p.y)};
    };
    CHECK(fol.straightness_defect(0.25) > 1e-3);
}

TEST_CASE("balanced pair sits on the seam and cuts equal arcs") {
    for (const char* id : {"P1", "P2", "P1m", "P2m"}) {
        const double eps = 0.2;
        const CylinderEmbedding e =
            assemble(thicken(pattern_catalog(id), eps), default_layer_gap(eps));
        const BendFoliation fol = bend_foliation(e);
        const BalancedPairFrame frame = find_balanced_pair(fol);
        const double lam = fol.lambda;
        CHECK(std::min(frame.t_star, lam - frame.t_star) <= 1e-9);
        CHECK(frame.balance_residual <= 1e-10);
        for (double arc : frame.arc_lengths)
            CHECK(std::abs(arc - 0.5 * lam) <= 1e-4 * lam);
        CHECK(frame.arc_lengths[0] + frame.arc_lengths[1] ==
              doctest::Approx(lam).epsilon(1e-12));
        CHECK(dist(frame.u[0], frame.b) <= 1e-15);
        CHECK(dist(frame.v[1], frame.c) <= 1e-15);
    }
}

TEST_CASE("degenerate-width family reproduces the one-triangle fold frame") {
    const CylinderEmbedding e = make_limit_embedding(pattern_catalog("P1"));
    const BendFoliation fol = bend_foliation(e);
    const BalancedPairFrame frame = find_balanced_pair(fol);
    CHECK(std::min(frame.t_star, fol.lambda - frame.t_star) <= 1e-12);
    // one bend is the seam edge, the other folds onto the bottom leg
    CHECK(dist(frame.u[0], {0.0, 0.0, 0.0}) <= 1e-12);
    CHECK(dist(frame.u[1], {0.0, 1.0, 0.0}) <= 1e-12);
    CHECK(dist(frame.v[0], {1.0, 0.0, 0.0}) <= 1e-12);
    CHECK(dist(frame.v[1], {0.0, 0.0, 0.0}) <= 1e-12);
    CHECK(dist(frame.b, frame.c) <= 1e-12);  // shared corner in the image
    CHECK(norm(frame.a_prime - frame.d_prime) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("projected arcs cross and certify the circumference chain") {
    for (const char* id : {"P1", "P2", "P1m", "P2m"}) {
        for (double eps : {0.2, 0.05}) {
            const CylinderEmbedding e =
                assemble(thicken(pattern_catalog(id), eps), default_layer_gap(eps));
            const BendFoliation fol = bend_foliation(e);
            const BalancedPairFrame frame = find_balanced_pair(fol);
            const ProjectionCertificate cert = projection_certificate(e, frame);
            CHECK(cert.holds);
            CHECK(cert.len_a >= 1.0 - 1e-9);
            CHECK(cert.len_b >= 1.0 - 1e-9);
            CHECK(cert.len_c1 + cert.len_c2 >= 2.0 - 0.02);
            CHECK(cert.len_c1 + cert.len_c2 <= cert.lambda + 1e-9);
            CHECK(cert.len_fstar + cert.len_gstar ==
                  doctest::Approx(cert.lambda).epsilon(1e-9));
        }
    }
}

TEST_CASE("crossing point sits half a diagonal step from the shared corner") {
    // the first fold slides the chain by width * n, so the image of the
    // second piece's top edge is the vertical line x = width / sqrt(2); it
    // crosses the bottom edge's image (the x-axis) at exactly that offset
    const double eps = 0.2;
    const double w = eps / (2.0 + 2.0 * std::sqrt(2.0));
    const CylinderEmbedding e =
        assemble(thicken(pattern_catalog("P1"), eps), default_layer_gap(eps));
    const BendFoliation fol = bend_foliation(e);
    const BalancedPairFrame frame = find_balanced_pair(fol);
    const ProjectionCertificate cert = projection_certificate(e, frame);
    REQUIRE(cert.holds);
    CHECK(dist(cert.x, cert.A[0]) == doctest::Approx(w / std::sqrt(2.0)).epsilon(1e-6));
}
