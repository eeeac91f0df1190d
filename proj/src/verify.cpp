#include "twistcyl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistcyl/flat_domain.hpp"
#include "twistcyl/rng.hpp"

namespace twistcyl {

namespace {

// Canonical Hopf pair used as the base of the linking fuzz suite; the two
// rings link once with negative sign in our convention.
std::vector<Vec3> hopf_ring(int n, bool second) {
    std::vector<Vec3> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        if (second)
            pts.push_back({1.0 + std::cos(t), 0.0, std::sin(t)});
        else
            pts.push_back({std::cos(t), std::sin(t), 0.0});
    }
    return pts;
}

}  // namespace

BendStructureReport bend_structure_report(const BendFoliation& foliation, int probes,
                                          double chord_tol, double length_tol) {
    if (probes < 2) throw std::invalid_argument("bend probe count must be at least 2");
    BendStructureReport rep;
    rep.min_length = 1e300;

    std::vector<double> ts;
    for (int i = 0; i < probes; ++i) ts.push_back(foliation.lambda * i / probes);
    // knots and knot midpoints: the piecewise-linear family is extremal there
    const auto& breaks = foliation.family.breaks;
    for (size_t k = 0; k < breaks.size(); ++k) {
        ts.push_back(breaks[k].t);
        if (k + 1 < breaks.size()) ts.push_back(0.5 * (breaks[k].t + breaks[k + 1].t));
    }

    for (double t : ts) {
        const double dev = foliation.straightness_defect(t);
        const double len = foliation.bend_length(t);
        ++rep.probes;
        if (dev > rep.max_chord_deviation) {
            rep.max_chord_deviation = dev;
            rep.worst_chord_t = t;
        }
        if (len < rep.min_length) {
            rep.min_length = len;
            rep.shortest_t = t;
        }
    }
    rep.pass = rep.max_chord_deviation <= chord_tol && rep.min_length >= 1.0 - length_tol;
    return rep;
}

namespace {

void run_certificate_chain(const CylinderEmbedding& e, const VerifyConfig& config,
                           CertificateBundle& b) {
    auto fail = [&b](const std::string& what) { b.failures.push_back(what); };

    b.isometry = isometry_report(e, config.grid_resolution, config.seed);
    if (b.isometry.max_gram_defect > config.gram_tol)
        fail("isometry: max gram defect " + std::to_string(b.isometry.max_gram_defect));
    b.seam = seam_defect(e);
    b.junction = junction_defect(e);

    const SurfaceMesh mesh = triangulate(e, config.grid_resolution);
    b.embedded = self_intersection(mesh);
    const double required_sep =
        std::max(config.min_separation_factor * b.layer_gap, 1e-12);
    b.embedded_pass = !b.embedded.intersects && b.embedded.min_separation >= required_sep;
    if (!b.embedded_pass)
        fail(b.embedded.intersects ? "self-intersection: surface intersects itself"
                                   : "self-intersection: layers closer than " +
                                         std::to_string(required_sep));

    const auto [loop_f, loop_g] = boundary_loops(e, config.loop_samples);
    try {
        b.linking = linking_numbers(loop_f.points, loop_g.points);
        b.linking_checked = true;
        const bool hopf = b.linking.agreed && std::abs(b.linking.crossing_value) == 1 &&
                          std::abs(b.linking.gauss_value - b.linking.crossing_value) <=
                              config.linking_tol;
        if (!hopf) {
            b.linking_note = "methods disagree or linking is not +-1";
            fail("linking: " + b.linking_note);
        }
    } catch (const std::exception& ex) {
        b.linking_checked = false;
        b.linking_note = ex.what();
        fail("linking: " + b.linking_note);
    }

    const BendFoliation fol = bend_foliation(e);
    b.frame = find_balanced_pair(fol, config.scan_samples);
    for (double arc : b.frame.arc_lengths)
        b.arc_imbalance = std::max(b.arc_imbalance, std::abs(arc - 0.5 * b.lambda));
    if (b.arc_imbalance > config.arc_tol * b.lambda)
        fail("balanced pair: arc imbalance " + std::to_string(b.arc_imbalance));
    for (int i = 0; i < 256; ++i) {
        const double t = 0.5 * b.lambda * i / 256;
        b.antisymmetry = std::max(b.antisymmetry,
                                  std::abs(fol.family.balance_defect(t) +
                                           fol.family.balance_defect(t + 0.5 * b.lambda)));
    }
    if (b.antisymmetry > config.antisymmetry_tol)
        fail("balanced pair: antisymmetry defect " + std::to_string(b.antisymmetry));

    b.projection = projection_certificate(e, b.frame, config.projection_samples);
    b.chain_floor = 2.0 - config.chain_slack;
    const double chain = b.projection.len_c1 + b.projection.len_c2;
    if (!b.projection.holds)
        fail("projection chain: " + b.projection.message);
    else if (b.lambda < chain - 1e-9 || chain < b.chain_floor)
        fail("projection chain: lambda >= len(C1)+len(C2) >= 2 - slack violated");

    b.hull = hull_bound_certificate(loop_f, loop_g, fol);
    if (!b.hull.pass) fail("hull bound: " + b.hull.message);
    if (b.hull.diam_g > 0.5 * b.hull.length_g + 1e-9)
        fail("hull bound: loop diameter exceeds half its length");

    b.endgame = endgame_certificate(b.frame, e);
    if (std::abs(b.endgame.theta_variant - (kPi - b.endgame.theta)) > 1e-9)
        fail("endgame: variant angle inconsistent");

    b.bigon = bigon_certificate(loop_f, loop_g, fol, b.hull);
    if (!b.bigon.pass) fail("bigon: " + b.bigon.message);

    b.bends = bend_structure_report(fol, config.bend_probes, config.bend_chord_tol,
                                    config.bend_length_tol);
    if (!b.bends.pass)
        fail("bends: chord deviation " + std::to_string(b.bends.max_chord_deviation) +
             ", min length " + std::to_string(b.bends.min_length));
}

}  // namespace

CertificateBundle verify_cylinder(const std::string& pattern_id, double epsilon,
                                  const VerifyConfig& config) {
    CertificateBundle b;
    b.pattern_id = pattern_id;
    b.fixture = epsilon == 0.0 || config.layer_gap == 0.0;

    const CreasePattern pattern = pattern_catalog(pattern_id);
    CylinderEmbedding e;
    if (b.fixture) {
        e = make_limit_embedding(pattern);
        b.epsilon = 0.0;
    } else {
        const double gap = config.layer_gap < 0.0 ? default_layer_gap(epsilon) : config.layer_gap;
        e = assemble(thicken(pattern, epsilon), gap);
        b.epsilon = epsilon;
    }
    b.lambda = e.lambda();
    b.layer_gap = e.layer_gap;
    b.smoothness_class = e.smoothness_class;

    // A throwing certificate is a verification failure, not a configuration
    // error; the bundle reports it instead of propagating.
    try {
        run_certificate_chain(e, config, b);
    } catch (const std::exception& ex) {
        b.failures.push_back(std::string("certificate chain aborted: ") + ex.what());
    }

    b.pass = b.failures.empty();
    return b;
}

FuzzReport fuzz_crossing_arcs(int trials, unsigned seed, double tol) {
    if (trials < 0) throw std::invalid_argument("trial count must be nonnegative");
    FuzzReport rep{"crossing_arcs", trials, 0, 1e300, seed, tol, ""};
    if (trials == 0) {
        rep.worst_margin = 0.0;
        return rep;
    }
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        auto rand_segment = [&rng] {
            const Vec2 p{rng.uniform(-3, 3), rng.uniform(-3, 3)};
            const double ang = rng.uniform(0, 2 * kPi);
            const double len = 1.0 + 2.0 * rng.uniform();
            return std::array<Vec2, 2>{p, p + len * Vec2{std::cos(ang), std::sin(ang)}};
        };
        const auto A = rand_segment();
        const auto B = rand_segment();
        const Vec2 shared{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        auto arc_through = [&](const Vec2& from, const Vec2& to) {
            std::vector<Vec2> c{from};
            for (int i = rng.uniform_int(3); i > 0; --i)
                c.push_back({rng.uniform(-4, 4), rng.uniform(-4, 4)});
            c.push_back(shared);
            for (int i = rng.uniform_int(3); i > 0; --i)
                c.push_back({rng.uniform(-4, 4), rng.uniform(-4, 4)});
            c.push_back(to);
            if (rng.uniform() < 0.5) std::reverse(c.begin(), c.end());
            return c;
        };
        const int i0 = rng.uniform_int(2);
        const int j0 = rng.uniform_int(2);
        const auto cert = lemma_line_check(A, B, arc_through(A[i0], B[j0]),
                                           arc_through(A[1 - i0], B[1 - j0]), tol);
        const double margin = cert.len_c1 + cert.len_c2 - 2.0;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (!cert.holds || margin < -tol) {
            ++rep.violations;
            if (rep.note.empty())
                rep.note = "trial " + std::to_string(trial) + ": " +
                           (cert.holds ? "sum below 2" : cert.message);
        }
    }
    return rep;
}

FuzzReport fuzz_hull_diameter(int trials, unsigned seed, double tol) {
    if (trials < 0) throw std::invalid_argument("trial count must be nonnegative");
    FuzzReport rep{"hull_diameter", trials, 0, 1e300, seed, tol, ""};
    if (trials == 0) {
        rep.worst_margin = 0.0;
        return rep;
    }
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const int n = 4 + rng.uniform_int(57);
        const double scale = 0.5 + 2.5 * rng.uniform();
        const Vec3 o{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const Vec3 u = rng.unit_vector3();
        Vec3 v = rng.unit_vector3();
        v = normalized(v - dot(v, u) * u);
        std::vector<Vec3> pts;
        pts.reserve(n);
        const int mode = trial % 4;
        for (int i = 0; i < n; ++i) {
            Vec3 p;
            switch (mode) {
                case 0:  // full rank
                    p = o + scale * Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                         rng.uniform(-1, 1)};
                    break;
                case 1:  // coplanar
                    p = o + scale * (rng.uniform(-1, 1) * u + rng.uniform(-1, 1) * v);
                    break;
                case 2:  // collinear
                    p = o + scale * rng.uniform(-1, 1) * u;
                    break;
                default:  // thin slab, near rank 2
                    p = o + scale * (rng.uniform(-1, 1) * u + rng.uniform(-1, 1) * v) +
                        1e-9 * rng.uniform(-1, 1) * cross(u, v);
            }
            pts.push_back(p);
        }
        const HullResult hull = hull_and_diameter(pts);
        const double diff = std::abs(hull.diameter_set - hull.diameter_hull);
        rep.worst_margin = std::min(rep.worst_margin, tol - diff);
        if (diff > tol) {
            ++rep.violations;
            if (rep.note.empty())
                rep.note = "trial " + std::to_string(trial) + ": diameters differ by " +
                           std::to_string(diff);
        }
    }
    return rep;
}

FuzzReport fuzz_linking_agreement(int trials, unsigned seed) {
    if (trials < 0) throw std::invalid_argument("trial count must be nonnegative");
    FuzzReport rep{"linking_agreement", trials, 0, 1e300, seed, 0.05, ""};
    if (trials == 0) {
        rep.worst_margin = 0.0;
        return rep;
    }
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const int n = 24 + rng.uniform_int(73);
        auto f = hopf_ring(n, false);
        auto g = hopf_ring(n, true);
        const bool mirror = trial % 2 == 1;
        const Mat3 rot = rng.rotation3();
        const double scale = 0.3 + 2.7 * rng.uniform();
        const Vec3 shift{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        // jitter well under half the rings' clearance, scaled with the pair
        const double jitter = 0.05 * scale;
        for (auto* loop : {&f, &g})
            for (Vec3& p : *loop) {
                if (mirror) p.x = -p.x;
                p = scale * rot.apply(p) + shift + jitter * rng.unit_vector3();
            }
        const int expected = mirror ? 1 : -1;
        const LinkingResult lk = linking_numbers(f, g, seed + trial);
        const double margin = 0.05 - std::abs(lk.gauss_value - lk.crossing_value);
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (!lk.agreed || lk.crossing_value != expected || margin < 0.0) {
            ++rep.violations;
            if (rep.note.empty())
                rep.note = "trial " + std::to_string(trial) + ": crossings " +
                           std::to_string(lk.crossing_value) + ", gauss " +
                           std::to_string(lk.gauss_value) + ", expected " +
                           std::to_string(expected);
        }
    }
    return rep;
}

}  // namespace twistcyl
