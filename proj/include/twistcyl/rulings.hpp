#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "twistcyl/flat_domain.hpp"

namespace twistcyl {

struct CylinderEmbedding;  // embedding.hpp

// One knot of the piecewise-linear prebend family.  The prebend at midline
// parameter t is the domain segment from (x0, 0) to (x1, 1); t is the x
// coordinate of its midpoint, so t = (x0 + x1) / 2 at every knot.
struct PrebendBreak {
    double t = 0.0;
    double x0 = 0.0;
    double x1 = 0.0;
};

// Continuous family of prebends covering the thickened domain: inside each
// fold band the prebends are the band's parallel rulings, and across each
// flat triangle they fan around the corner shared by the two flanking
// creases.  Endpoints are linear in t between knots, so both endpoint tracks
// are monotone and distinct prebends meet at most at a shared fan corner.
struct PrebendFamily {
    double lambda = 2.0;
    std::vector<PrebendBreak> breaks;  // knots with increasing t, t = 0 and t = lambda included

    double x0(double t) const;  // endpoint track on the y = 0 boundary
    double x1(double t) const;  // endpoint track on the y = 1 boundary
    // Horizontal advance of the prebend from bottom to top, x1 - x0; equals
    // the tangent of its angle against the y-axis.
    double slope(double t) const;
    std::array<Vec2, 2> prebend(double t) const;  // {bottom, top} endpoints
    // f(t) = s(t) - s(t + lambda/2); zero exactly when the prebends at t and
    // t + lambda/2 cut both boundary circles into arcs of length lambda/2.
    double balance_defect(double t) const { return slope(t) - slope(t + 0.5 * lambda); }
};

// Throws "foliation degenerates" if either endpoint track would run backward.
PrebendFamily prebend_family(const ThickenedPattern& thickened);

// Prebend family together with the embedding's evaluation map, so each
// prebend can be carried to its image segment (the bend).
struct BendFoliation {
    PrebendFamily family;
    std::function<Vec3(const Vec2&)> image;
    double lambda = 2.0;

    std::array<Vec3, 2> bend(double t) const;
    // Max distance of interior image samples from the bend's chord.
    double straightness_defect(double t, int n_interior = 32) const;
    double bend_length(double t) const;
};

BendFoliation bend_foliation(const CylinderEmbedding& embedding);

// The two bends u (at t*) and v (at t* + lambda/2) whose boundary arcs all
// have length lambda/2, with their endpoints labelled: a and b are the ends
// of u on the y = 1 and y = 0 boundary components, c and d the same for v.
struct BalancedPairFrame {
    double t_star = 0.0;
    std::array<Vec2, 2> u_prime, v_prime;  // prebends, {bottom, top}
    std::array<Vec3, 2> u, v;              // bends, {bottom, top}
    Vec3 a, b, c, d;
    Vec2 a_prime, b_prime, c_prime, d_prime;
    // arcs cut from the y = 1 boundary (a to c, c to a) then the y = 0
    // boundary (b to d, d to b), measured in the flat metric
    std::array<double, 4> arc_lengths{};
    double balance_residual = 0.0;  // |f(t*)|
    int bisection_iterations = 0;
};

BalancedPairFrame find_balanced_pair(const BendFoliation& foliation, int n_scan = 1024,
                                     double tol = 1e-10);

// Plane projection transcript for the aspect-bound chain: project along the
// common normal of u and v, cut the boundary components at the bend
// endpoints, and find arcs whose projections C1, C2 cross so that
// lambda = len(F*) + len(G*) >= len(C1) + len(C2) >= 2 - tol.
struct ProjectionCertificate {
    Vec3 direction;            // unit projection direction
    std::array<Vec2, 2> A, B;  // projected u and v
    std::vector<Vec2> C1, C2;  // projected boundary arcs (C1 from y = 1, C2 from y = 0)
    double len_a = 0.0, len_b = 0.0;
    double len_fstar = 0.0, len_gstar = 0.0;  // flat arc lengths, sum = lambda
    double len_c1 = 0.0, len_c2 = 0.0;
    Vec2 x;  // a crossing point of C1 and C2, projection-plane coordinates
    double lambda = 0.0;
    bool holds = false;
    std::string message;
};

ProjectionCertificate projection_certificate(const CylinderEmbedding& embedding,
                                             const BalancedPairFrame& frame,
                                             int n_samples = 4096);

std::string projection_certificate_to_json(const ProjectionCertificate& cert,
                                           const BalancedPairFrame& frame);

}  // namespace twistcyl
