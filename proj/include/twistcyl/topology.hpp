#pragma once

// Topological certificates for the embedded cylinder: linking numbers of the
// two boundary curves, convex hulls with diameters, mesh self-intersection
// scans, and the hull bound that forces the bottom boundary to be long.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "twistcyl/embedding.hpp"
#include "twistcyl/geometry.hpp"
#include "twistcyl/rulings.hpp"

namespace twistcyl {

struct LinkingResult {
    double gauss_value = 0.0;    // Gauss integral, exact for polygonal loops
    int crossing_value = 0;      // signed sum over F-over-G crossings
    bool agreed = false;         // round(gauss) == crossings and residue <= 0.05
    bool is_hopf_candidate = false;  // agreed and |crossing_value| == 1
    Vec3 direction;              // projection direction that counted cleanly
    int perturbations = 0;       // directions discarded as non-generic
};

// Exact linking number of two closed polylines via per-segment-pair solid
// angles.  Accepts loops with or without a duplicated closing point.  Throws
// std::invalid_argument if either loop degenerates or the loops come within
// 1e-6 of touching.
double linking_number_gauss(const std::vector<Vec3>& loop_f, const std::vector<Vec3>& loop_g);

// Signed crossings of the projections along `direction`, counting only spots
// where F passes over G; equals the linking number for a generic direction.
// Throws std::runtime_error (message starts "non-generic direction") when a
// crossing is too close to a segment endpoint or two segments are parallel
// and overlapping in projection.
int linking_number_crossings(const std::vector<Vec3>& loop_f, const std::vector<Vec3>& loop_g,
                             const Vec3& direction);

// Runs both computations, retrying the crossing count along deterministic
// seed-perturbed variations of an irrational base direction (at most 10).
LinkingResult linking_numbers(const std::vector<Vec3>& loop_f, const std::vector<Vec3>& loop_g,
                              std::uint64_t seed = 20260815ull);

struct HullResult {
    std::vector<Vec3> vertices;             // extreme points of the input
    std::vector<std::array<int, 3>> faces;  // outward triangles (rank 3 only)
    int rank = -1;                          // affine rank of the point set
    double diameter_set = 0.0;
    double diameter_hull = 0.0;
};

// Convex hull (quickhull) plus exact pairwise diameters of the input set and
// of the hull vertices.  Degenerate inputs yield rank < 3: a convex polygon,
// a segment, or a single point.
HullResult hull_and_diameter(const std::vector<Vec3>& points);

// Distance from p to the hull as a solid body; 0 when p lies inside (or on)
// it.  Rank < 3 hulls measure distance to the polygon / segment / point.
double hull_distance(const HullResult& hull, const Vec3& p);

struct SelfIntersectionResult {
    bool intersects = false;
    double min_separation = 0.0;  // over pairs at domain distance >= exclusion
    double exclusion_radius = 0.0;
    std::array<int, 2> intersecting_pair{-1, -1};  // triangle indices, if any
    std::array<int, 2> closest_pair{-1, -1};
};

// Scans a welded surface mesh for triangle-triangle contact (pairs sharing a
// vertex are skipped) and measures the closest approach between patches that
// are far apart in the flat cylinder metric.
SelfIntersectionResult self_intersection(const SurfaceMesh& mesh, double exclusion_radius = 0.2);

struct HullBoundCertificate {
    Vec3 x;                   // point of F inside (or nearly inside) Hull(G)
    Vec3 y;                   // other endpoint of the bend through x
    double t_at_x = 0.0;      // foliation parameter of that bend
    double dist_x_hull = 0.0;
    double dist_xy = 0.0;
    double diam_g = 0.0;
    double length_g = 0.0;
    double lambda = 0.0;
    double tol = 0.0;         // 1e-3 x loop discretization step
    bool pass = false;
    std::string message;
};

// Certificate for the hull argument: locates x in F within `tol` of Hull(G)
// (refining along the loop's segments), follows the bend through x to its
// endpoint y on the other boundary, and checks ||x - y|| >= 0.99,
// diam(G) >= 0.99 and len(G) = lambda >= 2.  Throws std::runtime_error
// ("F misses Hull(G)") if no point of F comes close enough.
HullBoundCertificate hull_bound_certificate(const BoundaryLoop& loop_f, const BoundaryLoop& loop_g,
                                            const BendFoliation& foliation);

std::string hull_bound_to_json(const HullBoundCertificate& cert);

}  // namespace twistcyl
