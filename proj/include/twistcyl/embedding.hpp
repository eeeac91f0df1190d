#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "twistcyl/flat_domain.hpp"
#include "twistcyl/pseudofold.hpp"

namespace twistcyl {

struct ProfileParams {
    int bump_order = 0;  // 0: exponential bump; k >= 1: polynomial bump (t(1-t))^k
    int n_samples = 4096;
};

// Rigid placement of one flat triangle at its stack height.
struct PlanarChart {
    int piece = 0;
    RigidMotion2 motion;  // thickened-domain coordinates -> in-plane image coordinates
    double height = 0.0;
    Triangle2 region;

    Vec3 eval(const Vec2& p) const {
        const Vec2 q = motion.apply(p);
        return {q.x, q.y, height};
    }
};

// Fold band realized as a U-profile swept along the crease direction.
struct BandChart {
    int band = 0;
    Vec2 base;  // point on the upstream band edge
    Vec2 n, u;  // unit normal into the band / unit ruling direction (domain)
    double width = 0.0;
    PseudofoldChart chart;

    double s_at(const Vec2& p) const { return dot(p - base, n); }
    double r_at(const Vec2& p) const { return dot(p - base, u); }
    Vec3 eval(const Vec2& p) const;
};

// 3x2 Jacobian; columns are the images of the domain unit axes.
struct Mat32 {
    Vec3 c0, c1;
    // Operator norm of J^T J - I_2 (largest |eigenvalue| of the symmetric gap).
    double gram_defect() const;
};

enum class RegionKind { flat, band };
struct RegionRef {
    RegionKind kind = RegionKind::flat;
    int index = 0;
};

struct CylinderEmbedding {
    ThickenedPattern thickened;
    double layer_gap = 0.0;
    ProfileParams profile_params;
    std::array<PlanarChart, 4> flat_charts;
    std::array<BandChart, 4> band_charts;  // band_charts[k] joins piece k to piece k+1
    std::array<double, 4> layer_height{};  // per piece
    bool has_bands = true;                 // false for the degenerate flat-folded map
    std::string smoothness_class;          // junction regularity of the assembled surface
    double closure_defect = 0.0;           // seam chart mismatch after walking the chain

    double lambda() const { return thickened.domain.lambda; }
    RegionRef locate(const Vec2& p) const;  // x is wrapped; total (nearest region wins)
    Vec3 eval(const Vec2& p) const;
    Mat32 eval_differential(const Vec2& p) const;
};

// Places the four triangles at stack heights 0, gap, 2*gap, 3*gap (in stack
// order) and fills each fold band with the U-profile spanning its height
// step.  Throws "ε budget insufficient for requested layer_gap" when a band
// is too narrow for its step, and "chart continuity violation" if the chain
// fails to close across the seam.
CylinderEmbedding assemble(const ThickenedPattern& thickened, double layer_gap,
                           const ProfileParams& params = {});

// Shipped gap: under the tucked stacking the widest wall spans two gaps and
// a band of width ε/(2 + 2√2) can lift at most ~0.433 of its width, so gaps
// up to ~ε/22.3 fit; ε/40 keeps a comfortable squeeze margin.
inline double default_layer_gap(double epsilon) { return epsilon / 40.0; }

// Degenerate flat-folded map on the aspect-2 domain: every triangle in the
// z = 0 plane, zero-width bands.  This is the right-isosceles cylinder map.
CylinderEmbedding make_limit_embedding(const CreasePattern& pattern);

struct IsometryReport {
    double max_gram_defect = 0.0;
    Vec2 worst_location;
    double max_fd_error = 0.0;  // relative gap between analytic and finite-difference J
    Vec2 worst_fd_location;
    int grid_points = 0;
    int fd_points = 0;
};

IsometryReport isometry_report(const CylinderEmbedding& embedding, int grid_resolution,
                               unsigned seed = 2026);

enum class BoundarySide { G, F };  // G: y = 0, F: y = 1

struct BoundaryLoop {
    BoundarySide side = BoundarySide::G;
    std::vector<Vec3> points;      // closed polyline, points.front() == points.back()
    std::vector<double> domain_x;  // flat x parameter per sample
    std::vector<double> arc;       // cumulative arc length per sample
    double total_length = 0.0;
};

// Samples both boundary components, refining across the fold bands; returns
// (F, G).
std::pair<BoundaryLoop, BoundaryLoop> boundary_loops(const CylinderEmbedding& embedding,
                                                     int n_samples);

struct SurfaceMesh {
    double lambda = 0.0;       // circumference of the flat domain
    std::vector<Vec3> vertices;
    std::vector<Vec2> domain;  // flat coordinates per vertex
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 3>> neighbors;  // across edge (v[i], v[i+1]); -1 = boundary

    int euler_characteristic() const;
    int boundary_cycle_count() const;
    bool manifold() const;  // every edge shared by at most two triangles, no stray vertices
};

// Structured grid in prebend coordinates (columns follow the foliation, rows
// follow y), welded at fan corners and across the seam.  Band columns are
// refined until chord sagitta stays below layer_gap / 16.
SurfaceMesh triangulate(const CylinderEmbedding& embedding, int grid_resolution);

// Max over mesh edges of |image length / flat length - 1|.
double triangulate_distortion(const CylinderEmbedding& embedding, const SurfaceMesh& mesh);

// sup over y of the gap between the two charts meeting across the seam.
double seam_defect(const CylinderEmbedding& embedding, int n_samples = 256);

// Max chart disagreement over all eight band junction lines.
double junction_defect(const CylinderEmbedding& embedding, int n_samples = 64);

}  // namespace twistcyl
