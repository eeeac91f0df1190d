#pragma once

#include <array>
#include <string>
#include <vector>

#include "twistcyl/geometry.hpp"

namespace twistcyl {

enum class FoldSign { mountain, valley };

struct Crease {
    Vec2 p0, p1;
    FoldSign sign = FoldSign::mountain;

    Vec2 direction() const { return normalized(p1 - p0); }
};

// Flat cylinder [0, lambda] x [0, 1] with the vertical edges identified.
struct FlatCylinder {
    double lambda = 2.0;

    double wrap(double x) const {
        double r = std::fmod(x, lambda);
        if (r < 0.0) r += lambda;
        return r;
    }
    // distance along the circular x-direction
    double circ_dist(double x0, double x1) const {
        const double d = std::abs(wrap(x0) - wrap(x1));
        return std::min(d, lambda - d);
    }
};

// Four right isosceles triangles (legs 1) tiling the aspect-2 cylinder, in
// chain order along the strip.  triangles[0] is the fixed piece of the folding
// chain; creases[k] joins triangle k to triangle k+1 mod 4, with creases[3]
// lying on the seam (stored on the x = 2 side).  stack_order[k] names the
// triangle at layer k, bottom first; a needle pushed down through the folded
// stack punctures the triangles in reverse stack_order.
// Fold signs are recorded viewing the flat sheet from the +z side of the
// fixed triangle: a crease whose two panels end up with their top faces
// toward each other is a valley.
struct CreasePattern {
    std::string pattern_id;
    std::array<Triangle2, 4> triangles;
    std::array<Crease, 4> creases;
    std::array<int, 4> stack_order{0, 1, 2, 3};
};

// Shipped layouts: P1, P2 and their mirror images P1m, P2m.
CreasePattern pattern_catalog(const std::string& pattern_id);

// Rigid motion the folding chain applies to each triangle: identity on
// triangles[0], and each subsequent piece reflected across the crease chain.
std::array<RigidMotion2, 4> fold_maps(const CreasePattern& pattern);

// Piecewise isometry folding the aspect-2 cylinder onto one right isosceles
// triangle in the z = 0 plane.
Vec3 fold_by_reflections(const CreasePattern& pattern, const Vec2& p);

// Index of the triangle containing p (boundary points resolve to the lowest
// matching index; maps agree there).
int locate_triangle(const std::array<Triangle2, 4>& triangles, const Vec2& p);

enum class WidthRule {
    equal_width,  // same perpendicular width for every band
    equal_axial,  // same axial length consumption for every band
};

struct FoldBand {
    int crease_index = 0;
    Vec2 edge0, edge1;        // upstream edge of the band in the thickened domain
    Vec2 u;                   // unit vector along the crease
    Vec2 n;                   // unit normal pointing downstream (+x side)
    double width = 0.0;       // perpendicular width
    double axial_shift = 0.0; // axial length the band consumes
    FoldSign sign = FoldSign::mountain;
};

// Aspect 2+epsilon domain obtained by cutting the base pattern along each
// crease and sliding the pieces apart along the strip axis, so that each
// crease opens into a parallelogram band of constant perpendicular width.
struct ThickenedPattern {
    CreasePattern base;
    double epsilon = 0.0;
    WidthRule rule = WidthRule::equal_width;
    FlatCylinder domain;
    std::array<Triangle2, 4> flat_regions;  // translated copies of base.triangles
    std::array<FoldBand, 4> bands;          // bands[k] follows flat_regions[k]
    std::array<double, 4> piece_shift;      // x-shift applied to each triangle
};

ThickenedPattern thicken(const CreasePattern& pattern, double epsilon,
                         WidthRule rule = WidthRule::equal_width);

struct LemmaLineCertificate {
    bool holds = false;
    Vec2 x;                       // a point where the two arcs cross
    double len_a = 0, len_b = 0;  // segment lengths
    double len_c1 = 0, len_c2 = 0;
    // sub-lengths of each arc on either side of x
    double len_c1_a = 0, len_c1_b = 0, len_c2_a = 0, len_c2_b = 0;
    std::string message;
};

// Checks the planar two-arc inequality: segments A, B of length >= 1, arcs
// C1, C2 joining complementary endpoints of A and B and crossing each other
// imply len(C1)+len(C2) >= len(A)+len(B) >= 2.
LemmaLineCertificate lemma_line_check(const std::array<Vec2, 2>& A,
                                      const std::array<Vec2, 2>& B,
                                      const std::vector<Vec2>& C1,
                                      const std::vector<Vec2>& C2,
                                      double tol = 1e-9);

std::string pattern_to_json(const CreasePattern& pattern);
CreasePattern pattern_from_json(const std::string& text);

}  // namespace twistcyl
