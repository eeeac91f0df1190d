#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "twistcyl/geometry.hpp"

namespace twistcyl {

// Arc-length sampled planar U-turn.  Starts at the origin heading +x, turns
// monotonically through pi, and leaves heading -x at height `separation`
// directly above the start.  Curvature is a scaled smooth bump, so the curve
// joins straight extensions at both ends with matching derivatives.
struct UProfile {
    double separation = 0.0;  // normal offset between the two parallel end lines
    double width = 0.0;       // total arc length L of the turning region
    int bump_order = 0;       // 0: exponential bump; k >= 1: polynomial bump (t(1-t))^k
    double squeeze = 1.0;     // curvature support compression (>= 1)
    std::string smoothness_class;

    std::vector<double> s;      // uniform arc-length grid, 0..L
    std::vector<Vec2> point;    // curve samples
    std::vector<double> angle;  // tangent angle, 0..pi
    std::vector<double> kappa;  // curvature samples

    Vec2 eval(double at) const;
    double eval_angle(double at) const;
    Vec2 tangent(double at) const {
        const double a = eval_angle(at);
        return {std::cos(a), std::sin(a)};
    }
    double curvature(double at) const;
};

// separation / arc-length ratio of the unsqueezed profile for a bump order
double profile_separation_ratio(int bump_order, int n_samples = 4096);

// Arc length chosen by bisection so the end-line separation comes out to
// `separation`; squeeze stays 1.
UProfile make_u_profile(double separation, int bump_order = 0, int n_samples = 512);

// Arc length fixed at `width`; the bump support is squeezed until the
// end-line separation equals `separation`.  Fails if separation exceeds
// width * profile_separation_ratio.
UProfile make_u_profile_with_width(double width, double separation, int bump_order = 0,
                                   int n_samples = 512);

// Isometric chart of a fold band: U-profile swept along a straight ruling.
// (s, r) -> origin + r*ruling + P_x(s)*across + P_y(s)*lift.
struct PseudofoldChart {
    UProfile profile;
    Vec3 origin;
    Vec3 ruling;  // unit, parallel to the crease in space
    Vec3 across;  // unit, in-surface direction entering the band
    Vec3 lift;    // unit, completes the profile plane
    double r0 = 0.0, r1 = 1.0;

    Vec3 eval(double sp, double r) const;
    void differential(double sp, double r, Vec3& d_ds, Vec3& d_dr) const;
};

void profile_to_csv(const UProfile& profile, std::ostream& out);

}  // namespace twistcyl
