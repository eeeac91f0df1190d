#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace twistcyl {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec2& v) { return dot(v, v); }
inline double norm(const Vec2& v) { return std::sqrt(norm2(v)); }
inline Vec2 normalized(const Vec2& v) { return v / norm(v); }
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline double angle_between(const Vec3& a, const Vec3& b) {
    const double c = dot(a, b);
    const double s = norm(cross(a, b));
    return std::atan2(s, c);
}

struct Mat3 {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    Vec3 apply(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }
    double det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }
};

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
            r.m[i][j] = s;
        }
    return r;
}

// Two unit vectors spanning the plane orthogonal to n (n need not be unit).
inline std::pair<Vec3, Vec3> orthonormal_basis(const Vec3& n) {
    const Vec3 u = normalized(n);
    const Vec3 seed = std::abs(u.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 e1 = normalized(cross(u, seed));
    const Vec3 e2 = cross(u, e1);
    return {e1, e2};
}

// Orthogonal linear part (rotation or reflection) plus translation.
struct RigidMotion2 {
    double m[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
    Vec2 t;

    Vec2 apply(const Vec2& p) const {
        return {m[0][0] * p.x + m[0][1] * p.y + t.x,
                m[1][0] * p.x + m[1][1] * p.y + t.y};
    }
    Vec2 apply_linear(const Vec2& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
    }
    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    bool reverses_orientation() const { return det() < 0.0; }
};

// compose(f, g)(p) = f(g(p))
inline RigidMotion2 compose(const RigidMotion2& f, const RigidMotion2& g) {
    RigidMotion2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = f.m[i][0] * g.m[0][j] + f.m[i][1] * g.m[1][j];
    r.t = f.apply(g.t);
    return r;
}

// Reflection across the line through p0 and p1.
inline RigidMotion2 reflection_across(const Vec2& p0, const Vec2& p1) {
    const Vec2 u = normalized(p1 - p0);
    RigidMotion2 r;
    r.m[0][0] = u.x * u.x - u.y * u.y;
    r.m[0][1] = 2.0 * u.x * u.y;
    r.m[1][0] = 2.0 * u.x * u.y;
    r.m[1][1] = u.y * u.y - u.x * u.x;
    const Vec2 mp0 = {r.m[0][0] * p0.x + r.m[0][1] * p0.y,
                      r.m[1][0] * p0.x + r.m[1][1] * p0.y};
    r.t = p0 - mp0;
    return r;
}

inline Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double L2 = norm2(ab);
    if (L2 == 0.0) return a;
    const double t = std::clamp(dot(p - a, ab) / L2, 0.0, 1.0);
    return a + t * ab;
}

inline Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double L2 = norm2(ab);
    if (L2 == 0.0) return a;
    const double t = std::clamp(dot(p - a, ab) / L2, 0.0, 1.0);
    return a + t * ab;
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    return dist(p, closest_point_on_segment(p, a, b));
}

inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    return dist(p, closest_point_on_segment(p, a, b));
}

// Closest points between segments [p1,q1] and [p2,q2]; returns squared distance.
// Clamped quadratic minimization (see Ericson, Real-Time Collision Detection).
inline double segment_segment_closest(const Vec3& p1, const Vec3& q1,
                                      const Vec3& p2, const Vec3& q2,
                                      Vec3* c1_out = nullptr, Vec3* c2_out = nullptr) {
    const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    const double a = norm2(d1), e = norm2(d2), f = dot(d2, r);
    double s = 0.0, t = 0.0;
    if (a <= 1e-30 && e <= 1e-30) {
        // both degenerate
    } else if (a <= 1e-30) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = dot(d1, r);
        if (e <= 1e-30) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            if (denom > 1e-30) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    const Vec3 c1 = p1 + s * d1;
    const Vec3 c2 = p2 + t * d2;
    if (c1_out) *c1_out = c1;
    if (c2_out) *c2_out = c2;
    return norm2(c1 - c2);
}

inline double segment_segment_distance(const Vec3& p1, const Vec3& q1,
                                       const Vec3& p2, const Vec3& q2) {
    return std::sqrt(segment_segment_closest(p1, q1, p2, q2));
}

// Intersection of segments [a,b] and [c,d] within absolute tolerance tol:
// a point within tol of both segments.  Proper crossings are solved
// parametrically; near-parallel pairs fall back to endpoint projections.
inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                               double tol, Vec2* x_out = nullptr) {
    const Vec2 r = b - a, s = d - c;
    const double denom = cross(r, s);
    const double scale = std::max({norm(r), norm(s), 1e-300});
    if (std::abs(denom) > 1e-12 * scale * scale) {
        const double t = cross(c - a, s) / denom;
        const double u = cross(c - a, r) / denom;
        const Vec2 x = a + t * r;
        if (point_segment_distance(x, a, b) <= tol && point_segment_distance(x, c, d) <= tol) {
            if (x_out) *x_out = x;
            return true;
        }
        (void)u;
    }
    // Near-parallel or clamped case: try the four endpoint projections.
    const Vec2 cands[4] = {closest_point_on_segment(a, c, d), closest_point_on_segment(b, c, d),
                           closest_point_on_segment(c, a, b), closest_point_on_segment(d, a, b)};
    const Vec2 sources[4] = {a, b, c, d};
    for (int i = 0; i < 4; ++i) {
        const Vec2 mid = 0.5 * (cands[i] + sources[i]);
        if (point_segment_distance(mid, a, b) <= tol && point_segment_distance(mid, c, d) <= tol) {
            if (x_out) *x_out = mid;
            return true;
        }
    }
    return false;
}

inline double polyline_length(const std::vector<Vec2>& pts) {
    double L = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) L += dist(pts[i - 1], pts[i]);
    return L;
}

inline double polyline_length(const std::vector<Vec3>& pts) {
    double L = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) L += dist(pts[i - 1], pts[i]);
    return L;
}

struct Aabb3 {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    void expand(const Vec3& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    void expand(const Aabb3& o) {
        expand(o.lo);
        expand(o.hi);
    }
    bool overlaps(const Aabb3& o, double pad = 0.0) const {
        return lo.x <= o.hi.x + pad && o.lo.x <= hi.x + pad &&
               lo.y <= o.hi.y + pad && o.lo.y <= hi.y + pad &&
               lo.z <= o.hi.z + pad && o.lo.z <= hi.z + pad;
    }
    Vec3 center() const { return 0.5 * (lo + hi); }
    // Lower bound for the distance from any point of this box to any point of o.
    double distance_lower_bound(const Aabb3& o) const {
        const double dx = std::max({0.0, lo.x - o.hi.x, o.lo.x - hi.x});
        const double dy = std::max({0.0, lo.y - o.hi.y, o.lo.y - hi.y});
        const double dz = std::max({0.0, lo.z - o.hi.z, o.lo.z - hi.z});
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }
};

struct Triangle2 {
    std::array<Vec2, 3> v;

    double area() const { return 0.5 * cross(v[1] - v[0], v[2] - v[0]); }
    bool contains(const Vec2& p, double tol = 1e-12) const {
        const double a = area();
        const double sgn = a >= 0.0 ? 1.0 : -1.0;
        for (int i = 0; i < 3; ++i) {
            const Vec2& e0 = v[i];
            const Vec2& e1 = v[(i + 1) % 3];
            if (sgn * cross(e1 - e0, p - e0) < -tol * norm(e1 - e0)) return false;
        }
        return true;
    }
};

inline double hausdorff_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    auto one_sided = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
        double worst = 0.0;
        for (const Vec3& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec3& q : to) best = std::min(best, dist(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

// One-sided Hausdorff distance from points to a polyline (distance to segments).
inline double hausdorff_points_to_polyline(const std::vector<Vec3>& pts,
                                           const std::vector<Vec3>& poly) {
    double worst = 0.0;
    for (const Vec3& p : pts) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 1; i < poly.size(); ++i)
            best = std::min(best, point_segment_distance(p, poly[i - 1], poly[i]));
        if (poly.size() == 1) best = dist(p, poly[0]);
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace twistcyl
