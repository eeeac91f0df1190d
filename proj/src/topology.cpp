#include "twistcyl/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "twistcyl/rng.hpp"

namespace twistcyl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- loops ----

std::vector<Vec3> strip_closing(const std::vector<Vec3>& pts) {
    std::vector<Vec3> out = pts;
    while (out.size() > 1 && dist(out.front(), out.back()) <= 1e-12) out.pop_back();
    return out;
}

double loops_min_distance(const std::vector<Vec3>& f, const std::vector<Vec3>& g) {
    double best = kInf;
    const size_t nf = f.size(), ng = g.size();
    for (size_t i = 0; i < nf; ++i) {
        const Vec3& a0 = f[i];
        const Vec3& a1 = f[(i + 1) % nf];
        const Vec3 mid = 0.5 * (a0 + a1);
        const double ra = 0.5 * dist(a0, a1);
        for (size_t j = 0; j < ng; ++j) {
            const Vec3& b0 = g[j];
            const Vec3& b1 = g[(j + 1) % ng];
            // cheap reject on midpoint spheres before the exact test
            const double lb = dist(mid, 0.5 * (b0 + b1)) - ra - 0.5 * dist(b0, b1);
            if (lb >= best) continue;
            best = std::min(best, segment_segment_distance(a0, a1, b0, b1));
        }
    }
    return best;
}

void validate_link_loops(const std::vector<Vec3>& f, const std::vector<Vec3>& g) {
    if (f.size() < 3 || g.size() < 3)
        throw std::invalid_argument("linking needs closed loops with at least 3 vertices");
    const double md = loops_min_distance(f, g);
    if (!(md > 1e-6)) throw std::invalid_argument("loops touch or are too close to link");
}

// ------------------------------------------------------- gauss integral ----

// Signed solid angle of the spherical triangle spanned by three directions.
double solid_angle_tri(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double la = norm(a), lb = norm(b), lc = norm(c);
    const double num = dot(a, cross(b, c));
    const double den = la * lb * lc + dot(a, b) * lc + dot(b, c) * la + dot(c, a) * lb;
    if (num == 0.0 && den == 0.0) return 0.0;
    return 2.0 * std::atan2(num, den);
}

// Solid angle swept by the direction a(s) - b(t) over one segment pair.
double segment_pair_angle(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    const Vec3 r00 = a0 - b0, r01 = a0 - b1, r10 = a1 - b0, r11 = a1 - b1;
    return solid_angle_tri(r00, r01, r11) + solid_angle_tri(r00, r11, r10);
}

double gauss_unchecked(const std::vector<Vec3>& f, const std::vector<Vec3>& g) {
    long double total = 0.0L;
    const size_t nf = f.size(), ng = g.size();
    for (size_t i = 0; i < nf; ++i) {
        const Vec3& a0 = f[i];
        const Vec3& a1 = f[(i + 1) % nf];
        for (size_t j = 0; j < ng; ++j)
            total += segment_pair_angle(a0, a1, g[j], g[(j + 1) % ng]);
    }
    return static_cast<double>(total / (4.0L * static_cast<long double>(kPi)));
}

// ------------------------------------------------------ crossing counts ----

int crossings_unchecked(const std::vector<Vec3>& f, const std::vector<Vec3>& g, const Vec3& direction) {
    const double dn = norm(direction);
    if (!(dn > 1e-12)) throw std::invalid_argument("projection direction must be nonzero");
    const Vec3 d = direction / dn;
    const auto [e1, e2] = orthonormal_basis(d);  // cross(e1, e2) == d

    const size_t nf = f.size(), ng = g.size();
    std::vector<Vec2> pf(nf), pg(ng);
    std::vector<double> hf(nf), hg(ng);
    double scale = 1.0;
    for (size_t i = 0; i < nf; ++i) {
        pf[i] = {dot(f[i], e1), dot(f[i], e2)};
        hf[i] = dot(f[i], d);
        scale = std::max({scale, std::abs(pf[i].x), std::abs(pf[i].y)});
    }
    for (size_t j = 0; j < ng; ++j) {
        pg[j] = {dot(g[j], e1), dot(g[j], e2)};
        hg[j] = dot(g[j], d);
        scale = std::max({scale, std::abs(pg[j].x), std::abs(pg[j].y)});
    }

    const double param_eps = 1e-9;
    int total = 0;
    for (size_t i = 0; i < nf; ++i) {
        const Vec2 a = pf[i], b = pf[(i + 1) % nf];
        const double za = hf[i], zb = hf[(i + 1) % nf];
        const Vec2 r = b - a;
        for (size_t j = 0; j < ng; ++j) {
            const Vec2 c = pg[j], e = pg[(j + 1) % ng];
            const Vec2 s = e - c;
            const double den = cross(r, s);
            if (std::abs(den) <= 1e-12 * std::max(1e-30, norm(r) * norm(s))) {
                // parallel in projection: only fatal when they overlap
                const double gap = std::min(
                    std::min(point_segment_distance(a, c, e), point_segment_distance(b, c, e)),
                    std::min(point_segment_distance(c, a, b), point_segment_distance(e, a, b)));
                if (gap <= 1e-9 * scale)
                    throw std::runtime_error("non-generic direction: parallel overlapping segments");
                continue;
            }
            const Vec2 ac = c - a;
            const double t = cross(ac, s) / den;
            const double u = cross(ac, r) / den;
            if (t < -param_eps || t > 1.0 + param_eps || u < -param_eps || u > 1.0 + param_eps)
                continue;
            if (t < param_eps || t > 1.0 - param_eps || u < param_eps || u > 1.0 - param_eps)
                throw std::runtime_error("non-generic direction: crossing at a segment endpoint");
            const double zf = za + t * (zb - za);
            const double zg = hg[j] + u * (hg[(j + 1) % ng] - hg[j]);
            if (std::abs(zf - zg) <= 1e-9 * scale)
                throw std::runtime_error("non-generic direction: grazing depth at a crossing");
            if (zf > zg) total += den > 0.0 ? 1 : -1;  // F passes over G
        }
    }
    return total;
}

// ------------------------------------------------------------ quickhull ----

int argmax_dist_point(const std::vector<Vec3>& pts, const Vec3& p) {
    int best = 0;
    double bd = -1.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        const double d = norm2(pts[i] - p);
        if (d > bd) { bd = d; best = static_cast<int>(i); }
    }
    return best;
}

struct QhFace {
    std::array<int, 3> v;   // ccw seen from outside
    std::array<int, 3> nb;  // face across edge (v[i], v[(i+1)%3])
    Vec3 n;                 // outward unit normal (zero for sliver faces)
    double off;             // plane offset: dot(n, x) == off on the face
    bool alive = true;
    int stamp = 0;          // visible-patch BFS marker
    std::vector<int> outside;
};

double qh_signed(const QhFace& f, const Vec3& p) { return dot(f.n, p) - f.off; }

// vertices are taken as already ccw from outside; a degenerate triangle keeps
// a zero normal, attracts no outside points, and leans on its neighbours
QhFace make_face(const std::vector<Vec3>& pts, int a, int b, int c) {
    QhFace f;
    f.v = {a, b, c};
    const Vec3 n = cross(pts[b] - pts[a], pts[c] - pts[a]);
    const double ln = norm(n);
    f.n = ln > 0.0 ? n / ln : Vec3{0, 0, 0};
    f.off = dot(f.n, pts[a]);
    return f;
}

// Beneath-beyond with twin links: the visible patch grows by BFS from the
// apex's holder face, so the horizon is one closed cycle and the face complex
// stays manifold.  Inconsistent rims (possible on nearly degenerate data)
// throw, and the caller retries under a joggle.
void quickhull3(const std::vector<Vec3>& pts, const std::array<int, 4>& simplex, double eps,
                std::vector<QhFace>& faces) {
    std::array<int, 4> s = simplex;
    const Vec3 n0 = cross(pts[s[1]] - pts[s[0]], pts[s[2]] - pts[s[0]]);
    if (dot(n0, pts[s[3]] - pts[s[0]]) > 0.0) std::swap(s[1], s[2]);
    faces.push_back(make_face(pts, s[0], s[1], s[2]));
    faces.push_back(make_face(pts, s[0], s[3], s[1]));
    faces.push_back(make_face(pts, s[1], s[3], s[2]));
    faces.push_back(make_face(pts, s[0], s[2], s[3]));
    for (int i = 0; i < 4; ++i)
        for (int e = 0; e < 3; ++e) {
            const int a = faces[i].v[e], b = faces[i].v[(e + 1) % 3];
            for (int j = 0; j < 4; ++j) {
                if (j == i) continue;
                for (int d = 0; d < 3; ++d)
                    if (faces[j].v[d] == b && faces[j].v[(d + 1) % 3] == a) faces[i].nb[e] = j;
            }
        }

    for (size_t i = 0; i < pts.size(); ++i) {
        for (QhFace& f : faces) {
            if (qh_signed(f, pts[i]) > eps) { f.outside.push_back(static_cast<int>(i)); break; }
        }
    }

    // each point is held by at most one face and becomes the apex at most
    // once, so the iteration count is bounded by the input size
    std::vector<char> done(pts.size(), 0);
    size_t guard = 2 * pts.size() + 64;
    const size_t alive_cap = 8 * pts.size() + 64;
    int iter_stamp = 0;
    std::vector<int> stack, visible, orphans;
    struct Hedge {
        int a, b, outer;
    };
    std::vector<Hedge> rim, cycle;
    while (true) {
        size_t alive_count = 0;
        for (const QhFace& f : faces) alive_count += f.alive ? 1 : 0;
        if (alive_count > alive_cap) throw std::runtime_error("convex hull failed to converge");
        if (faces.size() > 4 * alive_count + 64) {  // compact, remapping twins
            std::vector<int> remap(faces.size(), -1);
            std::vector<QhFace> keep;
            keep.reserve(alive_count);
            for (size_t k = 0; k < faces.size(); ++k)
                if (faces[k].alive) {
                    remap[k] = static_cast<int>(keep.size());
                    keep.push_back(std::move(faces[k]));
                }
            for (QhFace& f : keep)
                for (int e = 0; e < 3; ++e) f.nb[e] = remap[f.nb[e]];
            faces = std::move(keep);
        }

        size_t fi = faces.size();
        for (size_t k = 0; k < faces.size(); ++k)
            if (faces[k].alive && !faces[k].outside.empty()) { fi = k; break; }
        if (fi == faces.size()) break;
        if (guard-- == 0) throw std::runtime_error("convex hull failed to converge");

        // farthest point outside this face becomes the next apex
        int apex = -1;
        double bd = -kInf;
        for (int pi : faces[fi].outside) {
            const double d = qh_signed(faces[fi], pts[pi]);
            if (d > bd) { bd = d; apex = pi; }
        }
        done[apex] = 1;
        const Vec3 p = pts[apex];

        ++iter_stamp;
        visible.clear();
        stack.assign(1, static_cast<int>(fi));
        faces[fi].stamp = iter_stamp;
        while (!stack.empty()) {
            const int k = stack.back();
            stack.pop_back();
            visible.push_back(k);
            for (int e = 0; e < 3; ++e) {
                QhFace& m = faces[faces[k].nb[e]];
                if (m.stamp != iter_stamp && qh_signed(m, p) > eps) {
                    m.stamp = iter_stamp;
                    stack.push_back(faces[k].nb[e]);
                }
            }
        }

        // rim of the patch, ordered into one closed cycle around the apex
        rim.clear();
        for (int k : visible)
            for (int e = 0; e < 3; ++e) {
                const int m = faces[k].nb[e];
                if (faces[m].stamp != iter_stamp)
                    rim.push_back({faces[k].v[e], faces[k].v[(e + 1) % 3], m});
            }
        std::unordered_map<int, int> at;
        for (size_t r = 0; r < rim.size(); ++r) at[rim[r].a] = static_cast<int>(r);
        if (at.size() != rim.size()) throw std::runtime_error("convex hull failed to converge");
        cycle.clear();
        std::vector<char> used(rim.size(), 0);
        int cur = 0;
        for (size_t r = 0; r < rim.size(); ++r) {
            if (used[cur]) throw std::runtime_error("convex hull failed to converge");
            used[cur] = 1;
            cycle.push_back(rim[cur]);
            const auto it = at.find(rim[cur].b);
            if (it == at.end()) throw std::runtime_error("convex hull failed to converge");
            cur = it->second;
        }
        if (cycle.back().b != cycle.front().a)
            throw std::runtime_error("convex hull failed to converge");

        orphans.clear();
        for (int k : visible) {
            faces[k].alive = false;
            for (int pi : faces[k].outside)
                if (!done[pi]) orphans.push_back(pi);
            faces[k].outside.clear();
        }

        // cone from the apex over the rim; twin links are structural
        const int first_new = static_cast<int>(faces.size());
        const int m = static_cast<int>(cycle.size());
        for (int r = 0; r < m; ++r) {
            QhFace f = make_face(pts, cycle[r].a, cycle[r].b, apex);
            f.nb[0] = cycle[r].outer;
            f.nb[1] = first_new + (r + 1) % m;
            f.nb[2] = first_new + (r - 1 + m) % m;
            QhFace& outer = faces[cycle[r].outer];
            for (int e = 0; e < 3; ++e)
                if (outer.v[e] == cycle[r].b && outer.v[(e + 1) % 3] == cycle[r].a)
                    outer.nb[e] = first_new + r;
            faces.push_back(std::move(f));
        }
        for (int pi : orphans) {
            bool placed = false;
            for (size_t k = first_new; k < faces.size() && !placed; ++k)
                if (qh_signed(faces[k], pts[pi]) > eps) { faces[k].outside.push_back(pi); placed = true; }
            // rare: beyond a surviving face only; keep it alive there
            for (size_t k = 0; k < static_cast<size_t>(first_new) && !placed; ++k)
                if (faces[k].alive && qh_signed(faces[k], pts[pi]) > eps) {
                    faces[k].outside.push_back(pi);
                    placed = true;
                }
        }
    }
}

// Monotone-chain convex polygon of coplanar points; returns indices, ccw.
std::vector<int> hull_2d(const std::vector<Vec2>& q) {
    std::vector<int> idx(q.size());
    for (size_t i = 0; i < q.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (q[a].x != q[b].x) return q[a].x < q[b].x;
        return q[a].y < q[b].y;
    });
    idx.erase(std::unique(idx.begin(), idx.end(), [&](int a, int b) {
                  return q[a].x == q[b].x && q[a].y == q[b].y;
              }),
              idx.end());
    const int n = static_cast<int>(idx.size());
    if (n <= 2) return idx;
    std::vector<int> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && cross(q[h[k - 1]] - q[h[k - 2]], q[idx[i]] - q[h[k - 2]]) <= 0) --k;
        h[k++] = idx[i];
    }
    const int lower = k + 1;
    for (int i = n - 2; i >= 0; --i) {
        while (k >= lower && cross(q[h[k - 1]] - q[h[k - 2]], q[idx[i]] - q[h[k - 2]]) <= 0) --k;
        h[k++] = idx[i];
    }
    h.resize(k - 1);
    return h;
}

double pairwise_diameter(const std::vector<Vec3>& pts) {
    double best = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, norm2(pts[i] - pts[j]));
    return std::sqrt(best);
}

// Closest point on a triangle (barycentric region walk).
Vec3 closest_point_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;
    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0)
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
    const double denom = 1.0 / (va + vb + vc);
    return a + (vb * denom) * ab + (vc * denom) * ac;
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    return dist(p, closest_point_triangle(p, a, b, c));
}

Vec3 newell_normal(const std::vector<Vec3>& poly) {
    Vec3 n{};
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec3& a = poly[i];
        const Vec3& b = poly[(i + 1) % poly.size()];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    return n;
}

// ------------------------------------------------- triangle intersection ---

bool point_in_tri_2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c, double eps) {
    const double s = cross(b - a, c - a) >= 0.0 ? 1.0 : -1.0;
    return s * cross(b - a, p - a) >= -eps && s * cross(c - b, p - b) >= -eps &&
           s * cross(a - c, p - c) >= -eps;
}

bool seg_seg_2d(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double eps) {
    const double d1 = cross(d - c, a - c);
    const double d2 = cross(d - c, b - c);
    const double d3 = cross(b - a, c - a);
    const double d4 = cross(b - a, d - a);
    if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
        ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
        return true;
    auto on = [&](double dd, const Vec2& p, const Vec2& u, const Vec2& v) {
        return std::abs(dd) <= eps && std::min(u.x, v.x) - eps <= p.x &&
               p.x <= std::max(u.x, v.x) + eps && std::min(u.y, v.y) - eps <= p.y &&
               p.y <= std::max(u.y, v.y) + eps;
    };
    return on(d1, a, c, d) || on(d2, b, c, d) || on(d3, c, a, b) || on(d4, d, a, b);
}

bool coplanar_tri_tri(const Vec3& n, const std::array<Vec3, 3>& v, const std::array<Vec3, 3>& u,
                      double eps) {
    // drop the dominant axis of the shared plane normal
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    auto flat = [&](const Vec3& p) -> Vec2 {
        if (ax >= ay && ax >= az) return {p.y, p.z};
        if (ay >= az) return {p.x, p.z};
        return {p.x, p.y};
    };
    std::array<Vec2, 3> a{flat(v[0]), flat(v[1]), flat(v[2])};
    std::array<Vec2, 3> b{flat(u[0]), flat(u[1]), flat(u[2])};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (seg_seg_2d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3], eps)) return true;
    return point_in_tri_2d(a[0], b[0], b[1], b[2], eps) ||
           point_in_tri_2d(b[0], a[0], a[1], a[2], eps);
}

// Interval endpoints for the tri-plane intersection (no-division variant).
bool tri_intervals(const std::array<double, 3>& vv, const std::array<double, 3>& dd, double d0d1,
                   double d0d2, double& a, double& b, double& c, double& x0, double& x1) {
    if (d0d1 > 0.0) {
        a = vv[2]; b = (vv[0] - vv[2]) * dd[2]; c = (vv[1] - vv[2]) * dd[2];
        x0 = dd[2] - dd[0]; x1 = dd[2] - dd[1];
    } else if (d0d2 > 0.0) {
        a = vv[1]; b = (vv[0] - vv[1]) * dd[1]; c = (vv[2] - vv[1]) * dd[1];
        x0 = dd[1] - dd[0]; x1 = dd[1] - dd[2];
    } else if (dd[1] * dd[2] > 0.0 || dd[0] != 0.0) {
        a = vv[0]; b = (vv[1] - vv[0]) * dd[0]; c = (vv[2] - vv[0]) * dd[0];
        x0 = dd[0] - dd[1]; x1 = dd[0] - dd[2];
    } else if (dd[1] != 0.0) {
        a = vv[1]; b = (vv[0] - vv[1]) * dd[1]; c = (vv[2] - vv[1]) * dd[1];
        x0 = dd[1] - dd[0]; x1 = dd[1] - dd[2];
    } else if (dd[2] != 0.0) {
        a = vv[2]; b = (vv[0] - vv[2]) * dd[2]; c = (vv[1] - vv[2]) * dd[2];
        x0 = dd[2] - dd[0]; x1 = dd[2] - dd[1];
    } else {
        return true;  // coplanar
    }
    return false;
}

bool tri_tri_intersect(const std::array<Vec3, 3>& v, const std::array<Vec3, 3>& u, double eps) {
    const Vec3 n1 = cross(v[1] - v[0], v[2] - v[0]);
    const double off1 = dot(n1, v[0]);
    std::array<double, 3> du;
    for (int i = 0; i < 3; ++i) {
        du[i] = dot(n1, u[i]) - off1;
        if (std::abs(du[i]) <= eps * std::max(1.0, norm(n1))) du[i] = 0.0;
    }
    const double du01 = du[0] * du[1], du02 = du[0] * du[2];
    if (du01 > 0.0 && du02 > 0.0) return false;

    const Vec3 n2 = cross(u[1] - u[0], u[2] - u[0]);
    const double off2 = dot(n2, u[0]);
    std::array<double, 3> dv;
    for (int i = 0; i < 3; ++i) {
        dv[i] = dot(n2, v[i]) - off2;
        if (std::abs(dv[i]) <= eps * std::max(1.0, norm(n2))) dv[i] = 0.0;
    }
    const double dv01 = dv[0] * dv[1], dv02 = dv[0] * dv[2];
    if (dv01 > 0.0 && dv02 > 0.0) return false;

    const Vec3 dline = cross(n1, n2);
    const double lx = std::abs(dline.x), ly = std::abs(dline.y), lz = std::abs(dline.z);
    int idx = 0;
    if (ly > lx && ly >= lz) idx = 1;
    else if (lz > lx && lz > ly) idx = 2;
    auto comp = [&](const Vec3& p) { return idx == 0 ? p.x : idx == 1 ? p.y : p.z; };
    const std::array<double, 3> vp{comp(v[0]), comp(v[1]), comp(v[2])};
    const std::array<double, 3> up{comp(u[0]), comp(u[1]), comp(u[2])};

    double a, b, c, x0, x1;
    if (tri_intervals(vp, dv, dv01, dv02, a, b, c, x0, x1))
        return coplanar_tri_tri(n1, v, u, eps * std::max(1.0, norm(n1)));
    double d, e, f, y0, y1;
    if (tri_intervals(up, du, du01, du02, d, e, f, y0, y1))
        return coplanar_tri_tri(n1, v, u, eps * std::max(1.0, norm(n1)));

    const double xx = x0 * x1, yy = y0 * y1, xxyy = xx * yy;
    double isect1[2], isect2[2];
    double tmp = a * xxyy;
    isect1[0] = tmp + b * x1 * yy;
    isect1[1] = tmp + c * x0 * yy;
    tmp = d * xxyy;
    isect2[0] = tmp + e * y1 * xx;
    isect2[1] = tmp + f * y0 * xx;
    if (isect1[0] > isect1[1]) std::swap(isect1[0], isect1[1]);
    if (isect2[0] > isect2[1]) std::swap(isect2[0], isect2[1]);
    return isect1[1] >= isect2[0] && isect2[1] >= isect1[0];
}

double tri_tri_distance(const std::array<Vec3, 3>& v, const std::array<Vec3, 3>& u) {
    double best = kInf;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            best = std::min(best, segment_segment_distance(v[i], v[(i + 1) % 3], u[j], u[(j + 1) % 3]));
    for (int i = 0; i < 3; ++i) {
        best = std::min(best, point_triangle_distance(v[i], u[0], u[1], u[2]));
        best = std::min(best, point_triangle_distance(u[i], v[0], v[1], v[2]));
    }
    return best;
}

// ------------------------------------------------------------------ bvh ----

struct TriData {
    std::array<Vec3, 3> v;
    std::array<int, 3> vid;
    Aabb3 box;
    Vec2 dom;  // circular-mean domain tag
};

struct BvhNode {
    Aabb3 box;
    double xlo = kInf, xhi = -kInf, ylo = kInf, yhi = -kInf;  // domain tag bounds
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into order[]
    bool leaf() const { return left < 0; }
};

struct Bvh {
    std::vector<TriData> tris;
    std::vector<int> order;
    std::vector<BvhNode> nodes;
    double lambda = 0.0;

    int build(int begin, int end) {
        BvhNode node;
        node.begin = begin;
        node.end = end;
        for (int k = begin; k < end; ++k) {
            const TriData& t = tris[order[k]];
            node.box.expand(t.box);
            node.xlo = std::min(node.xlo, t.dom.x);
            node.xhi = std::max(node.xhi, t.dom.x);
            node.ylo = std::min(node.ylo, t.dom.y);
            node.yhi = std::max(node.yhi, t.dom.y);
        }
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(node);
        if (end - begin <= 4) return id;

        const Vec3 span = node.box.hi - node.box.lo;
        const int axis = span.x >= span.y && span.x >= span.z ? 0 : span.y >= span.z ? 1 : 2;
        const int mid = (begin + end) / 2;
        std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                         [&](int a, int b) {
                             const Vec3 ca = tris[a].box.center(), cb = tris[b].box.center();
                             return (axis == 0 ? ca.x : axis == 1 ? ca.y : ca.z) <
                                    (axis == 0 ? cb.x : axis == 1 ? cb.y : cb.z);
                         });
        const int l = build(begin, mid);
        const int r = build(mid, end);
        nodes[id].left = l;
        nodes[id].right = r;
        return id;
    }
};

double circ_dist(double dx, double lambda) {
    double d = std::abs(dx);
    d = std::fmod(d, lambda);
    return std::min(d, lambda - d);
}

double domain_pair_distance(const TriData& a, const TriData& b, double lambda) {
    const double dx = circ_dist(a.dom.x - b.dom.x, lambda);
    const double dy = a.dom.y - b.dom.y;
    return std::hypot(dx, dy);
}

// Upper bound for the circular domain distance between two tag boxes.
double domain_pair_max(const BvhNode& a, const BvhNode& b, double lambda) {
    const double maxabs = std::max(b.xhi - a.xlo, a.xhi - b.xlo);
    const double minabs = std::max(0.0, std::max(a.xlo, b.xlo) - std::min(a.xhi, b.xhi));
    const double half = 0.5 * lambda;
    double dx;
    if (minabs > half) dx = lambda - minabs;
    else if (maxabs < half) dx = maxabs;
    else dx = half;
    const double dy = std::max(b.yhi - a.ylo, a.yhi - b.ylo);
    return std::hypot(std::max(0.0, dx), std::max(0.0, dy));
}

bool tris_adjacent(const TriData& a, const TriData& b) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (a.vid[i] == b.vid[j]) return true;
    return false;
}

Bvh build_bvh(const SurfaceMesh& mesh) {
    Bvh bvh;
    bvh.lambda = mesh.lambda > 0.0 ? mesh.lambda : 1.0;
    const double lam = bvh.lambda;
    bvh.tris.reserve(mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        TriData td;
        td.vid = t;
        for (int k = 0; k < 3; ++k) {
            td.v[k] = mesh.vertices[t[k]];
            td.box.expand(td.v[k]);
        }
        // unwrap the domain triangle around its first vertex before averaging
        const double x0 = mesh.domain[t[0]].x;
        double cx = 0.0, cy = 0.0;
        for (int k = 0; k < 3; ++k) {
            double x = mesh.domain[t[k]].x;
            if (x - x0 > 0.5 * lam) x -= lam;
            if (x - x0 < -0.5 * lam) x += lam;
            cx += x;
            cy += mesh.domain[t[k]].y;
        }
        cx = std::fmod(cx / 3.0 + 2.0 * lam, lam);
        td.dom = {cx, cy / 3.0};
        bvh.tris.push_back(td);
    }
    bvh.order.resize(bvh.tris.size());
    for (size_t i = 0; i < bvh.order.size(); ++i) bvh.order[i] = static_cast<int>(i);
    if (!bvh.tris.empty()) bvh.build(0, static_cast<int>(bvh.tris.size()));
    return bvh;
}

}  // namespace

// ------------------------------------------------------------- linking -----

double linking_number_gauss(const std::vector<Vec3>& loop_f, const std::vector<Vec3>& loop_g) {
    const std::vector<Vec3> f = strip_closing(loop_f);
    const std::vector<Vec3> g = strip_closing(loop_g);
    validate_link_loops(f, g);
    return gauss_unchecked(f, g);
}

int linking_number_crossings(const std::vector<Vec3>& loop_f, const std::vector<Vec3>& loop_g,
                             const Vec3& direction) {
    const std::vector<Vec3> f = strip_closing(loop_f);
    const std::vector<Vec3> g = strip_closing(loop_g);
    validate_link_loops(f, g);
    return crossings_unchecked(f, g, direction);
}

LinkingResult linking_numbers(const std::vector<Vec3>& loop_f, const std::vector<Vec3>& loop_g,
                              std::uint64_t seed) {
    const std::vector<Vec3> f = strip_closing(loop_f);
    const std::vector<Vec3> g = strip_closing(loop_g);
    validate_link_loops(f, g);

    LinkingResult out;
    out.gauss_value = gauss_unchecked(f, g);

    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    const Vec3 base = normalized(Vec3{1.0, phi, phi * phi});
    Rng rng(seed);
    bool counted = false;
    for (int attempt = 0; attempt < 10 && !counted; ++attempt) {
        const Vec3 dir =
            attempt == 0 ? base : normalized(base + 0.03 * attempt * rng.unit_vector3());
        try {
            out.crossing_value = crossings_unchecked(f, g, dir);
            out.direction = dir;
            counted = true;
        } catch (const std::runtime_error&) {
            ++out.perturbations;
        }
    }
    if (!counted) throw std::runtime_error("non-generic direction after 10 perturbations");

    const double rounded = std::round(out.gauss_value);
    out.agreed = std::abs(out.gauss_value - rounded) <= 0.05 &&
                 static_cast<long long>(rounded) == out.crossing_value;
    out.is_hopf_candidate = out.agreed && std::abs(out.crossing_value) == 1;
    return out;
}

// ---------------------------------------------------------------- hulls ----

HullResult hull_and_diameter(const std::vector<Vec3>& points) {
    if (points.empty()) throw std::invalid_argument("hull of an empty point set");
    HullResult out;
    out.diameter_set = pairwise_diameter(points);

    double scale = 1.0;
    for (const Vec3& p : points)
        scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    const double tol = 1e-12 * scale;

    // affine rank probes: farthest point, then farthest from line, then plane
    int i0 = 0;
    for (size_t i = 1; i < points.size(); ++i) {
        const Vec3 &a = points[i], &b = points[i0];
        if (a.x < b.x || (a.x == b.x && (a.y < b.y || (a.y == b.y && a.z < b.z))))
            i0 = static_cast<int>(i);
    }
    const int i1 = argmax_dist_point(points, points[i0]);
    if (dist(points[i0], points[i1]) <= tol) {
        out.rank = 0;
        out.vertices = {points[i0]};
        out.diameter_hull = 0.0;
        return out;
    }

    const Vec3 axis = normalized(points[i1] - points[i0]);
    int i2 = -1;
    double d2 = 0.0;
    double smin = kInf, smax = -kInf;
    int ilo = i0, ihi = i0;
    for (size_t i = 0; i < points.size(); ++i) {
        const Vec3 r = points[i] - points[i0];
        const double s = dot(r, axis);
        if (s < smin) { smin = s; ilo = static_cast<int>(i); }
        if (s > smax) { smax = s; ihi = static_cast<int>(i); }
        const double d = norm(r - s * axis);
        if (d > d2) { d2 = d; i2 = static_cast<int>(i); }
    }
    if (d2 <= tol) {
        out.rank = 1;
        out.vertices = {points[ilo], points[ihi]};
        out.diameter_hull = dist(points[ilo], points[ihi]);
        return out;
    }

    const Vec3 nrm = normalized(cross(points[i1] - points[i0], points[i2] - points[i0]));
    int i3 = -1;
    double d3 = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        const double d = std::abs(dot(points[i] - points[i0], nrm));
        if (d > d3) { d3 = d; i3 = static_cast<int>(i); }
    }
    if (d3 <= tol) {
        out.rank = 2;
        const Vec3 u = axis, w = cross(nrm, axis);
        std::vector<Vec2> flat(points.size());
        for (size_t i = 0; i < points.size(); ++i) {
            const Vec3 r = points[i] - points[i0];
            flat[i] = {dot(r, u), dot(r, w)};
        }
        for (int k : hull_2d(flat)) out.vertices.push_back(points[k]);
        out.diameter_hull = pairwise_diameter(out.vertices);
        return out;
    }

    out.rank = 3;
    // long collinear runs (sampled polylines) can starve exact quickhull; a
    // deterministic joggle far below every containment tolerance breaks the
    // ties, while vertices and diameters still report the original points
    std::vector<QhFace> faces;
    std::vector<Vec3> jpts = points;
    const double ladder[4] = {1e-12, 1e-10, 1e-9, 3e-9};
    for (int attempt = 0;; ++attempt) {
        try {
            quickhull3(jpts, {i0, i1, i2, i3}, tol, faces);
            break;
        } catch (const std::runtime_error&) {
            if (attempt >= 4) throw;
            faces.clear();
            const double jog = std::min(ladder[attempt] * scale, 0.05 * d3);
            Rng rng(90210u + 31u * static_cast<unsigned>(attempt));
            jpts = points;
            for (Vec3& p : jpts) p = p + jog * rng.unit_vector3();
        }
    }

    std::vector<int> remap(points.size(), -1);
    for (const QhFace& f : faces) {
        if (!f.alive) continue;
        std::array<int, 3> tri;
        for (int k = 0; k < 3; ++k) {
            int& m = remap[f.v[k]];
            if (m < 0) {
                m = static_cast<int>(out.vertices.size());
                out.vertices.push_back(points[f.v[k]]);
            }
            tri[k] = m;
        }
        out.faces.push_back(tri);
    }
    out.diameter_hull = pairwise_diameter(out.vertices);
    return out;
}

double hull_distance(const HullResult& hull, const Vec3& p) {
    if (hull.rank <= 0) return hull.vertices.empty() ? kInf : dist(p, hull.vertices[0]);
    if (hull.rank == 1) return point_segment_distance(p, hull.vertices.front(), hull.vertices.back());
    if (hull.rank == 2) {
        const Vec3 nn = normalized(newell_normal(hull.vertices));
        const Vec3& v0 = hull.vertices[0];
        const double h = dot(p - v0, nn);
        const Vec3 q3 = p - h * nn;
        // in-plane polygon distance via the polygon's own edges
        double inside = 1.0;
        double edge_best = kInf;
        const size_t n = hull.vertices.size();
        for (size_t i = 0; i < n; ++i) {
            const Vec3& a = hull.vertices[i];
            const Vec3& b = hull.vertices[(i + 1) % n];
            const Vec3 e = b - a;
            const double side = dot(cross(nn, e), q3 - a);
            if (side < 0.0) inside = -1.0;
            edge_best = std::min(edge_best, point_segment_distance(q3, a, b));
        }
        const double planar = (inside > 0.0 || n < 3) ? (n < 3 ? edge_best : 0.0) : edge_best;
        return std::hypot(h, planar);
    }
    double worst = -kInf;
    const double sliver = 1e-10 * hull.diameter_hull * hull.diameter_hull;
    for (const auto& f : hull.faces) {
        const Vec3& a = hull.vertices[f[0]];
        const Vec3 n = cross(hull.vertices[f[1]] - a, hull.vertices[f[2]] - a);
        const double ln = norm(n);
        // sliver faces inherit their halfspace from well-shaped neighbours
        if (ln <= sliver) continue;
        worst = std::max(worst, dot(n, p - a) / ln);
    }
    if (worst <= 0.0) return 0.0;
    double best = kInf;
    for (const auto& f : hull.faces)
        best = std::min(best, point_triangle_distance(p, hull.vertices[f[0]], hull.vertices[f[1]],
                                                      hull.vertices[f[2]]));
    return best;
}

// ----------------------------------------------------- self-intersection ---

SelfIntersectionResult self_intersection(const SurfaceMesh& mesh, double exclusion_radius) {
    if (mesh.triangles.empty()) throw std::invalid_argument("self-intersection scan on empty mesh");
    if (!mesh.manifold()) throw std::invalid_argument("self-intersection scan needs a manifold mesh");

    SelfIntersectionResult out;
    out.exclusion_radius = exclusion_radius;
    const Bvh bvh = build_bvh(mesh);
    const double lam = bvh.lambda;

    double scale = 1.0;
    for (const Vec3& v : mesh.vertices)
        scale = std::max({scale, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
    const double eps = 1e-13 * scale;

    // pass 1: overlap traversal for true contact between non-adjacent patches
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty() && !out.intersects) {
        const auto [ia, ib] = stack.back();
        stack.pop_back();
        const BvhNode& na = bvh.nodes[ia];
        const BvhNode& nb = bvh.nodes[ib];
        if (ia != ib && !na.box.overlaps(nb.box)) continue;
        if (na.leaf() && nb.leaf()) {
            for (int i = na.begin; i < na.end && !out.intersects; ++i) {
                const int jstart = ia == ib ? i + 1 : nb.begin;
                for (int j = jstart; j < nb.end; ++j) {
                    const TriData& ta = bvh.tris[bvh.order[i]];
                    const TriData& tb = bvh.tris[bvh.order[j]];
                    if (ta.vid == tb.vid || tris_adjacent(ta, tb)) continue;
                    if (!ta.box.overlaps(tb.box)) continue;
                    if (tri_tri_intersect(ta.v, tb.v, eps)) {
                        out.intersects = true;
                        out.intersecting_pair = {bvh.order[i], bvh.order[j]};
                        break;
                    }
                }
            }
        } else if (ia == ib) {
            stack.push_back({na.left, na.left});
            stack.push_back({na.right, na.right});
            stack.push_back({na.left, na.right});
        } else if (na.leaf()) {
            stack.push_back({ia, nb.left});
            stack.push_back({ia, nb.right});
        } else {
            stack.push_back({na.left, ib});
            stack.push_back({na.right, ib});
        }
    }
    if (out.intersects) {
        out.min_separation = 0.0;
        out.closest_pair = out.intersecting_pair;
        return out;
    }

    // pass 2: best-first closest approach between domain-distant patches
    struct Item {
        double lb;
        int a, b;
        bool operator>(const Item& o) const { return lb > o.lb; }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    queue.push({0.0, 0, 0});
    double best = kInf;
    while (!queue.empty()) {
        const Item it = queue.top();
        queue.pop();
        if (it.lb >= best) break;
        const BvhNode& na = bvh.nodes[it.a];
        const BvhNode& nb = bvh.nodes[it.b];
        if (domain_pair_max(na, nb, lam) < exclusion_radius) continue;
        if (na.leaf() && nb.leaf()) {
            for (int i = na.begin; i < na.end; ++i) {
                const int jstart = it.a == it.b ? i + 1 : nb.begin;
                for (int j = jstart; j < nb.end; ++j) {
                    const TriData& ta = bvh.tris[bvh.order[i]];
                    const TriData& tb = bvh.tris[bvh.order[j]];
                    if (domain_pair_distance(ta, tb, lam) < exclusion_radius) continue;
                    const double d = tri_tri_distance(ta.v, tb.v);
                    if (d < best) {
                        best = d;
                        out.closest_pair = {bvh.order[i], bvh.order[j]};
                    }
                }
            }
        } else {
            auto push_pair = [&](int a, int b) {
                if (a > b) std::swap(a, b);
                const double lb = bvh.nodes[a].box.distance_lower_bound(bvh.nodes[b].box);
                if (lb < best) queue.push({lb, a, b});
            };
            if (it.a == it.b) {
                push_pair(na.left, na.left);
                push_pair(na.right, na.right);
                push_pair(na.left, na.right);
            } else if (na.leaf()) {
                push_pair(it.a, nb.left);
                push_pair(it.a, nb.right);
            } else {
                push_pair(na.left, it.b);
                push_pair(na.right, it.b);
            }
        }
    }
    out.min_separation = best;
    return out;
}

// ----------------------------------------------------------- hull bound ----

HullBoundCertificate hull_bound_certificate(const BoundaryLoop& loop_f, const BoundaryLoop& loop_g,
                                            const BendFoliation& foliation) {
    if (loop_f.points.size() < 4 || loop_g.points.size() < 4)
        throw std::invalid_argument("hull bound needs sampled boundary loops");
    if (loop_f.side == loop_g.side)
        throw std::invalid_argument("hull bound needs the two opposite boundary loops");

    HullBoundCertificate cert;
    cert.lambda = foliation.lambda;
    const HullResult hull = hull_and_diameter(strip_closing(loop_g.points));
    cert.diam_g = hull.diameter_set;
    cert.length_g = loop_g.total_length;

    double step = 0.0;
    for (size_t i = 0; i + 1 < loop_f.domain_x.size(); ++i)
        step = std::max(step, loop_f.domain_x[i + 1] - loop_f.domain_x[i]);
    cert.tol = 1e-3 * step;

    // distances from every sample of F to Hull(G)
    const size_t n = loop_f.points.size();
    std::vector<double> d(n);
    for (size_t i = 0; i < n; ++i) d[i] = hull_distance(hull, loop_f.points[i]);

    // refine around local minima of the sample distances
    std::vector<size_t> seeds;
    for (size_t i = 0; i + 1 < n; ++i) {
        const double prev = d[i == 0 ? n - 2 : i - 1];
        if (d[i] <= prev && d[i] <= d[i + 1]) seeds.push_back(i);
    }
    std::sort(seeds.begin(), seeds.end(), [&](size_t a, size_t b) { return d[a] < d[b]; });
    if (seeds.size() > 8) seeds.resize(8);

    double best = kInf, best_q = 0.0;
    Vec3 best_x{};
    auto refine_segment = [&](size_t i) {
        if (i + 1 >= n) return;
        const Vec3 a = loop_f.points[i], b = loop_f.points[i + 1];
        const double qa = loop_f.domain_x[i], qb = loop_f.domain_x[i + 1];
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = 0.0, hi = 1.0;
        double t1 = hi - gr * (hi - lo), t2 = lo + gr * (hi - lo);
        double f1 = hull_distance(hull, a + t1 * (b - a));
        double f2 = hull_distance(hull, a + t2 * (b - a));
        for (int it = 0; it < 80; ++it) {
            if (f1 <= f2) {
                hi = t2; t2 = t1; f2 = f1;
                t1 = hi - gr * (hi - lo);
                f1 = hull_distance(hull, a + t1 * (b - a));
            } else {
                lo = t1; t1 = t2; f1 = f2;
                t2 = lo + gr * (hi - lo);
                f2 = hull_distance(hull, a + t2 * (b - a));
            }
        }
        const double t = f1 <= f2 ? t1 : t2;
        const double val = std::min(f1, f2);
        if (val < best) {
            best = val;
            best_x = a + t * (b - a);
            best_q = qa + t * (qb - qa);
        }
    };
    for (size_t i : seeds) {
        if (d[i] < best) {
            best = d[i];
            best_x = loop_f.points[i];
            best_q = loop_f.domain_x[i];
        }
        refine_segment(i);
        refine_segment(i == 0 ? n - 2 : i - 1);
    }

    cert.x = best_x;
    cert.dist_x_hull = best;
    if (!(best <= cert.tol)) throw std::runtime_error("F misses Hull(G)");

    // walk the bend through x to the other boundary
    const double lam = foliation.lambda;
    double q = std::fmod(best_q, lam);
    if (q < 0.0) q += lam;
    const auto& breaks = foliation.family.breaks;
    const bool top_side = loop_f.side == BoundarySide::F;
    std::vector<double> track(breaks.size());
    for (size_t k = 0; k < breaks.size(); ++k) track[k] = top_side ? breaks[k].x1 : breaks[k].x0;
    const auto hi_it = std::lower_bound(track.begin(), track.end(), q);
    double t_star;
    if (hi_it == track.begin()) {
        t_star = breaks.front().t;
    } else if (hi_it == track.end()) {
        t_star = breaks.back().t;
    } else {
        const size_t hi = static_cast<size_t>(hi_it - track.begin());
        const size_t lo = hi - 1;
        const double span = track[hi] - track[lo];
        const double frac = span > 1e-15 ? (q - track[lo]) / span : 0.0;
        t_star = breaks[lo].t + frac * (breaks[hi].t - breaks[lo].t);
    }
    cert.t_at_x = t_star;
    const std::array<Vec3, 2> bend = foliation.bend(t_star);
    cert.y = top_side ? bend[0] : bend[1];
    cert.dist_xy = dist(cert.x, cert.y);

    cert.pass = cert.dist_x_hull <= cert.tol && cert.dist_xy >= 0.99 && cert.diam_g >= 0.99 &&
                cert.length_g >= 2.0 - 1e-9 && cert.lambda >= 2.0 &&
                std::abs(cert.length_g - cert.lambda) <= 5e-3 * cert.lambda;
    cert.message = cert.pass
                       ? "x in Hull(G) and ||x - y|| >= 1 force diam(G) >= 1 and len(G) = lambda >= 2"
                       : "hull bound violated";
    return cert;
}

std::string hull_bound_to_json(const HullBoundCertificate& cert) {
    nlohmann::json j;
    j["x"] = {cert.x.x, cert.x.y, cert.x.z};
    j["y"] = {cert.y.x, cert.y.y, cert.y.z};
    j["t_at_x"] = cert.t_at_x;
    j["dist_x_hull"] = cert.dist_x_hull;
    j["dist_xy"] = cert.dist_xy;
    j["diam_G"] = cert.diam_g;
    j["length_G"] = cert.length_g;
    j["lambda"] = cert.lambda;
    j["tol"] = cert.tol;
    j["pass"] = cert.pass;
    j["message"] = cert.message;
    return j.dump(2);
}

}  // namespace twistcyl
