#include "twistcyl/rulings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "twistcyl/embedding.hpp"

namespace twistcyl {

namespace {

// Knot lookup: index of the interval containing wrapped t.
size_t interval_of(const std::vector<PrebendBreak>& breaks, double t) {
    auto it = std::upper_bound(breaks.begin(), breaks.end(), t,
                               [](double v, const PrebendBreak& b) { return v < b.t; });
    size_t i = static_cast<size_t>(it - breaks.begin());
    if (i == 0) return 0;
    if (i >= breaks.size()) return breaks.size() - 2;
    return i - 1;
}

double lerp_track(const PrebendBreak& b0, const PrebendBreak& b1, double t, bool top) {
    const double span = b1.t - b0.t;
    const double f = span > 1e-15 ? (t - b0.t) / span : 0.0;
    return top ? b0.x1 + f * (b1.x1 - b0.x1) : b0.x0 + f * (b1.x0 - b0.x0);
}

}  // namespace

double PrebendFamily::x0(double t) const {
    double w = std::fmod(t, lambda);
    if (w < 0.0) w += lambda;
    const size_t i = interval_of(breaks, w);
    return lerp_track(breaks[i], breaks[i + 1], w, false);
}

double PrebendFamily::x1(double t) const {
    double w = std::fmod(t, lambda);
    if (w < 0.0) w += lambda;
    const size_t i = interval_of(breaks, w);
    return lerp_track(breaks[i], breaks[i + 1], w, true);
}

double PrebendFamily::slope(double t) const { return x1(t) - x0(t); }

std::array<Vec2, 2> PrebendFamily::prebend(double t) const {
    return {Vec2{x0(t), 0.0}, Vec2{x1(t), 1.0}};
}

PrebendFamily prebend_family(const ThickenedPattern& thickened) {
    PrebendFamily fam;
    fam.lambda = thickened.domain.lambda;
    fam.breaks.push_back({0.0, 0.0, 0.0});
    for (int k = 0; k < 4; ++k) {
        const Crease& c = thickened.base.creases[k];
        const double xb = c.p0.y < 0.5 ? c.p0.x : c.p1.x;
        const double xt = c.p0.y < 0.5 ? c.p1.x : c.p0.x;
        const double sh = thickened.piece_shift[k];
        const double ax = thickened.bands[k].axial_shift;
        fam.breaks.push_back({0.5 * (xb + xt) + sh, xb + sh, xt + sh});
        fam.breaks.push_back({0.5 * (xb + xt) + sh + ax, xb + sh + ax, xt + sh + ax});
    }
    if (std::abs(fam.breaks.back().t - fam.lambda) > 1e-9)
        throw std::runtime_error("foliation degenerates: family does not close up");
    fam.breaks.back() = {fam.lambda, fam.lambda, fam.lambda};
    for (size_t i = 1; i < fam.breaks.size(); ++i) {
        const PrebendBreak& p = fam.breaks[i - 1];
        const PrebendBreak& q = fam.breaks[i];
        if (q.t < p.t - 1e-12 || q.x0 < p.x0 - 1e-12 || q.x1 < p.x1 - 1e-12)
            throw std::runtime_error("foliation degenerates: endpoint track runs backward");
    }
    return fam;
}

std::array<Vec3, 2> BendFoliation::bend(double t) const {
    const auto pre = family.prebend(t);
    return {image(pre[0]), image(pre[1])};
}

double BendFoliation::straightness_defect(double t, int n_interior) const {
    const auto pre = family.prebend(t);
    const auto b = bend(t);
    double worst = 0.0;
    for (int i = 1; i <= n_interior; ++i) {
        const double y = static_cast<double>(i) / (n_interior + 1);
        const Vec3 q = image(pre[0] + y * (pre[1] - pre[0]));
        worst = std::max(worst, point_segment_distance(q, b[0], b[1]));
    }
    return worst;
}

double BendFoliation::bend_length(double t) const {
    const auto b = bend(t);
    return dist(b[0], b[1]);
}

BendFoliation bend_foliation(const CylinderEmbedding& embedding) {
    BendFoliation fol;
    fol.family = prebend_family(embedding.thickened);
    fol.lambda = embedding.lambda();
    fol.image = [&embedding](const Vec2& p) { return embedding.eval(p); };
    return fol;
}

BalancedPairFrame find_balanced_pair(const BendFoliation& foliation, int n_scan, double tol) {
    if (n_scan < 16) throw std::invalid_argument("n_scan must be at least 16");
    const double lam = foliation.lambda;
    const PrebendFamily& fam = foliation.family;
    const double zero_snap = 1e-12;

    // circular distance of a root candidate from t = 0, the tie-break key
    auto circ = [lam](double t) { return std::min(t, lam - t); };

    std::vector<double> fs(n_scan + 1);
    for (int i = 0; i <= n_scan; ++i) fs[i] = fam.balance_defect(lam * i / n_scan);

    double best_t = -1.0, best_key = std::numeric_limits<double>::infinity();
    int iterations = 0;
    auto offer = [&](double t) {
        const double key = circ(t);
        if (key < best_key - 1e-12) {
            best_key = key;
            best_t = t;
        }
    };
    for (int i = 0; i <= n_scan; ++i) {
        const double ti = lam * i / n_scan;
        if (std::abs(fs[i]) <= zero_snap) {
            offer(ti);
            continue;
        }
        if (i == n_scan) break;
        if (std::abs(fs[i + 1]) <= zero_snap) continue;
        if ((fs[i] > 0.0) == (fs[i + 1] > 0.0)) continue;
        // bisect the sign change
        double lo = ti, hi = lam * (i + 1) / n_scan;
        double flo = fs[i];
        for (int it = 0; it < 60 && hi - lo > tol; ++it) {
            ++iterations;
            const double mid = 0.5 * (lo + hi);
            const double fm = fam.balance_defect(mid);
            if (std::abs(fm) <= zero_snap) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        offer(0.5 * (lo + hi));
    }
    if (best_t < 0.0) throw std::runtime_error("no balanced pair found");

    BalancedPairFrame frame;
    frame.t_star = best_t;
    frame.bisection_iterations = iterations;
    frame.balance_residual = std::abs(fam.balance_defect(best_t));
    frame.u_prime = fam.prebend(best_t);
    frame.v_prime = fam.prebend(best_t + 0.5 * lam);
    frame.u = foliation.bend(best_t);
    frame.v = foliation.bend(best_t + 0.5 * lam);
    frame.b = frame.u[0];
    frame.a = frame.u[1];
    frame.d = frame.v[0];
    frame.c = frame.v[1];
    frame.b_prime = frame.u_prime[0];
    frame.a_prime = frame.u_prime[1];
    frame.d_prime = frame.v_prime[0];
    frame.c_prime = frame.v_prime[1];

    FlatCylinder circle{lam};
    const double f_fwd = circle.wrap(frame.c_prime.x - frame.a_prime.x);
    const double g_fwd = circle.wrap(frame.d_prime.x - frame.b_prime.x);
    frame.arc_lengths = {f_fwd, lam - f_fwd, g_fwd, lam - g_fwd};
    return frame;
}

namespace {

struct ProjectedArc {
    std::vector<Vec2> pts;
    double flat_length = 0.0;
};

// March the boundary circle y = y_level from x_start through flat length len.
ProjectedArc sample_arc(const CylinderEmbedding& e, double y_level, double x_start, double len,
                        int n, const Vec3& e1, const Vec3& e2) {
    ProjectedArc arc;
    arc.flat_length = len;
    arc.pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = e.thickened.domain.wrap(x_start + len * i / n);
        const Vec3 p = e.eval({x, y_level});
        arc.pts.push_back({dot(p, e1), dot(p, e2)});
    }
    return arc;
}

// Lexicographically first intersection between two projected polylines,
// pruned with per-block bounding boxes on the second one.
bool first_crossing(const ProjectedArc& c1, const ProjectedArc& c2, double tol, Vec2* x_out) {
    constexpr int kBlock = 64;
    const int n1 = static_cast<int>(c1.pts.size()) - 1;
    const int n2 = static_cast<int>(c2.pts.size()) - 1;
    const int nblocks = (n2 + kBlock - 1) / kBlock;
    std::vector<double> blo_x(nblocks), blo_y(nblocks), bhi_x(nblocks), bhi_y(nblocks);
    for (int b = 0; b < nblocks; ++b) {
        double lx = 1e300, ly = 1e300, hx = -1e300, hy = -1e300;
        const int jend = std::min(n2, (b + 1) * kBlock);
        for (int j = b * kBlock; j <= jend; ++j) {
            lx = std::min(lx, c2.pts[j].x);
            ly = std::min(ly, c2.pts[j].y);
            hx = std::max(hx, c2.pts[j].x);
            hy = std::max(hy, c2.pts[j].y);
        }
        blo_x[b] = lx - tol;
        blo_y[b] = ly - tol;
        bhi_x[b] = hx + tol;
        bhi_y[b] = hy + tol;
    }
    for (int i = 0; i < n1; ++i) {
        const Vec2& a = c1.pts[i];
        const Vec2& b = c1.pts[i + 1];
        const double lx = std::min(a.x, b.x), hx = std::max(a.x, b.x);
        const double ly = std::min(a.y, b.y), hy = std::max(a.y, b.y);
        for (int blk = 0; blk < nblocks; ++blk) {
            if (hx < blo_x[blk] || lx > bhi_x[blk] || hy < blo_y[blk] || ly > bhi_y[blk])
                continue;
            const int jend = std::min(n2, (blk + 1) * kBlock);
            for (int j = blk * kBlock; j < jend; ++j) {
                if (segments_intersect(a, b, c2.pts[j], c2.pts[j + 1], tol, x_out)) return true;
            }
        }
    }
    return false;
}

}  // namespace

ProjectionCertificate projection_certificate(const CylinderEmbedding& embedding,
                                             const BalancedPairFrame& frame, int n_samples) {
    if (n_samples < 64) throw std::invalid_argument("n_samples must be at least 64");
    ProjectionCertificate cert;
    cert.lambda = embedding.lambda();

    const Vec3 u_dir = normalized(frame.u[1] - frame.u[0]);
    const Vec3 v_dir = normalized(frame.v[1] - frame.v[0]);
    Vec3 dir = cross(u_dir, v_dir);
    if (norm(dir) < 1e-9) dir = orthonormal_basis(u_dir).first;  // parallel bends
    cert.direction = normalized(dir);
    const auto [e1, e2] = orthonormal_basis(cert.direction);

    auto proj = [&](const Vec3& p) { return Vec2{dot(p, e1), dot(p, e2)}; };
    cert.A = {proj(frame.u[0]), proj(frame.u[1])};
    cert.B = {proj(frame.v[0]), proj(frame.v[1])};
    cert.len_a = dist(cert.A[0], cert.A[1]);
    cert.len_b = dist(cert.B[0], cert.B[1]);

    // the four boundary arcs cut by the balanced pair, projected
    const ProjectedArc f_fwd = sample_arc(embedding, 1.0, frame.a_prime.x,
                                          frame.arc_lengths[0], n_samples, e1, e2);
    const ProjectedArc f_rev = sample_arc(embedding, 1.0, frame.c_prime.x,
                                          frame.arc_lengths[1], n_samples, e1, e2);
    const ProjectedArc g_fwd = sample_arc(embedding, 0.0, frame.b_prime.x,
                                          frame.arc_lengths[2], n_samples, e1, e2);
    const ProjectedArc g_rev = sample_arc(embedding, 0.0, frame.d_prime.x,
                                          frame.arc_lengths[3], n_samples, e1, e2);

    // aligned pairings first: their flat lengths sum to lambda exactly
    const std::array<std::pair<const ProjectedArc*, const ProjectedArc*>, 4> pairings = {
        std::pair{&f_fwd, &g_fwd}, {&f_rev, &g_rev}, {&f_fwd, &g_rev}, {&f_rev, &g_fwd}};

    bool found = false;
    for (const auto& [f_arc, g_arc] : pairings) {
        Vec2 hit;
        if (!first_crossing(*f_arc, *g_arc, 1e-9, &hit)) continue;
        cert.C1 = f_arc->pts;
        cert.C2 = g_arc->pts;
        cert.len_fstar = f_arc->flat_length;
        cert.len_gstar = g_arc->flat_length;
        cert.len_c1 = polyline_length(cert.C1);
        cert.len_c2 = polyline_length(cert.C2);
        cert.x = hit;
        found = true;
        break;
    }
    if (!found) {
        cert.message = "projected boundary arcs do not cross";
        return cert;
    }

    const double slack = 1e-9;
    if (cert.len_fstar + cert.len_gstar > cert.lambda + slack) {
        cert.message = "arc lengths exceed the circumference";
        return cert;
    }
    if (cert.len_c1 > cert.len_fstar + slack || cert.len_c2 > cert.len_gstar + slack) {
        cert.message = "projection stretched an arc";
        return cert;
    }
    if (cert.len_c1 + cert.len_c2 < 2.0 - 0.02) {
        cert.message = "crossing arcs too short";
        return cert;
    }
    cert.holds = true;
    cert.message = "lambda >= len(C1) + len(C2) >= 2";
    return cert;
}

std::string projection_certificate_to_json(const ProjectionCertificate& cert,
                                           const BalancedPairFrame& frame) {
    nlohmann::json j;
    j["t_star"] = frame.t_star;
    j["balance_residual"] = frame.balance_residual;
    j["arc_lengths"] = frame.arc_lengths;
    j["direction"] = {cert.direction.x, cert.direction.y, cert.direction.z};
    j["len_a"] = cert.len_a;
    j["len_b"] = cert.len_b;
    j["chain"] = {{"lambda", cert.lambda},
                  {"fstar_plus_gstar", cert.len_fstar + cert.len_gstar},
                  {"c1_plus_c2", cert.len_c1 + cert.len_c2}};
    j["x"] = {cert.x.x, cert.x.y};
    j["pass"] = cert.holds;
    j["message"] = cert.message;
    return j.dump(2);
}

}  // namespace twistcyl
