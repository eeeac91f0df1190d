#include "twistcyl/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace twistcyl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cyclic Jacobi diagonalization of a symmetric n x n matrix, n <= 4.
// Eigenvectors end up in the columns of v.
void jacobi_eigen(int n, double a[4][4], double v[4][4], double w[4]) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v[i][j] = i == j ? 1.0 : 0.0;
    for (int pass = 0; pass < 64; ++pass) {
        double off = 0.0, diag = 0.0;
        for (int p = 0; p < n; ++p) {
            diag += a[p][p] * a[p][p];
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        }
        if (off <= 1e-30 * std::max(diag, 1e-300)) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    for (int i = 0; i < n; ++i) w[i] = a[i][i];
}

Mat3 quat_to_mat(double qw, double qx, double qy, double qz) {
    Mat3 r;
    r.m[0][0] = 1.0 - 2.0 * (qy * qy + qz * qz);
    r.m[0][1] = 2.0 * (qx * qy - qw * qz);
    r.m[0][2] = 2.0 * (qx * qz + qw * qy);
    r.m[1][0] = 2.0 * (qx * qy + qw * qz);
    r.m[1][1] = 1.0 - 2.0 * (qx * qx + qz * qz);
    r.m[1][2] = 2.0 * (qy * qz - qw * qx);
    r.m[2][0] = 2.0 * (qx * qz - qw * qy);
    r.m[2][1] = 2.0 * (qy * qz + qw * qx);
    r.m[2][2] = 1.0 - 2.0 * (qx * qx + qy * qy);
    return r;
}

// Proper rotation maximizing sum q_i . (R p_i) for centered clouds
// (quaternion eigenvector method).
Mat3 best_rotation(const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
    double s[3][3] = {};
    for (size_t i = 0; i < p.size(); ++i)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) s[r][c] += p[i][r] * q[i][c];
    double n[4][4];
    n[0][0] = s[0][0] + s[1][1] + s[2][2];
    n[0][1] = s[1][2] - s[2][1];
    n[0][2] = s[2][0] - s[0][2];
    n[0][3] = s[0][1] - s[1][0];
    n[1][1] = s[0][0] - s[1][1] - s[2][2];
    n[1][2] = s[0][1] + s[1][0];
    n[1][3] = s[0][2] + s[2][0];
    n[2][2] = s[1][1] - s[0][0] - s[2][2];
    n[2][3] = s[1][2] + s[2][1];
    n[3][3] = s[2][2] - s[0][0] - s[1][1];
    for (int i = 1; i < 4; ++i)
        for (int j = 0; j < i; ++j) n[i][j] = n[j][i];
    double v[4][4], w[4];
    jacobi_eigen(4, n, v, w);
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (w[i] > w[best]) best = i;
    const double qn = std::sqrt(v[0][best] * v[0][best] + v[1][best] * v[1][best] +
                                v[2][best] * v[2][best] + v[3][best] * v[3][best]);
    return quat_to_mat(v[0][best] / qn, v[1][best] / qn, v[2][best] / qn, v[3][best] / qn);
}

// Squared distance in the plane to the solid reference triangle with corner
// at the origin and unit legs along the axes.
double dist2_corner_triangle(double x, double y) {
    if (x >= 0.0 && y >= 0.0 && x + y <= 1.0) return 0.0;
    double d2 = kInf;
    {  // leg along x
        const double t = std::clamp(x, 0.0, 1.0);
        d2 = std::min(d2, (x - t) * (x - t) + y * y);
    }
    {  // leg along y
        const double t = std::clamp(y, 0.0, 1.0);
        d2 = std::min(d2, x * x + (y - t) * (y - t));
    }
    {  // hypotenuse from (1,0) to (0,1)
        const double u = std::clamp(0.5 * (1.0 - x + y), 0.0, 1.0);
        const double dx = x - (1.0 - u), dy = y - u;
        d2 = std::min(d2, dx * dx + dy * dy);
    }
    return d2;
}

// Max over samples of h2 + in-plane distance^2 to the triangle at pose
// (corner vx, vy; legs rotated by phi).  Bails out past `cap`.
double pose_objective(const std::vector<Vec2>& q, const std::vector<double>& h2, double phi,
                      double vx, double vy, double cap) {
    const double c = std::cos(phi), s = std::sin(phi);
    double worst = 0.0;
    for (size_t i = 0; i < q.size(); ++i) {
        const double rx = q[i].x - vx, ry = q[i].y - vy;
        const double lx = rx * c + ry * s;
        const double ly = -rx * s + ry * c;
        const double val = h2[i] + dist2_corner_triangle(lx, ly);
        if (val > worst) {
            worst = val;
            if (worst >= cap) return worst;
        }
    }
    return worst;
}

std::string eps_tag(double epsilon) {
    std::ostringstream os;
    os << epsilon;
    return os.str();
}

}  // namespace

TriangleFit fit_right_isosceles(const std::vector<Vec3>& samples) {
    const size_t n = samples.size();
    if (n < 100) throw std::invalid_argument("fit_right_isosceles needs at least 100 samples");

    Vec3 centroid;
    for (const Vec3& p : samples) centroid += p;
    centroid = centroid / static_cast<double>(n);

    double cov[4][4] = {};
    for (const Vec3& p : samples) {
        const Vec3 d = p - centroid;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) cov[r][c] += d[r] * d[c];
    }
    double evec[4][4], eval[4];
    jacobi_eigen(3, cov, evec, eval);
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int i, int j) { return eval[i] > eval[j]; });
    const double l0 = std::max(eval[order[0]], 0.0);
    const double l1 = std::max(eval[order[1]], 0.0);
    if (l1 <= 1e-12 * std::max(l0, 1e-300))
        throw std::invalid_argument("fit_right_isosceles: samples are collinear");

    const Vec3 nrm = normalized(Vec3{evec[0][order[2]], evec[1][order[2]], evec[2][order[2]]});
    Vec3 e1 = normalized(Vec3{evec[0][order[0]], evec[1][order[0]], evec[2][order[0]]});
    e1 = normalized(e1 - dot(e1, nrm) * nrm);
    Vec3 e2 = cross(nrm, e1);

    std::vector<Vec2> q(n);
    std::vector<double> h2(n);
    for (size_t i = 0; i < n; ++i) {
        const Vec3 d = samples[i] - centroid;
        q[i] = {dot(d, e1), dot(d, e2)};
        h2[i] = dot(d, nrm) * dot(d, nrm);
    }

    // Canonical in-plane heading from the third moment, so the pose search
    // runs on the same numbers whatever pose the cloud arrived in.
    Vec2 m3;
    double scale2 = 0.0;
    for (const Vec2& r : q) {
        m3 += norm2(r) * r;
        scale2 = std::max(scale2, norm2(r));
    }
    if (norm(m3) > 1e-9 * static_cast<double>(n) * scale2 * std::sqrt(scale2)) {
        const Vec2 g1 = normalized(m3);
        const Vec2 g2 = perp(g1);
        for (Vec2& r : q) r = {dot(r, g1), dot(r, g2)};
        const Vec3 f1 = g1.x * e1 + g1.y * e2;
        const Vec3 f2 = g2.x * e1 + g2.y * e2;
        e1 = f1;
        e2 = f2;
    }

    // Coarse pose grid: headings around the circle, corner seeded from the
    // rotated bounding box and from centroid matching.
    const int kAngles = 128;  // divisible by 4, so the grid is mirror-closed
    double best = kInf, best_phi = 0.0, best_vx = 0.0, best_vy = 0.0;
    for (int k = 0; k < kAngles; ++k) {
        const double phi = 2.0 * kPi * k / kAngles;
        const double c = std::cos(phi), s = std::sin(phi);
        double minx = kInf, miny = kInf;
        for (const Vec2& r : q) {
            minx = std::min(minx, r.x * c + r.y * s);
            miny = std::min(miny, -r.x * s + r.y * c);
        }
        const Vec2 cands[2] = {
            {minx * c - miny * s, minx * s + miny * c},          // bbox corner
            {-(c - s) / 3.0, -(s + c) / 3.0},                    // centroid match
        };
        for (const Vec2& v : cands) {
            const double val = pose_objective(q, h2, phi, v.x, v.y, best);
            if (val < best) {
                best = val;
                best_phi = phi;
                best_vx = v.x;
                best_vy = v.y;
            }
        }
    }

    // Compass refinement over (phi, vx, vy).
    double bbox = 0.0;
    for (const Vec2& r : q) bbox = std::max(bbox, norm(r));
    double step_ang = 2.0 * kPi / kAngles;
    double step_tr = 0.05 * std::max(1.0, 2.0 * bbox);
    for (int iter = 0; iter < 5000 && (step_ang > 1e-13 || step_tr > 1e-13); ++iter) {
        const double probes[6][3] = {
            {best_phi + step_ang, best_vx, best_vy}, {best_phi - step_ang, best_vx, best_vy},
            {best_phi, best_vx + step_tr, best_vy},  {best_phi, best_vx - step_tr, best_vy},
            {best_phi, best_vx, best_vy + step_tr},  {best_phi, best_vx, best_vy - step_tr}};
        int win = -1;
        double win_val = best;
        for (int j = 0; j < 6; ++j) {
            const double val = pose_objective(q, h2, probes[j][0], probes[j][1], probes[j][2], win_val);
            if (val < win_val) {
                win_val = val;
                win = j;
            }
        }
        if (win >= 0) {
            best = win_val;
            best_phi = probes[win][0];
            best_vx = probes[win][1];
            best_vy = probes[win][2];
        } else {
            step_ang *= 0.5;
            step_tr *= 0.5;
        }
    }

    TriangleFit fit;
    fit.plane_point = centroid;
    fit.plane_normal = nrm;
    fit.vertex = centroid + best_vx * e1 + best_vy * e2;
    const double c = std::cos(best_phi), s = std::sin(best_phi);
    fit.leg1 = c * e1 + s * e2;
    fit.leg2 = -s * e1 + c * e2;
    fit.leg_length = 1.0;
    fit.hausdorff = std::sqrt(best);

    // Reverse side: sup over a triangle lattice of the gap to the samples.
    double rev2 = 0.0;
    const int kLat = 64;
    for (int i = 0; i <= kLat; ++i)
        for (int j = 0; j <= kLat - i; ++j) {
            const Vec3 t = fit.vertex + (static_cast<double>(i) / kLat) * fit.leg1 +
                           (static_cast<double>(j) / kLat) * fit.leg2;
            double near2 = kInf;
            for (const Vec3& p : samples) near2 = std::min(near2, norm2(p - t));
            rev2 = std::max(rev2, near2);
        }
    fit.hausdorff_symmetric = std::max(fit.hausdorff, std::sqrt(rev2));
    return fit;
}

double sup_distance_after_alignment(const std::vector<Vec3>& moving,
                                    const std::vector<Vec3>& target) {
    if (moving.size() != target.size())
        throw std::invalid_argument("alignment needs corresponded lists of equal size");
    if (moving.size() < 3) throw std::invalid_argument("alignment needs at least 3 points");

    Vec3 pm, qm;
    for (size_t i = 0; i < moving.size(); ++i) {
        pm += moving[i];
        qm += target[i];
    }
    pm = pm / static_cast<double>(moving.size());
    qm = qm / static_cast<double>(moving.size());

    std::vector<Vec3> pc(moving.size()), qc(moving.size()), pmir(moving.size());
    for (size_t i = 0; i < moving.size(); ++i) {
        pc[i] = moving[i] - pm;
        qc[i] = target[i] - qm;
        pmir[i] = {-pc[i].x, pc[i].y, pc[i].z};
    }

    double best = kInf;
    for (int branch = 0; branch < 2; ++branch) {
        const std::vector<Vec3>& src = branch == 0 ? pc : pmir;
        const Mat3 rot = best_rotation(src, qc);
        double sup = 0.0;
        for (size_t i = 0; i < src.size(); ++i) sup = std::max(sup, dist(rot.apply(src[i]), qc[i]));
        best = std::min(best, sup);
    }
    return best;
}

double uniform_distance_to_limit(const CylinderEmbedding& embedding, int nx, int ny) {
    if (nx < 4 || ny < 2) throw std::invalid_argument("alignment grid too small");
    const double lam = embedding.lambda();
    const CylinderEmbedding limit = make_limit_embedding(embedding.thickened.base);
    std::vector<Vec3> built, flat;
    built.reserve(static_cast<size_t>(nx) * ny);
    flat.reserve(static_cast<size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i) {
        const double x = lam * i / nx;
        for (int j = 0; j < ny; ++j) {
            const double y = static_cast<double>(j) / (ny - 1);
            built.push_back(embedding.eval({x, y}));
            flat.push_back(limit.eval({2.0 * x / lam, y}));
        }
    }
    return sup_distance_after_alignment(built, flat);
}

EndgameCertificate endgame_certificate(const BalancedPairFrame& frame,
                                       const CylinderEmbedding& embedding) {
    const Vec3 ac = frame.a - frame.c;
    const Vec3 db = frame.d - frame.b;
    if (norm(ac) < 1e-9 || norm(db) < 1e-9)
        throw std::invalid_argument("endgame frame degenerate: coincident bend endpoints");

    const Vec3 probes[4] = {embedding.eval(frame.u_prime[1]), embedding.eval(frame.u_prime[0]),
                            embedding.eval(frame.v_prime[1]), embedding.eval(frame.v_prime[0])};
    const Vec3 marks[4] = {frame.a, frame.b, frame.c, frame.d};
    for (int i = 0; i < 4; ++i)
        if (dist(probes[i], marks[i]) > 1e-9)
            throw std::invalid_argument("endgame frame does not belong to this embedding");

    EndgameCertificate cert;
    cert.theta = angle_between(ac, db);
    cert.theta_variant = angle_between(ac, frame.b - frame.d);
    cert.theta_defect = std::abs(cert.theta - 0.5 * kPi);
    double worst_arc = 0.0;
    for (int i = 0; i < 4; ++i) {
        cert.arc_defects[i] = std::abs(frame.arc_lengths[i] - 1.0);
        worst_arc = std::max(worst_arc, cert.arc_defects[i]);
    }
    cert.perp_defect = std::max(std::abs(frame.u_prime[1].x - frame.u_prime[0].x),
                                std::abs(frame.v_prime[1].x - frame.v_prime[0].x));
    cert.square_division_defect = worst_arc + cert.perp_defect;
    return cert;
}

BigonCertificate bigon_certificate(const BoundaryLoop& loop_f, const BoundaryLoop& loop_g,
                                   const BendFoliation& foliation,
                                   const HullBoundCertificate& hull) {
    BigonCertificate cert;
    cert.x = hull.x;
    cert.y = hull.y;
    const Vec3 vdir = hull.y - hull.x;
    if (norm(vdir) < 1e-12)
        throw std::invalid_argument("bigon certificate: bend through x is degenerate");
    const Vec3 away = -1.0 / norm(vdir) * vdir;  // outward normal of the halfspace

    size_t zi = 0;
    double depth = -kInf;
    for (size_t i = 0; i + 1 < loop_g.points.size(); ++i) {
        const double d = dot(loop_g.points[i] - hull.x, away);
        if (d > depth) {
            depth = d;
            zi = i;
        }
    }
    cert.halfspace_depth = depth;
    const double tol_z = std::max(1e-9, hull.tol);
    if (depth < -tol_z)
        throw std::runtime_error("bigon certificate: no point of G reaches the halfspace past x");
    cert.z = loop_g.points[zi];

    // The bend rooted at z: invert the monotone bottom endpoint track.
    const PrebendFamily& fam = foliation.family;
    const double lam = foliation.lambda;
    double zw = std::fmod(loop_g.domain_x[zi], lam);
    if (zw < 0.0) zw += lam;
    double lo = 0.0, hi = lam;
    for (int it = 0; it < 80; ++it) {  // smallest t with x0(t) >= zw
        const double mid = 0.5 * (lo + hi);
        (fam.x0(mid) >= zw ? hi : lo) = mid;
    }
    const double t_low = hi;
    lo = 0.0;
    hi = lam;
    for (int it = 0; it < 80; ++it) {  // largest t with x0(t) <= zw
        const double mid = 0.5 * (lo + hi);
        (fam.x0(mid) <= zw ? lo : hi) = mid;
    }
    cert.t_at_z = 0.5 * (t_low + lo);
    const auto bend = foliation.bend(cert.t_at_z);
    cert.w = bend[1];

    cert.dist_yz = dist(cert.y, cert.z);
    cert.dist_wz = dist(cert.w, cert.z);
    cert.defect_yz = std::abs(cert.dist_yz - 1.0);
    cert.defect_wz = std::abs(cert.dist_wz - 1.0);
    const std::vector<Vec3> g_bigon = {cert.y, cert.z};
    const std::vector<Vec3> f_bigon = {cert.w, cert.z};
    cert.g_hausdorff = hausdorff_points_to_polyline(loop_g.points, g_bigon);
    cert.f_hausdorff = hausdorff_points_to_polyline(loop_f.points, f_bigon);

    cert.pass = hull.pass && cert.dist_yz + 1e-9 >= hull.dist_xy;
    cert.message = cert.pass ? "||y - z|| >= ||y - x|| >= 1 - tol"
                             : "z does not move away from y";
    return cert;
}

BigonCertificate bigon_certificate(const BoundaryLoop& loop_f, const BoundaryLoop& loop_g,
                                   const BendFoliation& foliation) {
    return bigon_certificate(loop_f, loop_g, foliation,
                             hull_bound_certificate(loop_f, loop_g, foliation));
}

std::array<double, ConvergenceRecord::kMetricCount> ConvergenceRecord::metrics() const {
    return {hausdorff_to_triangle, uniform_map_distance, theta_defect, square_division_defect,
            bigon_g_hausdorff,     bigon_f_hausdorff,    bigon_defect_yz, bigon_defect_wz};
}

const std::array<const char*, ConvergenceRecord::kMetricCount>& ConvergenceRecord::metric_names() {
    static const std::array<const char*, kMetricCount> names = {
        "hausdorff_to_triangle", "uniform_map_distance", "theta_defect", "square_division_defect",
        "bigon_g_hausdorff",     "bigon_f_hausdorff",    "bigon_defect_yz", "bigon_defect_wz"};
    return names;
}

namespace {

// Shared measurement core; `epsilon < 0` marks the flat-folded fixture,
// which skips the embeddedness and linking gates.
ConvergenceRecord measure(const std::string& pattern_id, double epsilon, const SweepConfig& cfg) {
    const bool fixture = epsilon <= 0.0;
    const CreasePattern pattern = pattern_catalog(pattern_id);
    const CylinderEmbedding e =
        fixture ? make_limit_embedding(pattern)
                : assemble(thicken(pattern, epsilon),
                           cfg.layer_gap > 0.0 ? cfg.layer_gap : default_layer_gap(epsilon));

    ConvergenceRecord rec;
    rec.epsilon = fixture ? 0.0 : epsilon;
    rec.pattern_id = pattern_id;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error(what + " at epsilon = " + eps_tag(rec.epsilon));
    };

    const IsometryReport ir = isometry_report(e, cfg.grid_resolution, cfg.seed);
    rec.max_gram_defect = ir.max_gram_defect;
    if (cfg.verify && !fixture) {
        if (!(ir.max_gram_defect <= cfg.gram_tol)) fail("isometry defect exceeds tolerance");
        const SurfaceMesh mesh = triangulate(e, cfg.grid_resolution);
        const SelfIntersectionResult si = self_intersection(mesh);
        rec.min_separation = si.min_separation;
        if (si.intersects) fail("surface self-intersects");
        if (!(si.min_separation >= cfg.min_separation_factor * e.layer_gap))
            fail("layer separation below the required fraction of the gap");
    }

    const auto [loop_f, loop_g] = boundary_loops(e, cfg.loop_samples);
    const BendFoliation fol = bend_foliation(e);
    if (cfg.verify && !fixture) {
        const LinkingResult lk = linking_numbers(loop_f.points, loop_g.points);
        if (!lk.agreed || !lk.is_hopf_candidate) fail("boundary pair is not a verified Hopf link");
        rec.linking_sign = lk.crossing_value;
    }

    const BalancedPairFrame frame = find_balanced_pair(fol, cfg.scan_samples);
    const ProjectionCertificate proj = projection_certificate(e, frame, cfg.projection_samples);
    if (!proj.holds) fail("projection chain failed: " + proj.message);
    const HullBoundCertificate hull = hull_bound_certificate(loop_f, loop_g, fol);
    if (!hull.pass) fail("hull bound failed: " + hull.message);
    const EndgameCertificate endgame = endgame_certificate(frame, e);
    const BigonCertificate bigon = bigon_certificate(loop_f, loop_g, fol, hull);
    if (!bigon.pass) fail("bigon certificate failed: " + bigon.message);

    rec.theta_defect = endgame.theta_defect;
    rec.square_division_defect = endgame.square_division_defect;
    rec.bigon_g_hausdorff = bigon.g_hausdorff;
    rec.bigon_f_hausdorff = bigon.f_hausdorff;
    rec.bigon_defect_yz = bigon.defect_yz;
    rec.bigon_defect_wz = bigon.defect_wz;

    const double lam = e.lambda();
    std::vector<Vec3> cloud;
    cloud.reserve(static_cast<size_t>(cfg.fit_nx) * cfg.fit_ny);
    for (int i = 0; i < cfg.fit_nx; ++i)
        for (int j = 0; j < cfg.fit_ny; ++j)
            cloud.push_back(e.eval({lam * i / cfg.fit_nx, static_cast<double>(j) / (cfg.fit_ny - 1)}));
    rec.hausdorff_to_triangle = fit_right_isosceles(cloud).hausdorff;
    rec.uniform_map_distance = uniform_distance_to_limit(e, cfg.fit_nx, cfg.fit_ny);

    const auto [pe1, pe2] = orthonormal_basis(proj.direction);
    const Vec2 hull_x_projected{dot(hull.x, pe1), dot(hull.x, pe2)};
    rec.cross_x_distance = dist(hull_x_projected, proj.x);
    return rec;
}

}  // namespace

ConvergenceRecord convergence_record(const std::string& pattern_id, double epsilon,
                                     const SweepConfig& config) {
    if (!(epsilon > 0.0 && epsilon <= 0.5))
        throw std::invalid_argument("epsilon must lie in (0, 0.5]");
    return measure(pattern_id, epsilon, config);
}

ConvergenceRecord measure_limit_fixture(const std::string& pattern_id, const SweepConfig& config) {
    return measure(pattern_id, -1.0, config);
}

std::vector<ConvergenceRecord> sweep(const std::string& pattern_id,
                                     const std::vector<double>& epsilons,
                                     const SweepConfig& config) {
    if (epsilons.empty()) throw std::invalid_argument("sweep needs at least one epsilon");
    for (size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0 && epsilons[i] <= 0.5))
            throw std::invalid_argument("sweep epsilons must lie in (0, 0.5]");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("sweep epsilons must be strictly decreasing");
    }
    std::vector<ConvergenceRecord> records;
    records.reserve(epsilons.size());
    for (const double eps : epsilons) records.push_back(convergence_record(pattern_id, eps, config));
    return records;
}

double fitted_decay_exponent(const std::vector<double>& epsilons,
                             const std::vector<double>& values) {
    if (epsilons.size() != values.size())
        throw std::invalid_argument("exponent fit needs matching lists");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0) || !(values[i] > 0.0)) continue;
        const double x = std::log(epsilons[i]), y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    const double var = sxx - sx * sx / n;
    if (var < 1e-30) return 0.0;
    return (sxy - sx * sy / n) / var;
}

}  // namespace twistcyl
