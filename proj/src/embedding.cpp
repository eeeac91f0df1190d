#include "twistcyl/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "twistcyl/rng.hpp"
#include "twistcyl/rulings.hpp"

namespace twistcyl {

namespace {

double max_curvature(const UProfile& profile) {
    double k = 0.0;
    for (double v : profile.kappa) k = std::max(k, v);
    return k;
}

// Gap between the accumulated chain motion and the pure seam translation
// p -> p - (lambda, 0).
double chain_closure_defect(const RigidMotion2& final_motion, double lambda) {
    double d = std::abs(final_motion.m[0][0] - 1.0);
    d = std::max(d, std::abs(final_motion.m[0][1]));
    d = std::max(d, std::abs(final_motion.m[1][0]));
    d = std::max(d, std::abs(final_motion.m[1][1] - 1.0));
    d = std::max(d, std::abs(final_motion.t.x + lambda));
    d = std::max(d, std::abs(final_motion.t.y));
    return d;
}

}  // namespace

Vec3 BandChart::eval(const Vec2& p) const {
    const double s = std::clamp(s_at(p), 0.0, width);
    return chart.eval(s, r_at(p));
}

double Mat32::gram_defect() const {
    const double a = dot(c0, c0) - 1.0;
    const double b = dot(c0, c1);
    const double c = dot(c1, c1) - 1.0;
    const double mean = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return std::max(std::abs(mean + rad), std::abs(mean - rad));
}

RegionRef CylinderEmbedding::locate(const Vec2& q) const {
    const Vec2 p{thickened.domain.wrap(q.x), q.y};
    if (has_bands) {
        for (int k = 0; k < 4; ++k) {
            const double s = band_charts[k].s_at(p);
            if (s >= 0.0 && s <= band_charts[k].width) return {RegionKind::band, k};
        }
    }
    for (int k = 0; k < 4; ++k)
        if (flat_charts[k].region.contains(p, 1e-9)) return {RegionKind::flat, k};
    if (has_bands) {
        for (int k = 0; k < 4; ++k) {
            const double s = band_charts[k].s_at(p);
            if (s >= -1e-9 && s <= band_charts[k].width + 1e-9) return {RegionKind::band, k};
        }
    }
    return {RegionKind::flat, locate_triangle(thickened.flat_regions, p)};
}

Vec3 CylinderEmbedding::eval(const Vec2& q) const {
    const Vec2 p{thickened.domain.wrap(q.x), q.y};
    const RegionRef r = locate(p);
    if (r.kind == RegionKind::band) return band_charts[r.index].eval(p);
    return flat_charts[r.index].eval(p);
}

Mat32 CylinderEmbedding::eval_differential(const Vec2& q) const {
    const Vec2 p{thickened.domain.wrap(q.x), q.y};
    const RegionRef r = locate(p);
    Mat32 j;
    if (r.kind == RegionKind::flat) {
        const RigidMotion2& m = flat_charts[r.index].motion;
        j.c0 = {m.m[0][0], m.m[1][0], 0.0};
        j.c1 = {m.m[0][1], m.m[1][1], 0.0};
    } else {
        const BandChart& bc = band_charts[r.index];
        const double s = std::clamp(bc.s_at(p), 0.0, bc.width);
        Vec3 d_ds, d_dr;
        bc.chart.differential(s, bc.r_at(p), d_ds, d_dr);
        j.c0 = bc.n.x * d_ds + bc.u.x * d_dr;
        j.c1 = bc.n.y * d_ds + bc.u.y * d_dr;
    }
    return j;
}

CylinderEmbedding assemble(const ThickenedPattern& thickened, double layer_gap,
                           const ProfileParams& params) {
    if (layer_gap <= 0.0) throw std::invalid_argument("layer_gap must be positive");
    if (thickened.epsilon <= 0.0)
        throw std::invalid_argument("thickened domain must have positive epsilon");

    CylinderEmbedding e;
    e.thickened = thickened;
    e.layer_gap = layer_gap;
    e.profile_params = params;
    e.has_bands = true;
    e.smoothness_class =
        params.bump_order == 0 ? "Cinf" : "C" + std::to_string(params.bump_order + 1);

    std::array<int, 4> layer_of{};
    for (int i = 0; i < 4; ++i) layer_of[thickened.base.stack_order[i]] = i;
    for (int k = 0; k < 4; ++k) e.layer_height[k] = layer_of[k] * layer_gap;

    // every band must be wide enough for the height step it spans
    const double ratio = profile_separation_ratio(params.bump_order, params.n_samples);
    for (int k = 0; k < 4; ++k) {
        const double step = std::abs(e.layer_height[(k + 1) % 4] - e.layer_height[k]);
        if (step > thickened.bands[k].width * ratio)
            throw std::runtime_error("ε budget insufficient for requested layer_gap");
    }

    RigidMotion2 motion;  // identity on the fixed piece
    for (int k = 0; k < 4; ++k) {
        e.flat_charts[k] = {k, motion, e.layer_height[k], thickened.flat_regions[k]};

        const FoldBand& fb = thickened.bands[k];
        const double h0 = e.layer_height[k];
        const double h1 = e.layer_height[(k + 1) % 4];
        BandChart bc;
        bc.band = k;
        bc.base = fb.edge0;
        bc.n = fb.n;
        bc.u = fb.u;
        bc.width = fb.width;
        bc.chart.profile =
            make_u_profile_with_width(fb.width, std::abs(h1 - h0), params.bump_order,
                                      params.n_samples);
        const Vec2 o2 = motion.apply(fb.edge0);
        const Vec2 a2 = motion.apply_linear(fb.n);
        const Vec2 r2 = motion.apply_linear(fb.u);
        bc.chart.origin = {o2.x, o2.y, h0};
        bc.chart.across = {a2.x, a2.y, 0.0};
        bc.chart.ruling = {r2.x, r2.y, 0.0};
        bc.chart.lift = {0.0, 0.0, h1 >= h0 ? 1.0 : -1.0};
        bc.chart.r0 = -1.0 - fb.width;
        bc.chart.r1 = norm(fb.edge1 - fb.edge0) + 1.0 + fb.width;
        e.band_charts[k] = bc;

        // fold across the upstream band edge, then close up the band width,
        // so the next piece continues from the far edge of the U-turn
        RigidMotion2 slide;
        slide.t = -fb.width * fb.n;
        motion = compose(motion, compose(reflection_across(fb.edge0, fb.edge1), slide));
    }

    e.closure_defect = chain_closure_defect(motion, e.lambda());
    if (e.closure_defect > 1e-9)
        throw std::runtime_error("chart continuity violation at the seam");
    return e;
}

CylinderEmbedding make_limit_embedding(const CreasePattern& pattern) {
    CylinderEmbedding e;
    e.thickened = thicken(pattern, 0.0);
    e.layer_gap = 0.0;
    e.has_bands = false;
    e.smoothness_class = "piecewise planar";
    const auto maps = fold_maps(pattern);
    for (int k = 0; k < 4; ++k) {
        e.flat_charts[k] = {k, maps[k], 0.0, e.thickened.flat_regions[k]};
        e.layer_height[k] = 0.0;
        BandChart bc;
        bc.band = k;
        bc.base = e.thickened.bands[k].edge0;
        bc.n = e.thickened.bands[k].n;
        bc.u = e.thickened.bands[k].u;
        bc.width = 0.0;
        e.band_charts[k] = bc;
    }
    const Crease& seam = pattern.creases[3];
    const RigidMotion2 closed = compose(maps[3], reflection_across(seam.p0, seam.p1));
    e.closure_defect = chain_closure_defect(closed, e.lambda());
    return e;
}

IsometryReport isometry_report(const CylinderEmbedding& e, int grid_resolution, unsigned seed) {
    if (grid_resolution < 32) throw std::invalid_argument("grid_resolution must be at least 32");
    IsometryReport rep;
    const double lam = e.lambda();

    auto consider = [&](const Vec2& p) {
        const double d = e.eval_differential(p).gram_defect();
        ++rep.grid_points;
        if (d > rep.max_gram_defect) {
            rep.max_gram_defect = d;
            rep.worst_location = p;
        }
    };

    const int nx = std::max(1, static_cast<int>(std::lround(grid_resolution * lam)));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j <= grid_resolution; ++j)
            consider({lam * i / nx, static_cast<double>(j) / grid_resolution});

    if (e.has_bands) {
        // bands are far narrower than the unit grid step; refine them
        for (const BandChart& bc : e.band_charts) {
            for (int i = 0; i <= 64; ++i) {
                const double s = bc.width * i / 64.0;
                for (int j = 0; j <= 16; ++j) {
                    const double y = static_cast<double>(j) / 16.0;
                    const double r = (y - bc.base.y - s * bc.n.y) / bc.u.y;
                    consider(bc.base + s * bc.n + r * bc.u);
                }
            }
        }
    }

    // analytic differential vs central differences at random points
    Rng rng(seed);
    int attempts = 0;
    while (rep.fd_points < 100 && attempts < 10000) {
        ++attempts;
        Vec2 p;
        double h = 1e-5;
        if (rep.fd_points % 5 < 3 || !e.has_bands) {
            p = {rng.uniform(0.0, lam), rng.uniform(0.0, 1.0)};
        } else {
            const BandChart& bc = e.band_charts[rng.uniform_int(4)];
            const double kmax = std::max(max_curvature(bc.chart.profile), 1.0);
            h = std::clamp(7.7e-4 / kmax, 1e-8, 1e-5);
            if (bc.width <= 8.0 * h) continue;
            const double s = rng.uniform(3.0 * h, bc.width - 3.0 * h);
            const double y = rng.uniform(0.05, 0.95);
            const double r = (y - bc.base.y - s * bc.n.y) / bc.u.y;
            p = bc.base + s * bc.n + r * bc.u;
        }
        if (p.y < 2.0 * h || p.y > 1.0 - 2.0 * h) continue;
        const RegionRef at = e.locate(p);
        const Vec2 probes[4] = {
            {p.x + h, p.y}, {p.x - h, p.y}, {p.x, p.y + h}, {p.x, p.y - h}};
        bool same = true;
        for (const Vec2& q : probes) {
            const RegionRef r = e.locate(q);
            if (r.kind != at.kind || r.index != at.index) {
                same = false;
                break;
            }
        }
        if (!same) continue;

        const Mat32 a = e.eval_differential(p);
        Mat32 fd;
        fd.c0 = (e.eval(probes[0]) - e.eval(probes[1])) / (2.0 * h);
        fd.c1 = (e.eval(probes[2]) - e.eval(probes[3])) / (2.0 * h);
        const double err = std::max(norm(fd.c0 - a.c0), norm(fd.c1 - a.c1));
        ++rep.fd_points;
        if (err > rep.max_fd_error) {
            rep.max_fd_error = err;
            rep.worst_fd_location = p;
        }
    }
    return rep;
}

std::pair<BoundaryLoop, BoundaryLoop> boundary_loops(const CylinderEmbedding& e, int n_samples) {
    if (n_samples < 128) throw std::invalid_argument("n_samples must be at least 128");
    const double lam = e.lambda();

    auto build = [&](BoundarySide side) {
        const double y = side == BoundarySide::F ? 1.0 : 0.0;
        std::vector<double> xs;
        xs.reserve(n_samples + 4 * 64);
        for (int i = 0; i < n_samples; ++i) xs.push_back(lam * i / n_samples);
        if (e.has_bands) {
            for (const BandChart& bc : e.band_charts) {
                const double xa = bc.base.x - (y - bc.base.y) * bc.n.y / bc.n.x;
                const double xb = xa + bc.width / bc.n.x;
                const int extra =
                    std::max(16, static_cast<int>(std::ceil(8.0 * (xb - xa) * n_samples / lam)));
                for (int i = 0; i <= extra; ++i) xs.push_back(xa + (xb - xa) * i / extra);
            }
        }
        for (double& x : xs) x = e.thickened.domain.wrap(x);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                 xs.end());

        BoundaryLoop loop;
        loop.side = side;
        loop.points.reserve(xs.size() + 1);
        for (double x : xs) {
            loop.points.push_back(e.eval({x, y}));
            loop.domain_x.push_back(x);
        }
        loop.points.push_back(loop.points.front());
        loop.domain_x.push_back(xs.front() + lam);
        loop.arc.resize(loop.points.size(), 0.0);
        for (size_t i = 1; i < loop.points.size(); ++i)
            loop.arc[i] = loop.arc[i - 1] + dist(loop.points[i], loop.points[i - 1]);
        loop.total_length = loop.arc.back();
        return loop;
    };
    return {build(BoundarySide::F), build(BoundarySide::G)};
}

SurfaceMesh triangulate(const CylinderEmbedding& e, int grid_resolution) {
    if (grid_resolution < 8) throw std::invalid_argument("grid_resolution must be at least 8");
    const double lam = e.lambda();
    const PrebendFamily fam = prebend_family(e.thickened);

    std::vector<double> ts;
    const int nt = std::max(8, static_cast<int>(std::lround(grid_resolution * lam)));
    for (int i = 0; i < nt; ++i) ts.push_back(lam * i / nt);
    for (const PrebendBreak& b : fam.breaks)
        if (b.t < lam - 1e-12) ts.push_back(b.t);
    if (e.has_bands) {
        // refine band columns until the image chords hug the U-turn
        for (int k = 0; k < 4; ++k) {
            const double ta = fam.breaks[2 * k + 1].t;
            const double tb = fam.breaks[2 * k + 2].t;
            const double kmax = std::max(max_curvature(e.band_charts[k].chart.profile), 1.0);
            const double sag = std::max(e.layer_gap / 16.0, 1e-12);
            int cols = static_cast<int>(std::ceil(
                (grid_resolution / 64.0) * e.band_charts[k].width * std::sqrt(kmax / (8.0 * sag))));
            cols = std::clamp(cols, 8, 512);
            for (int i = 1; i < cols; ++i) ts.push_back(ta + (tb - ta) * i / cols);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             ts.end());

    const int ncol = static_cast<int>(ts.size());
    const int nrow = grid_resolution;

    SurfaceMesh mesh;
    mesh.lambda = lam;
    std::unordered_map<uint64_t, int> weld;
    auto key_of = [](const Vec2& p) {
        const auto qx = static_cast<int64_t>(std::llround(p.x * 1e12));
        const auto qy = static_cast<int64_t>(std::llround(p.y * 1e12));
        return (static_cast<uint64_t>(qx) << 21) ^ static_cast<uint64_t>(qy + 2'000'003);
    };
    std::vector<int> idx(static_cast<size_t>(ncol) * (nrow + 1));
    for (int i = 0; i < ncol; ++i) {
        const double x0 = fam.x0(ts[i]);
        const double x1 = fam.x1(ts[i]);
        for (int j = 0; j <= nrow; ++j) {
            const double y = static_cast<double>(j) / nrow;
            const Vec2 p{x0 + (x1 - x0) * y, y};
            const uint64_t key = key_of(p);
            auto it = weld.find(key);
            if (it == weld.end()) {
                const int id = static_cast<int>(mesh.vertices.size());
                mesh.vertices.push_back(e.eval(p));
                mesh.domain.push_back(p);
                weld.emplace(key, id);
                idx[i * (nrow + 1) + j] = id;
            } else {
                idx[i * (nrow + 1) + j] = it->second;
            }
        }
    }

    auto emit = [&](int a, int b, int c) {
        if (a == b || b == c || a == c) return;
        mesh.triangles.push_back({a, b, c});
    };
    for (int i = 0; i < ncol; ++i) {
        const int i1 = (i + 1) % ncol;  // the last column closes onto the first
        for (int j = 0; j < nrow; ++j) {
            const int v00 = idx[i * (nrow + 1) + j];
            const int v10 = idx[i1 * (nrow + 1) + j];
            const int v11 = idx[i1 * (nrow + 1) + j + 1];
            const int v01 = idx[i * (nrow + 1) + j + 1];
            emit(v00, v10, v11);
            emit(v00, v11, v01);
        }
    }

    // neighbors across shared edges
    std::unordered_map<uint64_t, std::pair<int, int>> edge_tris;
    auto edge_key = [](int a, int b) {
        if (a > b) std::swap(a, b);
        return (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b);
    };
    const int ntri = static_cast<int>(mesh.triangles.size());
    for (int t = 0; t < ntri; ++t) {
        for (int s = 0; s < 3; ++s) {
            const uint64_t k = edge_key(mesh.triangles[t][s], mesh.triangles[t][(s + 1) % 3]);
            auto it = edge_tris.find(k);
            if (it == edge_tris.end())
                edge_tris.emplace(k, std::pair<int, int>{t, -1});
            else
                it->second.second = t;
        }
    }
    mesh.neighbors.assign(ntri, {-1, -1, -1});
    for (int t = 0; t < ntri; ++t) {
        for (int s = 0; s < 3; ++s) {
            const auto& pr =
                edge_tris.at(edge_key(mesh.triangles[t][s], mesh.triangles[t][(s + 1) % 3]));
            mesh.neighbors[t][s] = pr.first == t ? pr.second : pr.first;
        }
    }
    return mesh;
}

int SurfaceMesh::euler_characteristic() const {
    std::unordered_set<uint64_t> edges;
    for (const auto& tri : triangles)
        for (int s = 0; s < 3; ++s) {
            int a = tri[s], b = tri[(s + 1) % 3];
            if (a > b) std::swap(a, b);
            edges.insert((static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b));
        }
    return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
           static_cast<int>(triangles.size());
}

int SurfaceMesh::boundary_cycle_count() const {
    std::unordered_map<uint64_t, int> edge_count;
    for (const auto& tri : triangles)
        for (int s = 0; s < 3; ++s) {
            int a = tri[s], b = tri[(s + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_count[(static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b)];
        }
    std::unordered_map<int, std::vector<int>> link;
    for (const auto& [key, count] : edge_count) {
        if (count != 1) continue;
        const int a = static_cast<int>(key >> 32);
        const int b = static_cast<int>(key & 0xffffffffu);
        link[a].push_back(b);
        link[b].push_back(a);
    }
    std::unordered_set<int> seen;
    int cycles = 0;
    for (const auto& [v, nbrs] : link) {
        if (seen.count(v)) continue;
        // walk the cycle through v
        ++cycles;
        int prev = -1, cur = v;
        while (!seen.count(cur)) {
            seen.insert(cur);
            const auto& ns = link.at(cur);
            int next = -1;
            for (int cand : ns)
                if (cand != prev) {
                    next = cand;
                    break;
                }
            if (next < 0) break;
            prev = cur;
            cur = next;
        }
    }
    return cycles;
}

bool SurfaceMesh::manifold() const {
    std::unordered_map<uint64_t, int> edge_count;
    for (const auto& tri : triangles)
        for (int s = 0; s < 3; ++s) {
            int a = tri[s], b = tri[(s + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_count[(static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b)];
        }
    for (const auto& [key, count] : edge_count)
        if (count > 2) return false;
    std::vector<char> used(vertices.size(), 0);
    for (const auto& tri : triangles)
        for (int v : tri) used[v] = 1;
    for (char u : used)
        if (!u) return false;
    return true;
}

double triangulate_distortion(const CylinderEmbedding& e, const SurfaceMesh& mesh) {
    const double lam = e.lambda();
    double worst = 0.0;
    for (const auto& tri : mesh.triangles) {
        for (int s = 0; s < 3; ++s) {
            const int a = tri[s], b = tri[(s + 1) % 3];
            double dx = mesh.domain[b].x - mesh.domain[a].x;
            if (dx > 0.5 * lam) dx -= lam;
            if (dx < -0.5 * lam) dx += lam;
            const double dy = mesh.domain[b].y - mesh.domain[a].y;
            const double flat = std::hypot(dx, dy);
            if (flat < 1e-14) continue;
            const double img = dist(mesh.vertices[a], mesh.vertices[b]);
            worst = std::max(worst, std::abs(img / flat - 1.0));
        }
    }
    return worst;
}

double seam_defect(const CylinderEmbedding& e, int n_samples) {
    const double lam = e.lambda();
    double worst = 0.0;
    for (int i = 0; i <= n_samples; ++i) {
        const double y = static_cast<double>(i) / n_samples;
        Vec3 left;
        if (e.has_bands) {
            const BandChart& bc = e.band_charts[3];
            left = bc.chart.eval(bc.width, bc.r_at({lam, y}));
        } else {
            left = e.flat_charts[3].eval({lam, y});
        }
        const Vec3 right = e.flat_charts[0].eval({0.0, y});
        worst = std::max(worst, dist(left, right));
    }
    return worst;
}

double junction_defect(const CylinderEmbedding& e, int n_samples) {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
        const FoldBand& fb = e.thickened.bands[k];
        const double len = norm(fb.edge1 - fb.edge0);
        for (int i = 0; i <= n_samples; ++i) {
            const double r = len * i / n_samples;
            const Vec2 up = fb.edge0 + r * fb.u;
            const Vec2 dn = up + Vec2{fb.axial_shift, 0.0};
            // the far edge of the last band lands on the seam copy of piece 0
            const Vec2 dn_wrapped = k == 3 ? Vec2{dn.x - e.lambda(), dn.y} : dn;
            if (e.has_bands) {
                const BandChart& bc = e.band_charts[k];
                worst = std::max(worst, dist(e.flat_charts[k].eval(up), bc.chart.eval(0.0, r)));
                worst = std::max(
                    worst, dist(e.flat_charts[(k + 1) % 4].eval(dn_wrapped),
                                bc.chart.eval(bc.width, bc.r_at(dn))));
            } else {
                const Vec2 up_wrapped = k == 3 ? Vec2{up.x - e.lambda(), up.y} : up;
                worst = std::max(worst, dist(e.flat_charts[k].eval(up),
                                             e.flat_charts[(k + 1) % 4].eval(up_wrapped)));
            }
        }
    }
    return worst;
}

}  // namespace twistcyl
