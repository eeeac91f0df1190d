#include "twistcyl/flat_domain.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace twistcyl {

namespace {

CreasePattern base_p1() {
    CreasePattern p;
    p.pattern_id = "P1";
    p.triangles[0].v = {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
    p.triangles[1].v = {Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}};
    p.triangles[2].v = {Vec2{1, 0}, Vec2{2, 1}, Vec2{1, 1}};
    p.triangles[3].v = {Vec2{1, 0}, Vec2{2, 0}, Vec2{2, 1}};
    p.creases[0] = {Vec2{0, 1}, Vec2{1, 0}, FoldSign::valley};
    p.creases[1] = {Vec2{1, 0}, Vec2{1, 1}, FoldSign::mountain};
    p.creases[2] = {Vec2{1, 0}, Vec2{2, 1}, FoldSign::valley};
    p.creases[3] = {Vec2{2, 0}, Vec2{2, 1}, FoldSign::mountain};
    // Triangle 3 tucks between 1 and 2, so the seam band wraps around the
    // top edge of triangle 1 and the boundary pair becomes a Hopf link.
    // Sequential stacking {0,1,2,3} closes into an unlinked flat cylinder.
    p.stack_order = {0, 1, 3, 2};
    return p;
}

CreasePattern base_p2() {
    CreasePattern p;
    p.pattern_id = "P2";
    p.triangles[0].v = {Vec2{0, 0}, Vec2{1, 1}, Vec2{0, 1}};
    p.triangles[1].v = {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}};
    p.triangles[2].v = {Vec2{1, 0}, Vec2{2, 0}, Vec2{1, 1}};
    p.triangles[3].v = {Vec2{2, 0}, Vec2{2, 1}, Vec2{1, 1}};
    p.creases[0] = {Vec2{0, 0}, Vec2{1, 1}, FoldSign::valley};
    p.creases[1] = {Vec2{1, 0}, Vec2{1, 1}, FoldSign::mountain};
    p.creases[2] = {Vec2{2, 0}, Vec2{1, 1}, FoldSign::valley};
    p.creases[3] = {Vec2{2, 0}, Vec2{2, 1}, FoldSign::mountain};
    p.stack_order = {0, 1, 3, 2};  // same tuck as P1; the zigzag mirrors the sign
    return p;
}

CreasePattern mirror_of(CreasePattern p, const std::string& new_id) {
    auto flip = [](const Vec2& v) { return Vec2{v.x, 1.0 - v.y}; };
    for (auto& tri : p.triangles) {
        // swap two vertices to keep counterclockwise orientation
        tri.v = {flip(tri.v[0]), flip(tri.v[2]), flip(tri.v[1])};
    }
    for (auto& c : p.creases) {
        c.p0 = flip(c.p0);
        c.p1 = flip(c.p1);
    }
    p.pattern_id = new_id;
    return p;
}

}  // namespace

CreasePattern pattern_catalog(const std::string& pattern_id) {
    if (pattern_id == "P1") return base_p1();
    if (pattern_id == "P2") return base_p2();
    if (pattern_id == "P1m") return mirror_of(base_p1(), "P1m");
    if (pattern_id == "P2m") return mirror_of(base_p2(), "P2m");
    throw std::invalid_argument("unknown pattern_id: " + pattern_id);
}

std::array<RigidMotion2, 4> fold_maps(const CreasePattern& pattern) {
    std::array<RigidMotion2, 4> maps;
    maps[0] = RigidMotion2{};
    for (int k = 1; k < 4; ++k) {
        const Crease& c = pattern.creases[k - 1];
        maps[k] = compose(maps[k - 1], reflection_across(c.p0, c.p1));
    }
    return maps;
}

int locate_triangle(const std::array<Triangle2, 4>& triangles, const Vec2& p) {
    for (int k = 0; k < 4; ++k)
        if (triangles[k].contains(p, 1e-9)) return k;
    // numerical fallback: triangle with the smallest outside defect
    int best = 0;
    double best_defect = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
        const Triangle2& tri = triangles[k];
        double defect = 0.0;
        for (int i = 0; i < 3; ++i) {
            const Vec2 e = tri.v[(i + 1) % 3] - tri.v[i];
            defect = std::max(defect, -cross(e, p - tri.v[i]) / norm(e));
        }
        if (defect < best_defect) {
            best_defect = defect;
            best = k;
        }
    }
    return best;
}

Vec3 fold_by_reflections(const CreasePattern& pattern, const Vec2& p) {
    FlatCylinder dom{2.0};
    const Vec2 q{dom.wrap(p.x), p.y};
    const auto maps = fold_maps(pattern);
    const Vec2 img = maps[locate_triangle(pattern.triangles, q)].apply(q);
    return {img.x, img.y, 0.0};
}

ThickenedPattern thicken(const CreasePattern& pattern, double epsilon, WidthRule rule) {
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    if (epsilon > 0.5) throw std::invalid_argument("bands collide");

    ThickenedPattern tp;
    tp.base = pattern;
    tp.epsilon = epsilon;
    tp.rule = rule;
    tp.domain.lambda = 2.0 + epsilon;

    // axial length consumed per unit of perpendicular width, per crease
    std::array<double, 4> axial_per_width{};
    std::array<Vec2, 4> dir{}, nrm{};
    double coef_sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        const Vec2 u = pattern.creases[k].direction();
        Vec2 n = perp(u);
        if (std::abs(n.x) < 1e-12)
            throw std::invalid_argument("crease parallel to the strip axis cannot be thickened");
        if (n.x < 0.0) n = -n;
        dir[k] = u;
        nrm[k] = n;
        axial_per_width[k] = 1.0 / n.x;
        coef_sum += axial_per_width[k];
    }

    std::array<double, 4> width{}, axial{};
    for (int k = 0; k < 4; ++k) {
        if (rule == WidthRule::equal_width) {
            width[k] = epsilon / coef_sum;
            axial[k] = width[k] * axial_per_width[k];
        } else {
            axial[k] = epsilon / 4.0;
            width[k] = axial[k] * nrm[k].x;
        }
    }

    double shift = 0.0;
    for (int k = 0; k < 4; ++k) {
        tp.piece_shift[k] = shift;
        tp.flat_regions[k] = pattern.triangles[k];
        for (Vec2& v : tp.flat_regions[k].v) v.x += shift;

        FoldBand b;
        b.crease_index = k;
        b.edge0 = pattern.creases[k].p0 + Vec2{shift, 0.0};
        b.edge1 = pattern.creases[k].p1 + Vec2{shift, 0.0};
        b.u = dir[k];
        b.n = nrm[k];
        b.width = width[k];
        b.axial_shift = axial[k];
        b.sign = pattern.creases[k].sign;
        tp.bands[k] = b;

        shift += axial[k];
    }
    return tp;
}

LemmaLineCertificate lemma_line_check(const std::array<Vec2, 2>& A,
                                      const std::array<Vec2, 2>& B,
                                      const std::vector<Vec2>& C1,
                                      const std::vector<Vec2>& C2,
                                      double tol) {
    LemmaLineCertificate cert;
    cert.len_a = dist(A[0], A[1]);
    cert.len_b = dist(B[0], B[1]);
    cert.len_c1 = polyline_length(C1);
    cert.len_c2 = polyline_length(C2);

    if (C1.empty() || C2.empty()) {
        cert.message = "empty arc";
        return cert;
    }
    if (cert.len_a < 1.0 - 1e-9 || cert.len_b < 1.0 - 1e-9) {
        cert.message = "segment shorter than 1";
        return cert;
    }

    // Each arc must join one endpoint of A to one endpoint of B, and the two
    // arcs must take complementary endpoints.
    const double snap = std::max(tol, 1e-6);
    auto match_ends = [&](const std::vector<Vec2>& C, int& ai, int& bi, bool& starts_at_a) {
        const Vec2 f = C.front(), e = C.back();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                if (dist(f, A[i]) <= snap && dist(e, B[j]) <= snap) {
                    ai = i; bi = j; starts_at_a = true;
                    return true;
                }
                if (dist(e, A[i]) <= snap && dist(f, B[j]) <= snap) {
                    ai = i; bi = j; starts_at_a = false;
                    return true;
                }
            }
        return false;
    };
    int a1, b1, a2, b2;
    bool c1_from_a, c2_from_a;
    if (!match_ends(C1, a1, b1, c1_from_a) || !match_ends(C2, a2, b2, c2_from_a)) {
        cert.message = "arc endpoints do not lie on the segments' endpoints";
        return cert;
    }
    if (a1 == a2 || b1 == b2) {
        cert.message = "arcs do not join complementary endpoints";
        return cert;
    }

    // first crossing in arc order along C1
    auto segment_count = [](const std::vector<Vec2>& C) {
        return C.size() == 1 ? size_t{1} : C.size() - 1;
    };
    auto seg = [](const std::vector<Vec2>& C, size_t i) {
        if (C.size() == 1) return std::pair<Vec2, Vec2>{C[0], C[0]};
        return std::pair<Vec2, Vec2>{C[i], C[i + 1]};
    };
    bool found = false;
    double along_c1 = 0.0;
    Vec2 x;
    for (size_t i = 0; i < segment_count(C1) && !found; ++i) {
        const auto [p, q] = seg(C1, i);
        for (size_t j = 0; j < segment_count(C2) && !found; ++j) {
            const auto [r, s] = seg(C2, j);
            Vec2 hit;
            if (segments_intersect(p, q, r, s, tol, &hit)) {
                found = true;
                x = hit;
                along_c1 += dist(p, hit);
            }
        }
        if (!found) along_c1 += dist(p, q);
    }
    if (!found) {
        cert.message = "no intersection found between the arcs";
        return cert;
    }
    cert.x = x;

    double along_c2 = 0.0;
    {
        double best = std::numeric_limits<double>::infinity();
        double acc = 0.0, at = 0.0;
        for (size_t j = 0; j < segment_count(C2); ++j) {
            const auto [r, s] = seg(C2, j);
            const Vec2 cp = closest_point_on_segment(x, r, s);
            const double d = dist(cp, x);
            if (d < best) {
                best = d;
                at = acc + dist(r, cp);
            }
            acc += dist(r, s);
        }
        along_c2 = at;
    }

    cert.len_c1_a = c1_from_a ? along_c1 : cert.len_c1 - along_c1;
    cert.len_c1_b = cert.len_c1 - cert.len_c1_a;
    cert.len_c2_a = c2_from_a ? along_c2 : cert.len_c2 - along_c2;
    cert.len_c2_b = cert.len_c2 - cert.len_c2_a;

    const double sum = cert.len_c1 + cert.len_c2;
    cert.holds = sum >= cert.len_a + cert.len_b - 1e-9 &&
                 cert.len_a + cert.len_b >= 2.0 - 1e-9 &&
                 cert.len_c1_a + cert.len_c2_a >= cert.len_a - 1e-9 &&
                 cert.len_c1_b + cert.len_c2_b >= cert.len_b - 1e-9;
    if (!cert.holds) cert.message = "inequality violated";
    return cert;
}

std::string pattern_to_json(const CreasePattern& pattern) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["pattern_id"] = pattern.pattern_id;
    for (const Crease& c : pattern.creases) {
        j["creases"].push_back({{"p0", {c.p0.x, c.p0.y}},
                                {"p1", {c.p1.x, c.p1.y}},
                                {"sign", c.sign == FoldSign::mountain ? "mountain" : "valley"}});
    }
    for (const Triangle2& t : pattern.triangles) {
        nlohmann::json tri = nlohmann::json::array();
        for (const Vec2& v : t.v) tri.push_back({v.x, v.y});
        j["triangles"].push_back(tri);
    }
    for (int k : pattern.stack_order) j["stack_order"].push_back(k + 1);
    return j.dump(2);
}

CreasePattern pattern_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    CreasePattern p;
    p.pattern_id = j.at("pattern_id").get<std::string>();
    const auto& creases = j.at("creases");
    const auto& triangles = j.at("triangles");
    const auto& stack = j.at("stack_order");
    if (creases.size() != 4 || triangles.size() != 4 || stack.size() != 4)
        throw std::invalid_argument("pattern JSON must describe 4 triangles, 4 creases");
    for (int k = 0; k < 4; ++k) {
        const auto& c = creases[k];
        p.creases[k].p0 = {c.at("p0")[0].get<double>(), c.at("p0")[1].get<double>()};
        p.creases[k].p1 = {c.at("p1")[0].get<double>(), c.at("p1")[1].get<double>()};
        const std::string sign = c.at("sign").get<std::string>();
        if (sign != "mountain" && sign != "valley")
            throw std::invalid_argument("unknown fold sign: " + sign);
        p.creases[k].sign = sign == "mountain" ? FoldSign::mountain : FoldSign::valley;
        for (int i = 0; i < 3; ++i)
            p.triangles[k].v[i] = {triangles[k][i][0].get<double>(),
                                   triangles[k][i][1].get<double>()};
        p.stack_order[k] = stack[k].get<int>() - 1;
    }
    return p;
}

}  // namespace twistcyl
