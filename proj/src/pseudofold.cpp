#include "twistcyl/pseudofold.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace twistcyl {

namespace {

double raw_bump(double t, int order) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    if (order <= 0) {
        const double u = 2.0 * t - 1.0;
        return std::exp(-1.0 / (1.0 - u * u));
    }
    return std::pow(t * (1.0 - t), order);
}

double bump_norm_constant(int order) {
    const int n = 4096;
    const double h = 1.0 / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = i * h;
        acc += (h / 6.0) *
               (raw_bump(a, order) + 4.0 * raw_bump(a + 0.5 * h, order) + raw_bump(a + h, order));
    }
    return acc;
}

std::string smoothness_of(int order) {
    if (order <= 0) return "C^inf";
    return "C^" + std::to_string(order + 1);
}

// Half-interval integration of the tangent angle and position, mirrored onto
// the second half so that the end conditions theta(L) = pi, P(L) = (0, sep)
// hold exactly in the sample table.
UProfile build_profile(double width, double squeeze, int order, int n_samples) {
    if (n_samples < 64) throw std::invalid_argument("n_samples must be at least 64");
    if (width <= 0.0) throw std::invalid_argument("profile width must be positive");
    if (squeeze < 1.0 - 1e-12) throw std::invalid_argument("squeeze must be at least 1");

    const double L = width;
    const double c = squeeze;
    int n = n_samples;
    if (n % 2) ++n;
    const double inv_norm = 1.0 / bump_norm_constant(order);
    auto kappa_fn = [&](double sv) {
        return (kPi / L) * c * inv_norm * raw_bump(c * (sv / L - 0.5) + 0.5, order);
    };

    UProfile up;
    up.width = L;
    up.bump_order = order;
    up.squeeze = c;
    up.smoothness_class = smoothness_of(order);
    up.s.resize(n + 1);
    up.point.resize(n + 1);
    up.angle.resize(n + 1);
    up.kappa.resize(n + 1);

    const double h = L / n;
    const int half = n / 2;
    up.s[0] = 0.0;
    up.angle[0] = 0.0;
    up.point[0] = {0.0, 0.0};
    up.kappa[0] = kappa_fn(0.0);

    auto turn = [&](double a, double b) {  // Simpson quadrature of kappa over [a, b]
        return ((b - a) / 6.0) * (kappa_fn(a) + 4.0 * kappa_fn(0.5 * (a + b)) + kappa_fn(b));
    };
    for (int j = 0; j < half; ++j) {
        const double s0 = j * h;
        const double th0 = up.angle[j];
        const double th_mid = th0 + turn(s0, s0 + 0.5 * h);
        const double th1 = th_mid + turn(s0 + 0.5 * h, s0 + h);
        up.s[j + 1] = (j + 1) * h;
        up.angle[j + 1] = th1;
        up.kappa[j + 1] = kappa_fn(s0 + h);
        const Vec2 t0{std::cos(th0), std::sin(th0)};
        const Vec2 tm{std::cos(th_mid), std::sin(th_mid)};
        const Vec2 t1{std::cos(th1), std::sin(th1)};
        up.point[j + 1] = up.point[j] + (h / 6.0) * (t0 + 4.0 * tm + t1);
    }

    const double sep = 2.0 * up.point[half].y;
    up.separation = sep;
    for (int j = half + 1; j <= n; ++j) {
        const int m = n - j;
        up.s[j] = j * h;
        up.angle[j] = kPi - up.angle[m];
        up.kappa[j] = up.kappa[m];
        up.point[j] = {up.point[m].x, sep - up.point[m].y};
    }
    return up;
}

struct HermiteWeights {
    int i;
    double u, h;
};

HermiteWeights locate(const std::vector<double>& grid, double width, double at) {
    const int n = static_cast<int>(grid.size()) - 1;
    const double h = width / n;
    double t = std::clamp(at, 0.0, width);
    int i = std::min(static_cast<int>(t / h), n - 1);
    return {i, (t - i * h) / h, h};
}

}  // namespace

Vec2 UProfile::eval(double at) const {
    const auto [i, u, h] = locate(s, width, at);
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    const Vec2 t0{std::cos(angle[i]), std::sin(angle[i])};
    const Vec2 t1{std::cos(angle[i + 1]), std::sin(angle[i + 1])};
    return h00 * point[i] + (h10 * h) * t0 + h01 * point[i + 1] + (h11 * h) * t1;
}

double UProfile::eval_angle(double at) const {
    const auto [i, u, h] = locate(s, width, at);
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * angle[i] + h10 * h * kappa[i] + h01 * angle[i + 1] + h11 * h * kappa[i + 1];
}

double UProfile::curvature(double at) const {
    const auto [i, u, h] = locate(s, width, at);
    (void)h;
    return (1.0 - u) * kappa[i] + u * kappa[i + 1];
}

double profile_separation_ratio(int bump_order, int n_samples) {
    return build_profile(1.0, 1.0, bump_order, n_samples).separation;
}

UProfile make_u_profile(double separation, int bump_order, int n_samples) {
    if (separation <= 0.0) throw std::invalid_argument("separation must be positive");
    double lo = separation, hi = 10.0 * separation + 1.0;
    auto sep_at = [&](double L) { return build_profile(L, 1.0, bump_order, n_samples).separation; };
    const double f_lo = sep_at(lo) - separation;
    const double f_hi = sep_at(hi) - separation;
    if (f_lo > 0.0 || f_hi < 0.0)
        throw std::runtime_error("root bracketing failed: separation(" + std::to_string(lo) +
                                 ") = " + std::to_string(f_lo + separation) + ", separation(" +
                                 std::to_string(hi) + ") = " + std::to_string(f_hi + separation) +
                                 ", target " + std::to_string(separation));
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (sep_at(mid) - separation > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return build_profile(0.5 * (lo + hi), 1.0, bump_order, n_samples);
}

UProfile make_u_profile_with_width(double width, double separation, int bump_order,
                                   int n_samples) {
    if (separation <= 0.0) throw std::invalid_argument("separation must be positive");
    const double ratio = build_profile(width, 1.0, bump_order, n_samples).separation / width;
    const double c0 = ratio * width / separation;
    if (c0 < 1.0 - 1e-12)
        throw std::invalid_argument("separation exceeds attainable ratio: requested " +
                                    std::to_string(separation) + ", maximum " +
                                    std::to_string(ratio * width) + " at width " +
                                    std::to_string(width));
    // separation is exactly inversely proportional to squeeze: one scale
    // correction lands on the target to roundoff
    UProfile up = build_profile(width, std::max(1.0, c0), bump_order, n_samples);
    const double c1 = std::max(1.0, c0 * up.separation / separation);
    up = build_profile(width, c1, bump_order, n_samples);
    return up;
}

Vec3 PseudofoldChart::eval(double sp, double r) const {
    const double slack = 1e-6;
    if (sp < -slack || sp > profile.width + slack || r < r0 - slack || r > r1 + slack)
        throw std::out_of_range("chart parameter out of range");
    const Vec2 p = profile.eval(sp);
    return origin + r * ruling + p.x * across + p.y * lift;
}

void PseudofoldChart::differential(double sp, double r, Vec3& d_ds, Vec3& d_dr) const {
    const double slack = 1e-6;
    if (sp < -slack || sp > profile.width + slack || r < r0 - slack || r > r1 + slack)
        throw std::out_of_range("chart parameter out of range");
    const double th = profile.eval_angle(sp);
    d_ds = std::cos(th) * across + std::sin(th) * lift;
    d_dr = ruling;
}

void profile_to_csv(const UProfile& profile, std::ostream& out) {
    out << "s,x,y,tangent_angle,kappa\n";
    out << std::setprecision(17);
    for (size_t i = 0; i < profile.s.size(); ++i)
        out << profile.s[i] << ',' << profile.point[i].x << ',' << profile.point[i].y << ','
            << profile.angle[i] << ',' << profile.kappa[i] << '\n';
}

}  // namespace twistcyl
