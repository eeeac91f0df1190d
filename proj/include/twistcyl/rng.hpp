#pragma once

#include <cstdint>
#include <random>

#include "twistcyl/geometry.hpp"

namespace twistcyl {

// Seeded generator with fixed double mapping, so suites reproduce across platforms.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(uint64_t seed) : eng(seed) {}

    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int n) { return static_cast<int>(eng() % static_cast<uint64_t>(n)); }

    double gaussian() {
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    Vec3 unit_vector3() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 2.0 * kPi);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

    Mat3 rotation3() {
        double q[4];
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (double& c : q) {
                c = gaussian();
                n2 += c * c;
            }
        } while (n2 < 1e-12);
        const double inv = 1.0 / std::sqrt(n2);
        const double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;
        Mat3 r;
        r.m[0][0] = 1 - 2 * (y * y + z * z);
        r.m[0][1] = 2 * (x * y - w * z);
        r.m[0][2] = 2 * (x * z + w * y);
        r.m[1][0] = 2 * (x * y + w * z);
        r.m[1][1] = 1 - 2 * (x * x + z * z);
        r.m[1][2] = 2 * (y * z - w * x);
        r.m[2][0] = 2 * (x * z - w * y);
        r.m[2][1] = 2 * (y * z + w * x);
        r.m[2][2] = 1 - 2 * (x * x + y * y);
        return r;
    }
};

}  // namespace twistcyl
