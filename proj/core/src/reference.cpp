// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#include "mono3d/reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mono3d::reference {

Mat3 random_rotation(SplitMix64& rng) {
    for (;;) {
        Rotation6d v;
        for (double& x : v.v) x = rng.uniform(-1.0, 1.0);
        try {
            return rotation_from_6d(v);
        } catch (const DegenerateRotation&) {
            // vanishingly rare; draw again
        }
    }
}

Cuboid3D random_cuboid(SplitMix64& rng, double dim_lo, double dim_hi,
                       double center_radius, const Vec3& center_offset) {
    Cuboid3D c;
    for (int k = 0; k < 3; ++k) c.dims[k] = rng.uniform(dim_lo, dim_hi);
    for (;;) {
        for (int k = 0; k < 3; ++k) c.center[k] = rng.uniform(-center_radius, center_radius);
        if (c.center.norm() <= center_radius) break;
    }
    c.center += center_offset;
    c.rot = random_rotation(rng);
    return c;
}

namespace {

// Precomputed frame for fast point-in-box tests.
struct BoxFrame {
    Mat3 rot_t;
    Vec3 center;
    Vec3 half;

    explicit BoxFrame(const Cuboid3D& c)
        : rot_t(c.rot.transpose()), center(c.center), half(0.5 * c.dims) {}

    bool contains(const Vec3& p) const {
        const Vec3 local = rot_t * (p - center);
        return std::abs(local.x()) <= half.x() && std::abs(local.y()) <= half.y() &&
               std::abs(local.z()) <= half.z();
    }
};

}  // namespace

double iou3d_monte_carlo(const Cuboid3D& a, const Cuboid3D& b, int samples,
                         std::uint64_t seed) {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const Cuboid3D* c : {&a, &b}) {
        for (const Vec3& p : cuboid_corners(*c)) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
    }
    const BoxFrame fa(a);
    const BoxFrame fb(b);
    SplitMix64 rng(seed);
    std::int64_t both = 0;
    std::int64_t either = 0;
    for (int s = 0; s < samples; ++s) {
        const Vec3 p(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()),
                     rng.uniform(lo.z(), hi.z()));
        const bool in_a = fa.contains(p);
        const bool in_b = fb.contains(p);
        both += (in_a && in_b) ? 1 : 0;
        either += (in_a || in_b) ? 1 : 0;
    }
    if (either == 0) return 0.0;
    return static_cast<double>(both) / static_cast<double>(either);
}

double hungarian_brute_force(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    if (n != cost.cols() || n < 1 || n > 10) {
        throw std::invalid_argument("hungarian_brute_force: need a square matrix, n in [1, 10]");
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int j = 0; j < n; ++j) total += cost(perm[j], j);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<int> dbscan_brute_force(const std::vector<Vec3>& points, double eps,
                                    int min_pts) {
    const int n = static_cast<int>(points.size());
    const double eps_sq = eps * eps;
    auto neighbors = [&](int i) {
        std::vector<int> out;
        for (int j = 0; j < n; ++j) {
            if ((points[i] - points[j]).squaredNorm() <= eps_sq) out.push_back(j);
        }
        return out;
    };

    constexpr int kUnvisited = -2;
    constexpr int kNoise = -1;
    std::vector<int> labels(n, kUnvisited);
    int cluster = 0;
    for (int i = 0; i < n; ++i) {
        if (labels[i] != kUnvisited) continue;
        std::vector<int> seed = neighbors(i);
        if (static_cast<int>(seed.size()) < min_pts) {
            labels[i] = kNoise;
            continue;
        }
        labels[i] = cluster;
        std::deque<int> queue(seed.begin(), seed.end());
        while (!queue.empty()) {
            const int q = queue.front();
            queue.pop_front();
            if (labels[q] == kNoise) labels[q] = cluster;  // border point
            if (labels[q] != kUnvisited) continue;
            labels[q] = cluster;
            std::vector<int> reach = neighbors(q);
            if (static_cast<int>(reach.size()) >= min_pts) {
                queue.insert(queue.end(), reach.begin(), reach.end());
            }
        }
        ++cluster;
    }
    return labels;
}

double chamfer_brute_force(const CornerArray& a, const CornerArray& b) {
    double total = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const CornerArray& from = pass == 0 ? a : b;
        const CornerArray& to = pass == 0 ? b : a;
        double sum = 0.0;
        for (const Vec3& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec3& q : to) {
                const double d = std::sqrt((p.x() - q.x()) * (p.x() - q.x()) +
                                           (p.y() - q.y()) * (p.y() - q.y()) +
                                           (p.z() - q.z()) * (p.z() - q.z()));
                best = std::min(best, d);
            }
            sum += best;
        }
        total += sum / 8.0;
    }
    return total;
}

}  // namespace mono3d::reference
