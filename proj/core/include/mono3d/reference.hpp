// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used to cross-check the fast
// paths: Monte Carlo volume estimation instead of polytope clipping,
// exhaustive permutation search instead of the O(n^3) assignment solver,
// and a quadratic-scan clustering instead of the grid-accelerated one.
// They are deliberately simple and share no code with the routines they
// verify. The self-test command and the test suites both run them.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mono3d/geometry.hpp"

namespace mono3d::reference {

/// Deterministic 64-bit generator (splitmix64). Used instead of
/// <random> engines so streams are reproducible across standard
/// libraries and platforms.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + unit * (hi - lo);
    }

  private:
    std::uint64_t state_;
};

/// Uniformly-seeded random rotation built through the 6D road
/// (rejection-sampled away from degeneracy).
Mat3 random_rotation(SplitMix64& rng);

/// Random oriented box: dims in [dim_lo, dim_hi], center within
/// center_radius of the origin offset by center_offset.
Cuboid3D random_cuboid(SplitMix64& rng, double dim_lo, double dim_hi,
                       double center_radius, const Vec3& center_offset = Vec3::Zero());

/// Monte Carlo IoU estimate: uniform samples over the axis-aligned
/// bounding box of the two boxes' corners; the ratio of samples inside
/// both to samples inside either.
double iou3d_monte_carlo(const Cuboid3D& a, const Cuboid3D& b, int samples,
                         std::uint64_t seed);

/// Exhaustive minimum assignment cost over all n! permutations (n <= 10).
double hungarian_brute_force(const Eigen::MatrixXd& cost);

/// Quadratic-scan density clustering, identical semantics to the fast
/// path: labels >= 0 are cluster ids in discovery order, -1 is noise.
std::vector<int> dbscan_brute_force(const std::vector<Vec3>& points, double eps,
                                    int min_pts);

/// Plain double-loop Chamfer distance over two corner sets.
double chamfer_brute_force(const CornerArray& a, const CornerArray& b);

}  // namespace mono3d::reference
