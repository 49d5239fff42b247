// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#include "mono3d/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "mono3d/evaluation.hpp"
#include "mono3d/geometry.hpp"
#include "mono3d/lifting.hpp"
#include "mono3d/reference.hpp"

namespace mono3d {

namespace {

using reference::SplitMix64;

bool fault_enabled(const char* name) {
    const char* fault = std::getenv("MONO3D_KIT_SELFTEST_FAULT");
    return fault != nullptr && std::strcmp(fault, name) == 0;
}

std::string format(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

SuiteResult iou_monte_carlo_suite(SplitMix64& rng) {
    SuiteResult result{.name = "iou3d-monte-carlo"};
    constexpr int kPairs = 40;
    constexpr int kSamples = 200000;
    constexpr double kTol = 0.02;
    const double bias = fault_enabled("iou3d") ? 0.05 : 0.0;

    double worst = 0.0;
    for (int i = 0; i < kPairs; ++i) {
        const Cuboid3D a = reference::random_cuboid(rng, 0.2, 3.0, 2.0);
        const Cuboid3D b = reference::random_cuboid(rng, 0.2, 3.0, 2.0);
        const double exact = iou3d(a, b) + bias;
        const double estimate = reference::iou3d_monte_carlo(a, b, kSamples, rng.next());
        const double err = std::abs(exact - estimate);
        worst = std::max(worst, err);
        ++result.checks;
        if (err > kTol) ++result.failures;
    }
    result.passed = result.failures == 0;
    result.detail = "max |exact - monte-carlo| = " + format(worst);
    return result;
}

SuiteResult hungarian_suite(SplitMix64& rng) {
    SuiteResult result{.name = "hungarian-brute-force"};
    constexpr int kMatrices = 50;
    for (int i = 0; i < kMatrices; ++i) {
        const int n = 2 + static_cast<int>(rng.next() % 7);  // up to 8x8
        Eigen::MatrixXd cost(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) cost(r, c) = rng.uniform(0.0, 10.0);
        }
        const double fast = hungarian_assign(cost).total_cost;
        const double exhaustive = reference::hungarian_brute_force(cost);
        ++result.checks;
        if (std::abs(fast - exhaustive) > 1e-12) ++result.failures;
    }
    result.passed = result.failures == 0;
    result.detail = std::to_string(kMatrices) + " random matrices up to 8x8";
    return result;
}

SuiteResult obb_recovery_suite(SplitMix64& rng) {
    SuiteResult result{.name = "obb-recovery"};
    constexpr int kBoxes = 10;
    constexpr int kSamplesPerBox = 10000;

    for (int i = 0; i < kBoxes; ++i) {
        // Separated dims keep the covariance spectrum non-degenerate so
        // the axes are identifiable.
        Cuboid3D truth;
        truth.dims = Vec3(rng.uniform(2.0, 3.0), rng.uniform(0.9, 1.4), rng.uniform(0.3, 0.6));
        truth.center = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(2, 4));
        truth.rot = reference::random_rotation(rng);

        PointCloud cloud;
        cloud.points.reserve(kSamplesPerBox);
        for (int s = 0; s < kSamplesPerBox; ++s) {
            const Vec3 local(rng.uniform(-0.5, 0.5) * truth.dims.x(),
                             rng.uniform(-0.5, 0.5) * truth.dims.y(),
                             rng.uniform(-0.5, 0.5) * truth.dims.z());
            cloud.points.push_back(truth.center + truth.rot * local);
        }
        const Cuboid3D fitted = fit_obb_pca(cloud);

        bool ok = true;
        for (int k = 0; k < 3; ++k) {
            if (std::abs(fitted.dims[k] - truth.dims[k]) > 0.05 * truth.dims[k]) ok = false;
            if (std::abs(fitted.rot.col(k).dot(truth.rot.col(k))) < 0.99) ok = false;
        }
        ++result.checks;
        if (!ok) ++result.failures;
    }
    result.passed = result.failures == 0;
    result.detail = std::to_string(kBoxes) + " boxes, dims within 5%, axes |dot| >= 0.99";
    return result;
}

SuiteResult dbscan_suite(SplitMix64& rng) {
    SuiteResult result{.name = "dbscan-reference"};
    constexpr int kClouds = 5;
    for (int i = 0; i < kClouds; ++i) {
        PointCloud cloud;
        const int blobs = 1 + static_cast<int>(rng.next() % 3);
        for (int b = 0; b < blobs; ++b) {
            const Vec3 center(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(1, 4));
            const int count = 30 + static_cast<int>(rng.next() % 60);
            for (int p = 0; p < count; ++p) {
                cloud.points.push_back(center + Vec3(rng.uniform(-0.05, 0.05),
                                                     rng.uniform(-0.05, 0.05),
                                                     rng.uniform(-0.05, 0.05)));
            }
        }
        for (int p = 0; p < 25; ++p) {
            cloud.points.emplace_back(rng.uniform(-3, 3), rng.uniform(-3, 3),
                                      rng.uniform(0.5, 5));
        }
        const double eps = 0.04;
        const int min_pts = 6;
        const std::vector<int> fast = dbscan(cloud, eps, min_pts);
        const std::vector<int> reference_labels =
            reference::dbscan_brute_force(cloud.points, eps, min_pts);
        ++result.checks;
        if (fast != reference_labels) ++result.failures;
    }
    result.passed = result.failures == 0;
    result.detail = std::to_string(kClouds) + " clouds against the quadratic reference";
    return result;
}

SuiteResult unprojection_suite(SplitMix64& rng) {
    SuiteResult result{.name = "unprojection-round-trip"};
    const CameraIntrinsics k{310.5, 305.25, 81.75, 59.5};
    DepthMap depth;
    depth.width = 160;
    depth.height = 120;
    depth.data.resize(160 * 120);
    InstanceMask mask;
    mask.width = 160;
    mask.height = 120;
    mask.data.assign(160 * 120, 1);
    for (float& d : depth.data) d = static_cast<float>(rng.uniform(0.5, 6.0));

    const PointCloud cloud = unproject(depth, mask, k);
    double worst = 0.0;
    std::size_t idx = 0;
    for (int v = 0; v < depth.height; ++v) {
        for (int u = 0; u < depth.width; ++u) {
            const Vec3 uvz = project(k, cloud.points[idx]);
            worst = std::max({worst, std::abs(uvz.x() - u), std::abs(uvz.y() - v),
                              std::abs(uvz.z() - depth.at(u, v))});
            ++idx;
        }
    }
    result.checks = static_cast<int>(cloud.points.size());
    result.failures = worst < 1e-6 ? 0 : 1;
    result.passed = result.failures == 0;
    result.detail = "max reprojection error = " + format(worst);
    return result;
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
    SplitMix64 rng(options.seed);
    std::vector<SuiteResult> results;
    results.push_back(iou_monte_carlo_suite(rng));
    results.push_back(hungarian_suite(rng));
    results.push_back(obb_recovery_suite(rng));
    results.push_back(dbscan_suite(rng));
    results.push_back(unprojection_suite(rng));
    return results;
}

bool all_passed(const std::vector<SuiteResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const SuiteResult& r) { return r.passed; });
}

}  // namespace mono3d
