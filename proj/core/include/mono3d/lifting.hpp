// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "mono3d/geometry.hpp"

namespace mono3d {

/// Pinhole camera: focal lengths and principal point in pixels.
struct CameraIntrinsics {
    double fx = 1, fy = 1, cx = 0, cy = 0;
};

/// Per-pixel metric depth, row major. Non-positive or non-finite entries
/// mean "invalid".
struct DepthMap {
    int width = 0, height = 0;
    std::vector<float> data;

    float at(int u, int v) const { return data[static_cast<std::size_t>(v) * width + u]; }
    float& at(int u, int v) { return data[static_cast<std::size_t>(v) * width + u]; }
};

/// Per-pixel binary foreground mask, row major, dimensions matching the
/// paired DepthMap.
struct InstanceMask {
    int width = 0, height = 0;
    std::vector<std::uint8_t> data;

    bool at(int u, int v) const { return data[static_cast<std::size_t>(v) * width + u] != 0; }
    void set(int u, int v, bool fg) { data[static_cast<std::size_t>(v) * width + u] = fg ? 1 : 0; }
};

struct PointCloud {
    std::vector<Vec3> points;
};

/// Knobs for the depth+mask -> cuboid pipeline. The clustering defaults
/// suit indoor metric scale and are CLI-configurable.
struct LiftParams {
    double dbscan_eps = 0.05;  // meters
    int dbscan_min_pts = 10;
    bool adaptive_eps = false;  // eps = 2 x median nearest-neighbor distance
    int min_points = 10;        // smallest cloud worth fitting (>= 4)
    int max_points = 20000;     // subsample cap, deterministic stride
};

/// Label given to points that belong to no cluster.
constexpr int kNoiseLabel = -1;

/// Projects a camera-frame point through the pinhole model; returns
/// (u, v, depth).
Vec3 project(const CameraIntrinsics& k, const Vec3& p);

/// One point per masked pixel with valid depth:
/// x = (u - cx) d / fx, y = (v - cy) d / fy, z = d.
/// Points appear in row-major pixel order. Throws EmptyCloud when no
/// masked pixel has valid depth, FormatError on dimension mismatch.
PointCloud unproject(const DepthMap& depth, const InstanceMask& mask,
                     const CameraIntrinsics& k);

/// Density-based clustering. Core points have >= min_pts neighbors
/// (self included) within eps; clusters are the density-connected
/// components, everything else is noise (-1). Cluster ids are assigned
/// in order of the first point scanned, so labels are deterministic.
std::vector<int> dbscan(const PointCloud& pc, double eps, int min_pts);

/// Points of the largest cluster; ties broken by smaller mean depth,
/// then by cluster id. Throws AllNoise when no cluster exists.
PointCloud select_primary_cluster(const std::vector<int>& labels, const PointCloud& pc);

/// Keeps every ceil(n / max_points)-th point when the cloud exceeds
/// max_points; identity otherwise.
PointCloud subsample_strided(const PointCloud& pc, int max_points);

/// Exact median nearest-neighbor distance over the cloud (grid
/// accelerated). Used by the adaptive eps rule.
double median_nn_distance(const PointCloud& pc);

/// Principal-component box fit: rotation from the covariance
/// eigenvectors (columns by descending eigenvalue, right-handed), dims
/// from the per-axis extents in the eigenbasis, center from the extent
/// midpoints. Extents under 1e-6 m are clamped to 1e-3 m so
/// visible-surface clouds of thin objects still fit; fewer than two
/// usable extents throw DegenerateCloud.
Cuboid3D fit_obb_pca(const PointCloud& pc);

/// Full pipeline: unproject -> stride subsample -> dbscan ->
/// select_primary_cluster -> fit_obb_pca. Propagates EmptyCloud,
/// AllNoise and DegenerateCloud.
Cuboid3D lift_detection(const DepthMap& depth, const InstanceMask& mask,
                        const CameraIntrinsics& k, const LiftParams& params);

}  // namespace mono3d
