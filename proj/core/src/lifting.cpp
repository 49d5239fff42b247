// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#include "mono3d/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>

namespace mono3d {

namespace {

// Hash grid with cell size = query radius, so a radius query only has to
// visit the 27 surrounding cells.
class UniformGrid {
  public:
    UniformGrid(const std::vector<Vec3>& points, double cell)
        : points_(points), cell_(cell) {
        cells_.reserve(points.size());
        for (int i = 0; i < static_cast<int>(points.size()); ++i) {
            cells_[key(points[i])].push_back(i);
        }
    }

    // Indices (ascending, self included) within radius <= cell of point i.
    std::vector<int> neighbors(int i) const {
        const Vec3& p = points_[i];
        const double r_sq = cell_ * cell_;
        std::vector<int> out;
        const auto base = coords(p);
        for (int dz = -1; dz <= 1; ++dz) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const auto it = cells_.find(pack(base[0] + dx, base[1] + dy, base[2] + dz));
                    if (it == cells_.end()) continue;
                    for (int j : it->second) {
                        if ((points_[j] - p).squaredNorm() <= r_sq) out.push_back(j);
                    }
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    std::array<std::int64_t, 3> coords(const Vec3& p) const {
        return {static_cast<std::int64_t>(std::floor(p.x() / cell_)),
                static_cast<std::int64_t>(std::floor(p.y() / cell_)),
                static_cast<std::int64_t>(std::floor(p.z() / cell_))};
    }

    static std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
        auto fold = [](std::int64_t v) {
            return static_cast<std::uint64_t>(v) & 0x1fffffULL;  // 21 bits per axis
        };
        return (fold(x) << 42) | (fold(y) << 21) | fold(z);
    }

    std::uint64_t key(const Vec3& p) const {
        const auto c = coords(p);
        return pack(c[0], c[1], c[2]);
    }

    const std::vector<Vec3>& points_;
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace

Vec3 project(const CameraIntrinsics& k, const Vec3& p) {
    return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy, p.z()};
}

PointCloud unproject(const DepthMap& depth, const InstanceMask& mask,
                     const CameraIntrinsics& k) {
    if (depth.width != mask.width || depth.height != mask.height) {
        throw FormatError("unproject: depth and mask dimensions differ");
    }
    PointCloud pc;
    for (int v = 0; v < depth.height; ++v) {
        for (int u = 0; u < depth.width; ++u) {
            if (!mask.at(u, v)) continue;
            const float d = depth.at(u, v);
            if (!std::isfinite(d) || d <= 0.0f) continue;
            const double z = static_cast<double>(d);
            pc.points.emplace_back((u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z);
        }
    }
    if (pc.points.empty()) {
        throw EmptyCloud("unproject: no masked pixel has valid depth");
    }
    return pc;
}

std::vector<int> dbscan(const PointCloud& pc, double eps, int min_pts) {
    if (eps <= 0.0) throw Error("dbscan: eps must be positive");
    if (min_pts < 1) throw Error("dbscan: min_pts must be at least 1");

    const int n = static_cast<int>(pc.points.size());
    const UniformGrid grid(pc.points, eps);

    constexpr int kUnvisited = -2;
    std::vector<int> labels(n, kUnvisited);
    int cluster = 0;
    for (int i = 0; i < n; ++i) {
        if (labels[i] != kUnvisited) continue;
        std::vector<int> seed = grid.neighbors(i);
        if (static_cast<int>(seed.size()) < min_pts) {
            labels[i] = kNoiseLabel;
            continue;
        }
        labels[i] = cluster;
        std::deque<int> queue(seed.begin(), seed.end());
        while (!queue.empty()) {
            const int q = queue.front();
            queue.pop_front();
            if (labels[q] == kNoiseLabel) labels[q] = cluster;  // border point
            if (labels[q] != kUnvisited) continue;
            labels[q] = cluster;
            std::vector<int> reach = grid.neighbors(q);
            if (static_cast<int>(reach.size()) >= min_pts) {
                queue.insert(queue.end(), reach.begin(), reach.end());
            }
        }
        ++cluster;
    }
    return labels;
}

PointCloud select_primary_cluster(const std::vector<int>& labels, const PointCloud& pc) {
    struct Stats {
        int count = 0;
        double depth_sum = 0.0;
    };
    std::map<int, Stats> clusters;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kNoiseLabel) continue;
        Stats& s = clusters[labels[i]];
        ++s.count;
        s.depth_sum += pc.points[i].z();
    }
    if (clusters.empty()) {
        throw AllNoise("select_primary_cluster: every point is noise");
    }
    int best = -1;
    int best_count = -1;
    double best_mean_z = std::numeric_limits<double>::infinity();
    for (const auto& [id, s] : clusters) {
        const double mean_z = s.depth_sum / s.count;
        if (s.count > best_count || (s.count == best_count && mean_z < best_mean_z)) {
            best = id;
            best_count = s.count;
            best_mean_z = mean_z;
        }
    }
    PointCloud out;
    out.points.reserve(best_count);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == best) out.points.push_back(pc.points[i]);
    }
    return out;
}

PointCloud subsample_strided(const PointCloud& pc, int max_points) {
    const int n = static_cast<int>(pc.points.size());
    if (max_points <= 0 || n <= max_points) return pc;
    const int stride = (n + max_points - 1) / max_points;
    PointCloud out;
    out.points.reserve(n / stride + 1);
    for (int i = 0; i < n; i += stride) out.points.push_back(pc.points[i]);
    return out;
}

double median_nn_distance(const PointCloud& pc) {
    const int n = static_cast<int>(pc.points.size());
    if (n < 2) return 0.0;

    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const Vec3& p : pc.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double diag = (hi - lo).norm();
    if (diag <= 0.0) return 0.0;  // all points coincide
    const double cell = std::max(diag / std::cbrt(static_cast<double>(n)), 1e-12);

    std::unordered_map<std::uint64_t, std::vector<int>> cells;
    auto coord = [&](double x) { return static_cast<std::int64_t>(std::floor(x / cell)); };
    auto pack = [](std::int64_t x, std::int64_t y, std::int64_t z) {
        auto fold = [](std::int64_t v) { return static_cast<std::uint64_t>(v) & 0x1fffffULL; };
        return (fold(x) << 42) | (fold(y) << 21) | fold(z);
    };
    for (int i = 0; i < n; ++i) {
        const Vec3& p = pc.points[i];
        cells[pack(coord(p.x()), coord(p.y()), coord(p.z()))].push_back(i);
    }

    std::vector<double> nn(n);
    for (int i = 0; i < n; ++i) {
        const Vec3& p = pc.points[i];
        const std::int64_t bx = coord(p.x());
        const std::int64_t by = coord(p.y());
        const std::int64_t bz = coord(p.z());
        double best_sq = std::numeric_limits<double>::infinity();
        // Expand shells until the found neighbor is provably nearest.
        for (int ring = 0;; ++ring) {
            if (std::isfinite(best_sq)) {
                const double safe = static_cast<double>(ring - 1) * cell;
                if (safe >= 0.0 && best_sq <= safe * safe) break;
            }
            bool any_cell = false;
            for (std::int64_t dz = -ring; dz <= ring; ++dz) {
                for (std::int64_t dy = -ring; dy <= ring; ++dy) {
                    for (std::int64_t dx = -ring; dx <= ring; ++dx) {
                        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
                        const auto it = cells.find(pack(bx + dx, by + dy, bz + dz));
                        if (it == cells.end()) continue;
                        any_cell = true;
                        for (int j : it->second) {
                            if (j == i) continue;
                            best_sq = std::min(best_sq, (pc.points[i] - pc.points[j]).squaredNorm());
                        }
                    }
                }
            }
            if (!any_cell && ring > 2 * static_cast<int>(diag / cell) + 2) break;  // safety stop
        }
        nn[i] = std::isfinite(best_sq) ? std::sqrt(best_sq) : 0.0;
    }
    std::nth_element(nn.begin(), nn.begin() + n / 2, nn.end());
    return nn[n / 2];
}

Cuboid3D fit_obb_pca(const PointCloud& pc) {
    constexpr double kThinExtent = 1e-6;
    constexpr double kClampedExtent = 1e-3;

    const auto& pts = pc.points;
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw DegenerateCloud("fit_obb_pca: need at least 4 points");

    Vec3 mean = Vec3::Zero();
    for (const Vec3& p : pts) mean += p;
    mean /= static_cast<double>(n);

    Mat3 cov = Mat3::Zero();
    for (const Vec3& p : pts) {
        const Vec3 d = p - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
    Mat3 axes;
    // Eigenvalues come back ascending; order columns by descending spread.
    axes.col(0) = solver.eigenvectors().col(2);
    axes.col(1) = solver.eigenvectors().col(1);
    // Deterministic signs: flip each leading axis so its largest-magnitude
    // component is positive; the third axis closes a right-handed frame.
    for (int k = 0; k < 2; ++k) {
        int arg = 0;
        axes.col(k).cwiseAbs().maxCoeff(&arg);
        if (axes.col(k)[arg] < 0) axes.col(k) = -axes.col(k);
    }
    axes.col(2) = axes.col(0).cross(axes.col(1));

    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const Vec3& p : pts) {
        const Vec3 q = axes.transpose() * (p - mean);
        lo = lo.cwiseMin(q);
        hi = hi.cwiseMax(q);
    }
    Vec3 extent = hi - lo;

    int usable = 0;
    for (int k = 0; k < 3; ++k) usable += extent[k] >= kThinExtent ? 1 : 0;
    if (usable < 2) {
        throw DegenerateCloud("fit_obb_pca: covariance rank < 2 (collinear or coincident points)");
    }
    for (int k = 0; k < 3; ++k) {
        if (extent[k] < kThinExtent) extent[k] = kClampedExtent;
    }

    Cuboid3D box;
    box.center = mean + axes * (0.5 * (lo + hi));
    box.dims = extent;
    box.rot = axes;
    return box;
}

Cuboid3D lift_detection(const DepthMap& depth, const InstanceMask& mask,
                        const CameraIntrinsics& k, const LiftParams& params) {
    if (params.dbscan_eps <= 0.0) throw Error("lift_detection: dbscan_eps must be positive");
    if (params.dbscan_min_pts < 1) throw Error("lift_detection: dbscan_min_pts must be >= 1");
    if (params.min_points < 4) throw Error("lift_detection: min_points must be >= 4");

    PointCloud pc = unproject(depth, mask, k);
    pc = subsample_strided(pc, params.max_points);
    if (static_cast<int>(pc.points.size()) < params.min_points) {
        throw DegenerateCloud("lift_detection: fewer valid points than min_points");
    }
    double eps = params.dbscan_eps;
    if (params.adaptive_eps) {
        eps = std::max(2.0 * median_nn_distance(pc), 1e-9);
    }
    const std::vector<int> labels = dbscan(pc, eps, params.dbscan_min_pts);
    return fit_obb_pca(select_primary_cluster(labels, pc));
}

}  // namespace mono3d
