// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mono3d/geometry.hpp"
#include "mono3d/lifting.hpp"

namespace mono3d {

struct DetectionRecord {
    std::string image_id;
    std::string category;
    double score = 0.0;  // in [0, 1]
    Rect2D box2d;
    Cuboid3D cuboid;
};

struct GroundTruthRecord {
    std::string image_id;
    std::string category;
    Rect2D box2d;
    Cuboid3D cuboid;
    bool ignore = false;
};

/// Evaluation protocol knobs. The threshold sweep defaults to
/// 0.05 .. 0.50 in steps of 0.05; target-aware filtering restricts each
/// image's evaluated categories to those present in its annotations.
struct EvalConfig {
    std::vector<double> iou_thresholds = {0.05, 0.10, 0.15, 0.20, 0.25,
                                          0.30, 0.35, 0.40, 0.45, 0.50};
    bool target_aware = true;
    double nhd_gate_iou2d = 0.5;
    std::vector<std::string> easy_categories;
    std::vector<std::string> hard_categories;
    int recall_interp_points = 101;
};

/// Overall plus per-attribute normalized corner distances. All zero when
/// the prediction equals the ground truth.
struct NHDBreakdown {
    double overall = 0, xy = 0, depth = 0, size = 0, pose = 0;
};

struct CategoryMetrics {
    std::string name;
    int num_gt = 0;  // non-ignore ground truths
    std::vector<double> ap3d_per_threshold;
    double ap3d = 0, ap2d = 0, ar3d = 0, ar2d = 0;
};

struct EvalReport {
    std::string protocol;  // "target-aware" or "original"
    std::vector<double> iou_thresholds;
    int recall_interp_points = 101;
    double nhd_gate_iou2d = 0.5;
    std::vector<CategoryMetrics> categories;  // sorted by name
    std::vector<std::string> easy_categories, hard_categories;
    double mean_ap3d = 0, mean_ap2d = 0, mean_ar3d = 0, mean_ar2d = 0;
    std::optional<double> ap3d_at_15, ap3d_at_25, ap3d_at_50;
    std::optional<double> ap3d_easy, ap3d_hard;
    NHDBreakdown mean_nhd;
    int nhd_pairs = 0;
    int num_images = 0, num_ground_truths = 0, num_detections = 0;
};

enum class MatchFlag { kTruePositive, kFalsePositive, kIgnored };
enum class OverlapKind { k2D, k3D };
enum class VariableGroup { kXY, kDepth, kSize, kPose };

struct MatchResult {
    std::vector<MatchFlag> det_flags;  // aligned with the input detections
    std::vector<bool> gt_matched;      // aligned with the input ground truths
};

/// One scored detection outcome feeding the precision-recall curve.
struct ScoredFlag {
    double score = 0.0;
    int order = 0;  // original detection index, breaks score ties
    MatchFlag flag = MatchFlag::kFalsePositive;
};

/// Categories with at least one ground truth in the given image. Under
/// the target-aware protocol, detections outside this set are dropped
/// for that image before matching.
std::set<std::string> target_aware_categories(std::span<const GroundTruthRecord> gts,
                                              const std::string& image_id);

/// Greedy score-ordered matching of one image+category group: each
/// detection (descending score, ties by input order) takes the unmatched
/// non-ignore ground truth with the highest overlap >= threshold.
/// Detections that only reach ignore ground truths are flagged kIgnored
/// and stay out of the precision-recall curve.
MatchResult match_detections(std::span<const DetectionRecord> dets,
                             std::span<const GroundTruthRecord> gts,
                             double threshold, OverlapKind overlap);

/// Interpolated average precision: the non-increasing precision envelope
/// sampled at interp_points evenly spaced recall values in [0, 1].
/// Returns 0 when n_gt is 0 (callers skip categories with no ground
/// truth and no detections).
double average_precision(std::vector<ScoredFlag> flags, int n_gt, int interp_points);

struct Assignment {
    std::vector<int> col_of_row;
    double total_cost = 0.0;
};

/// Optimal linear assignment (minimum total cost) of a square cost
/// matrix via shortest augmenting paths with potentials, O(n^3).
Assignment hungarian_assign(const Eigen::MatrixXd& cost);

/// Normalized Hungarian distance between two cuboids: the optimal
/// one-to-one corner assignment cost divided by 8 x the ground-truth
/// space diagonal sqrt(w^2 + h^2 + l^2). The normalization makes the
/// score unitless and scale invariant; the constant is exposed here
/// because other tools may normalize differently.
double nhd(const Cuboid3D& pred, const Cuboid3D& gt);

/// Cuboid that takes the named variable group from pred and everything
/// else from gt. The center groups substitute along camera rays
/// (projected 2D center preserved for xy, ground-truth ray preserved for
/// depth), so the result does not depend on the intrinsics; they are
/// validated to mirror the projection interface. Throws DegenerateRay
/// when a divided-by depth is <= 1e-9.
Cuboid3D disentangled_box(const Cuboid3D& pred, const Cuboid3D& gt,
                          VariableGroup group, const CameraIntrinsics& k);

/// Overall NHD plus the per-group NHD of each disentangled box.
NHDBreakdown disentangled_nhd(const Cuboid3D& pred, const Cuboid3D& gt,
                              const CameraIntrinsics& k);

/// Full metric stack over a record set: optional target-aware filtering,
/// AP2D / AP3D over the threshold sweep, AR, easy/hard subset means and
/// gated mean NHD. image_ids, when given, is the image universe and
/// every record must reference it (FormatError otherwise); when empty
/// the universe is derived from the records. Deterministic for identical
/// inputs regardless of jobs.
EvalReport evaluate(std::span<const GroundTruthRecord> gts,
                    std::span<const DetectionRecord> dets, const EvalConfig& config,
                    std::span<const std::string> image_ids = {}, unsigned jobs = 1);

}  // namespace mono3d
