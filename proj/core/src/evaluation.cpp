// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#include "mono3d/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "mono3d/parallel.hpp"

namespace mono3d {

namespace {

void validate_config(const EvalConfig& config) {
    if (config.iou_thresholds.empty()) {
        throw std::invalid_argument("EvalConfig: iou_thresholds must not be empty");
    }
    double prev = 0.0;
    for (double t : config.iou_thresholds) {
        if (!(t > prev && t <= 1.0)) {
            throw std::invalid_argument(
                "EvalConfig: iou_thresholds must be strictly increasing and in (0, 1]");
        }
        prev = t;
    }
    if (config.recall_interp_points < 2) {
        throw std::invalid_argument("EvalConfig: recall_interp_points must be >= 2");
    }
    if (config.nhd_gate_iou2d < 0.0 || config.nhd_gate_iou2d > 1.0) {
        throw std::invalid_argument("EvalConfig: nhd_gate_iou2d must be in [0, 1]");
    }
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::set<std::string> target_aware_categories(std::span<const GroundTruthRecord> gts,
                                              const std::string& image_id) {
    std::set<std::string> out;
    for (const GroundTruthRecord& gt : gts) {
        if (gt.image_id == image_id) out.insert(gt.category);
    }
    return out;
}

namespace {

std::vector<int> score_order(std::span<const DetectionRecord> dets) {
    std::vector<int> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return dets[a].score > dets[b].score;
    });
    return order;
}

Eigen::MatrixXd overlap_matrix(std::span<const DetectionRecord> dets,
                               std::span<const GroundTruthRecord> gts, OverlapKind overlap) {
    Eigen::MatrixXd ov(dets.size(), gts.size());
    for (std::size_t d = 0; d < dets.size(); ++d) {
        for (std::size_t g = 0; g < gts.size(); ++g) {
            ov(d, g) = overlap == OverlapKind::k3D ? iou3d(dets[d].cuboid, gts[g].cuboid)
                                                   : rect_iou(dets[d].box2d, gts[g].box2d);
        }
    }
    return ov;
}

MatchResult greedy_match(const Eigen::MatrixXd& ov, std::span<const int> order,
                         std::span<const GroundTruthRecord> gts, double threshold) {
    MatchResult result;
    result.det_flags.assign(ov.rows(), MatchFlag::kFalsePositive);
    result.gt_matched.assign(gts.size(), false);
    for (int d : order) {
        double best_ov = 0.0;
        int best_g = -1;
        bool ignore_hit = false;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (ov(d, g) < threshold) continue;
            if (gts[g].ignore) {
                ignore_hit = true;
                continue;
            }
            if (result.gt_matched[g]) continue;
            // Strict > keeps the first ground-truth index on overlap ties.
            if (best_g < 0 || ov(d, g) > best_ov) {
                best_ov = ov(d, g);
                best_g = static_cast<int>(g);
            }
        }
        if (best_g >= 0) {
            result.det_flags[d] = MatchFlag::kTruePositive;
            result.gt_matched[best_g] = true;
        } else if (ignore_hit) {
            result.det_flags[d] = MatchFlag::kIgnored;
        }
    }
    return result;
}

}  // namespace

MatchResult match_detections(std::span<const DetectionRecord> dets,
                             std::span<const GroundTruthRecord> gts,
                             double threshold, OverlapKind overlap) {
    for (const DetectionRecord& d : dets) {
        if (d.image_id != dets.front().image_id || d.category != dets.front().category) {
            throw std::invalid_argument("match_detections: detections span several groups");
        }
    }
    return greedy_match(overlap_matrix(dets, gts, overlap), score_order(dets), gts, threshold);
}

double average_precision(std::vector<ScoredFlag> flags, int n_gt, int interp_points) {
    if (interp_points < 2) {
        throw std::invalid_argument("average_precision: interp_points must be >= 2");
    }
    std::erase_if(flags, [](const ScoredFlag& f) { return f.flag == MatchFlag::kIgnored; });
    if (n_gt <= 0) return 0.0;
    std::sort(flags.begin(), flags.end(), [](const ScoredFlag& a, const ScoredFlag& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.order < b.order;
    });

    const int m = static_cast<int>(flags.size());
    std::vector<double> recall(m), precision(m);
    int tp = 0;
    for (int k = 0; k < m; ++k) {
        if (flags[k].flag == MatchFlag::kTruePositive) ++tp;
        precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
        recall[k] = static_cast<double>(tp) / static_cast<double>(n_gt);
    }
    for (int k = m - 2; k >= 0; --k) {
        precision[k] = std::max(precision[k], precision[k + 1]);
    }

    double sum = 0.0;
    int k = 0;
    for (int i = 0; i < interp_points; ++i) {
        const double r = static_cast<double>(i) / static_cast<double>(interp_points - 1);
        while (k < m && recall[k] < r) ++k;
        if (k < m) sum += precision[k];
    }
    return sum / static_cast<double>(interp_points);
}

Assignment hungarian_assign(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n || n < 1) {
        throw std::invalid_argument("hungarian_assign: cost matrix must be square, n >= 1");
    }
    if (!cost.allFinite()) {
        throw std::invalid_argument("hungarian_assign: cost matrix must be finite");
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> min_slack(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < min_slack[j]) {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    Assignment out;
    out.col_of_row.assign(n, -1);
    for (int j = 1; j <= n; ++j) out.col_of_row[match[j] - 1] = j - 1;
    for (int j = 1; j <= n; ++j) out.total_cost += cost(match[j] - 1, j - 1);
    return out;
}

double nhd(const Cuboid3D& pred, const Cuboid3D& gt) {
    const CornerArray pc = cuboid_corners(pred);
    const CornerArray gc = cuboid_corners(gt);
    Eigen::MatrixXd cost(8, 8);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) cost(i, j) = (pc[i] - gc[j]).norm();
    }
    const double diagonal = gt.dims.norm();
    return hungarian_assign(cost).total_cost / (8.0 * diagonal);
}

Cuboid3D disentangled_box(const Cuboid3D& pred, const Cuboid3D& gt,
                          VariableGroup group, const CameraIntrinsics& k) {
    if (k.fx <= 0.0 || k.fy <= 0.0) {
        throw std::invalid_argument("disentangled_box: focal lengths must be positive");
    }
    const double gt_z = gt.center.z();
    if (gt_z <= 1e-9) {
        throw DegenerateRay("disentangled_box: ground-truth center depth must be positive");
    }

    Cuboid3D out = gt;
    switch (group) {
        case VariableGroup::kXY: {
            // Where pred's center ray lands at the ground-truth depth.
            const double pred_z = pred.center.z();
            if (pred_z <= 1e-9) {
                throw DegenerateRay("disentangled_box: predicted center depth must be positive");
            }
            out.center.x() = pred.center.x() * gt_z / pred_z;
            out.center.y() = pred.center.y() * gt_z / pred_z;
            break;
        }
        case VariableGroup::kDepth: {
            // Predicted depth along the ground-truth center ray, so the
            // projected 2D center stays at the ground truth's.
            const double pred_z = pred.center.z();
            out.center = Vec3(gt.center.x() * pred_z / gt_z, gt.center.y() * pred_z / gt_z,
                              pred_z);
            break;
        }
        case VariableGroup::kSize:
            out.dims = pred.dims;
            break;
        case VariableGroup::kPose:
            out.rot = pred.rot;
            break;
    }
    return out;
}

NHDBreakdown disentangled_nhd(const Cuboid3D& pred, const Cuboid3D& gt,
                              const CameraIntrinsics& k) {
    NHDBreakdown out;
    out.overall = nhd(pred, gt);
    out.xy = nhd(disentangled_box(pred, gt, VariableGroup::kXY, k), gt);
    out.depth = nhd(disentangled_box(pred, gt, VariableGroup::kDepth, k), gt);
    out.size = nhd(disentangled_box(pred, gt, VariableGroup::kSize, k), gt);
    out.pose = nhd(disentangled_box(pred, gt, VariableGroup::kPose, k), gt);
    return out;
}

namespace {

struct ImageGroup {
    std::vector<DetectionRecord> dets;  // original input order
    std::vector<int> det_order;         // original global indices
    std::vector<GroundTruthRecord> gts;
};

struct CategoryData {
    std::map<std::string, ImageGroup> images;
    int num_gt_records = 0;
    int num_matchable_gt = 0;
    int num_dets = 0;
};

CategoryMetrics compute_category(const std::string& name, const CategoryData& data,
                                 const EvalConfig& config) {
    CategoryMetrics out;
    out.name = name;
    out.num_gt = data.num_matchable_gt;

    // Overlaps do not depend on the threshold; build each image's
    // matrices once and re-run only the greedy pass per threshold.
    struct PreparedImage {
        const ImageGroup* group;
        std::vector<int> order;
        Eigen::MatrixXd ov3d, ov2d;
    };
    std::vector<PreparedImage> prepared;
    for (const auto& [image_id, group] : data.images) {
        if (group.dets.empty()) continue;
        PreparedImage p;
        p.group = &group;
        p.order = score_order(group.dets);
        p.ov3d = overlap_matrix(group.dets, group.gts, OverlapKind::k3D);
        p.ov2d = overlap_matrix(group.dets, group.gts, OverlapKind::k2D);
        prepared.push_back(std::move(p));
    }

    const int n_thresh = static_cast<int>(config.iou_thresholds.size());
    std::vector<double> ap2d_per_threshold(n_thresh, 0.0);
    std::vector<double> recall3d(n_thresh, 0.0), recall2d(n_thresh, 0.0);
    out.ap3d_per_threshold.assign(n_thresh, 0.0);

    for (int t = 0; t < n_thresh; ++t) {
        const double threshold = config.iou_thresholds[t];
        for (OverlapKind overlap : {OverlapKind::k3D, OverlapKind::k2D}) {
            std::vector<ScoredFlag> flags;
            int matched = 0;
            for (const PreparedImage& p : prepared) {
                const Eigen::MatrixXd& ov = overlap == OverlapKind::k3D ? p.ov3d : p.ov2d;
                const MatchResult match = greedy_match(ov, p.order, p.group->gts, threshold);
                for (std::size_t j = 0; j < p.group->dets.size(); ++j) {
                    flags.push_back(
                        {p.group->dets[j].score, p.group->det_order[j], match.det_flags[j]});
                }
                for (bool m : match.gt_matched) matched += m ? 1 : 0;
            }
            const double ap =
                average_precision(flags, data.num_matchable_gt, config.recall_interp_points);
            const double recall = data.num_matchable_gt > 0
                                      ? static_cast<double>(matched) / data.num_matchable_gt
                                      : 0.0;
            if (overlap == OverlapKind::k3D) {
                out.ap3d_per_threshold[t] = ap;
                recall3d[t] = recall;
            } else {
                ap2d_per_threshold[t] = ap;
                recall2d[t] = recall;
            }
        }
    }

    out.ap3d = mean_of(out.ap3d_per_threshold);
    out.ap2d = mean_of(ap2d_per_threshold);
    out.ar3d = mean_of(recall3d);
    out.ar2d = mean_of(recall2d);
    return out;
}

std::optional<double> threshold_column(const EvalReport& report, double threshold) {
    for (std::size_t t = 0; t < report.iou_thresholds.size(); ++t) {
        if (std::abs(report.iou_thresholds[t] - threshold) < 1e-9) {
            std::vector<double> column;
            column.reserve(report.categories.size());
            for (const CategoryMetrics& c : report.categories) {
                column.push_back(c.ap3d_per_threshold[t]);
            }
            if (column.empty()) return 0.0;
            return mean_of(column);
        }
    }
    return std::nullopt;
}

std::optional<double> subset_mean(const EvalReport& report,
                                  const std::vector<std::string>& subset) {
    if (subset.empty()) return std::nullopt;
    std::vector<double> values;
    for (const CategoryMetrics& c : report.categories) {
        if (std::find(subset.begin(), subset.end(), c.name) != subset.end()) {
            values.push_back(c.ap3d);
        }
    }
    if (values.empty()) return std::nullopt;
    return mean_of(values);
}

}  // namespace

EvalReport evaluate(std::span<const GroundTruthRecord> gts,
                    std::span<const DetectionRecord> dets, const EvalConfig& config,
                    std::span<const std::string> image_ids, unsigned jobs) {
    validate_config(config);

    std::set<std::string> universe(image_ids.begin(), image_ids.end());
    const bool explicit_universe = !universe.empty();
    for (const GroundTruthRecord& gt : gts) {
        if (gt.category.empty()) throw FormatError("ground truth with empty category");
        if (explicit_universe && !universe.contains(gt.image_id)) {
            throw FormatError("ground truth references unknown image id '" + gt.image_id + "'");
        }
        universe.insert(gt.image_id);
    }
    for (const DetectionRecord& det : dets) {
        if (det.category.empty()) throw FormatError("detection with empty category");
        if (det.score < 0.0 || det.score > 1.0) {
            throw FormatError("detection score outside [0, 1]");
        }
        if (explicit_universe && !universe.contains(det.image_id)) {
            throw FormatError("detection references unknown image id '" + det.image_id + "'");
        }
        universe.insert(det.image_id);
    }

    std::map<std::string, std::set<std::string>> gt_categories_by_image;
    for (const GroundTruthRecord& gt : gts) {
        gt_categories_by_image[gt.image_id].insert(gt.category);
    }

    // Target-aware protocol: keep a detection only when its image has
    // ground truth of the same category.
    std::vector<int> active;
    active.reserve(dets.size());
    for (int d = 0; d < static_cast<int>(dets.size()); ++d) {
        if (config.target_aware) {
            const auto it = gt_categories_by_image.find(dets[d].image_id);
            if (it == gt_categories_by_image.end() || !it->second.contains(dets[d].category)) {
                continue;
            }
        }
        active.push_back(d);
    }

    std::map<std::string, CategoryData> by_category;
    for (const GroundTruthRecord& gt : gts) {
        CategoryData& data = by_category[gt.category];
        data.images[gt.image_id].gts.push_back(gt);
        ++data.num_gt_records;
        if (!gt.ignore) ++data.num_matchable_gt;
    }
    for (int d : active) {
        CategoryData& data = by_category[dets[d].category];
        ImageGroup& group = data.images[dets[d].image_id];
        group.dets.push_back(dets[d]);
        group.det_order.push_back(d);
        ++data.num_dets;
    }

    // Categories with no annotation anywhere are excluded from the
    // report and its means; annotated ones are skipped only when there
    // is nothing to measure.
    std::vector<const std::pair<const std::string, CategoryData>*> scored;
    for (const auto& entry : by_category) {
        const CategoryData& data = entry.second;
        if (data.num_gt_records == 0) continue;
        if (data.num_matchable_gt == 0 && data.num_dets == 0) continue;
        scored.push_back(&entry);
    }

    EvalReport report;
    report.protocol = config.target_aware ? "target-aware" : "original";
    report.iou_thresholds = config.iou_thresholds;
    report.recall_interp_points = config.recall_interp_points;
    report.nhd_gate_iou2d = config.nhd_gate_iou2d;
    report.num_images = static_cast<int>(universe.size());
    report.num_ground_truths = static_cast<int>(gts.size());
    report.num_detections = static_cast<int>(dets.size());

    report.categories.resize(scored.size());
    parallel_for(scored.size(), resolve_jobs(jobs), [&](std::size_t i) {
        report.categories[i] = compute_category(scored[i]->first, scored[i]->second, config);
    });

    std::vector<double> ap3d, ap2d, ar3d, ar2d;
    for (const CategoryMetrics& c : report.categories) {
        ap3d.push_back(c.ap3d);
        ap2d.push_back(c.ap2d);
        ar3d.push_back(c.ar3d);
        ar2d.push_back(c.ar2d);
    }
    report.mean_ap3d = mean_of(ap3d);
    report.mean_ap2d = mean_of(ap2d);
    report.mean_ar3d = mean_of(ar3d);
    report.mean_ar2d = mean_of(ar2d);
    report.ap3d_at_15 = threshold_column(report, 0.15);
    report.ap3d_at_25 = threshold_column(report, 0.25);
    report.ap3d_at_50 = threshold_column(report, 0.50);
    report.easy_categories = config.easy_categories;
    report.hard_categories = config.hard_categories;
    report.ap3d_easy = subset_mean(report, config.easy_categories);
    report.ap3d_hard = subset_mean(report, config.hard_categories);

    // Gated NHD: each kept detection pairs with the same-image
    // same-category non-ignore ground truth of highest 2D overlap.
    const CameraIntrinsics ray_camera;  // substitution is intrinsics independent
    NHDBreakdown sum;
    int pairs = 0;
    for (int d : active) {
        const DetectionRecord& det = dets[d];
        const GroundTruthRecord* best_gt = nullptr;
        double best_ov = -1.0;
        for (const GroundTruthRecord& gt : gts) {
            if (gt.ignore || gt.image_id != det.image_id || gt.category != det.category) {
                continue;
            }
            const double ov = rect_iou(det.box2d, gt.box2d);
            if (ov > best_ov) {
                best_ov = ov;
                best_gt = &gt;
            }
        }
        if (!best_gt || best_ov < config.nhd_gate_iou2d) continue;
        const NHDBreakdown b = disentangled_nhd(det.cuboid, best_gt->cuboid, ray_camera);
        sum.overall += b.overall;
        sum.xy += b.xy;
        sum.depth += b.depth;
        sum.size += b.size;
        sum.pose += b.pose;
        ++pairs;
    }
    if (pairs > 0) {
        report.mean_nhd = {sum.overall / pairs, sum.xy / pairs, sum.depth / pairs,
                           sum.size / pairs, sum.pose / pairs};
    }
    report.nhd_pairs = pairs;
    return report;
}

}  // namespace mono3d
