// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: every check below pins a tolerance in code and
// prints one pass/fail line. The binary exits nonzero when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "mono3d/data_io.hpp"
#include "mono3d/evaluation.hpp"
#include "mono3d/geometry.hpp"
#include "mono3d/lifting.hpp"
#include "mono3d/reference.hpp"
#include "test_util.hpp"

using namespace mono3d;
using reference::SplitMix64;
using nlohmann::json;

namespace {

const std::string kBin = MONO3D_KIT_BIN;
const std::string kFixtures = MONO3D_FIXTURE_DIR;

// --- 1. exact IoU against a 1e6-sample Monte Carlo oracle ---------------
bool iou_monte_carlo(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    SplitMix64 rng(2026);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Cuboid3D a = reference::random_cuboid(rng, 0.2, 3.0, 2.0);
        const Cuboid3D b = reference::random_cuboid(rng, 0.2, 3.0, 2.0);
        const double err =
            std::abs(iou3d(a, b) - reference::iou3d_monte_carlo(a, b, 1000000, rng.next()));
        worst = std::max(worst, err);
        if (err > 0.01) {
            detail = "pair " + std::to_string(i) + " error " + std::to_string(err);
            return false;
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream os;
    os << "200 pairs, max error " << worst << ", " << seconds << " s (limit 60)";
    detail = os.str();
    return seconds <= 60.0;
}

// --- 2. axis-aligned closed form ----------------------------------------
bool axis_aligned_closed_form(std::string& detail) {
    SplitMix64 rng(2027);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Cuboid3D a, b;
        for (int k = 0; k < 3; ++k) {
            a.dims[k] = rng.uniform(0.2, 3.0);
            b.dims[k] = rng.uniform(0.2, 3.0);
            a.center[k] = rng.uniform(-2.0, 2.0);
            b.center[k] = rng.uniform(-2.0, 2.0);
        }
        double inter = 1.0;
        for (int k = 0; k < 3; ++k) {
            const double lo = std::max(a.center[k] - a.dims[k] / 2, b.center[k] - b.dims[k] / 2);
            const double hi = std::min(a.center[k] + a.dims[k] / 2, b.center[k] + b.dims[k] / 2);
            inter *= std::max(0.0, hi - lo);
        }
        const double expected =
            inter > 0 ? inter / (cuboid_volume(a) + cuboid_volume(b) - inter) : 0.0;
        worst = std::max(worst, std::abs(iou3d(a, b) - expected));
    }
    detail = "1000 pairs, max |iou - overlap product| = " + std::to_string(worst);
    return worst <= 1e-9;
}

// --- 3. assignment optimality on 8x8 matrices ---------------------------
bool hungarian_optimality(std::string& detail) {
    SplitMix64 rng(2028);
    for (int i = 0; i < 100; ++i) {
        Eigen::MatrixXd cost(8, 8);
        for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < 8; ++c) cost(r, c) = rng.uniform(0.0, 10.0);
        }
        const double fast = hungarian_assign(cost).total_cost;
        const double exhaustive = reference::hungarian_brute_force(cost);
        if (fast != exhaustive) {
            detail = "matrix " + std::to_string(i) + ": " + std::to_string(fast) +
                     " != " + std::to_string(exhaustive);
            return false;
        }
    }
    detail = "100 random 8x8 matrices, cost equals the 8! minimum exactly";
    return true;
}

// --- 4. box fit recovery from interior samples --------------------------
bool obb_recovery(std::string& detail) {
    SplitMix64 rng(2029);
    for (int i = 0; i < 50; ++i) {
        // dims drawn in [0.2, 3] with pairwise ratios >= 1.4: the axes of
        // a near-cubic box are not identifiable from 1e4 samples (the
        // extent error from eigenbasis tilt scales like
        // r^2 / ((r^2 - 1) sqrt(n)) for adjacent-dim ratio r)
        Vec3 dims;
        for (;;) {
            for (int k = 0; k < 3; ++k) dims[k] = rng.uniform(0.2, 3.0);
            Vec3 sorted = dims;
            std::sort(sorted.data(), sorted.data() + 3);
            if (sorted[1] >= 1.4 * sorted[0] && sorted[2] >= 1.4 * sorted[1]) break;
        }
        Cuboid3D truth;
        truth.dims = dims;
        truth.center = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(2, 5));
        truth.rot = reference::random_rotation(rng);

        PointCloud cloud;
        cloud.points.reserve(10000);
        for (int s = 0; s < 10000; ++s) {
            const Vec3 local(rng.uniform(-0.5, 0.5) * dims.x(),
                             rng.uniform(-0.5, 0.5) * dims.y(),
                             rng.uniform(-0.5, 0.5) * dims.z());
            cloud.points.push_back(truth.center + truth.rot * local);
        }
        const Cuboid3D fit = fit_obb_pca(cloud);
        // fitted axes come ordered by descending spread; compare against
        // the matching permutation of the true box
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return truth.dims[a] > truth.dims[b]; });
        for (int k = 0; k < 3; ++k) {
            if (std::abs(fit.dims[k] - truth.dims[order[k]]) > 0.05 * truth.dims[order[k]]) {
                detail = "box " + std::to_string(i) + " dim " + std::to_string(k) +
                         " off by more than 5%";
                return false;
            }
            if (std::abs(fit.rot.col(k).dot(truth.rot.col(order[k]))) < 0.99) {
                detail = "box " + std::to_string(i) + " axis " + std::to_string(k) +
                         " |dot| < 0.99";
                return false;
            }
        }
    }
    detail = "50 boxes x 10000 samples, dims within 5%, axes |dot| >= 0.99";
    return true;
}

// --- 5. clustering equals the quadratic reference -----------------------
bool dbscan_equivalence(std::string& detail) {
    SplitMix64 rng(2030);
    for (int trial = 0; trial < 20; ++trial) {
        PointCloud pc;
        const int blobs = 1 + static_cast<int>(rng.next() % 4);
        for (int b = 0; b < blobs; ++b) {
            const Vec3 center(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.5, 4));
            const int count = 30 + static_cast<int>(rng.next() % 90);
            for (int i = 0; i < count; ++i) {
                pc.points.push_back(center + Vec3(rng.uniform(-0.07, 0.07),
                                                  rng.uniform(-0.07, 0.07),
                                                  rng.uniform(-0.07, 0.07)));
            }
        }
        while (pc.points.size() < 500 && rng.uniform(0, 1) < 0.6) {
            pc.points.emplace_back(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 5));
        }
        const std::vector<int> fast = dbscan(pc, 0.05, 5);
        const std::vector<int> slow = reference::dbscan_brute_force(pc.points, 0.05, 5);
        if (fast != slow) {
            detail = "cloud " + std::to_string(trial) + " labels diverge";
            return false;
        }
    }
    detail = "20 clouds (N <= 500) match the O(N^2) reference labels";
    return true;
}

// --- 6. unprojection round trip ------------------------------------------
bool unprojection_round_trip(std::string& detail) {
    SplitMix64 rng(2031);
    const CameraIntrinsics k{421.5, 387.25, 161.125, 119.875};
    DepthMap depth;
    depth.width = 320;
    depth.height = 240;
    depth.data.resize(320 * 240);
    InstanceMask mask;
    mask.width = 320;
    mask.height = 240;
    mask.data.assign(320 * 240, 1);
    for (float& d : depth.data) {
        const double roll = rng.uniform(0, 1);
        d = roll < 0.05 ? 0.0f : static_cast<float>(rng.uniform(0.2, 20.0));
    }
    const PointCloud pc = unproject(depth, mask, k);
    double worst = 0.0;
    std::size_t idx = 0;
    for (int v = 0; v < depth.height; ++v) {
        for (int u = 0; u < depth.width; ++u) {
            const float d = depth.at(u, v);
            if (!(d > 0)) continue;
            const Vec3 uvz = project(k, pc.points[idx]);
            worst = std::max({worst, std::abs(uvz.x() - u), std::abs(uvz.y() - v),
                              std::abs(uvz.z() - d)});
            ++idx;
        }
    }
    detail = std::to_string(idx) + " pixels, max |reprojection - (u, v, d)| = " +
             std::to_string(worst);
    return worst < 1e-6 && idx == pc.points.size();
}

// --- 7. committed fixture with hand-computed report ----------------------
bool compare_json(const json& expected, const json& actual, const std::string& path,
                  std::string& detail) {
    if (expected.is_number() && actual.is_number()) {
        if (std::abs(expected.get<double>() - actual.get<double>()) > 1e-6) {
            detail = path + ": expected " + expected.dump() + ", got " + actual.dump();
            return false;
        }
        return true;
    }
    if (expected.is_object()) {
        if (!actual.is_object()) {
            detail = path + ": expected an object";
            return false;
        }
        for (const auto& [key, value] : expected.items()) {
            if (!actual.contains(key)) {
                detail = path + "/" + key + ": missing";
                return false;
            }
            if (!compare_json(value, actual.at(key), path + "/" + key, detail)) return false;
        }
        for (const auto& [key, value] : actual.items()) {
            if (!expected.contains(key)) {
                detail = path + "/" + key + ": unexpected field";
                return false;
            }
        }
        return true;
    }
    if (expected.is_array()) {
        if (!actual.is_array() || actual.size() != expected.size()) {
            detail = path + ": array size mismatch";
            return false;
        }
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (!compare_json(expected[i], actual[i], path + "/" + std::to_string(i), detail)) {
                return false;
            }
        }
        return true;
    }
    if (expected != actual) {
        detail = path + ": expected " + expected.dump() + ", got " + actual.dump();
        return false;
    }
    return true;
}

bool ap_fixture(std::string& detail) {
    const DatasetManifest manifest = load_manifest(kFixtures + "/eval/manifest.json");
    const PredictionSet predictions = load_predictions(kFixtures + "/eval/predictions.json");

    EvalConfig config;
    config.easy_categories = {"chair", "lamp"};
    config.hard_categories = {"books", "table"};
    std::vector<std::string> image_ids;
    for (const ImageInfo& image : manifest.images) image_ids.push_back(image.id);

    const EvalReport report = evaluate(manifest.annotations,
                                       to_detection_records(predictions), config, image_ids);
    const json actual = json::parse(report_to_json(report));
    const json expected =
        json::parse(testutil::read_file(kFixtures + "/eval/expected_report_target_aware.json"));
    if (!compare_json(expected, actual, "", detail)) return false;
    detail = "all report fields match the hand-computed fixture within 1e-6";
    return true;
}

// --- 8. target-aware monotonicity ----------------------------------------
bool target_aware_monotonicity(std::string& detail) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SplitMix64 rng(seed * 7919);
        const std::vector<std::string> images = {"i0", "i1", "i2", "i3"};
        const std::vector<std::string> categories = {"c0", "c1", "c2"};
        std::vector<GroundTruthRecord> gts;
        std::vector<DetectionRecord> dets;
        std::vector<std::string> injected;  // categories with a cross-image FP

        int slot = 0;
        for (const std::string& cat : categories) {
            std::vector<std::string> with_gt, without_gt;
            for (const std::string& image : images) {
                if (rng.uniform(0, 1) < 0.6) {
                    with_gt.push_back(image);
                } else {
                    without_gt.push_back(image);
                }
            }
            if (with_gt.empty()) with_gt.push_back(images[0]);
            std::vector<double> scores;
            for (const std::string& image : with_gt) {
                Cuboid3D box;
                box.center = Vec3(3.0 * slot++, 0, 5);  // disjoint slots
                GroundTruthRecord gt{image, cat, Rect2D{10.0 * slot, 0, 8, 8}, box, false};
                gts.push_back(gt);
                DetectionRecord det{image, cat, 0, gt.box2d, box};
                scores.push_back(rng.uniform(0.8, 0.99));
                dets.push_back(det);
            }
            // one true positive must rank below the injected FP
            scores.back() = 0.55;
            for (std::size_t i = 0; i < scores.size(); ++i) {
                dets[dets.size() - scores.size() + i].score = scores[i];
            }
            if (!without_gt.empty()) {
                Cuboid3D far_box;
                far_box.center = Vec3(1000 + 3.0 * slot++, 0, 5);
                dets.push_back(DetectionRecord{without_gt.front(), cat, 0.7,
                                               Rect2D{5000, 5000, 8, 8}, far_box});
                injected.push_back(cat);
            }
        }

        EvalConfig config;
        config.target_aware = true;
        const EvalReport aware = evaluate(gts, dets, config);
        config.target_aware = false;
        const EvalReport original = evaluate(gts, dets, config);

        auto ap_of = [](const EvalReport& r, const std::string& name) {
            for (const CategoryMetrics& c : r.categories) {
                if (c.name == name) return c.ap3d;
            }
            return -1.0;
        };
        for (const std::string& cat : categories) {
            const double ta = ap_of(aware, cat);
            const double orig = ap_of(original, cat);
            if (ta < orig - 1e-12) {
                detail = "seed " + std::to_string(seed) + " category " + cat +
                         ": target-aware " + std::to_string(ta) + " < original " +
                         std::to_string(orig);
                return false;
            }
            const bool has_injection =
                std::find(injected.begin(), injected.end(), cat) != injected.end();
            if (has_injection && !(ta > orig + 1e-9)) {
                detail = "seed " + std::to_string(seed) + " category " + cat +
                         ": expected a strict gain from dropping the injected FP";
                return false;
            }
        }
    }
    detail = "5 randomized datasets: AP never drops, strict gain on every injected FP";
    return true;
}

// --- 9. disentangled isolation --------------------------------------------
bool disentangled_isolation(std::string& detail) {
    const CameraIntrinsics k{500, 500, 320, 240};
    SplitMix64 rng(2033);
    for (int trial = 0; trial < 20; ++trial) {
        Cuboid3D gt = reference::random_cuboid(rng, 0.4, 2.0, 1.0, Vec3(0, 0, 3.5));
        const NHDBreakdown zero = disentangled_nhd(gt, gt, k);
        if (zero.overall > 1e-9 || zero.xy > 1e-9 || zero.depth > 1e-9 || zero.size > 1e-9 ||
            zero.pose > 1e-9) {
            detail = "identical boxes produced a nonzero breakdown";
            return false;
        }

        struct Case {
            VariableGroup group;
            Cuboid3D pred;
        };
        Cuboid3D xy = gt;
        xy.center += Vec3(0.3, -0.2, 0);
        Cuboid3D depth = gt;
        depth.center *= (gt.center.z() + 0.8) / gt.center.z();  // slide along the ray
        Cuboid3D size = gt;
        size.dims = gt.dims.cwiseProduct(Vec3(1.3, 0.8, 1.1));
        Cuboid3D pose = gt;
        pose.rot = gt.rot * testutil::rotation_about_z(0.4);
        const std::vector<Case> cases = {{VariableGroup::kXY, xy},
                                         {VariableGroup::kDepth, depth},
                                         {VariableGroup::kSize, size},
                                         {VariableGroup::kPose, pose}};
        for (const Case& c : cases) {
            const NHDBreakdown b = disentangled_nhd(c.pred, gt, k);
            const double components[4] = {b.xy, b.depth, b.size, b.pose};
            for (int g = 0; g < 4; ++g) {
                const bool is_perturbed = static_cast<VariableGroup>(g) == c.group;
                if (is_perturbed && components[g] <= 1e-6) {
                    detail = "perturbed group " + std::to_string(g) + " reads zero";
                    return false;
                }
                if (!is_perturbed && components[g] > 1e-9) {
                    detail = "group " + std::to_string(g) + " leaked error " +
                             std::to_string(components[g]);
                    return false;
                }
            }
            if (b.overall <= 1e-6) {
                detail = "overall distance reads zero for a perturbed box";
                return false;
            }
        }
    }
    detail = "20 trials: only the perturbed group (and overall) is nonzero within 1e-9";
    return true;
}

// --- 10. end-to-end geometric lift on a rendered box ----------------------
DepthMap render_box_depth(const Cuboid3D& box, const CameraIntrinsics& k, int width,
                          int height, InstanceMask* mask) {
    DepthMap depth;
    depth.width = width;
    depth.height = height;
    depth.data.assign(static_cast<std::size_t>(width) * height, 0.0f);
    mask->width = width;
    mask->height = height;
    mask->data.assign(static_cast<std::size_t>(width) * height, 0);

    const Mat3 rot_t = box.rot.transpose();
    const Vec3 origin_local = rot_t * (-box.center);
    const Vec3 half = 0.5 * box.dims;
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            // ray p(t) = t * dir with dir_z = 1, so t is the z-depth
            const Vec3 dir((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
            const Vec3 dir_local = rot_t * dir;
            double t_enter = 0.0, t_exit = std::numeric_limits<double>::infinity();
            bool hit = true;
            for (int axis = 0; axis < 3 && hit; ++axis) {
                const double o = origin_local[axis];
                const double d = dir_local[axis];
                if (std::abs(d) < 1e-12) {
                    hit = std::abs(o) <= half[axis];
                    continue;
                }
                double t0 = (-half[axis] - o) / d;
                double t1 = (half[axis] - o) / d;
                if (t0 > t1) std::swap(t0, t1);
                t_enter = std::max(t_enter, t0);
                t_exit = std::min(t_exit, t1);
                hit = t_enter <= t_exit;
            }
            if (hit && t_enter > 0) {
                depth.at(u, v) = static_cast<float>(t_enter);
                mask->set(u, v, true);
            }
        }
    }
    return depth;
}

bool geo_lift_sanity(std::string& detail) {
    // Three faces visible: yawed and pitched so one corner points at the
    // camera and the opposite corner stays hidden.
    Cuboid3D truth;
    truth.dims = Vec3(1.6, 1.0, 0.8);
    truth.center = Vec3(0, 0, 4);
    truth.rot = (Eigen::AngleAxisd(0.35, Vec3::UnitX()) * Eigen::AngleAxisd(0.5, Vec3::UnitY()))
                    .toRotationMatrix();

    const CameraIntrinsics k{300, 300, 160, 120};
    InstanceMask mask;
    const DepthMap depth = render_box_depth(truth, k, 320, 240, &mask);

    const Cuboid3D lifted = lift_detection(depth, mask, k, LiftParams{});
    const double overlap = iou3d(lifted, truth);

    // Occlusion bias: the point cloud cannot reach the hidden back
    // corner, so the reconstructed box must stop short of the true far
    // boundary along the viewing ray.
    const Vec3 view = truth.center.normalized();
    auto far_extreme = [&](const Cuboid3D& c) {
        double best = -std::numeric_limits<double>::infinity();
        for (const Vec3& p : cuboid_corners(c)) best = std::max(best, p.dot(view));
        return best;
    };
    const double deficit = far_extreme(truth) - far_extreme(lifted);

    std::ostringstream os;
    os << "IoU " << overlap << " (>= 0.3), far-boundary deficit " << deficit
       << " m toward the hidden corner (> 0.05)";
    detail = os.str();
    return overlap >= 0.3 && deficit > 0.05;
}

// --- 11. byte-identical CLI reruns ----------------------------------------
bool cli_determinism(std::string& detail) {
    testutil::TempDir dir("acceptance-determinism");

    for (const std::string tag : {"a", "b"}) {
        const std::string cmd = kBin + " eval --manifest " + kFixtures +
                                "/eval/manifest.json --predictions " + kFixtures +
                                "/eval/predictions.json --out-report " +
                                dir.file("report_" + tag + ".json").string() + " --out-table " +
                                dir.file("table_" + tag + ".csv").string() +
                                " --easy chair,lamp --hard books,table --quiet";
        if (testutil::run_command(cmd, dir, "eval_" + tag).exit_code != 0) {
            detail = "eval run " + tag + " failed";
            return false;
        }
    }
    if (testutil::read_file(dir.file("report_a.json")) !=
            testutil::read_file(dir.file("report_b.json")) ||
        testutil::read_file(dir.file("table_a.csv")) !=
            testutil::read_file(dir.file("table_b.csv"))) {
        detail = "eval outputs differ between identical runs";
        return false;
    }

    // deterministic synthetic lift inputs
    DatasetManifest manifest;
    manifest.images.push_back({"img1", 64, 48, {100, 100, 32, 24}});
    manifest.categories = {"chair"};
    save_manifest(manifest, dir.file("manifest.json"));
    DepthMap d;
    d.width = 64;
    d.height = 48;
    d.data.resize(64 * 48);
    SplitMix64 rng(2034);
    // a gently rippled plane: depth noise stays well under the
    // clustering radius so the cloud remains one dense component
    for (float& v : d.data) v = static_cast<float>(2.0 + rng.uniform(-0.005, 0.005));
    save_depth(d, dir.file("d.ovd"));
    InstanceMask m;
    m.width = 64;
    m.height = 48;
    m.data.assign(64 * 48, 1);
    save_mask(m, dir.file("m.pgm"));
    DetectionSet2D dets;
    dets.detections.push_back({"img1", "chair", 0.9, Rect2D{0, 0, 64, 48}, "d.ovd", "m.pgm"});
    save_detections_2d(dets, dir.file("detections.json"));

    for (const std::string tag : {"a", "b"}) {
        const std::string cmd = kBin + " lift --manifest " + dir.file("manifest.json").string() +
                                " --detections " + dir.file("detections.json").string() +
                                " --depth-dir " + dir.path().string() + " --mask-dir " +
                                dir.path().string() + " --out " +
                                dir.file("pred_" + tag + ".json").string() + " --quiet --jobs 2";
        if (testutil::run_command(cmd, dir, "lift_" + tag).exit_code != 0) {
            detail = "lift run " + tag + " failed";
            return false;
        }
    }
    if (testutil::read_file(dir.file("pred_a.json")) !=
        testutil::read_file(dir.file("pred_b.json"))) {
        detail = "lift outputs differ between identical runs";
        return false;
    }
    detail = "eval and lift reruns are byte-identical";
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "iou3d vs 1e6-sample Monte Carlo (|err| <= 0.01, <= 60 s)", iou_monte_carlo},
        {2, "axis-aligned iou3d equals per-axis overlap product (1e-9)", axis_aligned_closed_form},
        {3, "hungarian_assign equals exhaustive 8! minimum exactly", hungarian_optimality},
        {4, "fit_obb_pca recovers dims within 5% and axes |dot| >= 0.99", obb_recovery},
        {5, "dbscan labels equal the O(N^2) reference", dbscan_equivalence},
        {6, "unprojection reprojects to (u, v, d) within 1e-6", unprojection_round_trip},
        {7, "evaluate() reproduces the hand-computed fixture report (1e-6)", ap_fixture},
        {8, "target-aware AP >= original, strictly above on injected FPs",
         target_aware_monotonicity},
        {9, "disentangled components isolate the perturbed group (1e-9)",
         disentangled_isolation},
        {10, "rendered-box lift reaches IoU >= 0.3 with hidden-axis bias", geo_lift_sanity},
        {11, "cmd_eval and cmd_lift reruns are byte-identical", cli_determinism},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", criterion.id, criterion.name,
                    detail.empty() ? "" : " -- ", detail.c_str());
        failures += ok ? 0 : 1;
    }
    if (failures > 0) {
        std::printf("acceptance: %d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    return 0;
}
