// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
//
// mono3d-kit: lift depth+mask detections into oriented 3D cuboids and
// evaluate 3D detections with target-aware AP, AR and normalized corner
// distances. Subcommands: lift, eval, convert-omni3d, selftest.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error,
// 3 selftest failure.
#include <atomic>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mono3d/data_io.hpp"
#include "mono3d/evaluation.hpp"
#include "mono3d/lifting.hpp"
#include "mono3d/parallel.hpp"
#include "mono3d/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSelftest = 3;

namespace fs = std::filesystem;

struct LiftArgs {
    std::string manifest;
    std::string detections;
    std::string depth_dir;
    std::string mask_dir;
    std::string out = "predictions.json";
    mono3d::LiftParams params;
    unsigned jobs = 0;
    bool quiet = false;
};

int run_lift(const LiftArgs& args) {
    const mono3d::DatasetManifest manifest = mono3d::load_manifest(args.manifest);
    const mono3d::DetectionSet2D detections = mono3d::load_detections_2d(args.detections);

    std::map<std::string, mono3d::CameraIntrinsics> intrinsics;
    for (const mono3d::ImageInfo& image : manifest.images) {
        intrinsics[image.id] = image.intrinsics;
    }

    // Validate references up front so bad inputs fail before any work.
    for (std::size_t i = 0; i < detections.detections.size(); ++i) {
        const mono3d::Detection2D& det = detections.detections[i];
        if (!intrinsics.contains(det.image_id)) {
            throw mono3d::FormatError("detection " + std::to_string(i) +
                                      " references unknown image id '" + det.image_id + "'");
        }
        const fs::path depth_path = fs::path(args.depth_dir) / det.depth_file;
        const fs::path mask_path = fs::path(args.mask_dir) / det.mask_file;
        if (!fs::exists(depth_path)) {
            throw mono3d::FormatError("missing depth file: " + depth_path.string());
        }
        if (!fs::exists(mask_path)) {
            throw mono3d::FormatError("missing mask file: " + mask_path.string());
        }
    }

    mono3d::PredictionSet out;
    out.predictions.resize(detections.detections.size());
    std::atomic<int> lifted{0};

    mono3d::parallel_for(
        detections.detections.size(), mono3d::resolve_jobs(args.jobs), [&](std::size_t i) {
            const mono3d::Detection2D& det = detections.detections[i];
            mono3d::PredictionRecord& rec = out.predictions[i];
            rec.image_id = det.image_id;
            rec.category = det.category;
            rec.score = det.score;
            rec.box2d = det.box2d;
            const mono3d::DepthMap depth =
                mono3d::load_depth(fs::path(args.depth_dir) / det.depth_file);
            const mono3d::InstanceMask mask =
                mono3d::load_mask(fs::path(args.mask_dir) / det.mask_file);
            try {
                rec.cuboid = mono3d::lift_detection(depth, mask, intrinsics.at(det.image_id),
                                                    args.params);
                lifted.fetch_add(1, std::memory_order_relaxed);
            } catch (const mono3d::EmptyCloud& e) {
                rec.reason = e.what();
            } catch (const mono3d::AllNoise& e) {
                rec.reason = e.what();
            } catch (const mono3d::DegenerateCloud& e) {
                rec.reason = e.what();
            }
        });

    mono3d::save_predictions(out, args.out);
    const int total = static_cast<int>(detections.detections.size());
    if (!args.quiet) {
        std::cout << "lifted " << lifted.load() << "/" << total << " detections -> " << args.out
                  << "\n";
    }
    if (total > 0 && lifted.load() == 0) {
        std::cerr << "error: no detection could be lifted\n";
        return kExitData;
    }
    return kExitOk;
}

struct EvalArgs {
    std::string manifest;
    std::string predictions;
    std::string out_report = "eval_report.json";
    std::string out_table = "eval_table.csv";
    std::string protocol = "target-aware";
    mono3d::EvalConfig config;
    unsigned jobs = 0;
    bool quiet = false;
    bool stamp = false;
};

int run_eval(const EvalArgs& args) {
    const mono3d::DatasetManifest manifest = mono3d::load_manifest(args.manifest);
    const mono3d::PredictionSet predictions = mono3d::load_predictions(args.predictions);

    mono3d::EvalConfig config = args.config;
    config.target_aware = args.protocol == "target-aware";

    std::vector<std::string> image_ids;
    image_ids.reserve(manifest.images.size());
    for (const mono3d::ImageInfo& image : manifest.images) image_ids.push_back(image.id);

    const std::vector<mono3d::DetectionRecord> dets = mono3d::to_detection_records(predictions);
    const mono3d::EvalReport report = mono3d::evaluate(
        manifest.annotations, dets, config, image_ids, mono3d::resolve_jobs(args.jobs));

    mono3d::save_report_json(report, args.out_report, args.stamp);
    mono3d::save_report_csv(report, args.out_table);
    if (!args.quiet) {
        const int dropped = static_cast<int>(predictions.predictions.size() - dets.size());
        std::cout << "evaluated " << dets.size() << " detections";
        if (dropped > 0) std::cout << " (" << dropped << " without cuboid skipped)";
        std::cout << " -> " << args.out_report << ", " << args.out_table << "\n";
    }
    return kExitOk;
}

int run_convert(const std::string& input, const std::string& output, bool quiet) {
    int skipped = 0;
    const mono3d::DatasetManifest manifest = mono3d::convert_omni3d(input, &skipped);
    mono3d::save_manifest(manifest, output);
    if (!quiet) {
        std::cout << "converted " << manifest.images.size() << " images, "
                  << manifest.annotations.size() << " annotations";
        if (skipped > 0) std::cout << " (" << skipped << " skipped)";
        std::cout << " -> " << output << "\n";
    }
    return kExitOk;
}

int run_selftest_cmd(std::uint64_t seed) {
    const std::vector<mono3d::SuiteResult> results = mono3d::run_selftest({seed});
    for (const mono3d::SuiteResult& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.checks
                  << " checks, " << r.failures << " failures (" << r.detail << ")\n";
    }
    if (!mono3d::all_passed(results)) {
        std::cout << "selftest: FAIL\n";
        return kExitSelftest;
    }
    std::cout << "selftest: PASS\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"monocular 3D detection toolkit: geometric lifting and evaluation"};
    app.require_subcommand(1);

    LiftArgs lift;
    CLI::App* lift_cmd = app.add_subcommand("lift", "lift 2D detections to 3D cuboids");
    lift_cmd->add_option("--manifest", lift.manifest, "dataset manifest (JSON)")->required();
    lift_cmd->add_option("--detections", lift.detections, "2D detection set (JSON)")->required();
    lift_cmd->add_option("--depth-dir", lift.depth_dir, "directory with depth files")->required();
    lift_cmd->add_option("--mask-dir", lift.mask_dir, "directory with mask files")->required();
    lift_cmd->add_option("--out", lift.out, "output prediction set path");
    lift_cmd->add_option("--dbscan-eps", lift.params.dbscan_eps, "clustering radius, meters")
        ->check(CLI::PositiveNumber);
    lift_cmd->add_option("--dbscan-min-pts", lift.params.dbscan_min_pts,
                         "minimum neighborhood size for a core point")
        ->check(CLI::PositiveNumber);
    lift_cmd->add_flag("--adaptive-eps", lift.params.adaptive_eps,
                       "set eps to 2x the median nearest-neighbor distance");
    lift_cmd->add_option("--min-points", lift.params.min_points, "smallest cloud worth fitting")
        ->check(CLI::Range(4, 1 << 30));
    lift_cmd->add_option("--max-points", lift.params.max_points, "stride-subsample cap")
        ->check(CLI::PositiveNumber);
    lift_cmd->add_option("--jobs", lift.jobs, "worker threads (default: all cores)");
    lift_cmd->add_flag("--quiet", lift.quiet, "suppress progress output");

    EvalArgs eval;
    std::vector<double> thresholds;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate predictions against a manifest");
    eval_cmd->add_option("--manifest", eval.manifest, "dataset manifest (JSON)")->required();
    eval_cmd->add_option("--predictions", eval.predictions, "prediction set (JSON)")->required();
    eval_cmd->add_option("--out-report", eval.out_report, "output report path (JSON)");
    eval_cmd->add_option("--out-table", eval.out_table, "output per-category table path (CSV)");
    eval_cmd->add_option("--protocol", eval.protocol, "evaluation protocol")
        ->check(CLI::IsMember({"original", "target-aware"}));
    eval_cmd->add_option("--iou-thresholds", thresholds,
                         "IoU3D threshold sweep (strictly increasing)")
        ->delimiter(',');
    eval_cmd->add_option("--nhd-gate", eval.config.nhd_gate_iou2d,
                         "2D IoU gate for corner-distance pairs")
        ->check(CLI::Range(0.0, 1.0));
    eval_cmd->add_option("--recall-points", eval.config.recall_interp_points,
                         "recall interpolation points")
        ->check(CLI::Range(2, 1 << 20));
    eval_cmd->add_option("--easy", eval.config.easy_categories, "easy category subset")
        ->delimiter(',');
    eval_cmd->add_option("--hard", eval.config.hard_categories, "hard category subset")
        ->delimiter(',');
    eval_cmd->add_option("--jobs", eval.jobs, "worker threads (default: all cores)");
    eval_cmd->add_flag("--quiet", eval.quiet, "suppress progress output");
    eval_cmd->add_flag("--stamp", eval.stamp, "embed a generation timestamp in the report");

    std::string convert_in, convert_out = "manifest.json";
    bool convert_quiet = false;
    CLI::App* convert_cmd =
        app.add_subcommand("convert-omni3d", "import a published Omni3D-style annotation file");
    convert_cmd->add_option("--input", convert_in, "Omni3D-style JSON file")->required();
    convert_cmd->add_option("--out", convert_out, "output manifest path");
    convert_cmd->add_flag("--quiet", convert_quiet, "suppress progress output");

    std::uint64_t seed = 42;
    CLI::App* selftest_cmd =
        app.add_subcommand("selftest", "run the embedded oracle suites");
    selftest_cmd->add_option("--seed", seed, "random seed for the suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (lift_cmd->parsed()) return run_lift(lift);
        if (eval_cmd->parsed()) {
            if (!thresholds.empty()) eval.config.iou_thresholds = thresholds;
            return run_eval(eval);
        }
        if (convert_cmd->parsed()) return run_convert(convert_in, convert_out, convert_quiet);
        if (selftest_cmd->parsed()) return run_selftest_cmd(seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const mono3d::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
