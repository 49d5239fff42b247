// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Portable, versioned file formats:
//   - dataset manifest (JSON): images + intrinsics, category list,
//     ground-truth annotations with serialized cuboids
//   - prediction set (JSON): scored detections with cuboids; lifts that
//     failed carry a null cuboid and a reason string
//   - 2D detection set (JSON): lift inputs naming depth/mask files
//   - depth map (binary): "OVD1" magic, uint32-LE width and height,
//     width*height float32-LE meters, row major
//   - instance mask: binary PGM (P5), nonzero = foreground
//   - evaluation report (JSON) and per-category table (CSV)
// All multi-byte binary values are little-endian; JSON text is UTF-8.
// Loaders never abort on malformed bytes; every failure is a FormatError
// whose message points at the offending field.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mono3d/evaluation.hpp"
#include "mono3d/geometry.hpp"
#include "mono3d/lifting.hpp"

namespace mono3d {

struct ImageInfo {
    std::string id;
    int width = 0, height = 0;
    CameraIntrinsics intrinsics;
};

struct DatasetManifest {
    std::string version = "1.0";
    std::vector<ImageInfo> images;
    std::vector<std::string> categories;
    std::vector<GroundTruthRecord> annotations;
};

/// A detection with an optional cuboid: lifts that failed keep their 2D
/// fields and record why the cuboid is missing.
struct PredictionRecord {
    std::string image_id;
    std::string category;
    double score = 0.0;
    std::optional<Rect2D> box2d;
    std::optional<Cuboid3D> cuboid;
    std::string reason;  // set when cuboid is missing
};

struct PredictionSet {
    std::string version = "1.0";
    std::vector<PredictionRecord> predictions;
};

/// One 2D detection to lift, naming its depth and mask files (relative
/// to the directories given on the command line).
struct Detection2D {
    std::string image_id;
    std::string category;
    double score = 0.0;
    Rect2D box2d;
    std::string depth_file;
    std::string mask_file;
};

struct DetectionSet2D {
    std::string version = "1.0";
    std::vector<Detection2D> detections;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

PredictionSet load_predictions(const std::filesystem::path& path);
void save_predictions(const PredictionSet& set, const std::filesystem::path& path);

DetectionSet2D load_detections_2d(const std::filesystem::path& path);
void save_detections_2d(const DetectionSet2D& set, const std::filesystem::path& path);

DepthMap load_depth(const std::filesystem::path& path);
void save_depth(const DepthMap& depth, const std::filesystem::path& path);

InstanceMask load_mask(const std::filesystem::path& path);
void save_mask(const InstanceMask& mask, const std::filesystem::path& path);

/// Report serializers. JSON field order and number formatting are
/// deterministic; no timestamp is embedded unless stamp is set.
std::string report_to_json(const EvalReport& report, bool stamp = false);
void save_report_json(const EvalReport& report, const std::filesystem::path& path,
                      bool stamp = false);

/// Per-category table (CSV, percentages): one row per category with
/// AP2D / AP3D / AR2D / AR3D, then easy/hard/all aggregate rows.
std::string report_to_csv(const EvalReport& report);
void save_report_csv(const EvalReport& report, const std::filesystem::path& path);

/// Best-effort import of the published Omni3D-style annotation JSON
/// (COCO-like layout with per-image K matrices and per-annotation
/// center_cam / dimensions / R_cam). Annotations without usable 3D
/// fields are skipped; skipped_annotations reports how many.
DatasetManifest convert_omni3d(const std::filesystem::path& path,
                               int* skipped_annotations = nullptr);

/// Evaluation view of a prediction set: records with a cuboid become
/// DetectionRecords (missing 2D boxes degrade to zero-area rectangles);
/// records without one (failed lifts) are dropped.
std::vector<DetectionRecord> to_detection_records(const PredictionSet& set);

}  // namespace mono3d
