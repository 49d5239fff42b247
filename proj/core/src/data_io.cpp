// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#include "mono3d/data_io.hpp"

#include <bit>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace mono3d {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw FormatError(path + ": " + why);
}

json parse_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw FormatError(file.string() + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(file.string() + ": " + e.what());
    }
}

const json& member(const json& j, const std::string& path, const char* key) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path + "/" + key, "missing required field");
    return *it;
}

const json* optional_member(const json& j, const char* key) {
    if (!j.is_object()) return nullptr;
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return nullptr;
    return &*it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Vec3 as_vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected an array of 3 numbers");
    return {as_number(j[0], path + "/0"), as_number(j[1], path + "/1"),
            as_number(j[2], path + "/2")};
}

Rect2D as_rect(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) fail(path, "expected an array [x, y, w, h]");
    Rect2D r{as_number(j[0], path + "/0"), as_number(j[1], path + "/1"),
             as_number(j[2], path + "/2"), as_number(j[3], path + "/3")};
    if (r.w < 0 || r.h < 0) fail(path, "box width and height must be non-negative");
    return r;
}

// Accepts matrices already orthonormal at double precision as-is so
// valid data round-trips bit-exactly; heals small drift (<= 1e-6) via
// the SVD projection when rewriting is allowed; rejects the rest.
Mat3 parse_rotation(const json& j, const std::string& path, bool allow_rewrite) {
    if (!j.is_array() || j.size() != 9) fail(path, "expected an array of 9 numbers (row major)");
    Mat3 r;
    for (int i = 0; i < 9; ++i) r(i / 3, i % 3) = as_number(j[i], path + "/" + std::to_string(i));
    if (r.determinant() < 0) fail(path, "improper rotation (det < 0)");
    const double ortho_err = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (ortho_err <= 1e-9) return r;
    if (ortho_err > 1e-6) fail(path, "matrix is not orthonormal within 1e-6");
    return allow_rewrite ? nearest_rotation(r) : r;
}

Cuboid3D parse_cuboid(const json& j, const std::string& path, bool allow_rewrite) {
    Cuboid3D c;
    c.center = as_vec3(member(j, path, "center"), path + "/center");
    c.dims = as_vec3(member(j, path, "dims"), path + "/dims");
    if (!(c.dims.x() > 0 && c.dims.y() > 0 && c.dims.z() > 0)) {
        fail(path + "/dims", "dimensions must be strictly positive");
    }
    c.rot = parse_rotation(member(j, path, "rot"), path + "/rot", allow_rewrite);
    return c;
}

json rect_to_json(const Rect2D& r) { return json::array({r.x, r.y, r.w, r.h}); }

json cuboid_to_json(const Cuboid3D& c) {
    json rot = json::array();
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) rot.push_back(c.rot(i, k));
    }
    return json{{"center", {c.center.x(), c.center.y(), c.center.z()}},
                {"dims", {c.dims.x(), c.dims.y(), c.dims.z()}},
                {"rot", std::move(rot)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw Error(path.string() + ": write failed");
}

void check_version(const json& j, const std::string& file) {
    const std::string version = as_string(member(j, file, "version"), file + "/version");
    if (version != "1.0") fail(file + "/version", "unsupported version '" + version + "'");
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
    const json j = parse_file(path);
    const std::string root = path.string();
    check_version(j, root);

    DatasetManifest m;
    m.version = "1.0";

    const json& images = member(j, root, "images");
    if (!images.is_array()) fail(root + "/images", "expected an array");
    std::set<std::string> image_ids;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const std::string p = root + "/images/" + std::to_string(i);
        const json& entry = images[i];
        ImageInfo info;
        info.id = as_string(member(entry, p, "id"), p + "/id");
        if (info.id.empty()) fail(p + "/id", "image id must not be empty");
        if (!image_ids.insert(info.id).second) fail(p + "/id", "duplicate image id '" + info.id + "'");
        info.width = as_int(member(entry, p, "width"), p + "/width");
        info.height = as_int(member(entry, p, "height"), p + "/height");
        if (info.width <= 0 || info.height <= 0) fail(p, "image dimensions must be positive");
        const json& k = member(entry, p, "intrinsics");
        info.intrinsics.fx = as_number(member(k, p + "/intrinsics", "fx"), p + "/intrinsics/fx");
        info.intrinsics.fy = as_number(member(k, p + "/intrinsics", "fy"), p + "/intrinsics/fy");
        info.intrinsics.cx = as_number(member(k, p + "/intrinsics", "cx"), p + "/intrinsics/cx");
        info.intrinsics.cy = as_number(member(k, p + "/intrinsics", "cy"), p + "/intrinsics/cy");
        if (info.intrinsics.fx <= 0 || info.intrinsics.fy <= 0) {
            fail(p + "/intrinsics", "focal lengths must be positive");
        }
        m.images.push_back(std::move(info));
    }

    const json& categories = member(j, root, "categories");
    if (!categories.is_array()) fail(root + "/categories", "expected an array");
    std::set<std::string> category_set;
    for (std::size_t i = 0; i < categories.size(); ++i) {
        const std::string p = root + "/categories/" + std::to_string(i);
        const std::string name = as_string(categories[i], p);
        if (name.empty()) fail(p, "category name must not be empty");
        if (!category_set.insert(name).second) fail(p, "duplicate category '" + name + "'");
        m.categories.push_back(name);
    }

    const json& annotations = member(j, root, "annotations");
    if (!annotations.is_array()) fail(root + "/annotations", "expected an array");
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        const std::string p = root + "/annotations/" + std::to_string(i);
        const json& entry = annotations[i];
        GroundTruthRecord gt;
        gt.image_id = as_string(member(entry, p, "image_id"), p + "/image_id");
        if (!image_ids.contains(gt.image_id)) {
            fail(p + "/image_id", "references unknown image id '" + gt.image_id + "'");
        }
        gt.category = as_string(member(entry, p, "category"), p + "/category");
        if (!category_set.contains(gt.category)) {
            fail(p + "/category", "references unlisted category '" + gt.category + "'");
        }
        gt.box2d = as_rect(member(entry, p, "box2d"), p + "/box2d");
        gt.cuboid = parse_cuboid(member(entry, p, "cuboid"), p + "/cuboid", true);
        if (const json* ignore = optional_member(entry, "ignore")) {
            if (!ignore->is_boolean()) fail(p + "/ignore", "expected a boolean");
            gt.ignore = ignore->get<bool>();
        }
        m.annotations.push_back(std::move(gt));
    }
    return m;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    json images = json::array();
    for (const ImageInfo& info : manifest.images) {
        images.push_back({{"id", info.id},
                          {"width", info.width},
                          {"height", info.height},
                          {"intrinsics",
                           {{"fx", info.intrinsics.fx},
                            {"fy", info.intrinsics.fy},
                            {"cx", info.intrinsics.cx},
                            {"cy", info.intrinsics.cy}}}});
    }
    json annotations = json::array();
    for (const GroundTruthRecord& gt : manifest.annotations) {
        json entry{{"image_id", gt.image_id},
                   {"category", gt.category},
                   {"box2d", rect_to_json(gt.box2d)},
                   {"cuboid", cuboid_to_json(gt.cuboid)}};
        if (gt.ignore) entry["ignore"] = true;
        annotations.push_back(std::move(entry));
    }
    const json j{{"version", "1.0"},
                 {"images", std::move(images)},
                 {"categories", manifest.categories},
                 {"annotations", std::move(annotations)}};
    write_text(path, j.dump(2) + "\n");
}

PredictionSet load_predictions(const std::filesystem::path& path) {
    const json j = parse_file(path);
    const std::string root = path.string();
    check_version(j, root);

    PredictionSet set;
    set.version = "1.0";
    const json& predictions = member(j, root, "predictions");
    if (!predictions.is_array()) fail(root + "/predictions", "expected an array");
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const std::string p = root + "/predictions/" + std::to_string(i);
        const json& entry = predictions[i];
        PredictionRecord rec;
        rec.image_id = as_string(member(entry, p, "image_id"), p + "/image_id");
        rec.category = as_string(member(entry, p, "category"), p + "/category");
        if (rec.category.empty()) fail(p + "/category", "category must not be empty");
        rec.score = as_number(member(entry, p, "score"), p + "/score");
        if (rec.score < 0.0 || rec.score > 1.0) fail(p + "/score", "score must be in [0, 1]");
        if (const json* box = optional_member(entry, "box2d")) {
            rec.box2d = as_rect(*box, p + "/box2d");
        }
        const json& cuboid = member(entry, p, "cuboid");
        if (cuboid.is_null()) {
            if (const json* reason = optional_member(entry, "reason")) {
                rec.reason = as_string(*reason, p + "/reason");
            }
        } else {
            rec.cuboid = parse_cuboid(cuboid, p + "/cuboid", false);
        }
        set.predictions.push_back(std::move(rec));
    }
    return set;
}

void save_predictions(const PredictionSet& set, const std::filesystem::path& path) {
    json predictions = json::array();
    for (const PredictionRecord& rec : set.predictions) {
        json entry{{"image_id", rec.image_id},
                   {"category", rec.category},
                   {"score", rec.score}};
        if (rec.box2d) entry["box2d"] = rect_to_json(*rec.box2d);
        if (rec.cuboid) {
            entry["cuboid"] = cuboid_to_json(*rec.cuboid);
        } else {
            entry["cuboid"] = nullptr;
            if (!rec.reason.empty()) entry["reason"] = rec.reason;
        }
        predictions.push_back(std::move(entry));
    }
    const json j{{"version", "1.0"}, {"predictions", std::move(predictions)}};
    write_text(path, j.dump(2) + "\n");
}

DetectionSet2D load_detections_2d(const std::filesystem::path& path) {
    const json j = parse_file(path);
    const std::string root = path.string();
    check_version(j, root);

    DetectionSet2D set;
    set.version = "1.0";
    const json& detections = member(j, root, "detections");
    if (!detections.is_array()) fail(root + "/detections", "expected an array");
    for (std::size_t i = 0; i < detections.size(); ++i) {
        const std::string p = root + "/detections/" + std::to_string(i);
        const json& entry = detections[i];
        Detection2D det;
        det.image_id = as_string(member(entry, p, "image_id"), p + "/image_id");
        det.category = as_string(member(entry, p, "category"), p + "/category");
        if (det.category.empty()) fail(p + "/category", "category must not be empty");
        det.score = as_number(member(entry, p, "score"), p + "/score");
        if (det.score < 0.0 || det.score > 1.0) fail(p + "/score", "score must be in [0, 1]");
        det.box2d = as_rect(member(entry, p, "box2d"), p + "/box2d");
        det.depth_file = as_string(member(entry, p, "depth_file"), p + "/depth_file");
        det.mask_file = as_string(member(entry, p, "mask_file"), p + "/mask_file");
        set.detections.push_back(std::move(det));
    }
    return set;
}

void save_detections_2d(const DetectionSet2D& set, const std::filesystem::path& path) {
    json detections = json::array();
    for (const Detection2D& det : set.detections) {
        detections.push_back({{"image_id", det.image_id},
                              {"category", det.category},
                              {"score", det.score},
                              {"box2d", rect_to_json(det.box2d)},
                              {"depth_file", det.depth_file},
                              {"mask_file", det.mask_file}});
    }
    const json j{{"version", "1.0"}, {"detections", std::move(detections)}};
    write_text(path, j.dump(2) + "\n");
}

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path.string() + ": cannot open file");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

std::uint32_t read_u32_le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

}  // namespace

DepthMap load_depth(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_bytes(path);
    const std::string name = path.string();
    if (bytes.size() < 12 || bytes[0] != 'O' || bytes[1] != 'V' || bytes[2] != 'D' ||
        bytes[3] != '1') {
        throw FormatError(name + ": missing OVD1 magic");
    }
    const std::uint32_t width = read_u32_le(bytes.data() + 4);
    const std::uint32_t height = read_u32_le(bytes.data() + 8);
    if (width == 0 || height == 0 || width > (1u << 20) || height > (1u << 20) ||
        static_cast<std::uint64_t>(width) * height > (1u << 28)) {
        throw FormatError(name + ": implausible dimensions " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
    const std::uint64_t expected = 12 + 4ull * width * height;
    if (bytes.size() < expected) throw FormatError(name + ": truncated payload");
    if (bytes.size() > expected) throw FormatError(name + ": trailing bytes after payload");

    DepthMap depth;
    depth.width = static_cast<int>(width);
    depth.height = static_cast<int>(height);
    depth.data.resize(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < depth.data.size(); ++i) {
        depth.data[i] = std::bit_cast<float>(read_u32_le(bytes.data() + 12 + 4 * i));
    }
    return depth;
}

void save_depth(const DepthMap& depth, const std::filesystem::path& path) {
    if (depth.width <= 0 || depth.height <= 0 ||
        depth.data.size() != static_cast<std::size_t>(depth.width) * depth.height) {
        throw Error("save_depth: data length must equal width * height");
    }
    std::string out;
    out.reserve(12 + 4 * depth.data.size());
    out += "OVD1";
    append_u32_le(out, static_cast<std::uint32_t>(depth.width));
    append_u32_le(out, static_cast<std::uint32_t>(depth.height));
    for (float v : depth.data) append_u32_le(out, std::bit_cast<std::uint32_t>(v));
    write_text(path, out);
}

InstanceMask load_mask(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_bytes(path);
    const std::string name = path.string();
    std::size_t pos = 0;

    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&](const char* what) -> long {
        skip_space();
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
            throw FormatError(name + ": expected " + what + " in PGM header");
        }
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1 << 30) throw FormatError(name + ": oversized " + what);
            ++pos;
        }
        return v;
    };

    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw FormatError(name + ": not a binary PGM (P5) file");
    }
    pos = 2;
    const long width = read_int("width");
    const long height = read_int("height");
    const long maxval = read_int("maxval");
    if (width <= 0 || height <= 0 || static_cast<std::uint64_t>(width) * height > (1u << 28)) {
        throw FormatError(name + ": implausible PGM dimensions");
    }
    if (maxval < 1 || maxval > 65535) throw FormatError(name + ": PGM maxval out of range");
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw FormatError(name + ": expected single whitespace after maxval");
    }
    ++pos;

    const int bytes_per_pixel = maxval < 256 ? 1 : 2;
    const std::uint64_t expected = static_cast<std::uint64_t>(width) * height * bytes_per_pixel;
    if (bytes.size() - pos < expected) throw FormatError(name + ": truncated PGM payload");
    if (bytes.size() - pos > expected) throw FormatError(name + ": trailing bytes after payload");

    InstanceMask mask;
    mask.width = static_cast<int>(width);
    mask.height = static_cast<int>(height);
    mask.data.resize(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        std::uint32_t v = bytes[pos + i * bytes_per_pixel];
        if (bytes_per_pixel == 2) v = (v << 8) | bytes[pos + i * 2 + 1];  // big-endian per PGM
        mask.data[i] = v != 0 ? 1 : 0;
    }
    return mask;
}

void save_mask(const InstanceMask& mask, const std::filesystem::path& path) {
    if (mask.width <= 0 || mask.height <= 0 ||
        mask.data.size() != static_cast<std::size_t>(mask.width) * mask.height) {
        throw Error("save_mask: data length must equal width * height");
    }
    std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) +
                      "\n255\n";
    out.reserve(out.size() + mask.data.size());
    for (std::uint8_t v : mask.data) out.push_back(v ? '\xff' : '\0');
    write_text(path, out);
}

namespace {

json nhd_to_json(const NHDBreakdown& b, int pairs) {
    return json{{"overall", b.overall}, {"xy", b.xy},     {"depth", b.depth},
                {"size", b.size},       {"pose", b.pose}, {"pairs", pairs}};
}

}  // namespace

std::string report_to_json(const EvalReport& report, bool stamp) {
    json categories = json::array();
    for (const CategoryMetrics& c : report.categories) {
        categories.push_back({{"name", c.name},
                              {"num_gt", c.num_gt},
                              {"ap3d_per_threshold", c.ap3d_per_threshold},
                              {"ap3d", c.ap3d},
                              {"ap2d", c.ap2d},
                              {"ar3d", c.ar3d},
                              {"ar2d", c.ar2d}});
    }
    json summary{{"mean_ap3d", report.mean_ap3d},
                 {"mean_ap2d", report.mean_ap2d},
                 {"mean_ar3d", report.mean_ar3d},
                 {"mean_ar2d", report.mean_ar2d},
                 {"nhd", nhd_to_json(report.mean_nhd, report.nhd_pairs)}};
    if (report.ap3d_at_15) summary["ap3d_at_15"] = *report.ap3d_at_15;
    if (report.ap3d_at_25) summary["ap3d_at_25"] = *report.ap3d_at_25;
    if (report.ap3d_at_50) summary["ap3d_at_50"] = *report.ap3d_at_50;
    if (report.ap3d_easy) summary["ap3d_easy"] = *report.ap3d_easy;
    if (report.ap3d_hard) summary["ap3d_hard"] = *report.ap3d_hard;

    json j{{"version", "1.0"},
           {"protocol", report.protocol},
           {"iou_thresholds", report.iou_thresholds},
           {"recall_interp_points", report.recall_interp_points},
           {"nhd_gate_iou2d", report.nhd_gate_iou2d},
           {"counts",
            {{"images", report.num_images},
             {"ground_truths", report.num_ground_truths},
             {"detections", report.num_detections}}},
           {"categories", std::move(categories)},
           {"summary", std::move(summary)}};
    if (!report.easy_categories.empty()) j["easy_categories"] = report.easy_categories;
    if (!report.hard_categories.empty()) j["hard_categories"] = report.hard_categories;
    if (stamp) {
        const auto now = std::chrono::system_clock::now();
        j["generated_at_unix_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    }
    return j.dump(2) + "\n";
}

void save_report_json(const EvalReport& report, const std::filesystem::path& path, bool stamp) {
    write_text(path, report_to_json(report, stamp));
}

namespace {

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
    return buf;
}

void csv_row(std::string& out, const std::string& name, int num_gt, double ap2d, double ap3d,
             double ar2d, double ar3d) {
    out += name + "," + std::to_string(num_gt) + "," + percent(ap2d) + "," + percent(ap3d) +
           "," + percent(ar2d) + "," + percent(ar3d) + "\n";
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
    std::string out = "category,num_gt,ap2d,ap3d,ar2d,ar3d\n";
    for (const CategoryMetrics& c : report.categories) {
        csv_row(out, c.name, c.num_gt, c.ap2d, c.ap3d, c.ar2d, c.ar3d);
    }
    auto subset_row = [&](const std::string& label, const std::vector<std::string>& names) {
        if (names.empty()) return;
        int gt = 0, count = 0;
        double ap2d = 0, ap3d = 0, ar2d = 0, ar3d = 0;
        for (const CategoryMetrics& c : report.categories) {
            if (std::find(names.begin(), names.end(), c.name) == names.end()) continue;
            gt += c.num_gt;
            ap2d += c.ap2d;
            ap3d += c.ap3d;
            ar2d += c.ar2d;
            ar3d += c.ar3d;
            ++count;
        }
        if (count == 0) return;
        csv_row(out, label, gt, ap2d / count, ap3d / count, ar2d / count, ar3d / count);
    };
    subset_row("easy", report.easy_categories);
    subset_row("hard", report.hard_categories);

    int total_gt = 0;
    for (const CategoryMetrics& c : report.categories) total_gt += c.num_gt;
    csv_row(out, "all", total_gt, report.mean_ap2d, report.mean_ap3d, report.mean_ar2d,
            report.mean_ar3d);
    return out;
}

void save_report_csv(const EvalReport& report, const std::filesystem::path& path) {
    write_text(path, report_to_csv(report));
}

namespace {

std::string id_to_string(const json& j, const std::string& path) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    fail(path, "expected a string or integer id");
}

// 3x3 nested rows or a flat 9-array, row major.
bool try_parse_matrix3(const json& j, Mat3* out) {
    if (j.is_array() && j.size() == 3 && j[0].is_array()) {
        for (int r = 0; r < 3; ++r) {
            if (!j[r].is_array() || j[r].size() != 3) return false;
            for (int c = 0; c < 3; ++c) {
                if (!j[r][c].is_number()) return false;
                (*out)(r, c) = j[r][c].get<double>();
            }
        }
        return true;
    }
    if (j.is_array() && j.size() == 9) {
        for (int i = 0; i < 9; ++i) {
            if (!j[i].is_number()) return false;
            (*out)(i / 3, i % 3) = j[i].get<double>();
        }
        return true;
    }
    return false;
}

// [x1, y1, x2, y2] corner boxes; the published files use -1 sentinels.
bool try_parse_corner_box(const json& j, Rect2D* out) {
    if (!j.is_array() || j.size() != 4) return false;
    double v[4];
    for (int i = 0; i < 4; ++i) {
        if (!j[i].is_number()) return false;
        v[i] = j[i].get<double>();
    }
    if (v[0] < 0 && v[1] < 0 && v[2] < 0 && v[3] < 0) return false;  // sentinel
    if (v[2] < v[0] || v[3] < v[1]) return false;
    *out = Rect2D{v[0], v[1], v[2] - v[0], v[3] - v[1]};
    return true;
}

}  // namespace

DatasetManifest convert_omni3d(const std::filesystem::path& path, int* skipped_annotations) {
    const json j = parse_file(path);
    const std::string root = path.string();

    DatasetManifest m;
    std::unordered_map<std::string, std::string> category_by_id;
    const json& categories = member(j, root, "categories");
    if (!categories.is_array()) fail(root + "/categories", "expected an array");
    for (std::size_t i = 0; i < categories.size(); ++i) {
        const std::string p = root + "/categories/" + std::to_string(i);
        const std::string id = id_to_string(member(categories[i], p, "id"), p + "/id");
        const std::string name = as_string(member(categories[i], p, "name"), p + "/name");
        category_by_id[id] = name;
        if (std::find(m.categories.begin(), m.categories.end(), name) == m.categories.end()) {
            m.categories.push_back(name);
        }
    }

    std::set<std::string> image_ids;
    const json& images = member(j, root, "images");
    if (!images.is_array()) fail(root + "/images", "expected an array");
    for (std::size_t i = 0; i < images.size(); ++i) {
        const std::string p = root + "/images/" + std::to_string(i);
        const json& entry = images[i];
        ImageInfo info;
        info.id = id_to_string(member(entry, p, "id"), p + "/id");
        info.width = as_int(member(entry, p, "width"), p + "/width");
        info.height = as_int(member(entry, p, "height"), p + "/height");
        Mat3 k;
        if (!try_parse_matrix3(member(entry, p, "K"), &k)) {
            fail(p + "/K", "expected a 3x3 intrinsics matrix");
        }
        info.intrinsics = CameraIntrinsics{k(0, 0), k(1, 1), k(0, 2), k(1, 2)};
        if (info.intrinsics.fx <= 0 || info.intrinsics.fy <= 0) {
            fail(p + "/K", "focal lengths must be positive");
        }
        image_ids.insert(info.id);
        m.images.push_back(std::move(info));
    }

    int skipped = 0;
    const json& annotations = member(j, root, "annotations");
    if (!annotations.is_array()) fail(root + "/annotations", "expected an array");
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        const json& entry = annotations[i];
        if (!entry.is_object()) {
            ++skipped;
            continue;
        }
        GroundTruthRecord gt;
        const json* image_id = optional_member(entry, "image_id");
        const json* category_id = optional_member(entry, "category_id");
        const json* center = optional_member(entry, "center_cam");
        const json* dims = optional_member(entry, "dimensions");
        const json* rot = optional_member(entry, "R_cam");
        if (!image_id || !category_id || !center || !dims || !rot) {
            ++skipped;
            continue;
        }
        const std::string img = id_to_string(*image_id, "");
        const auto cat = category_by_id.find(id_to_string(*category_id, ""));
        if (!image_ids.contains(img) || cat == category_by_id.end()) {
            ++skipped;
            continue;
        }
        gt.image_id = img;
        gt.category = cat->second;

        Mat3 r;
        if (!center->is_array() || center->size() != 3 || !dims->is_array() ||
            dims->size() != 3 || !try_parse_matrix3(*rot, &r)) {
            ++skipped;
            continue;
        }
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) {
            ok = (*center)[k].is_number() && (*dims)[k].is_number();
        }
        if (!ok) {
            ++skipped;
            continue;
        }
        for (int k = 0; k < 3; ++k) {
            gt.cuboid.center[k] = (*center)[k].get<double>();
            gt.cuboid.dims[k] = (*dims)[k].get<double>();
        }
        if (!(gt.cuboid.dims.x() > 0 && gt.cuboid.dims.y() > 0 && gt.cuboid.dims.z() > 0)) {
            ++skipped;
            continue;
        }
        const double ortho_err = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
        if (r.determinant() < 0 || ortho_err > 1e-6) {
            ++skipped;
            continue;
        }
        gt.cuboid.rot = ortho_err <= 1e-9 ? r : nearest_rotation(r);

        Rect2D box{};
        const json* tight = optional_member(entry, "bbox2D_tight");
        const json* proj = optional_member(entry, "bbox2D_proj");
        const json* trunc = optional_member(entry, "bbox2D_trunc");
        if (!(tight && try_parse_corner_box(*tight, &box)) &&
            !(proj && try_parse_corner_box(*proj, &box)) &&
            !(trunc && try_parse_corner_box(*trunc, &box))) {
            box = Rect2D{};
        }
        gt.box2d = box;

        bool ignore = false;
        if (const json* flag = optional_member(entry, "ignore")) {
            ignore = flag->is_boolean() && flag->get<bool>();
        }
        if (const json* behind = optional_member(entry, "behind_camera")) {
            ignore = ignore || (behind->is_boolean() && behind->get<bool>());
        }
        if (const json* valid = optional_member(entry, "valid3D")) {
            ignore = ignore || (valid->is_boolean() && !valid->get<bool>());
        }
        gt.ignore = ignore;
        m.annotations.push_back(std::move(gt));
    }
    if (skipped_annotations) *skipped_annotations = skipped;
    return m;
}

std::vector<DetectionRecord> to_detection_records(const PredictionSet& set) {
    std::vector<DetectionRecord> out;
    out.reserve(set.predictions.size());
    for (const PredictionRecord& rec : set.predictions) {
        if (!rec.cuboid) continue;
        DetectionRecord det;
        det.image_id = rec.image_id;
        det.category = rec.category;
        det.score = rec.score;
        det.box2d = rec.box2d.value_or(Rect2D{});
        det.cuboid = *rec.cuboid;
        out.push_back(std::move(det));
    }
    return out;
}

}  // namespace mono3d
