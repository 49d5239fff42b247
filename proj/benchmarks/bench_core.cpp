// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <vector>

#include "mono3d/evaluation.hpp"
#include "mono3d/geometry.hpp"
#include "mono3d/lifting.hpp"
#include "mono3d/reference.hpp"

using namespace mono3d;
using reference::SplitMix64;

namespace {

std::vector<Cuboid3D> random_boxes(int count, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Cuboid3D> boxes;
    boxes.reserve(count);
    for (int i = 0; i < count; ++i) {
        boxes.push_back(reference::random_cuboid(rng, 0.2, 3.0, 2.0));
    }
    return boxes;
}

void BM_Iou3dAxisAligned(benchmark::State& state) {
    Cuboid3D a, b;
    b.center = Vec3(0.4, 0.2, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(iou3d(a, b));
}
BENCHMARK(BM_Iou3dAxisAligned);

void BM_Iou3dOriented(benchmark::State& state) {
    const std::vector<Cuboid3D> boxes = random_boxes(64, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        const Cuboid3D& a = boxes[i % boxes.size()];
        const Cuboid3D& b = boxes[(i + 1) % boxes.size()];
        benchmark::DoNotOptimize(iou3d(a, b));
        ++i;
    }
}
BENCHMARK(BM_Iou3dOriented);

void BM_CuboidCorners(benchmark::State& state) {
    const Cuboid3D c = random_boxes(1, 2)[0];
    for (auto _ : state) benchmark::DoNotOptimize(cuboid_corners(c));
}
BENCHMARK(BM_CuboidCorners);

void BM_ChamferCornerDistance(benchmark::State& state) {
    const std::vector<Cuboid3D> boxes = random_boxes(2, 3);
    const CornerArray a = cuboid_corners(boxes[0]);
    const CornerArray b = cuboid_corners(boxes[1]);
    for (auto _ : state) benchmark::DoNotOptimize(chamfer_corner_distance(a, b));
}
BENCHMARK(BM_ChamferCornerDistance);

void BM_Hungarian8x8(benchmark::State& state) {
    SplitMix64 rng(4);
    Eigen::MatrixXd cost(8, 8);
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) cost(r, c) = rng.uniform(0, 10);
    }
    for (auto _ : state) benchmark::DoNotOptimize(hungarian_assign(cost));
}
BENCHMARK(BM_Hungarian8x8);

void BM_Nhd(benchmark::State& state) {
    const std::vector<Cuboid3D> boxes = random_boxes(2, 5);
    for (auto _ : state) benchmark::DoNotOptimize(nhd(boxes[0], boxes[1]));
}
BENCHMARK(BM_Nhd);

void BM_Dbscan(benchmark::State& state) {
    SplitMix64 rng(6);
    PointCloud pc;
    const int n = static_cast<int>(state.range(0));
    // constant density: ~15 points per eps-ball regardless of n
    const double eps = 0.05;
    const double side = eps * std::cbrt(n * 4.19 / 15.0);
    pc.points.reserve(n);
    for (int i = 0; i < n; ++i) {
        pc.points.emplace_back(rng.uniform(0, side), rng.uniform(0, side),
                               rng.uniform(0, side));
    }
    for (auto _ : state) benchmark::DoNotOptimize(dbscan(pc, eps, 10));
    state.SetComplexityN(n);
}
BENCHMARK(BM_Dbscan)->Range(1 << 10, 1 << 14)->Complexity();

void BM_FitObbPca(benchmark::State& state) {
    SplitMix64 rng(7);
    const Cuboid3D truth = reference::random_cuboid(rng, 0.5, 2.5, 1.0);
    PointCloud pc;
    const int n = static_cast<int>(state.range(0));
    for (int i = 0; i < n; ++i) {
        const Vec3 local(rng.uniform(-0.5, 0.5) * truth.dims.x(),
                         rng.uniform(-0.5, 0.5) * truth.dims.y(),
                         rng.uniform(-0.5, 0.5) * truth.dims.z());
        pc.points.push_back(truth.center + truth.rot * local);
    }
    for (auto _ : state) benchmark::DoNotOptimize(fit_obb_pca(pc));
    state.SetComplexityN(n);
}
BENCHMARK(BM_FitObbPca)->Range(1 << 10, 1 << 14)->Complexity();

void BM_Unproject(benchmark::State& state) {
    const CameraIntrinsics k{500, 500, 320, 240};
    DepthMap depth;
    depth.width = 640;
    depth.height = 480;
    depth.data.assign(640 * 480, 2.0f);
    InstanceMask mask;
    mask.width = 640;
    mask.height = 480;
    mask.data.assign(640 * 480, 1);
    for (auto _ : state) benchmark::DoNotOptimize(unproject(depth, mask, k));
}
BENCHMARK(BM_Unproject);

void BM_Evaluate(benchmark::State& state) {
    SplitMix64 rng(8);
    std::vector<GroundTruthRecord> gts;
    std::vector<DetectionRecord> dets;
    for (int i = 0; i < 200; ++i) {
        const std::string image = "img" + std::to_string(i % 20);
        const std::string category = "cat" + std::to_string(i % 5);
        const Cuboid3D box = reference::random_cuboid(rng, 0.4, 2.0, 1.0, Vec3(0, 0, 4));
        const Rect2D rect{rng.uniform(0, 600), rng.uniform(0, 400), 40, 40};
        gts.push_back({image, category, rect, box, false});
        Cuboid3D noisy = box;
        noisy.center += Vec3(rng.uniform(-0.3, 0.3), 0, rng.uniform(-0.3, 0.3));
        dets.push_back({image, category, rng.uniform(0, 1), rect, noisy});
    }
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(gts, dets, EvalConfig{}));
}
BENCHMARK(BM_Evaluate);

}  // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
