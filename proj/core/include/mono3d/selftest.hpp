// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mono3d {

struct SelftestOptions {
    std::uint64_t seed = 42;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    int checks = 0;
    int failures = 0;
    std::string detail;  // deterministic for a fixed seed (no timings)
};

/// Runs the embedded oracle suites: exact box IoU against Monte Carlo
/// sampling, the assignment solver against exhaustive permutations, box
/// fits against known synthetic boxes, the clustering against the
/// quadratic reference, and the unprojection round trip.
///
/// Setting MONO3D_KIT_SELFTEST_FAULT=iou3d biases the IoU values under
/// test; it exists so callers can verify that a broken build is caught.
std::vector<SuiteResult> run_selftest(const SelftestOptions& options);

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace mono3d
