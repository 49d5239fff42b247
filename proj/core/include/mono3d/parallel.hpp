// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace mono3d {

/// Worker count resolution: a positive request wins, otherwise the
/// MONO3D_KIT_THREADS environment variable, otherwise the hardware
/// concurrency. Always at least 1.
unsigned resolve_jobs(unsigned requested);

/// Runs fn(i) for i in [0, count) on up to jobs threads, each owning a
/// contiguous index range. Callers must make fn(i) write only to
/// i-addressed slots so results do not depend on scheduling. The first
/// exception thrown by any worker is rethrown after all join.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace mono3d
