// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mono3d {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The two vectors of a 6D rotation are (near-)parallel or zero, so
/// Gram-Schmidt cannot produce an orthonormal frame.
class DegenerateRotation : public Error {
  public:
    using Error::Error;
};

/// A viewing ray or depth needed by a construction is (near-)zero.
class DegenerateRay : public Error {
  public:
    using Error::Error;
};

/// Unprojection produced no valid points.
class EmptyCloud : public Error {
  public:
    using Error::Error;
};

/// Every point of a cloud was labeled noise by the clustering step.
class AllNoise : public Error {
  public:
    using Error::Error;
};

/// A point cloud is too small or too flat to support a box fit.
class DegenerateCloud : public Error {
  public:
    using Error::Error;
};

/// A file or record violates its documented schema. The message names
/// the offending field with a JSON-pointer-style path where possible.
class FormatError : public Error {
  public:
    using Error::Error;
};

}  // namespace mono3d
