// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include <Eigen/Dense>

#include "mono3d/error.hpp"

namespace mono3d {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Continuous 6D rotation parameterization: two stacked 3-vectors that
/// are orthonormalized by Gram-Schmidt to form the first two columns of
/// a rotation matrix (third column by cross product).
struct Rotation6d {
    std::array<double, 6> v{1, 0, 0, 0, 1, 0};

    Vec3 first() const { return {v[0], v[1], v[2]}; }
    Vec3 second() const { return {v[3], v[4], v[5]}; }
};

/// Oriented 3D box in the camera frame (+z forward).
/// dims holds the full extents (w, h, l) in meters; the columns of rot
/// are the box axes (egocentric, camera frame).
struct Cuboid3D {
    Vec3 center{0, 0, 0};
    Vec3 dims{1, 1, 1};
    Mat3 rot = Mat3::Identity();
};

/// Eight box corners in canonical order: corner i takes the negative
/// local half-extent on axis k when bit k of i is 0 and the positive one
/// when it is 1 (bit 0 = x, bit 1 = y, bit 2 = z), rotated then
/// translated. The ordering is fixed so serialized corners are
/// deterministic.
using CornerArray = std::array<Vec3, 8>;

/// Axis-aligned 2D rectangle (x, y, w, h) in pixels.
struct Rect2D {
    double x = 0, y = 0, w = 0, h = 0;
};

/// True when r is orthonormal (elementwise within tol) with det +1.
bool is_rotation(const Mat3& r, double tol = 1e-9);

/// Closest rotation matrix to r in the Frobenius sense (SVD projection).
Mat3 nearest_rotation(const Mat3& r);

/// Gram-Schmidt construction of a rotation from a 6D parameterization.
/// Throws DegenerateRotation when the two vectors are parallel or zero
/// (cross-product norm of the orthogonalized pair <= 1e-12).
Mat3 rotation_from_6d(const Rotation6d& v);

/// Inverse of rotation_from_6d: the first two columns of r.
Rotation6d rotation_to_6d(const Mat3& r);

/// Minimal rotation taking the optical axis (0,0,1) onto center/|center|.
/// Throws DegenerateRay when |center| <= 1e-9.
Mat3 view_rotation(const Vec3& center);

/// Convert an object rotation expressed relative to its viewing ray into
/// the camera frame: R_ego = R_view * R_allo.
Mat3 allocentric_to_egocentric(const Mat3& r_allo, const Vec3& center);

/// Inverse of allocentric_to_egocentric.
Mat3 egocentric_to_allocentric(const Mat3& r_ego, const Vec3& center);

CornerArray cuboid_corners(const Cuboid3D& c);

/// w * h * l.
double cuboid_volume(const Cuboid3D& c);

/// True when p lies inside c, with the box inflated by slack on each side.
bool cuboid_contains(const Cuboid3D& c, const Vec3& p, double slack = 0.0);

/// Exact intersection volume of two oriented boxes. The faces of a are
/// clipped against the six half-spaces of b (3D Sutherland-Hodgman per
/// face); each clip closes the polytope with a cap polygon on the
/// clipping plane; the volume follows from the divergence theorem.
double intersection_volume(const Cuboid3D& a, const Cuboid3D& b);

/// Exact intersection-over-union of two oriented boxes, in [0, 1].
/// Disjoint boxes return 0.
double iou3d(const Cuboid3D& a, const Cuboid3D& b);

/// Symmetric Chamfer distance between two corner sets: the mean
/// nearest-neighbor distance from a into b plus the reverse term.
double chamfer_corner_distance(const CornerArray& a, const CornerArray& b);

/// Axis-aligned rectangle intersection-over-union, in [0, 1].
double rect_iou(const Rect2D& a, const Rect2D& b);

}  // namespace mono3d
