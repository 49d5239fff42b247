// Copyright (c) 2026 mono3d-kit contributors
// SPDX-License-Identifier: Apache-2.0
#include "mono3d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mono3d {

namespace {

// Points within this distance of a clipping plane count as inside,
// preventing sliver-face flicker on touching or shared faces.
constexpr double kPlaneEps = 1e-9;

// Half-space n·p <= d.
struct Plane {
    Vec3 n;
    double d;
};

using Polygon = std::vector<Vec3>;

// Area-weighted polygon normal (2A * n̂), origin independent.
Vec3 polygon_normal(const Polygon& poly) {
    Vec3 n = Vec3::Zero();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        n += poly[i].cross(poly[(i + 1) % poly.size()]);
    }
    return n;
}

std::array<Plane, 6> box_planes(const Cuboid3D& b) {
    std::array<Plane, 6> planes;
    const Vec3 half = 0.5 * b.dims;
    for (int axis = 0; axis < 3; ++axis) {
        const Vec3 n = b.rot.col(axis);
        planes[2 * axis] = Plane{n, n.dot(b.center) + half[axis]};
        planes[2 * axis + 1] = Plane{-n, -n.dot(b.center) + half[axis]};
    }
    return planes;
}

// The six quad faces, wound counter-clockwise seen from outside.
std::vector<Polygon> box_faces(const Cuboid3D& b) {
    const Vec3 half = 0.5 * b.dims;
    std::vector<Polygon> faces;
    faces.reserve(6);
    for (int axis = 0; axis < 3; ++axis) {
        // (i, j, axis) cyclic, so CCW order in (i, j) faces +axis.
        const int i = (axis + 1) % 3;
        const int j = (axis + 2) % 3;
        for (int sign : {+1, -1}) {
            Polygon face(4);
            const std::array<std::pair<int, int>, 4> quad = {
                {{+1, +1}, {-1, +1}, {-1, -1}, {+1, -1}}};
            for (int k = 0; k < 4; ++k) {
                Vec3 local;
                local[axis] = sign * half[axis];
                local[i] = quad[k].first * half[i];
                local[j] = quad[k].second * half[j];
                // Mirroring one in-plane coordinate flips the winding for
                // the -axis face.
                if (sign < 0) local[i] = -local[i];
                face[k] = b.center + b.rot * local;
            }
            faces.push_back(std::move(face));
        }
    }
    return faces;
}

Polygon clip_polygon(const Polygon& poly, const Plane& h) {
    Polygon out;
    out.reserve(poly.size() + 2);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a = poly[i];
        const Vec3& b = poly[(i + 1) % n];
        const double da = h.n.dot(a) - h.d;
        const double db = h.n.dot(b) - h.d;
        const bool in_a = da <= kPlaneEps;
        const bool in_b = db <= kPlaneEps;
        if (in_a) out.push_back(a);
        if (in_a != in_b) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

// Builds the cap polygon that closes the polytope on the clipping plane:
// the on-plane vertices of the clipped faces, ordered around their
// centroid, wound so the polygon faces +h.n.
void append_cap(std::vector<Polygon>& faces, const Plane& h) {
    std::vector<Vec3> ring;
    for (const Polygon& face : faces) {
        bool all_on_plane = true;
        for (const Vec3& p : face) {
            if (std::abs(h.n.dot(p) - h.d) <= kPlaneEps) {
                ring.push_back(p);
            } else {
                all_on_plane = false;
            }
        }
        // A surviving face lying in the plane and facing the same way
        // already closes the polytope there.
        if (all_on_plane && polygon_normal(face).dot(h.n) > 0) return;
    }

    std::vector<Vec3> unique;
    for (const Vec3& p : ring) {
        bool seen = false;
        for (const Vec3& q : unique) {
            if ((p - q).squaredNorm() <= kPlaneEps * kPlaneEps) {
                seen = true;
                break;
            }
        }
        if (!seen) unique.push_back(p);
    }
    if (unique.size() < 3) return;

    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : unique) centroid += p;
    centroid /= static_cast<double>(unique.size());

    // In-plane basis (u, v) with u x v = h.n, so ascending-angle order
    // winds the cap to face +h.n (outward for the kept half-space).
    const Vec3 pick = std::abs(h.n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 u = h.n.cross(pick).normalized();
    const Vec3 v = h.n.cross(u);
    std::sort(unique.begin(), unique.end(), [&](const Vec3& a, const Vec3& b) {
        const Vec3 pa = a - centroid;
        const Vec3 pb = b - centroid;
        return std::atan2(pa.dot(v), pa.dot(u)) < std::atan2(pb.dot(v), pb.dot(u));
    });
    faces.emplace_back(std::move(unique));
}

double polytope_volume(const std::vector<Polygon>& faces) {
    double six_v = 0.0;
    for (const Polygon& face : faces) {
        for (std::size_t k = 2; k < face.size(); ++k) {
            six_v += face[0].dot(face[k - 1].cross(face[k]));
        }
    }
    return six_v / 6.0;
}

}  // namespace

bool is_rotation(const Mat3& r, double tol) {
    const Mat3 gram = r.transpose() * r;
    const double ortho_err = (gram - Mat3::Identity()).cwiseAbs().maxCoeff();
    return ortho_err <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

Mat3 nearest_rotation(const Mat3& r) {
    Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 u = svd.matrixU();
    const Mat3 v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0) u.col(2) = -u.col(2);
    return u * v.transpose();
}

Mat3 rotation_from_6d(const Rotation6d& v) {
    const Vec3 a1 = v.first();
    const Vec3 a2 = v.second();
    const double n1 = a1.norm();
    if (n1 <= 1e-12) {
        throw DegenerateRotation("rotation_from_6d: first vector is zero");
    }
    const Vec3 b1 = a1 / n1;
    const Vec3 u2 = a2 - b1.dot(a2) * b1;
    if (b1.cross(u2).norm() <= 1e-12) {
        throw DegenerateRotation(
            "rotation_from_6d: vectors are parallel or zero; Gram-Schmidt failed");
    }
    const Vec3 b2 = u2.normalized();
    Mat3 r;
    r.col(0) = b1;
    r.col(1) = b2;
    r.col(2) = b1.cross(b2);
    return r;
}

Rotation6d rotation_to_6d(const Mat3& r) {
    Rotation6d out;
    out.v = {r(0, 0), r(1, 0), r(2, 0), r(0, 1), r(1, 1), r(2, 1)};
    return out;
}

Mat3 view_rotation(const Vec3& center) {
    const double n = center.norm();
    if (n <= 1e-9) {
        throw DegenerateRay("view_rotation: center is at the camera origin");
    }
    const Vec3 ray = center / n;
    const Vec3 z = Vec3::UnitZ();
    const Vec3 axis = z.cross(ray);
    const double s = axis.norm();
    const double c = z.dot(ray);
    if (s <= 1e-12) {
        if (c > 0) return Mat3::Identity();
        // Antipodal ray: rotate half a turn about x.
        Mat3 r = Mat3::Identity();
        r(1, 1) = -1;
        r(2, 2) = -1;
        return r;
    }
    return Eigen::AngleAxisd(std::atan2(s, c), axis / s).toRotationMatrix();
}

Mat3 allocentric_to_egocentric(const Mat3& r_allo, const Vec3& center) {
    return view_rotation(center) * r_allo;
}

Mat3 egocentric_to_allocentric(const Mat3& r_ego, const Vec3& center) {
    return view_rotation(center).transpose() * r_ego;
}

CornerArray cuboid_corners(const Cuboid3D& c) {
    CornerArray out;
    const Vec3 half = 0.5 * c.dims;
    for (int i = 0; i < 8; ++i) {
        const Vec3 local((i & 1) ? half.x() : -half.x(),
                         (i & 2) ? half.y() : -half.y(),
                         (i & 4) ? half.z() : -half.z());
        out[i] = c.center + c.rot * local;
    }
    return out;
}

double cuboid_volume(const Cuboid3D& c) {
    return c.dims.x() * c.dims.y() * c.dims.z();
}

bool cuboid_contains(const Cuboid3D& c, const Vec3& p, double slack) {
    const Vec3 local = c.rot.transpose() * (p - c.center);
    const Vec3 half = 0.5 * c.dims;
    return std::abs(local.x()) <= half.x() + slack &&
           std::abs(local.y()) <= half.y() + slack &&
           std::abs(local.z()) <= half.z() + slack;
}

double intersection_volume(const Cuboid3D& a, const Cuboid3D& b) {
    // Cheap separation test on bounding spheres.
    const double reach = 0.5 * (a.dims.norm() + b.dims.norm());
    if ((a.center - b.center).squaredNorm() > reach * reach) return 0.0;

    std::vector<Polygon> faces = box_faces(a);
    for (const Plane& h : box_planes(b)) {
        std::vector<Polygon> clipped;
        clipped.reserve(faces.size() + 1);
        for (const Polygon& face : faces) {
            Polygon cut = clip_polygon(face, h);
            if (cut.size() >= 3) clipped.push_back(std::move(cut));
        }
        if (clipped.empty()) return 0.0;
        append_cap(clipped, h);
        faces = std::move(clipped);
    }
    return std::max(polytope_volume(faces), 0.0);
}

double iou3d(const Cuboid3D& a, const Cuboid3D& b) {
    const double va = cuboid_volume(a);
    const double vb = cuboid_volume(b);
    const double inter = std::min(intersection_volume(a, b), std::min(va, vb));
    if (inter <= 0.0) return 0.0;
    return std::clamp(inter / (va + vb - inter), 0.0, 1.0);
}

double chamfer_corner_distance(const CornerArray& a, const CornerArray& b) {
    auto directed = [](const CornerArray& from, const CornerArray& to) {
        double sum = 0.0;
        for (const Vec3& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec3& q : to) best = std::min(best, (p - q).norm());
            sum += best;
        }
        return sum / static_cast<double>(from.size());
    };
    return directed(a, b) + directed(b, a);
}

double rect_iou(const Rect2D& a, const Rect2D& b) {
    const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = ix * iy;
    const double uni = a.w * a.h + b.w * b.h - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace mono3d
