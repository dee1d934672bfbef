#pragma once

#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "nosereg/landmarks.hpp"
#include "nosereg/rangeio.hpp"

namespace nosereg {

enum class Axis { X, Y, Z };

std::string_view to_string(Axis axis);
// Accepts "x"/"y"/"z" in either case.
Axis parse_axis(std::string_view text);

// 4x4 homogeneous rigid transform.
class RigidTransform {
public:
    RigidTransform() : m_(Eigen::Matrix4d::Identity()) {}
    explicit RigidTransform(const Eigen::Matrix4d& m) : m_(m) {}

    static RigidTransform identity() { return RigidTransform(); }
    static RigidTransform translation(double dx, double dy, double dz);

    const Eigen::Matrix4d& matrix() const { return m_; }
    Eigen::Matrix3d rotation() const { return m_.topLeftCorner<3, 3>(); }
    Eigen::Vector3d offset() const { return m_.topRightCorner<3, 1>(); }

    // Exact inverse of a rigid transform: [R^T, -R^T t].
    RigidTransform inverse() const;

    // ||R^T R - I||_inf < tol, |det R - 1| < tol and bottom row exactly 0 0 0 1.
    bool is_rigid(double tol = 1e-9) const;

    friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
        return RigidTransform(a.m_ * b.m_);
    }

private:
    Eigen::Matrix4d m_;
};

// Right-handed rotation about a coordinate axis, e.g. for Z
//   [cos -sin 0 0; sin cos 0 0; 0 0 1 0; 0 0 0 1].
RigidTransform rotation_matrix(Axis axis, double theta);

// Rotation by `theta` about the line parallel to `axis` through `pivot`.
RigidTransform rotation_about(Axis axis, double theta, const Eigen::Vector3d& pivot);

// Pose convention. A face posed at signed angle theta about `axis` has its
// nose tip displaced toward larger columns (Y, Z) or larger rows (X) when
// theta > 0. Image rows grow downward, so for X and Z this is a rotation by
// -theta in matrix terms.
double pose_to_matrix_angle(Axis axis, double theta);
RigidTransform pose_rotation(Axis axis, double theta, const Eigen::Vector3d& pivot);

// The point a pose rotates about, expressed through frontal landmarks:
//   Z: midpoint of the eye corners (in-plane roll),
//   Y: `height` behind the nose tip on the vertical line through it,
//   X: `depth` behind the nose tip on the horizontal line through it.
Eigen::Vector3d pose_pivot(Axis axis, const PixelLandmark& nose, const EyeCorners& eyes,
                           double height, double depth);

PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t);

// Shifts every point by -(anchor.x(), anchor.y(), anchor.depth) and returns
// the translated cloud together with that translation.
std::pair<PointCloud, RigidTransform> translate_to_origin(const PointCloud& cloud,
                                                          const PixelLandmark& anchor);

} // namespace nosereg
