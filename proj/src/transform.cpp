#include "nosereg/transform.hpp"

#include <cmath>

#include <Eigen/LU>

#include "nosereg/errors.hpp"

namespace nosereg {

std::string_view to_string(Axis axis) {
    switch (axis) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
    }
    return "?";
}

Axis parse_axis(std::string_view text) {
    if (text == "x" || text == "X") return Axis::X;
    if (text == "y" || text == "Y") return Axis::Y;
    if (text == "z" || text == "Z") return Axis::Z;
    throw ValidationError("unknown axis '" + std::string(text) + "', expected X, Y or Z");
}

RigidTransform RigidTransform::translation(double dx, double dy, double dz) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 3) = dx;
    m(1, 3) = dy;
    m(2, 3) = dz;
    return RigidTransform(m);
}

RigidTransform RigidTransform::inverse() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    const Eigen::Matrix3d rt = rotation().transpose();
    m.topLeftCorner<3, 3>() = rt;
    m.topRightCorner<3, 1>() = -rt * offset();
    return RigidTransform(m);
}

bool RigidTransform::is_rigid(double tol) const {
    const Eigen::Matrix3d r = rotation();
    const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    return ortho < tol && std::abs(r.determinant() - 1.0) < tol && m_(3, 0) == 0.0 &&
           m_(3, 1) == 0.0 && m_(3, 2) == 0.0 && m_(3, 3) == 1.0;
}

RigidTransform rotation_matrix(Axis axis, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    switch (axis) {
    case Axis::X:
        m(1, 1) = c; m(1, 2) = -s;
        m(2, 1) = s; m(2, 2) = c;
        break;
    case Axis::Y:
        m(0, 0) = c; m(0, 2) = s;
        m(2, 0) = -s; m(2, 2) = c;
        break;
    case Axis::Z:
        m(0, 0) = c; m(0, 1) = -s;
        m(1, 0) = s; m(1, 1) = c;
        break;
    }
    return RigidTransform(m);
}

RigidTransform rotation_about(Axis axis, double theta, const Eigen::Vector3d& pivot) {
    return RigidTransform::translation(pivot.x(), pivot.y(), pivot.z()) *
           rotation_matrix(axis, theta) *
           RigidTransform::translation(-pivot.x(), -pivot.y(), -pivot.z());
}

double pose_to_matrix_angle(Axis axis, double theta) {
    return axis == Axis::Y ? theta : -theta;
}

RigidTransform pose_rotation(Axis axis, double theta, const Eigen::Vector3d& pivot) {
    return rotation_about(axis, pose_to_matrix_angle(axis, theta), pivot);
}

Eigen::Vector3d pose_pivot(Axis axis, const PixelLandmark& nose, const EyeCorners& eyes,
                           double height, double depth) {
    switch (axis) {
    case Axis::Z:
        return {0.5 * (eyes.left.x() + eyes.right.x()), 0.5 * (eyes.left.y() + eyes.right.y()),
                0.0};
    case Axis::Y:
        return {nose.x(), 0.0, nose.depth - height};
    case Axis::X:
        return {0.0, nose.y(), nose.depth - depth};
    }
    return Eigen::Vector3d::Zero();
}

PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t) {
    PointCloud out;
    out.points.reserve(cloud.size());
    const Eigen::Matrix4d& m = t.matrix();
    for (const auto& p : cloud.points) {
        Eigen::Vector4d q = m * p;
        q.w() = 1.0;
        out.points.push_back(q);
    }
    return out;
}

std::pair<PointCloud, RigidTransform> translate_to_origin(const PointCloud& cloud,
                                                          const PixelLandmark& anchor) {
    if (cloud.empty()) throw EmptyInputError("cannot translate an empty point cloud");
    auto t = RigidTransform::translation(-anchor.x(), -anchor.y(), -anchor.depth);
    return {apply_transform(cloud, t), t};
}

} // namespace nosereg
