#include "nosereg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "nosereg/errors.hpp"

namespace nosereg {

namespace {

constexpr double kSampleStep = 0.05;
constexpr double kBackground = 0.0;

class FaceModel {
public:
    explicit FaceModel(const SyntheticFaceSpec& s)
        : s_(s), nose_amp_(s.nose_bump), head_depth_(s.nose_depth - s.nose_bump) {}

    // Depth of the frontal surface at (x, y), or nullopt off the head.
    std::optional<double> depth(double x, double y) const {
        const double u = (x - s_.center_col) / s_.head_half_width;
        const double v = (y - s_.nose_row) / s_.head_half_height;
        const double rho = u * u + v * v;
        if (rho >= 1.0) return std::nullopt;
        const double dx = x - s_.center_col, dy = y - s_.nose_row;
        double z = s_.base_depth + head_depth_ * std::sqrt(1.0 - rho);
        z += nose_amp_ * std::exp(-0.5 * (dx * dx / (s_.nose_sigma_x * s_.nose_sigma_x) +
                                          dy * dy / (s_.nose_sigma_y * s_.nose_sigma_y)));
        const double ey = s_.nose_row - s_.eye_drop;
        for (int side : {-1, 1}) {
            const double ex = s_.center_col + side * s_.eye_half_spacing;
            const double d2 = (x - ex) * (x - ex) + (y - ey) * (y - ey);
            z -= s_.eye_socket_depth * std::exp(-0.5 * d2 / (s_.eye_sigma * s_.eye_sigma));
        }
        return z;
    }

    // Half extent of the head along x on row y (or along y on column x).
    double half_width_at_row(double y) const {
        const double v = (y - s_.nose_row) / s_.head_half_height;
        return v * v >= 1.0 ? 0.0 : s_.head_half_width * std::sqrt(1.0 - v * v);
    }
    double half_height_at_col(double x) const {
        const double u = (x - s_.center_col) / s_.head_half_width;
        return u * u >= 1.0 ? 0.0 : s_.head_half_height * std::sqrt(1.0 - u * u);
    }

    PixelLandmark frontal_nose() const {
        PixelLandmark lm;
        lm.row = s_.nose_row;
        lm.col = s_.center_col;
        lm.depth = *depth(s_.center_col, s_.nose_row);
        return lm;
    }

    EyeCorners frontal_eyes() const {
        EyeCorners eyes;
        const int ey = s_.nose_row - s_.eye_drop;
        eyes.left.row = eyes.right.row = ey;
        eyes.left.col = s_.center_col - s_.eye_half_spacing;
        eyes.right.col = s_.center_col + s_.eye_half_spacing;
        eyes.left.depth = *depth(eyes.left.col, ey);
        eyes.right.depth = *depth(eyes.right.col, ey);
        return eyes;
    }

private:
    const SyntheticFaceSpec& s_;
    double nose_amp_;
    double head_depth_;
};

PixelLandmark posed_landmark(const PixelLandmark& frontal, const RigidTransform& pose) {
    const Eigen::Vector4d p = pose.matrix() * Eigen::Vector4d(frontal.x(), frontal.y(),
                                                              frontal.depth, 1.0);
    PixelLandmark lm;
    lm.row = static_cast<int>(std::lround(p.y()));
    lm.col = static_cast<int>(std::lround(p.x()));
    lm.row_offset = p.y() - lm.row;
    lm.col_offset = p.x() - lm.col;
    lm.depth = p.z();
    return lm;
}

// Renders one scanline of an out-of-plane rotation: the frontal profile along
// the line is densely sampled, rotated, and each pixel takes the highest
// crossing of the rotated polyline (ray cast toward the sensor).
void render_scanline(std::vector<double>& line, const std::vector<Eigen::Vector2d>& rotated) {
    for (std::size_t i = 1; i < rotated.size(); ++i) {
        const auto& a = rotated[i - 1];
        const auto& b = rotated[i];
        const double lo = std::min(a.x(), b.x()), hi = std::max(a.x(), b.x());
        const int first = static_cast<int>(std::ceil(lo));
        const int last = static_cast<int>(std::floor(hi));
        for (int u = std::max(first, 0); u <= last && u < static_cast<int>(line.size()); ++u) {
            const double span = b.x() - a.x();
            const double t = span != 0.0 ? (u - a.x()) / span : 0.0;
            const double z = a.y() + t * (b.y() - a.y());
            line[static_cast<std::size_t>(u)] = std::max(line[static_cast<std::size_t>(u)], z);
        }
    }
}

} // namespace

std::string_view to_string(Orientation o) {
    return o == Orientation::Left ? "left" : "right";
}

void SyntheticFaceSpec::validate() const {
    auto fail = [](const std::string& what) { throw ValidationError("synthetic face: " + what); };
    if (grid < 16) fail("grid must be at least 16 pixels");
    if (!(nose_height > 0)) fail("nose height must be > 0");
    if (!(nose_depth > 0)) fail("nose depth must be > 0");
    if (!(nose_bump > 0 && nose_bump < nose_depth)) fail("nose bump must lie in (0, nose depth)");
    if (!(noise_sigma >= 0)) fail("noise sigma must be >= 0");
    if (!(eye_socket_depth >= 0)) fail("eye socket depth must be >= 0");
    if (!(std::abs(pose.angle_deg) < 90.0)) {
        fail("pose angle " + std::to_string(pose.angle_deg) + " outside (-90, 90) degrees");
    }
    if (!(head_half_width > 0 && head_half_height > 0 && nose_sigma_x > 0 && nose_sigma_y > 0 &&
          eye_sigma > 0)) {
        fail("shape extents must be > 0");
    }
    if (center_col < 0 || center_col >= grid || nose_row < 0 || nose_row >= grid) {
        fail("nose outside the grid");
    }
    const double u = eye_half_spacing / head_half_width;
    const double v = eye_drop / head_half_height;
    if (eye_half_spacing <= 0 || eye_drop <= 0 || u * u + v * v >= 1.0) {
        fail("eye sockets must lie on the head");
    }
}

SyntheticFace generate_synthetic_face(const SyntheticFaceSpec& spec, std::uint64_t seed) {
    spec.validate();
    const FaceModel model(spec);
    const int n = spec.grid;

    SyntheticFace face;
    const PixelLandmark nose0 = model.frontal_nose();
    const EyeCorners eyes0 = model.frontal_eyes();
    const Axis axis = spec.pose.axis;
    const double theta = spec.pose.angle_deg * std::numbers::pi / 180.0;
    const RigidTransform pose =
        pose_rotation(axis, theta, pose_pivot(axis, nose0, eyes0, spec.nose_height, spec.nose_depth));

    std::vector<double> depth(static_cast<std::size_t>(n) * n, kBackground);
    auto at = [&](int r, int c) -> double& { return depth[static_cast<std::size_t>(r * n + c)]; };

    if (theta == 0.0 || axis == Axis::Z) {
        // In-plane: pull every pixel back to the frontal frame.
        const Eigen::Matrix4d inv = pose.inverse().matrix();
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                const Eigen::Vector4d p = inv * Eigen::Vector4d(c, r, 0.0, 1.0);
                if (auto z = model.depth(p.x(), p.y())) at(r, c) = *z;
            }
        }
    } else {
        std::vector<double> line(static_cast<std::size_t>(n));
        std::vector<Eigen::Vector2d> rotated;
        for (int k = 0; k < n; ++k) {
            // Y keeps rows fixed, X keeps columns fixed.
            const double half = axis == Axis::Y ? model.half_width_at_row(k)
                                                : model.half_height_at_col(k);
            if (half <= kSampleStep) continue;
            const double mid = axis == Axis::Y ? spec.center_col : spec.nose_row;
            const double start = mid - half + 1e-9;
            const int samples = static_cast<int>(std::floor((2.0 * half - 2e-9) / kSampleStep));
            rotated.clear();
            for (int i = 0; i <= samples; ++i) {
                const double t = start + i * kSampleStep;
                const double x = axis == Axis::Y ? t : k;
                const double y = axis == Axis::Y ? k : t;
                auto z = model.depth(x, y);
                if (!z) continue;
                const Eigen::Vector4d p = pose.matrix() * Eigen::Vector4d(x, y, *z, 1.0);
                rotated.emplace_back(axis == Axis::Y ? p.x() : p.y(), p.z());
            }
            std::fill(line.begin(), line.end(), -std::numeric_limits<double>::infinity());
            render_scanline(line, rotated);
            for (int u = 0; u < n; ++u) {
                const double z = line[static_cast<std::size_t>(u)];
                if (!std::isfinite(z)) continue;
                if (axis == Axis::Y) {
                    at(k, u) = std::max(at(k, u), z);
                } else {
                    at(u, k) = std::max(at(u, k), z);
                }
            }
        }
    }

    if (spec.noise_sigma > 0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (auto& d : depth) d += noise(rng);
    }

    face.image = RangeImage(n, n, std::move(depth));
    face.nose = posed_landmark(nose0, pose);
    face.eyes.left = posed_landmark(eyes0.left, pose);
    face.eyes.right = posed_landmark(eyes0.right, pose);
    if (face.eyes.left.x() > face.eyes.right.x()) std::swap(face.eyes.left, face.eyes.right);
    return face;
}

SyntheticFaceSpec random_subject(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto integer = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    SyntheticFaceSpec s;
    s.center_col = integer(47, 53);
    s.nose_row = integer(49, 55);
    s.eye_half_spacing = integer(10, 14);
    s.eye_drop = integer(14, 18);
    s.head_half_width = uniform(29.0, 31.0);
    s.head_half_height = uniform(29.0, 31.0);
    s.nose_depth = uniform(38.0, 42.0);
    s.nose_height = s.nose_depth;
    s.nose_bump = uniform(14.0, 16.0);
    s.eye_socket_depth = uniform(4.0, 6.0);
    s.nose_sigma_x = uniform(4.7, 5.3);
    s.nose_sigma_y = uniform(5.5, 6.5);
    return s;
}

} // namespace nosereg
