#include "nosereg/register.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nosereg/errors.hpp"

namespace nosereg {

namespace {

RotationEstimate make_estimate(Axis axis, double theta) {
    return {axis, theta, orientation_of(theta)};
}

PixelLandmark landmark_at(const Eigen::Vector3d& p) {
    PixelLandmark lm;
    lm.row = static_cast<int>(std::lround(p.y()));
    lm.col = static_cast<int>(std::lround(p.x()));
    lm.row_offset = p.y() - lm.row;
    lm.col_offset = p.x() - lm.col;
    lm.depth = p.z();
    return lm;
}

RotationEstimate estimate_for(Axis axis, const PixelLandmark& nose, const GalleryEntry& entry,
                              const Eigen::Vector3d& pivot) {
    switch (axis) {
    case Axis::Z: return estimate_angle_z(nose, landmark_at(pivot));
    case Axis::Y: return estimate_angle_y(nose, entry.nose, entry.height);
    case Axis::X: return estimate_angle_x(nose, entry.nose, entry.depth);
    }
    return {};
}

std::optional<double> bilinear(const RangeImage& img, double y, double x) {
    const int r = static_cast<int>(std::floor(y));
    const int c = static_cast<int>(std::floor(x));
    if (!img.inside(r, c) || !img.inside(r + 1, c + 1)) return std::nullopt;
    if (!img.valid(r, c) || !img.valid(r, c + 1) || !img.valid(r + 1, c) || !img.valid(r + 1, c + 1)) {
        return std::nullopt;
    }
    const double v = y - r, u = x - c;
    return (1 - v) * ((1 - u) * img.at(r, c) + u * img.at(r, c + 1)) +
           v * ((1 - u) * img.at(r + 1, c) + u * img.at(r + 1, c + 1));
}

// Mean absolute depth difference to the entry's frontal image over pixels
// valid in both, with the nose tips aligned in the image plane and the depth
// offset set to the median difference.
double match_distance(const RangeImage& img, const PixelLandmark& nose, const GalleryEntry& entry) {
    const double dy = entry.nose.y() - nose.y();
    const double dx = entry.nose.x() - nose.x();
    std::vector<double> diff;
    diff.reserve(img.valid_count());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.valid(r, c)) continue;
            if (const auto z = bilinear(entry.frontal, r + dy, c + dx)) diff.push_back(*z - img.at(r, c));
        }
    }
    if (diff.empty() || diff.size() * 4 < entry.frontal.valid_count()) {
        return std::numeric_limits<double>::infinity();
    }
    auto mid = diff.begin() + static_cast<std::ptrdiff_t>(diff.size() / 2);
    std::nth_element(diff.begin(), mid, diff.end());
    const double offset = *mid;
    double sum = 0.0;
    for (double d : diff) sum += std::abs(d - offset);
    return sum / static_cast<double>(diff.size());
}

// Strict weak "better than" for one-to-all ranking; equal keys keep order.
bool better(const RegistrationResult& a, const RegistrationResult& b) {
    if (a.verified != b.verified) return a.verified;
    if (a.match_distance != b.match_distance) return a.match_distance < b.match_distance;
    return a.residual < b.residual;
}

} // namespace

RotationEstimate estimate_angle_z(const PixelLandmark& rotated, const PixelLandmark& frontal) {
    const double dy = rotated.y() - frontal.y();
    if (dy == 0.0) {
        throw UndefinedAngleError("roll angle undefined: nose tip on the pivot row");
    }
    return make_estimate(Axis::Z, std::atan((rotated.x() - frontal.x()) / dy));
}

RotationEstimate estimate_angle_y(const PixelLandmark& rotated, const PixelLandmark& frontal,
                                  double height) {
    if (!(height > 0)) throw ValidationError("yaw estimate needs height > 0");
    return make_estimate(Axis::Y, std::atan((rotated.x() - frontal.x()) / height));
}

RotationEstimate estimate_angle_x(const PixelLandmark& rotated, const PixelLandmark& frontal,
                                  double depth) {
    if (!(depth > 0)) throw ValidationError("pitch estimate needs depth > 0");
    return make_estimate(Axis::X, std::atan((rotated.y() - frontal.y()) / depth));
}

PointCloud densify_surface(const RangeImage& img, int factor, double max_jump) {
    if (factor < 1) throw ValidationError("densify factor must be >= 1");
    PointCloud cloud;
    cloud.points.reserve(img.valid_count() * static_cast<std::size_t>(factor * factor));
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.valid(r, c)) continue;
            cloud.points.emplace_back(c, r, img.at(r, c), 1.0);
            if (factor == 1 || r + 1 >= img.height() || c + 1 >= img.width() ||
                !img.valid(r, c + 1) || !img.valid(r + 1, c) || !img.valid(r + 1, c + 1)) {
                continue;
            }
            const double z00 = img.at(r, c), z01 = img.at(r, c + 1);
            const double z10 = img.at(r + 1, c), z11 = img.at(r + 1, c + 1);
            // Depth discontinuities are occlusion boundaries, not surface.
            const double span = std::max({z00, z01, z10, z11}) - std::min({z00, z01, z10, z11});
            if (span > max_jump) continue;
            for (int i = 0; i < factor; ++i) {
                const double v = static_cast<double>(i) / factor;
                for (int j = 0; j < factor; ++j) {
                    if (i == 0 && j == 0) continue;
                    const double u = static_cast<double>(j) / factor;
                    const double z = (1 - v) * ((1 - u) * z00 + u * z01) + v * ((1 - u) * z10 + u * z11);
                    cloud.points.emplace_back(c + u, r + v, z, 1.0);
                }
            }
        }
    }
    if (cloud.empty()) throw EmptyInputError("range image has no valid pixels");
    return cloud;
}

RegistrationResult register_single(const RangeImage& probe, const GalleryEntry& entry, Axis axis,
                                   const RegistrationParams& params) {
    if (params.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    const PointCloud cloud = to_point_cloud(probe);
    const PointCloud dense = densify_surface(probe, params.densify, params.max_cell_jump);
    const Eigen::Vector3d pivot =
        pose_pivot(axis, entry.nose, entry.eyes, entry.height, entry.depth);
    const double tol = params.convergence_deg * std::numbers::pi / 180.0;

    RegistrationResult result;
    result.matched_id = entry.id;
    RigidTransform rotation;
    double total = 0.0;
    RangeImage current = probe;
    std::optional<VerificationReport> report;
    std::string verify_error;

    for (int k = 1; k <= params.max_iterations; ++k) {
        result.iterations = k;
        const PixelLandmark nose = locate_nose_tip(current);
        const double delta = estimate_for(axis, nose, entry, pivot).theta;
        const bool converged = std::abs(delta) < tol;
        // The first pass always re-rasterises so the result lives on the
        // resampled grid even when no rotation is needed.
        if (k == 1 || !converged) {
            const RigidTransform step = pose_rotation(axis, -delta, pivot);
            result.steps.push_back(step);
            rotation = step * rotation;
            total += delta;
            current = rasterize(apply_transform(dense, rotation), probe.width(), probe.height());
        }
        try {
            report = verify(current, entry, axis, params.landmarks, params.residual_threshold);
            verify_error.clear();
        } catch (const VerificationImpossibleError& e) {
            report.reset();
            verify_error = e.what();
        }
        if (converged) break;
    }
    if (!report) throw VerificationImpossibleError(verify_error);

    const PixelLandmark final_nose = locate_nose_tip(current);
    auto [registered, translation] = translate_to_origin(apply_transform(cloud, rotation), final_nose);
    result.registered = std::move(registered);
    result.translation = translation;
    result.transform = translation * rotation;
    result.registered_image = std::move(current);
    result.estimate = make_estimate(axis, total);
    result.report = *report;
    result.residual = report->residual;
    result.verified = report->passed;
    result.match_distance =
        match_distance(result.registered_image, final_nose, entry);
    return result;
}

RegistrationResult register_one_to_all(const RangeImage& probe,
                                       const std::vector<GalleryEntry>& gallery, Axis axis,
                                       const RegistrationParams& params) {
    if (gallery.empty()) throw ValidationError("one-to-all registration needs a non-empty gallery");
    std::optional<RegistrationResult> best;
    std::ostringstream causes;
    for (const auto& entry : gallery) {
        try {
            auto r = register_single(probe, entry, axis, params);
            if (!best || better(r, *best)) best = std::move(r);
        } catch (const Error& e) {
            causes << "\n  " << entry.id << ": " << e.what();
        }
    }
    if (!best) {
        throw RegistrationError("registration failed against every gallery entry:" + causes.str());
    }
    return std::move(*best);
}

RegistrationResult register_auto(const RangeImage& probe, const std::vector<GalleryEntry>& gallery,
                                 const RegistrationParams& params) {
    std::optional<RegistrationResult> best;
    std::ostringstream causes;
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        try {
            auto r = register_one_to_all(probe, gallery, axis, params);
            if (!best || better(r, *best)) best = std::move(r);
        } catch (const Error& e) {
            causes << "\n  axis " << to_string(axis) << ": " << e.what();
        }
    }
    if (!best) throw RegistrationError("registration failed on every axis:" + causes.str());
    return std::move(*best);
}

} // namespace nosereg
