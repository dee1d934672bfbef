#include "nosereg/verify.hpp"

#include <cmath>

#include "nosereg/errors.hpp"

namespace nosereg {

EyeCorners detect_eyes(const RangeImage& img, const PixelLandmark& nose,
                       const LandmarkParams& params) {
    return find_eye_corners(img, compute_curvatures(img, params.curvature_step), nose, params.pits);
}

GalleryEntry make_gallery_entry(std::string id, RangeImage frontal, double height, double depth,
                                const LandmarkParams& params) {
    if (!(height > 0) || !(depth > 0)) {
        throw ValidationError("gallery entry '" + id + "': height and depth must be > 0");
    }
    GalleryEntry entry;
    entry.id = std::move(id);
    entry.nose = locate_nose_tip(frontal);
    entry.eyes = detect_eyes(frontal, entry.nose, params);
    entry.frontal = std::move(frontal);
    entry.height = height;
    entry.depth = depth;
    return entry;
}

VerificationReport verify_z(const RangeImage& registered, const LandmarkParams& params,
                            double threshold) {
    VerificationReport report;
    report.axis = Axis::Z;
    report.threshold = threshold;
    EyeCorners eyes;
    try {
        eyes = detect_eyes(registered, locate_nose_tip(registered), params);
    } catch (const AlgorithmError& e) {
        throw VerificationImpossibleError(std::string("roll verification impossible: ") + e.what());
    }
    report.residual = std::abs(eyes.left.y() - eyes.right.y());
    report.passed = report.residual < threshold;
    report.landmarks = {eyes.left, eyes.right};
    return report;
}

VerificationReport verify_nose_x(const RangeImage& registered, const GalleryEntry& entry, Axis axis,
                                 double threshold) {
    if (axis == Axis::Z) throw ValidationError("verify_nose_x handles the X and Y axes only");
    VerificationReport report;
    report.axis = axis;
    report.threshold = threshold;
    const PixelLandmark nose = locate_nose_tip(registered);
    report.residual = axis == Axis::Y ? std::abs(nose.x() - entry.nose.x())
                                      : std::abs(nose.y() - entry.nose.y());
    report.passed = report.residual < threshold;
    report.landmarks = {nose};
    return report;
}

VerificationReport verify(const RangeImage& registered, const GalleryEntry& entry, Axis axis,
                          const LandmarkParams& params, double threshold) {
    return axis == Axis::Z ? verify_z(registered, params, threshold)
                           : verify_nose_x(registered, entry, axis, threshold);
}

} // namespace nosereg
