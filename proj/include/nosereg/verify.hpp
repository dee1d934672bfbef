#pragma once

#include <vector>

#include "nosereg/gallery.hpp"
#include "nosereg/transform.hpp"

namespace nosereg {

inline constexpr double kDefaultResidualThreshold = 2.0;

struct VerificationReport {
    Axis axis = Axis::Z;
    double residual = 0.0;  // pixels
    double threshold = kDefaultResidualThreshold;
    bool passed = false;    // residual < threshold
    std::vector<PixelLandmark> landmarks;
};

// Roll check: the two eye corners must sit on one image row.
// residual = |left.y() - right.y()|.
VerificationReport verify_z(const RangeImage& registered, const LandmarkParams& params = {},
                            double threshold = kDefaultResidualThreshold);

// Yaw/pitch check against the matched frontal: residual is the column (Y)
// or row (X) distance between the registered nose tip and the entry's.
VerificationReport verify_nose_x(const RangeImage& registered, const GalleryEntry& entry, Axis axis,
                                 double threshold = kDefaultResidualThreshold);

// Dispatches to verify_z or verify_nose_x.
VerificationReport verify(const RangeImage& registered, const GalleryEntry& entry, Axis axis,
                          const LandmarkParams& params = {},
                          double threshold = kDefaultResidualThreshold);

} // namespace nosereg
