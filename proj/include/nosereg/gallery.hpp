#pragma once

#include <string>

#include "nosereg/landmarks.hpp"
#include "nosereg/rangeio.hpp"

namespace nosereg {

struct LandmarkParams {
    PitThresholds pits;
    // Stencil spacing for eye-pit curvature.
    int curvature_step = 3;
};

// Eyes of `img`, searched above the given nose tip.
EyeCorners detect_eyes(const RangeImage& img, const PixelLandmark& nose,
                       const LandmarkParams& params);

// A frontal reference face. `height` and `depth` are the distances from the
// nose tip to the yaw and pitch axes respectively, in depth units.
struct GalleryEntry {
    std::string id;
    RangeImage frontal;
    PixelLandmark nose;
    EyeCorners eyes;
    double height = 0.0;
    double depth = 0.0;
};

// Detects the landmarks on an already preprocessed frontal image.
GalleryEntry make_gallery_entry(std::string id, RangeImage frontal, double height, double depth,
                                const LandmarkParams& params = {});

} // namespace nosereg
