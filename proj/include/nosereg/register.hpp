#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nosereg/gallery.hpp"
#include "nosereg/synthetic.hpp"
#include "nosereg/transform.hpp"
#include "nosereg/verify.hpp"

namespace nosereg {

// Signed pose angle about one axis; left orientation <=> theta < 0.
struct RotationEstimate {
    Axis axis = Axis::Z;
    double theta = 0.0;  // radians, in (-pi/2, pi/2)
    Orientation orientation = Orientation::Right;
};

// theta = atan((x1 - x0) / (y1 - y0)), x = column, y = row. The reference
// point must be the roll pivot for theta to be the roll angle.
// Throws UndefinedAngleError when y1 == y0.
RotationEstimate estimate_angle_z(const PixelLandmark& rotated, const PixelLandmark& frontal);

// theta = atan((x1 - x0) / height).
RotationEstimate estimate_angle_y(const PixelLandmark& rotated, const PixelLandmark& frontal,
                                  double height);

// theta = atan((y1 - y0) / depth).
RotationEstimate estimate_angle_x(const PixelLandmark& rotated, const PixelLandmark& frontal,
                                  double depth);

struct RegistrationParams {
    int max_iterations = 10;
    double residual_threshold = kDefaultResidualThreshold;
    // Iteration stops once an update falls below this many degrees.
    double convergence_deg = 0.25;
    // Sub-samples per pixel edge when re-rasterising the rotated surface.
    int densify = 4;
    // Cells whose corner depths spread wider than this are not resampled.
    double max_cell_jump = 8.0;
    LandmarkParams landmarks;
};

struct RegistrationResult {
    RigidTransform transform;    // translation * steps[n-1] * ... * steps[0]
    PointCloud registered;       // transform applied to the probe cloud
    RangeImage registered_image; // rotated probe, re-rasterised in the shared frame
    RotationEstimate estimate;   // accumulated pose angle
    double residual = 0.0;
    std::string matched_id;
    int iterations = 0;
    bool verified = false;
    VerificationReport report;
    std::vector<RigidTransform> steps;
    RigidTransform translation;
    // Mean absolute depth difference between the registered image and the
    // entry's frontal image over shared valid pixels, nose tips aligned and
    // the median depth offset removed.
    // Infinite when they share less than a quarter of the entry's pixels.
    double match_distance = 0.0;
};

// Algorithm: detect the probe nose tip, estimate the pose angle against the
// entry, rotate the probe back about the entry's pose pivot, re-rasterise
// and repeat until the update converges or max_iterations is hit. The nose
// tip is then translated to the origin and the result verified.
RegistrationResult register_single(const RangeImage& probe, const GalleryEntry& entry, Axis axis,
                                   const RegistrationParams& params = {});

// Registers against every entry. Verified results rank first, then the
// smallest match distance, then the smallest residual, then gallery order.
// Throws RegistrationError listing each entry's cause when all fail.
RegistrationResult register_one_to_all(const RangeImage& probe,
                                       const std::vector<GalleryEntry>& gallery, Axis axis,
                                       const RegistrationParams& params = {});

// Extension: axis unknown. Runs register_one_to_all for X, Y and Z and keeps
// the best by the same ranking.
RegistrationResult register_auto(const RangeImage& probe, const std::vector<GalleryEntry>& gallery,
                                 const RegistrationParams& params = {});

// Bilinear resampling of every fully valid 2x2 cell with `factor` samples per
// edge, plus one point per valid pixel. Cells whose corner depths differ by
// more than `max_jump` straddle an occlusion and are left unsampled.
PointCloud densify_surface(const RangeImage& img, int factor,
                           double max_jump = std::numeric_limits<double>::infinity());

} // namespace nosereg
