#pragma once

#include <cstdint>

#include "nosereg/landmarks.hpp"
#include "nosereg/rangeio.hpp"
#include "nosereg/transform.hpp"

namespace nosereg {

enum class Orientation { Left, Right };

inline Orientation orientation_of(double theta) {
    return theta < 0 ? Orientation::Left : Orientation::Right;
}
std::string_view to_string(Orientation o);

struct Pose {
    Axis axis = Axis::Z;
    double angle_deg = 0.0;  // signed; left orientation is negative

    Orientation orientation() const { return orientation_of(angle_deg); }
};

// Analytic face model: the front half of an ellipsoidal head standing on a
// background wall at depth 0, a Gaussian nose bump at the head centre and two
// Gaussian eye sockets. Depth units equal pixels, so rotations are isotropic.
//
// The nose apex sits `nose_depth` in front of the head centre; a yaw rotates
// about the vertical line `nose_height` behind the apex, a pitch about the
// horizontal line `nose_depth` behind it and a roll about the eye midpoint.
// The head's depth semi-axis is nose_depth - nose_bump.
struct SyntheticFaceSpec {
    int grid = 100;
    double nose_height = 40.0;
    double nose_depth = 40.0;
    double nose_bump = 15.0;  // nose protrusion above the head surface
    double eye_socket_depth = 5.0;
    double noise_sigma = 0.0;
    Pose pose;

    // Face layout, in pixels of the grid.
    int center_col = 50;
    int nose_row = 52;
    int eye_half_spacing = 12;
    int eye_drop = 16;  // eye row = nose_row - eye_drop
    double head_half_width = 30.0;
    double head_half_height = 30.0;
    double base_depth = 60.0;  // depth of the head outline
    double nose_sigma_x = 5.0;
    double nose_sigma_y = 6.0;
    double eye_sigma = 3.0;

    // Throws ValidationError when a field is out of its domain.
    void validate() const;
};

struct SyntheticFace {
    RangeImage image;
    PixelLandmark nose;  // anatomical apex after posing
    EyeCorners eyes;     // socket centres after posing
};

SyntheticFace generate_synthetic_face(const SyntheticFaceSpec& spec, std::uint64_t seed = 0);

// A face with randomised layout (an "individual") for gallery experiments.
SyntheticFaceSpec random_subject(std::uint64_t seed);

} // namespace nosereg
