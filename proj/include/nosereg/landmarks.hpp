#pragma once

#include <utility>
#include <vector>

#include "nosereg/rangeio.hpp"

namespace nosereg {

// A detected facial landmark. (row, col) is a valid pixel of the image it was
// found on; the offsets carry an optional sub-pixel refinement, so x()/y()
// give the best position estimate in pixel units.
struct PixelLandmark {
    int row = 0;
    int col = 0;
    double depth = 0.0;
    double row_offset = 0.0;
    double col_offset = 0.0;

    double x() const { return col + col_offset; }
    double y() const { return row + row_offset; }
};

// Mean (H) and Gaussian (K) curvature of the depth height field.
struct CurvatureMap {
    int width = 0;
    int height = 0;
    std::vector<double> mean;
    std::vector<double> gauss;
    std::vector<unsigned char> mask;

    bool valid(int row, int col) const { return mask[idx(row, col)] != 0; }
    double H(int row, int col) const { return mean[idx(row, col)]; }
    double K(int row, int col) const { return gauss[idx(row, col)]; }

private:
    std::size_t idx(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(col);
    }
};

struct PitThresholds {
    double k_min = 1e-4;
    double h_min = 1e-3;
};

struct EyeCorners {
    PixelLandmark left;   // smaller column
    PixelLandmark right;
};

// Maximum-intensity nose tip: the pixel whose 3x3 neighbourhood depth sum is
// largest. Only fully valid windows compete; ties go to the smallest row, then
// the smallest column. Offsets are left at zero.
PixelLandmark find_nose_tip(const RangeImage& img);

// Fits a parabola through the 3x3 window sums on each axis around `nose` and
// stores the vertex in the offsets (clamped to half a pixel). Offsets stay
// zero on an axis whose neighbouring windows are not fully valid.
PixelLandmark refine_nose_tip(const RangeImage& img, const PixelLandmark& nose);

// find_nose_tip followed by refine_nose_tip.
PixelLandmark locate_nose_tip(const RangeImage& img);

// Central differences with spacing `step` pixels:
// p = z_x, q = z_y, r = z_xx, s = z_xy, t = z_yy,
// K = (rt - s^2) / (1 + p^2 + q^2)^2,
// H = ((1 + q^2) r - 2pqs + (1 + p^2) t) / (2 (1 + p^2 + q^2)^(3/2)).
// A pixel is valid only if every sample of its stencil is valid.
CurvatureMap compute_curvatures(const RangeImage& img, int step = 1);

// Eye corners as concave elliptic regions (pits: K > k_min and H > h_min).
// Pit pixels are grouped into 4-connected regions; a region's strength is its
// summed K and its position the K-weighted centroid. Of the regions whose
// centroid lies above the nose row, the strongest on each side of the nose
// column is returned, anchored at its peak-K pixel with the centroid in the
// offsets.
EyeCorners find_eye_corners(const RangeImage& img, const CurvatureMap& curv,
                            const PixelLandmark& nose, const PitThresholds& thresholds = {});

} // namespace nosereg
