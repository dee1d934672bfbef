#pragma once

#include <vector>

#include "nosereg/rangeio.hpp"

namespace nosereg {

struct CropRect {
    int top = 0;
    int left = 0;
    int height = 0;
    int width = 0;
};

// Weighted median kernel: a (2r+1)x(2r+1) grid of repetition counts, row-major.
class MedianKernel {
public:
    MedianKernel(int radius, std::vector<int> weights);

    // Centre weight `center`, every other weight 1.
    static MedianKernel center_weighted(int radius, int center);

    int radius() const { return radius_; }
    int side() const { return 2 * radius_ + 1; }
    int weight(int dr, int dc) const {
        return weights_[static_cast<std::size_t>((dr + radius_) * side() + (dc + radius_))];
    }
    const std::vector<int>& weights() const { return weights_; }

private:
    int radius_;
    std::vector<int> weights_;
};

RangeImage crop(const RangeImage& img, const CropRect& rect);

struct OtsuResult {
    double threshold = 0.0;
    RangeImage masked;
};

// Otsu's method over `bins` equal-width bins spanning the valid depth range.
// Bin i covers (lo + i*w, lo + (i+1)*w], bin 0 also holding lo itself, so a
// cut before bin k is the threshold lo + k*w and splits depths by `<=`.
// Pixels at or below the threshold become invalid. Among equally good cuts
// the lowest wins.
OtsuResult otsu_threshold(const RangeImage& img, int bins = 256);

// Each valid pixel becomes the lower-middle element of the multiset built by
// repeating every valid in-window neighbour's depth `weight` times. Windows
// are clipped at the border; invalid pixels stay invalid.
RangeImage weighted_median_smooth(const RangeImage& img, const MedianKernel& kernel);

struct PreprocessParams {
    CropRect crop{15, 15, 70, 70};
    int bins = 256;
    MedianKernel kernel = MedianKernel::center_weighted(1, 3);
};

// crop -> otsu_threshold -> weighted_median_smooth.
RangeImage preprocess(const RangeImage& img, const PreprocessParams& params);

} // namespace nosereg
