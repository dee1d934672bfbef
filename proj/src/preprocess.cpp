#include "nosereg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "nosereg/errors.hpp"

namespace nosereg {

MedianKernel::MedianKernel(int radius, std::vector<int> weights)
    : radius_(radius), weights_(std::move(weights)) {
    if (radius < 0) throw ValidationError("median kernel radius must be >= 0");
    const auto side = static_cast<std::size_t>(2 * radius + 1);
    if (weights_.size() != side * side) {
        throw ValidationError("median kernel needs " + std::to_string(side * side) +
                              " weights, got " + std::to_string(weights_.size()));
    }
    if (std::any_of(weights_.begin(), weights_.end(), [](int w) { return w < 0; })) {
        throw ValidationError("median kernel weights must be non-negative");
    }
    if (weight(0, 0) < 1) throw ValidationError("median kernel centre weight must be >= 1");
}

MedianKernel MedianKernel::center_weighted(int radius, int center) {
    if (radius < 0) throw ValidationError("median kernel radius must be >= 0");
    const int side = 2 * radius + 1;
    std::vector<int> w(static_cast<std::size_t>(side * side), 1);
    w[static_cast<std::size_t>(radius * side + radius)] = center;
    return MedianKernel(radius, std::move(w));
}

RangeImage crop(const RangeImage& img, const CropRect& rect) {
    if (rect.height <= 0 || rect.width <= 0 || rect.top < 0 || rect.left < 0 ||
        rect.top + rect.height > img.height() || rect.left + rect.width > img.width()) {
        throw BoundsError("crop rect (top " + std::to_string(rect.top) + ", left " +
                          std::to_string(rect.left) + ", " + std::to_string(rect.height) + "x" +
                          std::to_string(rect.width) + ") exceeds " +
                          std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                          " image");
    }
    RangeImage out(rect.width, rect.height);
    for (int r = 0; r < rect.height; ++r) {
        for (int c = 0; c < rect.width; ++c) {
            if (img.valid(rect.top + r, rect.left + c)) {
                out.set(r, c, img.at(rect.top + r, rect.left + c));
            }
        }
    }
    return out;
}

OtsuResult otsu_threshold(const RangeImage& img, int bins) {
    if (bins < 2) throw ValidationError("otsu needs at least 2 bins");

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.valid(r, c)) continue;
            lo = std::min(lo, img.at(r, c));
            hi = std::max(hi, img.at(r, c));
        }
    }
    if (!(hi > lo)) {
        throw DegenerateHistogramError("otsu: fewer than two distinct valid depths");
    }

    const double width = (hi - lo) / bins;
    auto edge = [&](int k) { return lo + k * width; };

    // Per-bin counts and raw-depth sums, so class means are exact.
    std::vector<long long> count(static_cast<std::size_t>(bins), 0);
    std::vector<double> sum(static_cast<std::size_t>(bins), 0.0);
    long long total_n = 0;
    double total_s = 0.0;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.valid(r, c)) continue;
            const double d = img.at(r, c);
            int b = static_cast<int>(std::ceil((d - lo) / width)) - 1;
            b = std::clamp(b, 0, bins - 1);
            // Settle rounding at the edges against the same edge() used for
            // the threshold, so membership always agrees with `d <= t`.
            while (b > 0 && d <= edge(b)) --b;
            while (b < bins - 1 && d > edge(b + 1)) ++b;
            ++count[static_cast<std::size_t>(b)];
            sum[static_cast<std::size_t>(b)] += d;
            ++total_n;
            total_s += d;
        }
    }

    // Between-class variance up to the constant factor 1/N^2:
    // (N*S0 - n0*S)^2 / (n0*n1). Exactly equal splits compare equal.
    long long n0 = 0;
    double s0 = 0.0;
    double best = -1.0;
    int best_k = 1;
    for (int k = 1; k < bins; ++k) {
        n0 += count[static_cast<std::size_t>(k - 1)];
        s0 += sum[static_cast<std::size_t>(k - 1)];
        const long long n1 = total_n - n0;
        if (n0 == 0 || n1 == 0) continue;
        const double diff = static_cast<double>(total_n) * s0 - static_cast<double>(n0) * total_s;
        const double score = diff * diff / (static_cast<double>(n0) * static_cast<double>(n1));
        if (score > best) {
            best = score;
            best_k = k;
        }
    }

    OtsuResult result{edge(best_k), img};
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (img.valid(r, c) && img.at(r, c) <= result.threshold) result.masked.invalidate(r, c);
        }
    }
    return result;
}

RangeImage weighted_median_smooth(const RangeImage& img, const MedianKernel& kernel) {
    const int rad = kernel.radius();
    RangeImage out = img;
    std::vector<std::pair<double, int>> window;
    window.reserve(static_cast<std::size_t>(kernel.side() * kernel.side()));

    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.valid(r, c)) continue;
            window.clear();
            long long total = 0;
            for (int dr = -rad; dr <= rad; ++dr) {
                for (int dc = -rad; dc <= rad; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    const int w = kernel.weight(dr, dc);
                    if (w == 0 || !img.inside(rr, cc) || !img.valid(rr, cc)) continue;
                    window.emplace_back(img.at(rr, cc), w);
                    total += w;
                }
            }
            if (total == 0) continue;
            std::sort(window.begin(), window.end());
            const long long target = (total - 1) / 2;
            long long seen = 0;
            for (const auto& [value, w] : window) {
                seen += w;
                if (seen > target) {
                    out.set(r, c, value);
                    break;
                }
            }
        }
    }
    return out;
}

RangeImage preprocess(const RangeImage& img, const PreprocessParams& params) {
    auto cropped = crop(img, params.crop);
    auto thresholded = otsu_threshold(cropped, params.bins);
    return weighted_median_smooth(thresholded.masked, params.kernel);
}

} // namespace nosereg
