#include "nosereg/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "nosereg/errors.hpp"

namespace nosereg {

namespace {

std::optional<double> window_sum(const RangeImage& img, int row, int col) {
    if (row < 1 || col < 1 || row + 1 >= img.height() || col + 1 >= img.width()) {
        return std::nullopt;
    }
    double s = 0.0;
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            if (!img.valid(row + dr, col + dc)) return std::nullopt;
            s += img.at(row + dr, col + dc);
        }
    }
    return s;
}

double parabola_vertex(double before, double center, double after) {
    const double denom = before - 2.0 * center + after;
    if (!(denom < 0.0)) return 0.0;
    return std::clamp(0.5 * (before - after) / denom, -0.5, 0.5);
}

} // namespace

PixelLandmark find_nose_tip(const RangeImage& img) {
    bool found = false;
    double best = 0.0;
    PixelLandmark tip;
    for (int r = 1; r + 1 < img.height(); ++r) {
        for (int c = 1; c + 1 < img.width(); ++c) {
            auto s = window_sum(img, r, c);
            if (!s) continue;
            if (!found || *s > best) {
                found = true;
                best = *s;
                tip.row = r;
                tip.col = c;
            }
        }
    }
    if (!found) {
        throw LandmarkNotFoundError("nose tip not found: no valid 3x3 window dominates");
    }
    tip.depth = img.at(tip.row, tip.col);
    return tip;
}

PixelLandmark refine_nose_tip(const RangeImage& img, const PixelLandmark& nose) {
    PixelLandmark out = nose;
    out.row_offset = 0.0;
    out.col_offset = 0.0;
    const auto centre = window_sum(img, nose.row, nose.col);
    if (!centre) return out;
    const auto up = window_sum(img, nose.row - 1, nose.col);
    const auto down = window_sum(img, nose.row + 1, nose.col);
    const auto left = window_sum(img, nose.row, nose.col - 1);
    const auto right = window_sum(img, nose.row, nose.col + 1);
    if (up && down) out.row_offset = parabola_vertex(*up, *centre, *down);
    if (left && right) out.col_offset = parabola_vertex(*left, *centre, *right);
    return out;
}

PixelLandmark locate_nose_tip(const RangeImage& img) {
    return refine_nose_tip(img, find_nose_tip(img));
}

CurvatureMap compute_curvatures(const RangeImage& img, int step) {
    if (img.width() < 5 || img.height() < 5) {
        throw ValidationError("curvature needs an image of at least 5x5");
    }
    if (step < 1) throw ValidationError("curvature step must be >= 1");

    CurvatureMap map;
    map.width = img.width();
    map.height = img.height();
    const auto n = static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height);
    map.mean.assign(n, 0.0);
    map.gauss.assign(n, 0.0);
    map.mask.assign(n, 0);

    const double h = step;
    for (int r = step; r + step < img.height(); ++r) {
        for (int c = step; c + step < img.width(); ++c) {
            bool ok = true;
            for (int dr = -step; dr <= step && ok; dr += step) {
                for (int dc = -step; dc <= step && ok; dc += step) {
                    ok = img.valid(r + dr, c + dc);
                }
            }
            if (!ok) continue;

            const double z = img.at(r, c);
            const double zxp = img.at(r, c + step), zxm = img.at(r, c - step);
            const double zyp = img.at(r + step, c), zym = img.at(r - step, c);
            const double p = (zxp - zxm) / (2.0 * h);
            const double q = (zyp - zym) / (2.0 * h);
            const double rr = (zxp - 2.0 * z + zxm) / (h * h);
            const double tt = (zyp - 2.0 * z + zym) / (h * h);
            const double ss = (img.at(r + step, c + step) - img.at(r - step, c + step) -
                               img.at(r + step, c - step) + img.at(r - step, c - step)) /
                              (4.0 * h * h);
            const double g = 1.0 + p * p + q * q;

            const auto i = static_cast<std::size_t>(r) * static_cast<std::size_t>(map.width) +
                           static_cast<std::size_t>(c);
            map.gauss[i] = (rr * tt - ss * ss) / (g * g);
            map.mean[i] = ((1.0 + q * q) * rr - 2.0 * p * q * ss + (1.0 + p * p) * tt) /
                          (2.0 * std::pow(g, 1.5));
            map.mask[i] = 1;
        }
    }
    return map;
}

EyeCorners find_eye_corners(const RangeImage& img, const CurvatureMap& curv,
                            const PixelLandmark& nose, const PitThresholds& thresholds) {
    if (curv.width != img.width() || curv.height != img.height()) {
        throw ValidationError("curvature map does not match image size");
    }
    const int w = curv.width, h = curv.height;
    auto is_pit = [&](int r, int c) {
        return curv.valid(r, c) && img.valid(r, c) && curv.K(r, c) > thresholds.k_min &&
               curv.H(r, c) > thresholds.h_min;
    };

    struct Region {
        double strength = 0.0;
        double sum_r = 0.0;
        double sum_c = 0.0;
        int peak_r = 0;
        int peak_c = 0;
        double peak_k = 0.0;
    };

    std::vector<int> label(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), -1);
    std::vector<Region> regions;
    std::vector<std::pair<int, int>> stack;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (label[static_cast<std::size_t>(r * w + c)] >= 0 || !is_pit(r, c)) continue;
            const int id = static_cast<int>(regions.size());
            Region reg;
            reg.peak_k = -1.0;
            stack.assign(1, {r, c});
            label[static_cast<std::size_t>(r * w + c)] = id;
            while (!stack.empty()) {
                auto [pr, pc] = stack.back();
                stack.pop_back();
                const double k = curv.K(pr, pc);
                reg.strength += k;
                reg.sum_r += k * pr;
                reg.sum_c += k * pc;
                if (k > reg.peak_k || (k == reg.peak_k && (pr < reg.peak_r ||
                                                            (pr == reg.peak_r && pc < reg.peak_c)))) {
                    reg.peak_k = k;
                    reg.peak_r = pr;
                    reg.peak_c = pc;
                }
                const int nr[4] = {pr - 1, pr + 1, pr, pr};
                const int nc[4] = {pc, pc, pc - 1, pc + 1};
                for (int j = 0; j < 4; ++j) {
                    if (nr[j] < 0 || nc[j] < 0 || nr[j] >= h || nc[j] >= w) continue;
                    auto& l = label[static_cast<std::size_t>(nr[j] * w + nc[j])];
                    if (l >= 0 || !is_pit(nr[j], nc[j])) continue;
                    l = id;
                    stack.emplace_back(nr[j], nc[j]);
                }
            }
            regions.push_back(reg);
        }
    }

    const Region* best_left = nullptr;
    const Region* best_right = nullptr;
    for (const auto& reg : regions) {
        const double cr = reg.sum_r / reg.strength;
        const double cc = reg.sum_c / reg.strength;
        if (!(cr < nose.y())) continue;
        if (cc < nose.x()) {
            if (!best_left || reg.strength > best_left->strength) best_left = &reg;
        } else if (cc > nose.x()) {
            if (!best_right || reg.strength > best_right->strength) best_right = &reg;
        }
    }
    if (!best_left || !best_right) {
        throw EyesNotFoundError(std::string("eye corners not found: no pit ") +
                                (!best_left ? "left" : "right") + " of the nose above row " +
                                std::to_string(nose.row));
    }

    auto to_landmark = [&](const Region& reg) {
        PixelLandmark lm;
        lm.row = reg.peak_r;
        lm.col = reg.peak_c;
        lm.depth = img.at(reg.peak_r, reg.peak_c);
        lm.row_offset = reg.sum_r / reg.strength - reg.peak_r;
        lm.col_offset = reg.sum_c / reg.strength - reg.peak_c;
        return lm;
    };
    return {to_landmark(*best_left), to_landmark(*best_right)};
}

} // namespace nosereg
