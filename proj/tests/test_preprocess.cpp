#include <cmath>
#include <random>

#include <doctest.h>

#include "nosereg/errors.hpp"
#include "nosereg/preprocess.hpp"
#include "oracles.hpp"

using namespace nosereg;

namespace {

RangeImage from_rows(int w, int h, std::vector<double> v) { return RangeImage(w, h, std::move(v)); }

} // namespace

TEST_CASE("crop copies the window and checks bounds") {
    const RangeImage img = from_rows(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    const RangeImage out = crop(img, {1, 1, 2, 2});
    CHECK(out == from_rows(2, 2, {5, 6, 8, 9}));
    CHECK(crop(img, {0, 0, 3, 3}) == img);
    CHECK_THROWS_AS(crop(img, {2, 2, 2, 2}), BoundsError);
    CHECK_THROWS_AS(crop(img, {-1, 0, 1, 1}), BoundsError);
    CHECK_THROWS_AS(crop(img, {0, 0, 0, 1}), BoundsError);
}

TEST_CASE("otsu splits two well separated clusters") {
    std::vector<double> v;
    for (int i = 0; i < 50; ++i) v.push_back(i % 2 ? 10.0 : 11.0);
    for (int i = 0; i < 50; ++i) v.push_back(i % 2 ? 90.0 : 91.0);
    const OtsuResult res = otsu_threshold(from_rows(10, 10, v), 256);
    CHECK(res.threshold >= 11.0);
    CHECK(res.threshold < 90.0);
    CHECK(res.masked.valid_count() == 50);
}

TEST_CASE("otsu on a constant image is degenerate") {
    CHECK_THROWS_AS(otsu_threshold(from_rows(2, 2, {3, 3, 3, 3})), DegenerateHistogramError);
    CHECK_THROWS_AS(otsu_threshold(RangeImage(2, 2)), DegenerateHistogramError);
    CHECK_THROWS_AS(otsu_threshold(from_rows(2, 1, {1, 2}), 1), ValidationError);
}

TEST_CASE("otsu matches the exhaustive between-class variance maximiser") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        const RangeImage img = oracle::random_image(rng, 4 + i % 13, 3 + i % 11, 0.15, i % 3 == 0);
        if (img.valid_count() < 2) continue;
        const int bins = 2 + static_cast<int>(rng() % 64);
        OtsuResult res;
        try {
            res = otsu_threshold(img, bins);
        } catch (const DegenerateHistogramError&) {
            continue;
        }
        REQUIRE(res.threshold == oracle::otsu(img, bins));
        for (int r = 0; r < img.height(); ++r)
            for (int c = 0; c < img.width(); ++c)
                CHECK(res.masked.valid(r, c) == (img.valid(r, c) && img.at(r, c) > res.threshold));
    }
}

TEST_CASE("weighted median examples") {
    const RangeImage constant = from_rows(3, 3, std::vector<double>(9, 4.0));
    CHECK(weighted_median_smooth(constant, MedianKernel::center_weighted(1, 3)) == constant);

    // An isolated spike is removed.
    std::vector<double> v(25, 1.0);
    v[12] = 100.0;
    const RangeImage out = weighted_median_smooth(from_rows(5, 5, v), MedianKernel::center_weighted(1, 3));
    CHECK(out.at(2, 2) == 1.0);

    // All weight on the centre is the identity.
    std::vector<int> w(9, 0);
    w[4] = 1;
    std::mt19937_64 rng(1);
    const RangeImage img = oracle::random_image(rng, 6, 5, 0.2, false);
    CHECK(weighted_median_smooth(img, MedianKernel(1, w)) == img);
}

TEST_CASE("weighted median matches the multiset expansion") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 500; ++i) {
        const int radius = 1 + static_cast<int>(rng() % 2);
        const int side = 2 * radius + 1;
        std::vector<int> w(static_cast<std::size_t>(side * side));
        for (auto& x : w) x = static_cast<int>(rng() % 4);
        w[w.size() / 2] = 1 + static_cast<int>(rng() % 3);
        const MedianKernel k(radius, w);
        const RangeImage img = oracle::random_image(rng, 3 + i % 8, 3 + i % 6, 0.2, i % 2 == 0);
        REQUIRE(weighted_median_smooth(img, k) == oracle::weighted_median(img, k));
    }
}

TEST_CASE("median kernel validation") {
    CHECK_THROWS_AS(MedianKernel(-1, {}), ValidationError);
    CHECK_THROWS_AS(MedianKernel(1, std::vector<int>(8, 1)), ValidationError);
    CHECK_THROWS_AS(MedianKernel(0, {-1}), ValidationError);
}

TEST_CASE("preprocess crops, thresholds and smooths") {
    std::vector<double> v(100, 0.0);
    for (int r = 3; r < 7; ++r)
        for (int c = 3; c < 7; ++c) v[static_cast<std::size_t>(r * 10 + c)] = 50.0;
    PreprocessParams p;
    p.crop = {1, 1, 8, 8};
    const RangeImage out = preprocess(from_rows(10, 10, v), p);
    CHECK(out.width() == 8);
    CHECK(out.valid_count() == 16);
    CHECK(out.at(2, 2) == 50.0);
}
