#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "nosereg/errors.hpp"
#include "nosereg/rangeio.hpp"
#include "oracles.hpp"

using namespace nosereg;

TEST_CASE("ascii grid round trip is exact") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const RangeImage img = oracle::random_image(rng, 1 + i % 9, 1 + i % 7, 0.2, false);
        std::stringstream ss;
        write_ascii_grid(ss, img);
        CHECK(read_ascii_grid(ss) == img);
    }
}

TEST_CASE("ascii grid keeps extreme values") {
    RangeImage img(3, 1);
    img.set(0, 0, 1e-300);
    img.set(0, 1, -0.1);
    std::stringstream ss;
    write_ascii_grid(ss, img);
    const RangeImage back = read_ascii_grid(ss);
    CHECK(back == img);
    CHECK_FALSE(back.valid(0, 2));
}

TEST_CASE("ascii grid parse errors name the line") {
    std::istringstream bad_header("RGX 2 2\n1 2\n3 4\n");
    CHECK_THROWS_AS(read_ascii_grid(bad_header), ParseError);

    std::istringstream short_row("RGI 2 2\n1 2\n3\n");
    CHECK_THROWS_WITH_AS(read_ascii_grid(short_row), doctest::Contains("line 3"), ParseError);

    std::istringstream junk("RGI 2 1\n1 x2\n");
    CHECK_THROWS_WITH_AS(read_ascii_grid(junk), doctest::Contains("offset 2"), ParseError);

    std::istringstream missing("RGI 2 2\n1 2\n");
    CHECK_THROWS_AS(read_ascii_grid(missing), ParseError);
}

TEST_CASE("pgm16 round trip stays within one quantisation step") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        const RangeImage img = oracle::random_image(rng, 8, 6, 0.25, false);
        std::stringstream ss;
        write_pgm16(ss, img);
        const RangeImage back = read_pgm16(ss);
        double lo = INFINITY, hi = -INFINITY;
        for (int r = 0; r < img.height(); ++r)
            for (int c = 0; c < img.width(); ++c)
                if (img.valid(r, c)) {
                    lo = std::min(lo, img.at(r, c));
                    hi = std::max(hi, img.at(r, c));
                }
        const double step = (hi - lo) / 65534.0;
        for (int r = 0; r < img.height(); ++r)
            for (int c = 0; c < img.width(); ++c) {
                REQUIRE(back.valid(r, c) == img.valid(r, c));
                if (img.valid(r, c)) CHECK(std::abs(back.at(r, c) - img.at(r, c)) <= step);
            }
    }
}

TEST_CASE("pgm16 of an all-invalid image is an all-zero raster") {
    std::stringstream ss;
    write_pgm16(ss, RangeImage(4, 3));
    const std::string bytes = ss.str();
    const std::string raster = bytes.substr(bytes.size() - 24);
    CHECK(raster == std::string(24, '\0'));
    CHECK(read_pgm16(ss).valid_count() == 0);
}

TEST_CASE("pgm16 rejects other maxvals and truncated data") {
    std::istringstream eight_bit("P5\n2 1\n255\nab");
    CHECK_THROWS_AS(read_pgm16(eight_bit), ParseError);
    std::istringstream truncated(std::string("P5\n2 1\n65535\n\x01", 13));
    CHECK_THROWS_AS(read_pgm16(truncated), ParseError);
}

TEST_CASE("point cloud and rasterize") {
    RangeImage img(3, 2);
    img.set(0, 1, 5.0);
    img.set(1, 2, 7.0);
    const PointCloud cloud = to_point_cloud(img);
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.points[0] == Eigen::Vector4d(1, 0, 5, 1));
    CHECK(cloud.points[1] == Eigen::Vector4d(2, 1, 7, 1));
    CHECK(rasterize(cloud, 3, 2) == img);

    CHECK_THROWS_AS(to_point_cloud(RangeImage(2, 2)), EmptyInputError);
}

TEST_CASE("rasterize keeps the nearest surface and drops outside points") {
    PointCloud cloud;
    cloud.points = {{0.2, 0.1, 3.0, 1.0}, {-0.2, 0.3, 9.0, 1.0}, {5.0, 0.0, 1.0, 1.0}};
    const RangeImage img = rasterize(cloud, 2, 1);
    CHECK(img.at(0, 0) == 9.0);
    CHECK_FALSE(img.valid(0, 1));
}

TEST_CASE("invalid dimensions are rejected") {
    CHECK_THROWS_AS(RangeImage(0, 3), ValidationError);
    CHECK_THROWS_AS(RangeImage(2, 2, std::vector<double>(3)), ValidationError);
}

TEST_CASE("format follows the extension") {
    CHECK(format_for_path("a/b.pgm") == RangeFormat::Pgm16);
    CHECK(format_for_path("a/b.rgi") == RangeFormat::AsciiGrid);
    CHECK_THROWS_AS(load_range_image("/nonexistent/face.rgi"), IoError);
}
