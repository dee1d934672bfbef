#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace nosereg {

// A rectangular grid of depth samples with a validity mask.
//
// Depth convention: larger values are closer to the sensor, so the nose tip
// carries the locally maximal value. Invalid pixels (background, holes) hold
// NaN internally and take no part in any statistic.
class RangeImage {
public:
    RangeImage() = default;

    // All pixels start invalid.
    RangeImage(int width, int height);

    // Takes row-major depths; non-finite entries become invalid.
    RangeImage(int width, int height, std::vector<double> depth);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0 || height_ == 0; }

    bool inside(int row, int col) const {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }
    bool valid(int row, int col) const { return mask_[index(row, col)] != 0; }
    double at(int row, int col) const { return depth_[index(row, col)]; }

    // Sets a finite depth and marks the pixel valid.
    void set(int row, int col, double value);
    void invalidate(int row, int col);

    std::size_t valid_count() const;

    const std::vector<double>& depths() const { return depth_; }

    // Exact comparison: same size, same mask, bit-identical valid depths.
    friend bool operator==(const RangeImage& a, const RangeImage& b);

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> depth_;
    std::vector<std::uint8_t> mask_;
};

// Homogeneous points (x, y, z, 1); x = column, y = row, z = depth.
struct PointCloud {
    std::vector<Eigen::Vector4d> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

enum class RangeFormat { AsciiGrid, Pgm16 };

// Picks the format from the file extension: ".pgm" is pgm16, anything else
// is ascii-grid.
RangeFormat format_for_path(const std::filesystem::path& path);

// ascii-grid: line 1 "RGI <width> <height>", then `height` lines of `width`
// space-separated decimals; the token "nan" marks an invalid pixel. Values are
// written in shortest round-trip form, so save/load is exact.
RangeImage read_ascii_grid(std::istream& in);
void write_ascii_grid(std::ostream& out, const RangeImage& img);

// pgm16: binary P5, maxval 65535, big-endian samples. 0 is invalid; valid
// depths map linearly onto [1, 65535] using the range recorded in a
// "# scale <min> <max>" header comment. Without that comment samples are read
// as raw depths.
RangeImage read_pgm16(std::istream& in);
void write_pgm16(std::ostream& out, const RangeImage& img);

RangeImage load_range_image(const std::filesystem::path& path, RangeFormat format);
RangeImage load_range_image(const std::filesystem::path& path);
void save_range_image(const RangeImage& img, const std::filesystem::path& path,
                      RangeFormat format);
void save_range_image(const RangeImage& img, const std::filesystem::path& path);

// One point per valid pixel in row-major order.
PointCloud to_point_cloud(const RangeImage& img);

// Each point lands on the nearest pixel; on collisions the larger z wins.
// Points outside the grid are dropped and uncovered pixels stay invalid.
RangeImage rasterize(const PointCloud& cloud, int width, int height);

} // namespace nosereg
