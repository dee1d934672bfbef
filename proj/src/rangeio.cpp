#include "nosereg/rangeio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "nosereg/errors.hpp"

namespace nosereg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kPgmMax = 65535;

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("range image dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

// Splits on blanks, remembering each token's byte offset in the line.
struct Token {
    std::string_view text;
    std::size_t offset;
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) tokens.push_back({line.substr(start, i - start), start});
    }
    return tokens;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

[[noreturn]] void parse_fail(std::size_t line, std::size_t offset, const std::string& what) {
    throw ParseError("ascii-grid line " + std::to_string(line) + ", offset " +
                     std::to_string(offset) + ": " + what);
}

// Reads the next whitespace-delimited PGM header token, skipping comments.
// Collects "# scale <min> <max>" comments along the way.
std::string pgm_token(std::istream& in, bool& has_scale, double& lo, double& hi) {
    std::string token;
    while (true) {
        int c = in.get();
        if (c == EOF) break;
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
            std::istringstream cs(comment);
            std::string key;
            double a = 0, b = 0;
            if ((cs >> key >> a >> b) && key == "scale") {
                has_scale = true;
                lo = a;
                hi = b;
            }
            if (!token.empty()) break;
            continue;
        }
        if (std::isspace(c)) {
            if (!token.empty()) break;
            continue;
        }
        token.push_back(static_cast<char>(c));
    }
    return token;
}

} // namespace

RangeImage::RangeImage(int width, int height)
    : width_(width), height_(height) {
    check_dims(width, height);
    depth_.assign(static_cast<std::size_t>(width) * height, kNaN);
    mask_.assign(depth_.size(), 0);
}

RangeImage::RangeImage(int width, int height, std::vector<double> depth)
    : width_(width), height_(height), depth_(std::move(depth)) {
    check_dims(width, height);
    if (depth_.size() != static_cast<std::size_t>(width) * height) {
        throw ValidationError("depth grid has " + std::to_string(depth_.size()) +
                              " entries, expected " + std::to_string(width * height));
    }
    mask_.resize(depth_.size());
    for (std::size_t i = 0; i < depth_.size(); ++i) {
        mask_[i] = std::isfinite(depth_[i]) ? 1 : 0;
        if (!mask_[i]) depth_[i] = kNaN;
    }
}

void RangeImage::set(int row, int col, double value) {
    if (!std::isfinite(value)) {
        invalidate(row, col);
        return;
    }
    auto i = index(row, col);
    depth_[i] = value;
    mask_[i] = 1;
}

void RangeImage::invalidate(int row, int col) {
    auto i = index(row, col);
    depth_[i] = kNaN;
    mask_[i] = 0;
}

std::size_t RangeImage::valid_count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

bool operator==(const RangeImage& a, const RangeImage& b) {
    if (a.width_ != b.width_ || a.height_ != b.height_ || a.mask_ != b.mask_) return false;
    for (std::size_t i = 0; i < a.depth_.size(); ++i) {
        if (a.mask_[i] && a.depth_[i] != b.depth_[i]) return false;
    }
    return true;
}

RangeFormat format_for_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".pgm" ? RangeFormat::Pgm16 : RangeFormat::AsciiGrid;
}

RangeImage read_ascii_grid(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_content_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!tokenize(line).empty()) return true;
        }
        return false;
    };

    if (!next_content_line()) parse_fail(1, 0, "missing header");
    auto header = tokenize(line);
    if (header.size() != 3 || header[0].text != "RGI") {
        parse_fail(line_no, 0, "malformed header, expected 'RGI <width> <height>'");
    }
    int width = 0, height = 0;
    if (!parse_number(header[1].text, width) || width <= 0) {
        parse_fail(line_no, header[1].offset, "bad width '" + std::string(header[1].text) + "'");
    }
    if (!parse_number(header[2].text, height) || height <= 0) {
        parse_fail(line_no, header[2].offset, "bad height '" + std::string(header[2].text) + "'");
    }

    std::vector<double> depth;
    depth.reserve(static_cast<std::size_t>(width) * height);
    for (int r = 0; r < height; ++r) {
        if (!next_content_line()) {
            parse_fail(line_no + 1, 0, "dimension mismatch, expected " + std::to_string(height) +
                                           " rows, got " + std::to_string(r));
        }
        auto tokens = tokenize(line);
        if (static_cast<int>(tokens.size()) != width) {
            parse_fail(line_no, 0, "dimension mismatch, expected " + std::to_string(width) +
                                       " values, got " + std::to_string(tokens.size()));
        }
        for (const auto& tok : tokens) {
            if (tok.text == "nan") {
                depth.push_back(kNaN);
                continue;
            }
            double v = 0;
            if (!parse_number(tok.text, v) || !std::isfinite(v)) {
                parse_fail(line_no, tok.offset, "non-numeric cell '" + std::string(tok.text) + "'");
            }
            depth.push_back(v);
        }
    }
    if (next_content_line()) parse_fail(line_no, 0, "dimension mismatch, trailing rows");
    return RangeImage(width, height, std::move(depth));
}

void write_ascii_grid(std::ostream& out, const RangeImage& img) {
    out << "RGI " << img.width() << ' ' << img.height() << '\n';
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (c) out << ' ';
            out << (img.valid(r, c) ? format_double(img.at(r, c)) : std::string("nan"));
        }
        out << '\n';
    }
}

RangeImage read_pgm16(std::istream& in) {
    bool has_scale = false;
    double lo = 0, hi = 0;
    auto magic = pgm_token(in, has_scale, lo, hi);
    if (magic != "P5") throw ParseError("pgm16 offset 0: expected magic 'P5', got '" + magic + "'");
    int fields[3] = {0, 0, 0};
    const char* names[3] = {"width", "height", "maxval"};
    for (int i = 0; i < 3; ++i) {
        auto tok = pgm_token(in, has_scale, lo, hi);
        if (!parse_number(std::string_view(tok), fields[i]) || fields[i] <= 0) {
            throw ParseError("pgm16 offset " + std::to_string(static_cast<long long>(in.tellg())) +
                             ": bad " + names[i] + " '" + tok + "'");
        }
    }
    const int width = fields[0], height = fields[1], maxval = fields[2];
    if (maxval != kPgmMax) {
        throw ParseError("pgm16: maxval must be 65535, got " + std::to_string(maxval));
    }

    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<unsigned char> raw(2 * n);
    const auto data_offset = static_cast<long long>(in.tellg());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw ParseError("pgm16 offset " + std::to_string(data_offset + in.gcount()) +
                         ": dimension mismatch, raster truncated");
    }

    std::vector<double> depth(n, kNaN);
    for (std::size_t i = 0; i < n; ++i) {
        const int q = (raw[2 * i] << 8) | raw[2 * i + 1];
        if (q == 0) continue;
        depth[i] = has_scale ? lo + (hi - lo) * (q - 1) / static_cast<double>(kPgmMax - 1)
                             : static_cast<double>(q);
    }
    return RangeImage(width, height, std::move(depth));
}

void write_pgm16(std::ostream& out, const RangeImage& img) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.valid(r, c)) continue;
            lo = std::min(lo, img.at(r, c));
            hi = std::max(hi, img.at(r, c));
        }
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;

    out << "P5\n# scale " << format_double(lo) << ' ' << format_double(hi) << '\n'
        << img.width() << ' ' << img.height() << '\n' << kPgmMax << '\n';
    const double span = hi - lo;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            int q = 0;
            if (img.valid(r, c)) {
                const double t = span > 0 ? (img.at(r, c) - lo) / span : 0.0;
                q = 1 + static_cast<int>(std::lround(t * (kPgmMax - 1)));
            }
            out.put(static_cast<char>((q >> 8) & 0xff));
            out.put(static_cast<char>(q & 0xff));
        }
    }
}

RangeImage load_range_image(const std::filesystem::path& path, RangeFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    try {
        return format == RangeFormat::Pgm16 ? read_pgm16(in) : read_ascii_grid(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

RangeImage load_range_image(const std::filesystem::path& path) {
    return load_range_image(path, format_for_path(path));
}

void save_range_image(const RangeImage& img, const std::filesystem::path& path,
                      RangeFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    if (format == RangeFormat::Pgm16) {
        write_pgm16(out, img);
    } else {
        write_ascii_grid(out, img);
    }
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void save_range_image(const RangeImage& img, const std::filesystem::path& path) {
    save_range_image(img, path, format_for_path(path));
}

PointCloud to_point_cloud(const RangeImage& img) {
    PointCloud cloud;
    cloud.points.reserve(img.valid_count());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (img.valid(r, c)) cloud.points.emplace_back(c, r, img.at(r, c), 1.0);
        }
    }
    if (cloud.empty()) throw EmptyInputError("range image has no valid pixels");
    return cloud;
}

RangeImage rasterize(const PointCloud& cloud, int width, int height) {
    RangeImage img(width, height);
    for (const auto& p : cloud.points) {
        const double fc = std::round(p.x());
        const double fr = std::round(p.y());
        if (!(fc >= 0 && fr >= 0 && fc < width && fr < height)) continue;
        const int c = static_cast<int>(fc);
        const int r = static_cast<int>(fr);
        if (!img.valid(r, c) || p.z() > img.at(r, c)) img.set(r, c, p.z());
    }
    return img;
}

} // namespace nosereg
