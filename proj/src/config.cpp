#include "nosereg/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>

#include "nosereg/errors.hpp"

namespace nosereg {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
    T out{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("config key '" + std::string(key) + "': cannot parse '" +
                         std::string(text) + "'");
    }
    return out;
}

template <typename T>
std::string show(T v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

struct Field {
    std::string_view key;
    std::function<void(Config&, std::string_view)> set;
    std::function<std::string(const Config&)> get;
};

template <typename T>
Field field(std::string_view key, T Config::*member) {
    return {key,
            [key, member](Config& c, std::string_view v) { c.*member = parse_value<T>(key, v); },
            [member](const Config& c) { return show(c.*member); }};
}

template <typename T>
Field crop_field(std::string_view key, T CropRect::*member) {
    return {key,
            [key, member](Config& c, std::string_view v) { c.crop.*member = parse_value<T>(key, v); },
            [member](const Config& c) { return show(c.crop.*member); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        crop_field("crop_top", &CropRect::top),
        crop_field("crop_left", &CropRect::left),
        crop_field("crop_height", &CropRect::height),
        crop_field("crop_width", &CropRect::width),
        field("bins", &Config::bins),
        field("median_radius", &Config::median_radius),
        field("median_center_weight", &Config::median_center_weight),
        field("pit_k_min", &Config::pit_k_min),
        field("pit_h_min", &Config::pit_h_min),
        field("curvature_step", &Config::curvature_step),
        field("residual_threshold", &Config::residual_threshold),
        field("max_iterations", &Config::max_iterations),
        field("convergence_deg", &Config::convergence_deg),
        field("seed", &Config::seed),
        field("nose_height", &Config::nose_height),
        field("nose_depth", &Config::nose_depth),
    };
    return table;
}

} // namespace

void Config::validate() const {
    auto fail = [](const std::string& what) { throw ValidationError("config: " + what); };
    if (crop.top < 0 || crop.left < 0) fail("crop_top and crop_left must be >= 0");
    if (crop.height <= 0 || crop.width <= 0) fail("crop_height and crop_width must be > 0");
    if (bins < 2) fail("bins must be >= 2");
    if (median_radius < 0) fail("median_radius must be >= 0");
    if (median_center_weight < 1) fail("median_center_weight must be >= 1");
    if (!(pit_k_min >= 0) || !(pit_h_min >= 0)) fail("pit thresholds must be >= 0");
    if (curvature_step < 1) fail("curvature_step must be >= 1");
    if (!(residual_threshold > 0)) fail("residual_threshold must be > 0");
    if (max_iterations < 1) fail("max_iterations must be >= 1");
    if (!(convergence_deg > 0)) fail("convergence_deg must be > 0");
    if (!(nose_height > 0) || !(nose_depth > 0)) fail("nose_height and nose_depth must be > 0");
}

PreprocessParams Config::preprocess_params() const {
    PreprocessParams p;
    p.crop = crop;
    p.bins = bins;
    p.kernel = MedianKernel::center_weighted(median_radius, median_center_weight);
    return p;
}

RegistrationParams Config::registration_params() const {
    RegistrationParams p;
    p.max_iterations = max_iterations;
    p.residual_threshold = residual_threshold;
    p.convergence_deg = convergence_deg;
    p.landmarks.pits = {pit_k_min, pit_h_min};
    p.landmarks.curvature_step = curvature_step;
    return p;
}

void apply_setting(Config& config, std::string_view key, std::string_view value) {
    for (const auto& f : fields()) {
        if (f.key == key) {
            f.set(config, trim(value));
            return;
        }
    }
    throw ParseError("unknown config key '" + std::string(key) + "'");
}

Config parse_config(std::istream& in, std::string_view source, Config base) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view text = line;
        if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(std::string(source) + ":" + std::to_string(number) +
                             ": expected 'key = value'");
        }
        try {
            apply_setting(base, trim(text.substr(0, eq)), text.substr(eq + 1));
        } catch (const ParseError& e) {
            throw ParseError(std::string(source) + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return base;
}

Config load_config(const std::filesystem::path& path, Config base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    return parse_config(in, path.string(), std::move(base));
}

void write_config(std::ostream& out, const Config& config) {
    for (const auto& f : fields()) out << f.key << " = " << f.get(config) << '\n';
}

} // namespace nosereg
