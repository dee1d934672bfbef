#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "nosereg/preprocess.hpp"
#include "nosereg/register.hpp"

namespace nosereg {

// Pipeline settings. Files hold one `key = value` per line; `#` starts a
// comment. Keys match the field names below.
struct Config {
    CropRect crop{15, 15, 70, 70};
    int bins = 256;
    int median_radius = 1;
    int median_center_weight = 3;
    double pit_k_min = 1e-4;
    double pit_h_min = 1e-3;
    int curvature_step = 3;
    double residual_threshold = kDefaultResidualThreshold;
    int max_iterations = 10;
    double convergence_deg = 0.25;
    std::uint64_t seed = 0;
    // Yaw/pitch lever arms for gallery images that carry no manifest values.
    double nose_height = 40.0;
    double nose_depth = 40.0;

    // Throws ValidationError naming the first out-of-domain key.
    void validate() const;

    PreprocessParams preprocess_params() const;
    RegistrationParams registration_params() const;
};

// Sets one key from its text form; throws ParseError for unknown keys or
// malformed values.
void apply_setting(Config& config, std::string_view key, std::string_view value);

// Parses `key = value` lines into `base`. `source` names the input in errors.
Config parse_config(std::istream& in, std::string_view source, Config base = {});
Config load_config(const std::filesystem::path& path, Config base = {});

// Writes every key, in declaration order.
void write_config(std::ostream& out, const Config& config);

} // namespace nosereg
