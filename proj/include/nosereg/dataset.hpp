#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nosereg/config.hpp"
#include "nosereg/landmarks.hpp"
#include "nosereg/rangeio.hpp"
#include "nosereg/transform.hpp"

namespace nosereg {

inline constexpr const char* kManifestName = "manifest.json";

// One image of a dataset. Frontal images have no axis ("none" on disk).
// Landmarks are ground truth in the image's own pixel frame.
struct ManifestEntry {
    std::string file;  // relative to the dataset directory
    std::string subject;
    std::optional<Axis> axis;
    double angle_deg = 0.0;
    PixelLandmark nose;
    EyeCorners eyes;
    double height = 0.0;
    double depth = 0.0;

    bool frontal() const { return !axis.has_value(); }
};

// JSON array of {file, subject, axis, angle_deg, nose: [r, c], eyes: [[r, c],
// [r, c]], height, depth}.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

struct SynthRequest {
    int subjects = 1;
    std::vector<Axis> axes{Axis::Z, Axis::Y, Axis::X};
    std::vector<double> angles{5, -5, 18, -18, 30, -30, 38, -38, 40, -40};
    double noise_frac = 0.0;  // noise sigma as a fraction of the nose height
    std::uint64_t seed = 0;
    RangeFormat format = RangeFormat::AsciiGrid;

    void validate() const;
};

// Writes one frontal image per subject plus every axis/angle variant and the
// manifest. Output is a pure function of the request.
std::vector<ManifestEntry> write_synthetic_dataset(const std::filesystem::path& dir,
                                                   const SynthRequest& request);

// Result of registering one posed image against the dataset's frontal gallery.
struct EvalCase {
    std::string file;
    std::string subject;
    Axis axis = Axis::Z;
    double angle_deg = 0.0;
    bool registered = false;  // false when registration threw
    bool verified = false;
    bool twin = false;        // matched the probe's own subject
    double theta_deg = 0.0;
    double residual = 0.0;
    int iterations = 0;
    std::string matched_id;
    std::string error;
    double millis = 0.0;      // wall clock, kept out of deterministic reports
};

struct EvalRow {
    Axis axis = Axis::Z;
    double angle_deg = 0.0;
    int attempted = 0;
    int verified = 0;

    double rate() const { return attempted == 0 ? 0.0 : static_cast<double>(verified) / attempted; }
};

struct EvalReport {
    std::vector<EvalCase> cases;  // manifest order
    std::vector<EvalRow> rows;    // by axis (Z, Y, X), then descending angle

    int attempted() const;
    int verified() const;
    double rate() const;
    double min_millis() const;
    double max_millis() const;
};

// Builds the gallery from the frontal entries and registers every posed entry
// one-to-all on its own axis. `threads` <= 1 runs sequentially; the report is
// identical either way.
EvalReport evaluate_dataset(const std::filesystem::path& dir, const Config& config, int threads = 1);

void write_report_markdown(std::ostream& out, const EvalReport& report);
void write_report_csv(std::ostream& out, const EvalReport& report);
// One line per case, without timings.
void write_cases_csv(std::ostream& out, const EvalReport& report);

} // namespace nosereg
