#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>

#include "nosereg/config.hpp"
#include "nosereg/dataset.hpp"
#include "nosereg/transform.hpp"

namespace nosereg {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;      // usage, I/O, parse, validation
inline constexpr int kExitAlgorithm = 2;  // landmark / registration failure

enum class OutputFormat { Json, Text };

// Runs `body`, printing any error to `err` and mapping it to an exit code.
int run_command(std::ostream& err, const std::function<int()>& body);

// Preprocesses the image and prints the nose tip and eye corners in the
// input image's pixel frame.
int cmd_detect(const std::filesystem::path& input, const Config& config, OutputFormat format,
               std::ostream& out, std::ostream& err);

// Loads every frontal image of `gallery_dir` (the manifest's frontal entries
// when one exists, otherwise every .rgi/.pgm file) and registers the probe
// one-to-all. With no axis every axis is tried. Writes registered.rgi,
// transform.txt and report.json into `out_dir`. The transform maps input
// pixel coordinates of the probe into the nose-centred registered frame.
int cmd_register(const std::filesystem::path& probe, const std::filesystem::path& gallery_dir,
                 std::optional<Axis> axis, const std::filesystem::path& out_dir,
                 const Config& config, OutputFormat format, std::ostream& out, std::ostream& err);

int cmd_synth(const SynthRequest& request, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err);

// Writes report.md, report.csv and cases.csv into `out_dir` (identical for
// identical inputs) and prints the per-registration timing to `out`.
int cmd_evaluate(const std::filesystem::path& dataset, const std::filesystem::path& out_dir,
                 const Config& config, int threads, std::ostream& out, std::ostream& err);

} // namespace nosereg
