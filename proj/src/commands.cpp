#include "nosereg/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nosereg/errors.hpp"
#include "nosereg/register.hpp"

namespace nosereg {

namespace {

using json = nlohmann::ordered_json;

std::string shortest(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

// Landmark in the input frame: the crop offset is added back.
json landmark_json(const PixelLandmark& lm, const CropRect& crop) {
    return {{"row", lm.y() + crop.top}, {"col", lm.x() + crop.left}, {"depth", lm.depth}};
}

void print_text_landmark(std::ostream& out, const char* name, const PixelLandmark& lm,
                         const CropRect& crop) {
    out << name << ": row " << lm.y() + crop.top << " col " << lm.x() + crop.left << " depth "
        << lm.depth << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

bool is_range_file(const std::filesystem::path& p) {
    const auto ext = p.extension().string();
    return ext == ".rgi" || ext == ".pgm";
}

std::vector<GalleryEntry> load_gallery(const std::filesystem::path& dir, const Config& config) {
    if (!std::filesystem::is_directory(dir)) throw IoError("gallery directory not found: " + dir.string());
    const PreprocessParams pp = config.preprocess_params();
    const LandmarkParams lp = config.registration_params().landmarks;

    std::vector<GalleryEntry> gallery;
    if (std::filesystem::exists(dir / kManifestName)) {
        for (const auto& e : read_manifest(dir / kManifestName)) {
            if (!e.frontal()) continue;
            gallery.push_back(make_gallery_entry(
                e.subject, preprocess(load_range_image(dir / e.file), pp),
                e.height > 0 ? e.height : config.nose_height, e.depth > 0 ? e.depth : config.nose_depth,
                lp));
        }
    } else {
        std::vector<std::filesystem::path> files;
        for (const auto& item : std::filesystem::directory_iterator(dir)) {
            if (item.is_regular_file() && is_range_file(item.path())) files.push_back(item.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            gallery.push_back(make_gallery_entry(f.stem().string(), preprocess(load_range_image(f), pp),
                                                 config.nose_height, config.nose_depth, lp));
        }
    }
    if (gallery.empty()) {
        throw ValidationError("gallery directory " + dir.string() + " holds no frontal range images");
    }
    return gallery;
}

} // namespace

int run_command(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const AlgorithmError& e) {
        err << "error: " << e.what() << '\n';
        return kExitAlgorithm;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

int cmd_detect(const std::filesystem::path& input, const Config& config, OutputFormat format,
               std::ostream& out, std::ostream& err) {
    return run_command(err, [&] {
        config.validate();
        const RangeImage img = preprocess(load_range_image(input), config.preprocess_params());
        const PixelLandmark nose = locate_nose_tip(img);
        const EyeCorners eyes = detect_eyes(img, nose, config.registration_params().landmarks);
        if (format == OutputFormat::Json) {
            json doc = {{"file", input.string()},
                        {"nose", landmark_json(nose, config.crop)},
                        {"eyes",
                         {{"left", landmark_json(eyes.left, config.crop)},
                          {"right", landmark_json(eyes.right, config.crop)}}}};
            out << doc.dump(2) << '\n';
        } else {
            print_text_landmark(out, "nose", nose, config.crop);
            print_text_landmark(out, "left eye", eyes.left, config.crop);
            print_text_landmark(out, "right eye", eyes.right, config.crop);
        }
        return kExitOk;
    });
}

int cmd_register(const std::filesystem::path& probe_path, const std::filesystem::path& gallery_dir,
                 std::optional<Axis> axis, const std::filesystem::path& out_dir,
                 const Config& config, OutputFormat format, std::ostream& out, std::ostream& err) {
    return run_command(err, [&] {
        config.validate();
        const RangeImage probe = preprocess(load_range_image(probe_path), config.preprocess_params());
        const auto gallery = load_gallery(gallery_dir, config);
        const RegistrationParams rp = config.registration_params();
        const RegistrationResult r = axis ? register_one_to_all(probe, gallery, *axis, rp)
                                          : register_auto(probe, gallery, rp);

        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

        save_range_image(r.registered_image, out_dir / "registered.rgi", RangeFormat::AsciiGrid);

        const RigidTransform uncrop = RigidTransform::translation(-config.crop.left, -config.crop.top, 0.0);
        const Eigen::Matrix4d m = (r.transform * uncrop).matrix();
        {
            auto tf = open_output(out_dir / "transform.txt");
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) tf << (j ? " " : "") << shortest(m(i, j) + 0.0);
                tf << '\n';
            }
        }

        const double theta_deg = r.estimate.theta * 180.0 / std::numbers::pi;
        json report = {{"probe", probe_path.string()},
                       {"matched_id", r.matched_id},
                       {"axis", std::string(to_string(r.estimate.axis))},
                       {"theta_deg", theta_deg},
                       {"orientation", std::string(to_string(r.estimate.orientation))},
                       {"residual", r.residual},
                       {"threshold", r.report.threshold},
                       {"verified", r.verified},
                       {"iterations", r.iterations}};
        {
            auto rf = open_output(out_dir / "report.json");
            rf << report.dump(2) << '\n';
        }

        if (format == OutputFormat::Json) {
            out << report.dump(2) << '\n';
        } else {
            out << "matched " << r.matched_id << " axis " << to_string(r.estimate.axis) << " theta "
                << std::fixed << std::setprecision(2) << theta_deg << " deg residual " << r.residual
                << (r.verified ? " verified" : " not verified") << " after " << r.iterations
                << " iteration(s)\n";
        }
        return kExitOk;
    });
}

int cmd_synth(const SynthRequest& request, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err) {
    return run_command(err, [&] {
        const auto entries = write_synthetic_dataset(out_dir, request);
        const auto posed = std::count_if(entries.begin(), entries.end(),
                                         [](const ManifestEntry& e) { return !e.frontal(); });
        out << "wrote " << entries.size() << " images (" << posed << " posed) to " << out_dir.string()
            << '\n';
        return kExitOk;
    });
}

int cmd_evaluate(const std::filesystem::path& dataset, const std::filesystem::path& out_dir,
                 const Config& config, int threads, std::ostream& out, std::ostream& err) {
    return run_command(err, [&] {
        const EvalReport report = evaluate_dataset(dataset, config, threads);
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
        {
            auto md = open_output(out_dir / "report.md");
            write_report_markdown(md, report);
        }
        {
            auto csv = open_output(out_dir / "report.csv");
            write_report_csv(csv, report);
        }
        {
            auto cases = open_output(out_dir / "cases.csv");
            write_cases_csv(cases, report);
        }
        write_report_markdown(out, report);
        out << "\nTime per registration: min " << std::fixed << std::setprecision(1)
            << report.min_millis() << " ms, max " << report.max_millis() << " ms\n"
            << std::defaultfloat;
        return kExitOk;
    });
}

} // namespace nosereg
