#include "nosereg/dataset.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nosereg/errors.hpp"
#include "nosereg/register.hpp"
#include "nosereg/synthetic.hpp"

namespace nosereg {

namespace {

using json = nlohmann::ordered_json;

json point(const PixelLandmark& lm) { return json::array({lm.y(), lm.x()}); }

PixelLandmark landmark(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError(where + ": expected [row, col]");
    }
    const double r = j[0].get<double>(), c = j[1].get<double>();
    PixelLandmark lm;
    lm.row = static_cast<int>(std::lround(r));
    lm.col = static_cast<int>(std::lround(c));
    lm.row_offset = r - lm.row;
    lm.col_offset = c - lm.col;
    return lm;
}

std::string angle_label(double deg) {
    std::ostringstream os;
    os << std::showpos << deg;
    return os.str();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), a, b, c};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

int axis_rank(Axis a) {
    switch (a) {
    case Axis::Z: return 0;
    case Axis::Y: return 1;
    case Axis::X: return 2;
    }
    return 3;
}

} // namespace

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("manifest " + path.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw ParseError("manifest " + path.string() + ": expected a JSON array");

    std::vector<ManifestEntry> entries;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& j = doc[i];
        const std::string where = "manifest entry " + std::to_string(i);
        try {
            ManifestEntry e;
            e.file = j.at("file").get<std::string>();
            e.subject = j.value("subject", std::filesystem::path(e.file).stem().string());
            const auto axis = j.at("axis").get<std::string>();
            if (axis != "none") e.axis = parse_axis(axis);
            e.angle_deg = j.at("angle_deg").get<double>();
            e.nose = landmark(j.at("nose"), where + " nose");
            const json& eyes = j.at("eyes");
            if (!eyes.is_array() || eyes.size() != 2) throw ParseError(where + ": expected two eyes");
            e.eyes.left = landmark(eyes[0], where + " eye");
            e.eyes.right = landmark(eyes[1], where + " eye");
            e.height = j.value("height", 0.0);
            e.depth = j.value("depth", 0.0);
            entries.push_back(std::move(e));
        } catch (const json::exception& ex) {
            throw ParseError(where + ": " + ex.what());
        }
    }
    return entries;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
    json doc = json::array();
    for (const auto& e : entries) {
        doc.push_back({{"file", e.file},
                       {"subject", e.subject},
                       {"axis", e.axis ? std::string(to_string(*e.axis)) : "none"},
                       {"angle_deg", e.angle_deg},
                       {"nose", point(e.nose)},
                       {"eyes", json::array({point(e.eyes.left), point(e.eyes.right)})},
                       {"height", e.height},
                       {"depth", e.depth}});
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << doc.dump(2) << '\n';
}

void SynthRequest::validate() const {
    if (subjects < 1) throw ValidationError("synth: subjects must be >= 1");
    if (!(noise_frac >= 0)) throw ValidationError("synth: noise fraction must be >= 0");
    for (double a : angles) {
        if (!(std::abs(a) < 90.0)) {
            throw ValidationError("synth: angle " + angle_label(a) + " outside (-90, 90) degrees");
        }
    }
}

std::vector<ManifestEntry> write_synthetic_dataset(const std::filesystem::path& dir,
                                                   const SynthRequest& request) {
    request.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    const std::string ext = request.format == RangeFormat::Pgm16 ? ".pgm" : ".rgi";

    std::vector<ManifestEntry> entries;
    auto emit = [&](const SyntheticFaceSpec& spec, bool frontal, const std::string& subject,
                    std::string file, std::uint64_t seed) {
        const SyntheticFace face = generate_synthetic_face(spec, seed);
        save_range_image(face.image, dir / file, request.format);
        ManifestEntry e;
        e.file = std::move(file);
        e.subject = subject;
        if (!frontal) e.axis = spec.pose.axis;
        e.angle_deg = spec.pose.angle_deg;
        e.nose = face.nose;
        e.eyes = face.eyes;
        e.height = spec.nose_height;
        e.depth = spec.nose_depth;
        entries.push_back(std::move(e));
    };

    for (int s = 0; s < request.subjects; ++s) {
        std::ostringstream name;
        name << 's' << std::setw(2) << std::setfill('0') << s;
        const std::string subject = name.str();
        SyntheticFaceSpec spec = random_subject(derive_seed(request.seed, 0, static_cast<std::uint32_t>(s), 0));
        spec.noise_sigma = request.noise_frac * spec.nose_height;
        const auto subject_id = static_cast<std::uint32_t>(s);
        emit(spec, true, subject, subject + "_frontal" + ext, derive_seed(request.seed, 1, subject_id, 0));
        for (Axis axis : request.axes) {
            for (std::size_t k = 0; k < request.angles.size(); ++k) {
                spec.pose = {axis, request.angles[k]};
                const auto tag = static_cast<std::uint32_t>(axis_rank(axis) * 4096 + k + 1);
                emit(spec, false, subject,
                     subject + "_" + std::string(to_string(axis)) + angle_label(request.angles[k]) + ext,
                     derive_seed(request.seed, 1, subject_id, tag));
            }
        }
    }
    write_manifest(dir / kManifestName, entries);
    return entries;
}

int EvalReport::attempted() const {
    int n = 0;
    for (const auto& r : rows) n += r.attempted;
    return n;
}

int EvalReport::verified() const {
    int n = 0;
    for (const auto& r : rows) n += r.verified;
    return n;
}

double EvalReport::rate() const {
    const int n = attempted();
    return n == 0 ? 0.0 : static_cast<double>(verified()) / n;
}

double EvalReport::min_millis() const {
    double m = cases.empty() ? 0.0 : cases.front().millis;
    for (const auto& c : cases) m = std::min(m, c.millis);
    return m;
}

double EvalReport::max_millis() const {
    double m = 0.0;
    for (const auto& c : cases) m = std::max(m, c.millis);
    return m;
}

EvalReport evaluate_dataset(const std::filesystem::path& dir, const Config& config, int threads) {
    config.validate();
    const auto manifest = read_manifest(dir / kManifestName);
    const PreprocessParams pp = config.preprocess_params();
    const RegistrationParams rp = config.registration_params();

    std::vector<GalleryEntry> gallery;
    std::vector<const ManifestEntry*> probes;
    for (const auto& e : manifest) {
        if (!e.frontal()) {
            probes.push_back(&e);
            continue;
        }
        const double h = e.height > 0 ? e.height : config.nose_height;
        const double d = e.depth > 0 ? e.depth : config.nose_depth;
        gallery.push_back(make_gallery_entry(e.subject, preprocess(load_range_image(dir / e.file), pp),
                                             h, d, rp.landmarks));
    }
    if (gallery.empty()) throw EmptyInputError("dataset " + dir.string() + " has no frontal images");
    if (probes.empty()) throw EmptyInputError("dataset " + dir.string() + " has no posed images");

    EvalReport report;
    report.cases.resize(probes.size());
    auto run = [&](std::size_t i) {
        const ManifestEntry& e = *probes[i];
        EvalCase& c = report.cases[i];
        c.file = e.file;
        c.subject = e.subject;
        c.axis = *e.axis;
        c.angle_deg = e.angle_deg;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const RangeImage probe = preprocess(load_range_image(dir / e.file), pp);
            const RegistrationResult r = register_one_to_all(probe, gallery, c.axis, rp);
            c.registered = true;
            c.verified = r.verified;
            c.twin = r.matched_id == e.subject;
            c.theta_deg = r.estimate.theta * 180.0 / std::numbers::pi;
            c.residual = r.residual;
            c.iterations = r.iterations;
            c.matched_id = r.matched_id;
        } catch (const Error& ex) {
            c.error = ex.what();
        }
        c.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };

    const auto workers = static_cast<std::size_t>(std::max(threads, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < probes.size(); ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, probes.size()); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < probes.size(); i = next++) run(i);
            });
        }
    }

    std::map<std::pair<int, double>, EvalRow> grouped;
    for (const auto& c : report.cases) {
        auto& row = grouped[{axis_rank(c.axis), -c.angle_deg}];
        row.axis = c.axis;
        row.angle_deg = c.angle_deg;
        ++row.attempted;
        row.verified += c.verified ? 1 : 0;
    }
    for (auto& [key, row] : grouped) report.rows.push_back(row);
    return report;
}

void write_report_markdown(std::ostream& out, const EvalReport& report) {
    out << std::fixed;
    std::optional<Axis> current;
    for (const auto& row : report.rows) {
        if (current != row.axis) {
            if (current) out << '\n';
            current = row.axis;
            out << "## Registration across " << to_string(row.axis) << " axis\n\n"
                << "| Angle (deg) | Faces | Correctly registered | Rate (%) |\n"
                << "|---:|---:|---:|---:|\n";
        }
        out << "| " << angle_label(row.angle_deg) << " | " << row.attempted << " | " << row.verified
            << " | " << std::setprecision(2) << 100.0 * row.rate() << " |\n";
    }
    int twins = 0, failed = 0;
    for (const auto& c : report.cases) {
        twins += c.twin ? 1 : 0;
        failed += c.registered ? 0 : 1;
    }
    out << "\n## Overall\n\n"
        << "Correctly registered: " << report.verified() << " / " << report.attempted() << " ("
        << std::setprecision(2) << 100.0 * report.rate() << "%)\n"
        << "Matched to own frontal: " << twins << " / " << report.cases.size() << '\n'
        << "Registration errors: " << failed << '\n';
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
    out << "axis,angle_deg,attempted,verified,rate\n";
    for (const auto& row : report.rows) {
        out << to_string(row.axis) << ',' << row.angle_deg << ',' << row.attempted << ','
            << row.verified << ',' << std::fixed << std::setprecision(6) << row.rate() << '\n'
            << std::defaultfloat;
    }
    out << "all,," << report.attempted() << ',' << report.verified() << ',' << std::fixed
        << std::setprecision(6) << report.rate() << '\n' << std::defaultfloat;
}

void write_cases_csv(std::ostream& out, const EvalReport& report) {
    out << "file,subject,axis,angle_deg,verified,matched_id,twin,theta_deg,residual,iterations,error\n";
    for (const auto& c : report.cases) {
        std::string error = c.error;
        std::replace(error.begin(), error.end(), '\n', ' ');
        std::replace(error.begin(), error.end(), '"', '\'');
        out << c.file << ',' << c.subject << ',' << to_string(c.axis) << ',' << c.angle_deg << ','
            << (c.verified ? 1 : 0) << ',' << c.matched_id << ',' << (c.twin ? 1 : 0) << ','
            << std::fixed << std::setprecision(4) << c.theta_deg << ',' << c.residual << ','
            << std::defaultfloat << c.iterations << ",\"" << error << "\"\n";
    }
}

} // namespace nosereg
