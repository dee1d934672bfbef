// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "nosereg/errors.hpp"
#include "nosereg/preprocess.hpp"
#include "nosereg/register.hpp"
#include "nosereg/synthetic.hpp"
#include "oracles.hpp"

using namespace nosereg;

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;
const std::vector<double> kAngles{5, -5, 18, -18, 30, -30, 38, -38, 40, -40};
constexpr Axis kAxes[] = {Axis::Z, Axis::Y, Axis::X};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

RangeImage prepared(const SyntheticFaceSpec& spec, std::uint64_t seed) {
    return preprocess(generate_synthetic_face(spec, seed).image, PreprocessParams{});
}

GalleryEntry entry_of(const std::string& id, const SyntheticFaceSpec& spec, std::uint64_t seed) {
    SyntheticFaceSpec frontal = spec;
    frontal.pose = {};
    return make_gallery_entry(id, prepared(frontal, seed), spec.nose_height, spec.nose_depth);
}

// Per-axis success counts of the angle sweep at one noise level.
struct SweepCounts {
    int pass[3] = {0, 0, 0};
    int total[3] = {0, 0, 0};
};

SweepCounts sweep(int subjects, double noise_frac, std::uint64_t seed_base) {
    SweepCounts counts;
    for (int s = 0; s < subjects; ++s) {
        SyntheticFaceSpec spec = random_subject(seed_base + static_cast<std::uint64_t>(s));
        spec.noise_sigma = noise_frac * spec.nose_height;
        const GalleryEntry entry = entry_of("s", spec, seed_base * 7 + static_cast<std::uint64_t>(s));
        for (int a = 0; a < 3; ++a) {
            for (std::size_t k = 0; k < kAngles.size(); ++k) {
                spec.pose = {kAxes[a], kAngles[k]};
                ++counts.total[a];
                try {
                    const RegistrationResult r = register_single(
                        prepared(spec, seed_base * 1000 + static_cast<std::uint64_t>(s * 100 + a * 10) + k),
                        entry, kAxes[a]);
                    if (r.verified && std::abs(r.estimate.theta * kDeg - kAngles[k]) <= 3.0) {
                        ++counts.pass[a];
                    }
                } catch (const Error&) {
                }
            }
        }
    }
    return counts;
}

Outcome criterion_sweep() {
    const auto t0 = Clock::now();
    const SweepCounts clean = sweep(10, 0.0, 100);
    const SweepCounts noisy = sweep(10, 0.02, 900);
    const double secs = seconds_since(t0);

    int cp = 0, ct = 0;
    for (int a = 0; a < 3; ++a) {
        cp += clean.pass[a];
        ct += clean.total[a];
    }
    const double clean_rate = static_cast<double>(cp) / ct;
    const double paper[3] = {0.677, 0.7966, 0.7966};
    bool noisy_ok = true;
    double rate[3];
    for (int a = 0; a < 3; ++a) {
        rate[a] = static_cast<double>(noisy.pass[a]) / noisy.total[a];
        noisy_ok = noisy_ok && rate[a] >= paper[a];
    }
    return {clean_rate >= 0.95 && noisy_ok && secs < 60.0,
            fmt("noise-free %d/%d (%.1f%%); 2%% noise Z %.1f%% Y %.1f%% X %.1f%%; %.1f s", cp, ct,
                100 * clean_rate, 100 * rate[0], 100 * rate[1], 100 * rate[2], secs)};
}

Outcome criterion_oracles() {
    std::mt19937_64 rng(20240601);
    int otsu_cases = 0, otsu_bad = 0;
    while (otsu_cases < 500) {
        const RangeImage img = oracle::random_image(rng, 3 + static_cast<int>(rng() % 14),
                                                    3 + static_cast<int>(rng() % 14), 0.1, rng() % 3 == 0);
        const int bins = 2 + static_cast<int>(rng() % 255);
        double t;
        try {
            t = otsu_threshold(img, bins).threshold;
        } catch (const DegenerateHistogramError&) {
            continue;
        }
        ++otsu_cases;
        otsu_bad += t != oracle::otsu(img, bins);
    }

    int nose_cases = 0, nose_bad = 0;
    while (nose_cases < 500) {
        const RangeImage img = oracle::random_image(rng, 3 + static_cast<int>(rng() % 14),
                                                    3 + static_cast<int>(rng() % 14), 0.08, rng() % 2 == 0);
        const auto expected = oracle::nose(img);
        if (!expected) continue;
        ++nose_cases;
        const PixelLandmark tip = find_nose_tip(img);
        nose_bad += tip.row != expected->first || tip.col != expected->second;
    }

    int median_bad = 0;
    for (int i = 0; i < 500; ++i) {
        const int radius = 1 + static_cast<int>(rng() % 3);
        const int side = 2 * radius + 1;
        std::vector<int> w(static_cast<std::size_t>(side * side));
        for (auto& x : w) x = static_cast<int>(rng() % 5);
        w[w.size() / 2] = 1 + static_cast<int>(rng() % 4);
        const MedianKernel k(radius, w);
        const RangeImage img = oracle::random_image(rng, 2 + static_cast<int>(rng() % 12),
                                                    2 + static_cast<int>(rng() % 12), 0.15, rng() % 2 == 0);
        median_bad += !(weighted_median_smooth(img, k) == oracle::weighted_median(img, k));
    }
    return {otsu_bad == 0 && nose_bad == 0 && median_bad == 0,
            fmt("otsu %d/500, nose %d/500, median %d/500 mismatches", otsu_bad, nose_bad, median_bad)};
}

Outcome criterion_transforms() {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0, bad = 0;
    double worst = 0.0;
    auto check = [&](const RigidTransform& t) {
        ++checked;
        const Eigen::Matrix3d r = t.rotation();
        const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
        const double det = std::abs(r.determinant() - 1.0);
        const auto& m = t.matrix();
        const bool bottom = m(3, 0) == 0.0 && m(3, 1) == 0.0 && m(3, 2) == 0.0 && m(3, 3) == 1.0;
        bad += !(ortho < 1e-9 && det < 1e-9 && bottom);
        PointCloud cloud;
        for (int i = 0; i < 20; ++i) cloud.points.emplace_back(u(rng) * 100, u(rng) * 100, u(rng) * 100, 1.0);
        const PointCloud back = apply_transform(apply_transform(cloud, t), t.inverse());
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            worst = std::max(worst, (back.points[i] - cloud.points[i]).cwiseAbs().maxCoeff());
        }
    };

    for (int i = 0; i < 300; ++i) {
        const Axis axis = kAxes[i % 3];
        const Eigen::Vector3d pivot(u(rng) * 50, u(rng) * 50, u(rng) * 50);
        check(rotation_matrix(axis, u(rng) * std::numbers::pi));
        check(rotation_about(axis, u(rng) * 1.5, pivot));
        check(pose_rotation(axis, u(rng) * 1.5, pivot));
        PointCloud one;
        one.points.emplace_back(pivot.x(), pivot.y(), pivot.z(), 1.0);
        PixelLandmark anchor;
        anchor.row = static_cast<int>(u(rng) * 50);
        anchor.col = static_cast<int>(u(rng) * 50);
        anchor.depth = u(rng) * 50;
        check(translate_to_origin(one, anchor).second);
    }

    const SyntheticFaceSpec spec = random_subject(5);
    const GalleryEntry entry = entry_of("s", spec, 1);
    for (Axis axis : kAxes) {
        for (double deg : kAngles) {
            SyntheticFaceSpec posed = spec;
            posed.pose = {axis, deg};
            const RegistrationResult r = register_single(prepared(posed, 2), entry, axis);
            check(r.transform);
            check(r.translation);
            check(r.transform.inverse());
            for (const auto& s : r.steps) check(s);
        }
    }
    return {bad == 0 && worst < 1e-9,
            fmt("%d transforms, %d violations, worst round-trip error %.2e", checked, bad, worst)};
}

Outcome criterion_self_registration() {
    int ok = 0, runs = 0;
    double worst_theta = 0.0;
    int worst_iter = 0;
    for (int s = 0; s < 20; ++s) {
        const GalleryEntry entry = entry_of("s", random_subject(4000 + static_cast<std::uint64_t>(s)), 0);
        for (Axis axis : kAxes) {
            ++runs;
            try {
                const RegistrationResult r = register_single(entry.frontal, entry, axis);
                const double theta = std::abs(r.estimate.theta * kDeg);
                worst_theta = std::max(worst_theta, theta);
                worst_iter = std::max(worst_iter, r.iterations);
                ok += theta < 0.5 && r.residual < 2.0 && r.verified && r.iterations <= 2;
            } catch (const Error&) {
            }
        }
    }
    return {ok == runs, fmt("%d/%d fixed points, max |theta| %.3f deg, max iterations %d", ok, runs,
                            worst_theta, worst_iter)};
}

Outcome criterion_one_to_all() {
    std::vector<SyntheticFaceSpec> specs;
    std::vector<GalleryEntry> gallery;
    for (int s = 0; s < 10; ++s) {
        specs.push_back(random_subject(500 + static_cast<std::uint64_t>(s)));
        gallery.push_back(entry_of("s" + std::to_string(s), specs.back(), static_cast<std::uint64_t>(s)));
    }
    std::mt19937_64 rng(7);
    int hits = 0;
    for (int i = 0; i < 100; ++i) {
        const int s = static_cast<int>(rng() % 10);
        const Axis axis = kAxes[rng() % 3];
        const double deg = kAngles[rng() % kAngles.size()];
        SyntheticFaceSpec spec = specs[static_cast<std::size_t>(s)];
        spec.pose = {axis, deg};
        try {
            const RegistrationResult r = register_one_to_all(prepared(spec, 1000 + static_cast<std::uint64_t>(i)),
                                                             gallery, axis);
            hits += r.matched_id == "s" + std::to_string(s);
        } catch (const Error&) {
        }
    }
    return {hits >= 95, fmt("twin selected for %d/100 probes", hits)};
}

Outcome criterion_runtime() {
    SyntheticFaceSpec spec;
    const GalleryEntry entry = entry_of("s", spec, 0);
    spec.pose = {Axis::Y, 40.0};
    const RangeImage raw = generate_synthetic_face(spec).image;
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const auto t0 = Clock::now();
        const RegistrationResult r = register_single(preprocess(raw, PreprocessParams{}), entry, Axis::Y);
        (void)r;
        worst = std::max(worst, seconds_since(t0));
    }
    return {worst < 1.0, fmt("slowest 100x100 registration %.1f ms", worst * 1000.0)};
}

Outcome criterion_curvature() {
    std::string detail;
    bool ok = true;
    for (double R : {10.0, 20.0, 40.0}) {
        const int n = static_cast<int>(R) + 11;
        const CurvatureMap m = compute_curvatures(oracle::sphere_cap(n, R), 1);
        const int mid = (n - 1) / 2;
        const double rel = std::abs(m.K(mid, mid) * R * R - 1.0);
        ok = ok && rel < 0.05;
        detail += fmt("R=%g K err %.2f%%; ", R, 100 * rel);
    }
    std::vector<double> v;
    for (int r = 0; r < 30; ++r)
        for (int c = 0; c < 30; ++c) v.push_back(0.7 * c - 1.3 * r + 5.0);
    const CurvatureMap plane = compute_curvatures(RangeImage(30, 30, v), 1);
    double worst = 0.0;
    for (int r = 0; r < 30; ++r)
        for (int c = 0; c < 30; ++c)
            if (plane.valid(r, c)) worst = std::max({worst, std::abs(plane.H(r, c)), std::abs(plane.K(r, c))});
    ok = ok && worst < 1e-9;
    return {ok, detail + fmt("plane max |H|,|K| %.1e", worst)};
}

Outcome criterion_formats() {
    std::mt19937_64 rng(808);
    int ascii_bad = 0, pgm_bad = 0;
    for (int i = 0; i < 100; ++i) {
        const RangeImage img = oracle::random_image(rng, 1 + static_cast<int>(rng() % 40),
                                                    1 + static_cast<int>(rng() % 40), 0.2, false);
        std::stringstream a;
        write_ascii_grid(a, img);
        ascii_bad += !(read_ascii_grid(a) == img);

        std::stringstream p;
        write_pgm16(p, img);
        const RangeImage back = read_pgm16(p);
        double lo = INFINITY, hi = -INFINITY;
        for (double d : img.depths())
            if (!std::isnan(d)) {
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
        const double step = std::isfinite(lo) ? (hi - lo) / 65534.0 : 0.0;
        bool same = back.width() == img.width() && back.height() == img.height();
        for (int r = 0; same && r < img.height(); ++r)
            for (int c = 0; same && c < img.width(); ++c) {
                same = back.valid(r, c) == img.valid(r, c) &&
                       (!img.valid(r, c) || std::abs(back.at(r, c) - img.at(r, c)) <= step);
            }
        pgm_bad += !same;
    }
    return {ascii_bad == 0 && pgm_bad == 0,
            fmt("ascii-grid %d/100 mismatches, pgm16 %d/100 beyond one step", ascii_bad, pgm_bad)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"1 angle-recovery sweep", criterion_sweep},
        {"2 oracle equivalence", criterion_oracles},
        {"3 transform invariants", criterion_transforms},
        {"4 self-registration fixed point", criterion_self_registration},
        {"5 one-to-all selection", criterion_one_to_all},
        {"6 runtime bound", criterion_runtime},
        {"7 curvature sanity", criterion_curvature},
        {"8 format round trips", criterion_formats},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
