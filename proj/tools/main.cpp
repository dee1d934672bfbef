#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nosereg/commands.hpp"
#include "nosereg/errors.hpp"

using namespace nosereg;

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    std::vector<std::string> settings;
};

Config build_config(const Common& common) {
    Config config;
    if (!common.config_path.empty()) config = load_config(common.config_path, config);
    for (const auto& kv : common.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + kv + "'");
        apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (common.seed) config.seed = *common.seed;
    config.validate();
    return config;
}

OutputFormat output_format(const Common& common) {
    return common.format == "text" ? OutputFormat::Text : OutputFormat::Json;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nose-tip based registration of 3D face range images"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--config", common.config_path, "key = value settings file")->check(CLI::ExistingFile);
    app.add_option("--seed", common.seed, "random seed (overrides the config)");
    app.add_option("--format", common.format, "console output format")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--set", common.settings, "override one setting, key=value");

    std::string input;
    auto* detect = app.add_subcommand("detect", "locate the nose tip and eye corners");
    detect->add_option("input", input, "range image (.rgi or .pgm)")->required();

    std::string probe, gallery, axis = "auto", out_dir = "registered";
    auto* reg = app.add_subcommand("register", "register a probe against a gallery of frontal images");
    reg->add_option("probe", probe, "probe range image")->required();
    reg->add_option("gallery", gallery, "directory of frontal images")->required();
    reg->add_option("--axis", axis, "rotation axis")->check(CLI::IsMember({"x", "y", "z", "X", "Y", "Z", "auto"}));
    reg->add_option("--out", out_dir, "output directory");

    SynthRequest synth_req;
    std::vector<std::string> axes;
    std::string image_format = "ascii";
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--subjects", synth_req.subjects, "number of individuals");
    synth->add_option("--axes", axes, "comma separated axes")->delimiter(',');
    synth->add_option("--angles", synth_req.angles, "comma separated angles in degrees")->delimiter(',');
    synth->add_option("--noise-frac", synth_req.noise_frac, "noise sigma as a fraction of the nose height");
    synth->add_option("--image-format", image_format, "file format")
        ->check(CLI::IsMember({"ascii", "pgm16"}));

    std::string dataset, eval_out = "evaluation";
    int threads = 1;
    auto* evaluate = app.add_subcommand("evaluate", "run the registration sweep over a dataset");
    evaluate->add_option("dataset", dataset, "directory written by synth")->required();
    evaluate->add_option("--out", eval_out, "report directory");
    evaluate->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    Config config;
    if (int rc = run_command(std::cerr, [&] {
            config = build_config(common);
            return kExitOk;
        });
        rc != kExitOk) {
        return rc;
    }
    const OutputFormat format = output_format(common);

    if (*detect) return cmd_detect(input, config, format, std::cout, std::cerr);
    if (*reg) {
        std::optional<Axis> chosen;
        if (axis != "auto") chosen = parse_axis(axis);
        return cmd_register(probe, gallery, chosen, out_dir, config, format, std::cout, std::cerr);
    }
    if (*synth) {
        return run_command(std::cerr, [&] {
            if (!axes.empty()) {
                synth_req.axes.clear();
                for (const auto& a : axes) synth_req.axes.push_back(parse_axis(a));
            }
            synth_req.seed = config.seed;
            synth_req.format = image_format == "pgm16" ? RangeFormat::Pgm16 : RangeFormat::AsciiGrid;
            return cmd_synth(synth_req, synth_out, std::cout, std::cerr);
        });
    }
    return cmd_evaluate(dataset, eval_out, config, threads, std::cout, std::cerr);
}
