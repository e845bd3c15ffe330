#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "intime/scenario.hpp"

namespace {

std::vector<intime::MatrixMode> parse_modes(const std::string& list) {
    std::vector<intime::MatrixMode> modes;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        std::size_t next = list.find(',', pos);
        std::string name = list.substr(pos, next == std::string::npos ? next : next - pos);
        if (name == "hermite")
            modes.push_back(intime::MatrixMode::Hermite);
        else if (name == "legendre")
            modes.push_back(intime::MatrixMode::Legendre);
        else if (name == "oracle")
            modes.push_back(intime::MatrixMode::Oracle);
        else
            throw intime::Error("domain", "unknown mode '" + name + "'");
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return modes;
}

void apply_overrides(intime::Scenario& scenario, const std::string& modes,
                     const std::string& out_dir, bool paper_literal, int jobs) {
    if (!modes.empty()) scenario.modes = parse_modes(modes);
    if (!out_dir.empty()) scenario.out_dir = out_dir;
    if (paper_literal) scenario.normalization = intime::Normalization::PaperLiteral;
    if (jobs > 0) scenario.jobs = jobs;
}

int report(const intime::RunResult& result) {
    for (const auto& p : result.points) {
        if (p.status == "ok")
            std::printf("point %zu: ok theta=%s nu=%s W00=%s defect=%s\n", p.index,
                        intime::format_sci(p.theta).c_str(), intime::format_sci(p.nu).c_str(),
                        intime::format_sci(p.W00).c_str(),
                        intime::format_sci(p.unitarity_defect).c_str());
        else
            std::printf("point %zu: %s\n", p.index, p.message.c_str());
    }
    for (const auto& w : result.warnings) std::printf("warning: %s\n", w.c_str());
    std::printf("wrote %s\n", result.out_dir.string().c_str());
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"state-to-state transition probabilities via internal-time reduction"};
    app.require_subcommand(1);

    std::string config_path, modes, out_dir, energies;
    bool paper_literal = false;
    int jobs = 0;
    long seed = 0; // reserved for future stochastic sampling; no effect

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "JSON run configuration")->required();
        sub->add_option("--modes", modes, "comma list: hermite,legendre,oracle");
        sub->add_option("--out-dir", out_dir, "output directory (overrides config)");
        sub->add_flag("--paper-literal", paper_literal,
                      "use the literal normalization variant of the driven formula");
        sub->add_option("--jobs", jobs, "evaluate sweep points in parallel");
        sub->add_option("--seed", seed, "reserved; accepted but currently unused");
    };

    CLI::App* run = app.add_subcommand("run", "evaluate the configured point(s)");
    add_common(run);

    CLI::App* sweep = app.add_subcommand("sweep", "evaluate a list of sweep values");
    add_common(sweep);
    sweep
        ->add_option("--energies", energies,
                     "sweep values: comma list '1.5,2.0' or range 'start:stop:count'")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        intime::Scenario scenario = intime::Scenario::from_file(config_path);
        apply_overrides(scenario, modes, out_dir, paper_literal, jobs);
        if (sweep->parsed())
            return report(intime::run_sweep(scenario, intime::parse_number_list(energies)));
        return report(intime::run_scenario(scenario));
    } catch (const intime::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
