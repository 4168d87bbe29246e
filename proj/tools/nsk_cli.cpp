// nsk: run, validate and sweep scenarios from a configuration file.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nsk/nsk.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw nsk::Error("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int report(const nsk::RunResult& r, const std::filesystem::path& out) {
    std::cout << "status: " << r.status << "\n";
    if (!r.reason.empty()) std::cout << "reason: " << r.reason << "\n";
    for (const auto& line : r.report) std::cout << "  " << line << "\n";
    if (r.summary)
        std::cout << "sup perturbation: " << r.summary->initial_sup << " -> " << r.summary->final_sup
                  << " (ratio " << r.summary->ratio << ")\n";
    if (!r.level_errors.empty()) std::cout << "observed order: " << r.observed_order << "\n";
    std::cout << "output: " << out.string() << "\n";
    return r.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Navier-Stokes-Korteweg wave laboratory"};
    app.require_subcommand(1);

    std::string config, out, vary;
    auto* run = app.add_subcommand("run", "run the configured scenario");
    run->add_option("--config", config, "configuration file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "output directory (overrides output.dir)");

    auto* validate = app.add_subcommand("validate", "parse and validate a configuration");
    validate->add_option("--config", config, "configuration file")->required()->check(CLI::ExistingFile);

    auto* sweep = app.add_subcommand("sweep", "run the scenario once per value of one key");
    sweep->add_option("--config", config, "configuration file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--vary", vary, "section.key=v1,v2,...")->required();
    sweep->add_option("--out", out, "parent output directory (overrides output.dir)");

    CLI11_PARSE(app, argc, argv);

    try {
        const nsk::RunConfig cfg = nsk::parse_config(read_file(config));
        if (*validate) {
            std::cout << nsk::resolved_text(cfg) << "valid\n";
            return 0;
        }
        if (*run) {
            const std::filesystem::path dir = out.empty() ? cfg.out_dir : out;
            return report(nsk::run_scenario(cfg, dir), dir);
        }
        const auto eq = vary.find('=');
        if (eq == std::string::npos) throw nsk::ValidationError("--vary expects section.key=v1,v2,...");
        const std::string key = vary.substr(0, eq);
        std::vector<std::string> values;
        std::stringstream ss(vary.substr(eq + 1));
        for (std::string v; std::getline(ss, v, ',');)
            if (!v.empty()) values.push_back(v);
        if (values.empty()) throw nsk::ValidationError("--vary needs at least one value");
        const std::filesystem::path parent = out.empty() ? cfg.out_dir : out;
        int worst = 0;
        for (const auto& v : values) {
            const nsk::RunConfig c = nsk::with_override(cfg, key, v);
            const auto dir = parent / (key + "=" + v);
            std::cout << "== " << key << " = " << v << "\n";
            worst = std::max(worst, report(nsk::run_scenario(c, dir), dir));
        }
        return worst;
    } catch (const nsk::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const nsk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
