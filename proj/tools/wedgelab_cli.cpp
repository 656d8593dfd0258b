// Configuration-driven verification harness: runs the suite battery for
// one model configuration, writes a JSON report plus CSV scan tables,
// and exits 0 (pass) / 1 (mandatory failure) / 2 (config error).

#include "wedgelab/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace wedgelab;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::vector<std::string>& suite_override)
{
    app::RunConfig cfg;
    try {
        cfg = app::RunConfig::from(app::KeyValueConfig::parse_file(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (!suite_override.empty()) cfg.suites = suite_override;
    if (cfg.out_dir.empty()) {
        if (const char* env = std::getenv("WEDGELAB_OUT")) cfg.out_dir = env;
        if (cfg.out_dir.empty()) cfg.out_dir = "reports";
    }

    const app::Report rep = app::run_all(cfg);

    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "report.json").string();
    {
        std::ofstream out(path);
        out << app::to_json(rep).dump(2) << "\n";
    }
    app::export_csv(rep, cfg.out_dir);

    int failed = 0, info_failed = 0;
    for (const auto& r : rep.records) {
        const bool ok = r.pass;
        if (!ok && r.informational) ++info_failed;
        if (!ok && !r.informational) ++failed;
        std::cout << (ok ? "pass " : (r.informational ? "info " : "FAIL ")) << "[" << r.suite << "] "
                  << r.check << "  (residual " << r.residual << ", tol " << r.tolerance << ")\n";
    }
    for (const auto& s : rep.skipped) std::cout << "skip " << s << "\n";
    std::cout << "report: " << path << "\n";

    if (failed > 0) return 1;
    if (info_failed > 0 && cfg.informational_fail_exit) return 1;
    return 0;
}

int cmd_export(const std::string& report_path, const std::string& format, const std::string& out_dir)
{
    if (format != "csv" && format != "json") {
        std::cerr << "unknown export format: " << format << "\n";
        return 2;
    }
    std::ifstream in(report_path);
    if (!in) {
        std::cerr << "cannot open report: " << report_path << "\n";
        return 2;
    }
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        std::cerr << "malformed report: " << e.what() << "\n";
        return 2;
    }
    const app::Report rep = app::report_from_json(j);
    if (format == "json") {
        const std::string path = (fs::path(out_dir) / "report.json").string();
        fs::create_directories(out_dir);
        std::ofstream out(path);
        out << app::to_json(rep).dump(2) << "\n";
        std::cout << path << "\n";
        return 0;
    }
    for (const auto& p : app::export_csv(rep, out_dir)) std::cout << p << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App cli{"wedgelab: operator-algebraic QFT model verification workbench"};
    cli.require_subcommand(1);

    std::string config_path, out_dir, report_path, format = "csv";
    std::vector<std::string> suites;

    auto* run = cli.add_subcommand("run", "run the verification suites for a config");
    run->add_option("config", config_path, "key-value config file")->required();
    run->add_option("--out", out_dir, "output directory (default from config / WEDGELAB_OUT)");
    run->add_option("--suite", suites, "restrict to named suites (repeatable)");

    auto* lm = cli.add_subcommand("list-models", "list built-in S-matrix models");
    auto* ls = cli.add_subcommand("list-suites", "list verification suites");

    auto* ex = cli.add_subcommand("export", "re-export a JSON report");
    ex->add_option("report", report_path, "report.json produced by run")->required();
    ex->add_option("--format", format, "csv or json");
    ex->add_option("--out", out_dir, "output directory")->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, suites);
        if (lm->parsed()) {
            for (const auto& m : app::known_models()) std::cout << m << "\n";
            return 0;
        }
        if (ls->parsed()) {
            for (const auto& s : app::known_suites()) std::cout << s << "\n";
            return 0;
        }
        if (ex->parsed()) return cmd_export(report_path, format, out_dir);
    } catch (const app::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
