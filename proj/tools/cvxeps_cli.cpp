#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cvxeps/scenario.hpp"

namespace {

using cvxeps::RunReport;
using cvxeps::Tolerances;

void write_outputs(const std::vector<RunReport>& reports, const std::string& out_dir,
                   const std::string& format) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    if (format == "csv" || format == "both") {
        std::ofstream csv(fs::path(out_dir) / "report.csv");
        csv << cvxeps::to_csv(reports);
    }
    if (format == "svg" || format == "both") {
        for (const auto& r : reports) {
            if (r.svg.empty()) continue;
            std::ofstream svg(fs::path(out_dir) / (r.name + ".svg"));
            svg << r.svg;
        }
    }
}

void print_table(const std::vector<RunReport>& reports) {
    for (const auto& r : reports) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.op << ", "
                  << r.millis << " ms)";
        if (!r.flags.empty()) {
            std::cout << "  [";
            for (std::size_t i = 0; i < r.flags.size(); ++i)
                std::cout << (i ? ";" : "") << r.flags[i];
            std::cout << "]";
        }
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cvxeps: epsilon-subdifferential and dual-set scenario runner"};
    app.require_subcommand(1);

    Tolerances tol;
    std::string out_dir = "out";
    std::string format = "csv";
    std::vector<double> ladder;

    app.add_option("--window", tol.window_radius, "window radius R for clipped comparisons")
        ->envname("CVXEPS_WINDOW");
    app.add_option("--set-tol", tol.set_tol, "set comparison tolerance")
        ->envname("CVXEPS_SET_TOL");
    app.add_option("--eta-ladder", ladder, "decreasing positive eta values")
        ->delimiter(',')
        ->envname("CVXEPS_ETA_LADDER");
    app.add_option("--gamma-splits", tol.gamma_splits, "budget split sample count")
        ->envname("CVXEPS_GAMMA_SPLITS");
    app.add_option("--dirs", tol.support_dirs, "dual probe direction count")
        ->envname("CVXEPS_DIRS");
    app.add_option("--out-dir", out_dir, "report output directory")
        ->envname("CVXEPS_OUT_DIR");
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"csv", "svg", "both"}))
        ->envname("CVXEPS_FORMAT");

    std::vector<std::string> scenario_paths;
    auto* run = app.add_subcommand("run", "run individual scenario files");
    run->add_option("paths", scenario_paths, "scenario JSON files")->required();

    std::string fixtures_dir = "fixtures";
    auto* suite = app.add_subcommand("suite", "run the bundled fixture suite");
    suite->add_option("--fixtures", fixtures_dir, "fixtures directory")
        ->envname("CVXEPS_FIXTURES");

    CLI11_PARSE(app, argc, argv);
    if (!ladder.empty()) tol.eta_ladder = ladder;
    try {
        tol.validate();
    } catch (const cvxeps::Error& e) {
        std::cerr << "invalid tolerances: " << e.what() << "\n";
        return 2;
    }

    std::vector<RunReport> reports;
    try {
        if (run->parsed()) {
            for (const auto& p : scenario_paths)
                reports.push_back(cvxeps::run_scenario_file(p, tol));
        } else {
            reports = cvxeps::run_fixture_suite(fixtures_dir, tol).reports;
        }
    } catch (const cvxeps::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::sort(reports.begin(), reports.end(),
              [](const RunReport& a, const RunReport& b) { return a.name < b.name; });
    print_table(reports);
    write_outputs(reports, out_dir, format);

    for (const auto& r : reports)
        if (!r.pass) return 1;
    return 0;
}
