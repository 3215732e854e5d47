#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "hardylip/hardy_ops.hpp"
#include "hardylip/suite.hpp"

namespace {

using namespace hardylip;

int cmd_verify(const std::string& config_path, const std::vector<std::string>& suites,
               const std::string& out_override) {
    SuiteConfig config;
    try {
        config = SuiteConfig::from_json(load_json_file(config_path));
        if (!suites.empty()) {
            config.suites = suites;
            config.validate();
        }
        if (!out_override.empty()) config.out_dir = out_override;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    SuiteReport report;
    try {
        report = run_suite(config);
        std::filesystem::create_directories(config.out_dir);
        write_report_json(report, config.out_dir + "/report.json");
        write_csv_bundle(report.to_json(), config.out_dir);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return e.kind() == Error::Kind::Io ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::cout << "suites: ";
    for (const auto& s : config.suites) std::cout << s << " ";
    std::cout << "\npass " << report.pass << ", fail " << report.fail << ", error "
              << report.error << " (" << report.wall_time_s << " s)\n"
              << "report: " << config.out_dir << "/report.json\n";
    return (report.fail == 0 && report.error == 0) ? 0 : 1;
}

int cmd_sc_fit(const std::string& graph_path, double pin_c1,
               const std::string& base_value) {
    try {
        const LipschitzGraph graph = load_graph(graph_path);
        ScSolveOptions opt;
        if (!base_value.empty()) {
            double re = 0, im = 0;
            if (std::sscanf(base_value.c_str(), "%lf,%lf", &re, &im) != 2) {
                std::cerr << "bad --base-value, expected u,v\n";
                return 2;
            }
            opt.base_value = Complex(re, im);
        }
        SchwarzChristoffelMap map = sc_solve(graph, opt);
        if (pin_c1 != 0.0) {
            std::cerr << "note: only c1 = 0 pinning is supported; prevertices are\n"
                         "normalized by the base-value condition instead\n";
        }
        for (const auto& vr : vertex_residuals(map, graph, opt))
            std::cerr << "vertex c=" << vr.prevertex << " target=(" << vr.target.real()
                      << "," << vr.target.imag() << ") residual=" << vr.residual
                      << "\n";
        std::cout << map_to_json(map).dump(2) << "\n";
        return 0;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\nresiduals:";
        for (double r : e.residuals()) std::cerr << " " << r;
        std::cerr << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_report(const std::string& in_path, const std::string& format,
               const std::string& out_dir) {
    try {
        const Json report = load_json_file(in_path);
        std::filesystem::create_directories(out_dir);
        if (format == "json") {
            save_json_file(report, out_dir + "/report.json");
        } else if (format == "csv-bundle") {
            write_csv_bundle(report, out_dir);
        } else {
            std::cerr << "unknown format: " << format << "\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical certificates for Hardy-space identities on "
                 "Lipschitz graph domains"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::vector<std::string> suites;
    auto* verify = app.add_subcommand("verify", "run certificate suites from a config");
    verify->add_option("--config", config_path, "suite config JSON")->required();
    verify->add_option("--suite", suites, "subset of suites to run");
    verify->add_option("--out", out_dir, "output directory override");

    std::string graph_path, base_value;
    double pin_c1 = 0.0;
    auto* scfit = app.add_subcommand("sc-fit", "fit a Schwarz-Christoffel map");
    scfit->add_option("--graph", graph_path, "graph JSON or builtin name")->required();
    scfit->add_option("--pin-c1", pin_c1, "pin the first prevertex (only 0 supported)");
    scfit->add_option("--base-value", base_value, "normalization Phi(i) = u,v");

    std::string report_in, report_format = "json", report_out = ".";
    auto* report = app.add_subcommand("report", "re-emit a report in another format");
    report->add_option("--in", report_in, "report JSON path")->required();
    report->add_option("--format", report_format, "json or csv-bundle");
    report->add_option("--out", report_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (verify->parsed()) return cmd_verify(config_path, suites, out_dir);
    if (scfit->parsed()) return cmd_sc_fit(graph_path, pin_c1, base_value);
    if (report->parsed()) return cmd_report(report_in, report_format, report_out);
    return 2;
}
