#include <CLI11.hpp>

#include <iostream>
#include <memory>

#include "config_json.hpp"
#include "gelfand/errors.hpp"
#include "run_config.hpp"

int main(int argc, char** argv) {
    using gelfand::cli::RunConfig;
    RunConfig cfg;

    CLI::App app{"Radial Gelfand problem and its thin-tube solutions"};
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<gelfand::cli::ConfigJson>());
    app.set_config("--config", "", "JSON file with option values; command-line flags win");

    app.add_option("--dim,--dims", cfg.dims_text, "Dimension(s): 2, 1..12 or 1,3,5")->required();
    app.add_option("--lambda", cfg.lambda, "Parameter lambda");
    app.add_option("--branch", cfg.branch, "Solution number at lambda, 1 = smallest centre value");
    app.add_option("--eps", cfg.eps, "Tube width(s)")->delimiter(',');
    app.add_option("--radius", cfg.radius, "Circle radius R (curvature 1/R, length 2 pi R)")->capture_default_str();
    app.add_flag("--flat", cfg.flat, "Straight periodic tube of the same length (curvature 0)");
    app.add_option("--amax", cfg.amax, "Largest centre value for diagram sweeps")->capture_default_str();
    app.add_option("--grid", cfg.grid,
                   "diagram: samples in a; spectrum/resonance/morse: radial intervals; tube/morse: fiber intervals (n_rho for m=2)");
    app.add_option("--nt", cfg.nt, "tube: points along the circle");
    app.add_option("--ntheta", cfg.ntheta, "tube, m=2: angular cells");
    app.add_option("--count", cfg.count, "Fiber eigenvalues kept")->capture_default_str();
    app.add_option("--exponent", cfg.exponent, "N in the nonresonant neighbourhoods eps^N")->capture_default_str();
    app.add_option("--eps-min", cfg.eps_min, "Smallest eps listed among resonances")->capture_default_str();
    app.add_option("--tol", cfg.tol, "Fixed-point increment tolerance")->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads for sweeps (0 = hardware)");
    app.add_option("--out", cfg.out, "Output file (diagram: directory); default stdout");
    app.add_option("--format", cfg.format, "csv or json")->capture_default_str();
    app.add_option("--field-out", cfg.field_out, "tube: write u (.gtub binary, otherwise CSV)");
    app.add_option("--log", cfg.log_out, "tube: fixed-point log as JSON lines");

    for (const char* name : {"diagram", "resonance", "tube", "morse", "spectrum"}) {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();
        sub->callback([&cfg, name] { cfg.subcommand = name; });
    }
    app.get_subcommand("diagram")->description("lambda(a) per dimension, folds, crossings of 2(m-2)");
    app.get_subcommand("resonance")->description("resonant eps, spectral gaps and nonresonant sets");
    app.get_subcommand("tube")->description("fixed-point solve on the tube around a circle");
    app.get_subcommand("morse")->description("negative eigenvalue counts against eps");
    app.get_subcommand("spectrum")->description("linearized spectrum of a radial solution");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        gelfand::cli::validate(cfg);
        return gelfand::cli::run(cfg);
    } catch (const gelfand::InvalidArgument& e) {
        std::cerr << "error (" << cfg.subcommand << "): " << e.what() << '\n';
        if (cfg.dims.empty()) {
            app.clear();  // so help() shows the top-level usage rather than the subcommand
            std::cerr << app.help();
        } else {
            std::cerr << "Run with --help for usage.\n";
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error (" << cfg.subcommand << "): " << e.what() << '\n';
        return 3;
    }
}
