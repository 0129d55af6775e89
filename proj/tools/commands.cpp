#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gelfand/circle_model.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/export.hpp"
#include "gelfand/fermi_operator.hpp"
#include "gelfand/radial_core.hpp"
#include "gelfand/spectral.hpp"
#include "gelfand/tube_eigen.hpp"
#include "gelfand/tube_linear.hpp"
#include "gelfand/tube_solver.hpp"
#include "run_config.hpp"

namespace gelfand::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kBranchSearch = 60.0;  // centre values scanned when picking a branch
constexpr int kMaxDim = 64;

ordered_json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return ordered_json::parse(format_number(x));
}

// Output sink: --out file (or directory for diagram), else stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_.open(path, std::ios::binary);
        if (!file_) throw InvalidArgument("cannot open output file " + path);
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

CircleGeometry geometry(const RunConfig& cfg, int m) {
    if (cfg.flat) return CircleGeometry::flat(2.0 * std::numbers::pi * cfg.radius, m);
    return CircleGeometry::circle(cfg.radius, m);
}

struct Branch {
    RadialProfile profile;
    int index = 1;
    std::size_t available = 0;
};

// Solution number `branch` (1 = smallest centre value) of the radial problem at lambda.
Branch pick_branch(const RunConfig& cfg, int m, int fallback_branch, std::size_t intervals) {
    const int want = cfg.branch > 0 ? cfg.branch : fallback_branch;
    Branch b;
    b.index = want;
    if (cfg.lambda == 0.0) {
        if (want != 1) throw InvalidArgument("lambda = 0 has only the trivial solution");
        b.profile = radial_solution(m, 0.0, intervals);
        b.available = 1;
        return b;
    }
    const SolutionCount sc = count_solutions(m, cfg.lambda, kBranchSearch);
    b.available = sc.crossings.size();
    if (sc.crossings.empty())
        throw InvalidArgument("lambda = " + format_number(cfg.lambda) + " exceeds lambda*(" + std::to_string(m) +
                              ") = " + format_number(lambda_star(m)) + ": no radial solution");
    if (static_cast<std::size_t>(want) > sc.crossings.size())
        throw InvalidArgument("branch " + std::to_string(want) + " requested but lambda = " + format_number(cfg.lambda) +
                              " has " + std::to_string(sc.crossings.size()) + " solution(s) with centre value <= " +
                              format_number(kBranchSearch));
    b.profile = radial_solution(m, sc.crossings[static_cast<std::size_t>(want - 1)], intervals);
    return b;
}

std::size_t radial_intervals(const RunConfig& cfg) { return cfg.grid > 0 ? cfg.grid : 2048; }

int single_dim(const RunConfig& cfg) {
    if (cfg.dims.size() != 1) throw InvalidArgument(cfg.subcommand + ": exactly one dimension expected (--dim)");
    return cfg.dims.front();
}

void require_lambda(const RunConfig& cfg) {
    if (!std::isfinite(cfg.lambda)) throw InvalidArgument(cfg.subcommand + ": --lambda is required");
}

// ------------------------------------------------------------------------------------------

int run_diagram(const RunConfig& cfg) {
    const std::size_t steps = cfg.grid > 0 ? cfg.grid : 401;
    SweepOptions opts;
    opts.threads = cfg.threads;
    namespace fs = std::filesystem;
    if (!cfg.out.empty()) fs::create_directories(cfg.out);

    ordered_json summary;
    summary["amax"] = num(cfg.amax);
    summary["dims"] = ordered_json::array();
    for (int m : cfg.dims) {
        BifurcationDiagram d;
        try {
            d = sweep_branch(m, cfg.amax, steps, opts);
        } catch (const Error& e) {
            throw NoConvergence("diagram sweep for m = " + std::to_string(m) + ": " + e.what());
        }
        ordered_json entry;
        entry["m"] = m;
        entry["lambda_star"] = num(lambda_star(m, cfg.amax));
        entry["regime"] = to_string(classify(d));
        ordered_json folds = ordered_json::array();
        for (const auto& f : d.folds) folds.push_back({{"a", num(f.a)}, {"lambda", num(f.lambda)}, {"maximum", f.maximum}});
        entry["folds"] = folds;
        if (m >= 3) {
            entry["level"] = num(singular_level(m));
            entry["level_crossings"] = d.level_crossings.size();
        } else {
            entry["level"] = nullptr;
            entry["level_crossings"] = nullptr;
        }
        summary["dims"].push_back(entry);

        if (!cfg.out.empty()) {
            const fs::path path = fs::path(cfg.out) / ("diagram_m" + std::to_string(m) + "." + cfg.format);
            Sink sink(path.string());
            if (cfg.format == "csv")
                write_diagram_csv(sink.os(), d);
            else
                write_diagram_json(sink.os(), d);
        }
    }
    const std::string text = summary.dump(2) + "\n";
    if (!cfg.out.empty()) {
        Sink sink((std::filesystem::path(cfg.out) / "summary.json").string());
        sink.os() << text;
    }
    std::cout << text;
    return 0;
}

int run_spectrum(const RunConfig& cfg) {
    const int m = single_dim(cfg);
    require_lambda(cfg);
    const Branch b = pick_branch(cfg, m, 1, radial_intervals(cfg));
    LinearizedSpectrum s;
    try {
        s = full_spectrum(m, potential_of(b.profile), cfg.count);
    } catch (const Error& e) {
        throw NoConvergence(std::string("spectrum: ") + e.what());
    }
    Sink sink(cfg.out);
    if (cfg.format == "json") {
        write_spectrum_json(sink.os(), s);
    } else {
        sink.os() << "l,multiplicity,k,eigenvalue\n";
        for (const auto& mode : s.modes)
            for (std::size_t k = 0; k < mode.eigenvalues.size(); ++k)
                sink.os() << mode.l << ',' << mode.multiplicity << ',' << k + 1 << ',' << format_number(mode.eigenvalues[k]) << '\n';
    }
    return 0;
}

int run_resonance(const RunConfig& cfg) {
    const int m = single_dim(cfg);
    require_lambda(cfg);
    const double ls = lambda_star(m);
    if (cfg.lambda >= ls)
        throw InvalidArgument("resonance needs an unstable solution, which exists only for lambda < lambda*(" +
                              std::to_string(m) + ") = " + format_number(ls) + "; got lambda = " + format_number(cfg.lambda));
    const Branch b = pick_branch(cfg, m, 2, radial_intervals(cfg));
    const auto spec = full_spectrum(m, potential_of(b.profile), cfg.count);
    if (!(spec.merged.front() < 0.0))
        throw InvalidArgument("branch " + std::to_string(b.index) + " is stable (mu1 = " + format_number(spec.merged.front()) +
                              "); choose an unstable branch");
    std::vector<double> eps = cfg.eps;
    if (eps.empty()) eps = {0.1, 0.05, 0.025, 0.0125};
    const ResonanceReport rep =
        resonance_report(spec.merged, geometry(cfg, m).length, eps, cfg.exponent, cfg.eps_min);
    Sink sink(cfg.out);
    if (cfg.format == "json")
        write_resonance_json(sink.os(), rep);
    else
        write_resonance_csv(sink.os(), rep);
    return 0;
}

int run_tube(const RunConfig& cfg) {
    const int m = single_dim(cfg);
    require_lambda(cfg);
    if (m > 2) throw InvalidArgument("tube solves need fiber dimension 1 or 2");
    if (cfg.eps.size() != 1) throw InvalidArgument("tube: exactly one --eps value expected");
    const double eps = cfg.eps.front();
    const CircleGeometry geom = geometry(cfg, m);
    geom.check_eps(eps);

    const Branch b = pick_branch(cfg, m, 1, 2048);
    const double mu = mu1(m, potential_of(b.profile));
    const bool stable = mu > 0.0;
    TubeGrid grid = TubeGrid::defaults(geom, eps);
    if (cfg.nt > 0) grid.n_t = cfg.nt;
    if (cfg.grid > 0) grid.n1 = cfg.grid;
    if (cfg.ntheta > 0) grid.n2 = cfg.ntheta;
    grid = TubeGrid::make(geom, eps, grid.n_t, grid.n1, grid.n2);

    std::ofstream log_file;
    FixedPointOptions opts;
    opts.mode = stable ? SolutionMode::Stable : SolutionMode::Unstable;
    opts.tol = cfg.tol;
    if (!cfg.log_out.empty()) {
        log_file.open(cfg.log_out);
        if (!log_file) throw InvalidArgument("cannot open log file " + cfg.log_out);
        opts.log = JsonLinesLog(log_file);
    }

    FixedPointResult res;
    const FermiOperator op = linearized_operator(b.profile, grid);
    try {
        res = fixed_point_solve(b.profile, grid, opts);
    } catch (const NearSingular& e) {
        throw NearSingular(std::string(e.what()) + "; run `gelfand resonance` with the same --dim/--lambda/--radius to list resonant eps",
                           e.gap());
    }
    const TubeEigenResult least = tube_eigs(op, 1);
    const ResidualReport r0 = residual(build_u_eps(b.profile, grid), b.profile.lambda);

    ordered_json j;
    j["m"] = m;
    j["lambda"] = num(b.profile.lambda);
    j["branch"] = b.index;
    j["centre_value"] = num(b.profile.a);
    j["mu1"] = num(mu);
    j["mode"] = stable ? "stable" : "unstable";
    j["eps"] = num(eps);
    j["curvature"] = num(geom.curvature);
    j["grid"] = {{"n_t", grid.n_t}, {"n1", grid.n1}, {"n2", grid.n2}};
    j["iterations"] = res.iterations;
    j["v_sup"] = num(res.v_sup);
    j["v_over_eps"] = num(res.v_over_eps);
    j["contraction"] = num(res.contraction);
    j["ball_radius"] = num(res.ball_radius);
    j["residual_sup"] = num(res.residual_sup);
    j["initial_residual_sup"] = num(r0.sup);
    j["initial_residual_over_eps"] = num(r0.constant);
    j["least_eigenvalue"] = num(least.values.front());
    j["negative_count"] = negative_count(op);
    if (stable) {
        const SupersolutionProfile W = solve_supersolution(m, potential_of(b.profile));
        ordered_json checks;
        checks["supersolution_bound"] = num(res.b_w);
        checks["fixed_point_bound"] = num(res.b_fp);
        try {
            const WEpsReport w = build_w_eps(W, b.profile, grid);
            checks["w_inequality_sup"] = num(w.sup_lhs);
            checks["w_inequality_holds"] = true;
            checks["w_inequality_eps0"] = num(w.eps0);
            const LinearizedInverse inv(op, opts.linear);
            const auto phi = inv.solve(r0.values);
            const double excess = comparison_excess(phi, r0.values, w.field);
            checks["comparison_excess"] = num(excess);
            checks["comparison_holds"] = excess <= 0.0;
        } catch (const InequalityFails& e) {
            checks["w_inequality_holds"] = false;
            checks["w_inequality_message"] = e.what();
        }
        j["checks"] = checks;
    }

    if (!cfg.field_out.empty()) {
        Sink f(cfg.field_out);
        if (cfg.field_out.size() >= 5 && cfg.field_out.ends_with(".gtub"))
            write_field_binary(f.os(), res.u);
        else
            write_field_csv(f.os(), res.u);
    }

    Sink sink(cfg.out);
    if (cfg.format == "json") {
        sink.os() << j.dump(2) << '\n';
    } else {
        sink.os() << "quantity,value\n";
        for (const auto& [k, v] : j.items()) {
            if (v.is_object()) {
                for (const auto& [k2, v2] : v.items()) sink.os() << k << '.' << k2 << ',' << (v2.is_string() ? v2.get<std::string>() : v2.dump()) << '\n';
            } else {
                sink.os() << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
            }
        }
    }
    return 0;
}

int run_morse(const RunConfig& cfg) {
    const int m = single_dim(cfg);
    require_lambda(cfg);
    std::vector<double> eps = cfg.eps;
    if (eps.empty()) eps = {0.2, 0.1, 0.05, 0.025};
    const CircleGeometry geom = geometry(cfg, m);
    const Branch b = pick_branch(cfg, m, 1, radial_intervals(cfg));
    const auto spec = full_spectrum(m, potential_of(b.profile), cfg.count);

    std::vector<double> product, tube;
    for (double e : eps) {
        product.push_back(static_cast<double>(morse_index_estimate(spec.merged, geom.length, e)));
        if (m <= 2) {
            TubeGrid g = TubeGrid::defaults(geom, e);
            g = TubeGrid::make(geom, e, TubeGrid::resolving_nt(geom, e, spec.merged.front()), cfg.grid > 0 ? cfg.grid : g.n1, g.n2);
            tube.push_back(static_cast<double>(negative_count(linearized_operator(b.profile, g))));
        }
    }
    const bool fit = std::all_of(product.begin(), product.end(), [](double v) { return v > 0.0; }) && eps.size() >= 2;
    const double exponent = fit ? -power_law_exponent(eps, product) : std::numeric_limits<double>::quiet_NaN();

    Sink sink(cfg.out);
    if (cfg.format == "json") {
        ordered_json j;
        j["m"] = m;
        j["lambda"] = num(b.profile.lambda);
        j["branch"] = b.index;
        j["mu1"] = num(spec.merged.front());
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < eps.size(); ++i) {
            ordered_json row{{"eps", num(eps[i])}, {"product_index", static_cast<std::size_t>(product[i])}};
            row["tube_index"] = m <= 2 ? ordered_json(static_cast<std::size_t>(tube[i])) : ordered_json(nullptr);
            rows.push_back(row);
        }
        j["rows"] = rows;
        j["exponent"] = num(exponent);
        sink.os() << j.dump(2) << '\n';
    } else {
        sink.os() << "eps,product_index,tube_index\n";
        for (std::size_t i = 0; i < eps.size(); ++i) {
            sink.os() << format_number(eps[i]) << ',' << static_cast<std::size_t>(product[i]) << ',';
            if (m <= 2) sink.os() << static_cast<std::size_t>(tube[i]);
            sink.os() << '\n';
        }
        std::cerr << "fitted exponent of index vs 1/eps: " << format_number(exponent) << '\n';
    }
    return 0;
}

}  // namespace

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string part;
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("dimension list: cannot read '" + s + "'");
        }
        if (used != s.size()) throw InvalidArgument("dimension list: cannot read '" + s + "'");
        return v;
    };
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            dims.push_back(to_int(part));
            continue;
        }
        const int lo = to_int(part.substr(0, dots)), hi = to_int(part.substr(dots + 2));
        if (hi < lo) throw InvalidArgument("dimension range '" + part + "' is empty");
        for (int m = lo; m <= hi; ++m) dims.push_back(m);
    }
    return dims;
}

void validate(RunConfig& cfg) {
    cfg.dims = parse_dims(cfg.dims_text);
    if (cfg.dims.empty()) throw InvalidArgument("no dimensions given (use --dim 2 or --dims 1..12)");
    for (int m : cfg.dims)
        if (m < 1 || m > kMaxDim) throw InvalidArgument("dimension " + std::to_string(m) + " outside 1.." + std::to_string(kMaxDim));
    if (cfg.format != "csv" && cfg.format != "json") throw InvalidArgument("--format must be csv or json");
    if (std::isfinite(cfg.lambda) && cfg.lambda < 0.0) throw InvalidArgument("--lambda must be >= 0");
    if (!(cfg.radius > 0.0) || !std::isfinite(cfg.radius)) throw InvalidArgument("--radius must be positive");
    if (!(cfg.amax > 0.0)) throw InvalidArgument("--amax must be positive");
    for (double e : cfg.eps)
        if (!(e > 0.0) || !std::isfinite(e)) throw InvalidArgument("--eps values must be positive");
    if (cfg.exponent < 2) throw InvalidArgument("--exponent must be >= 2");
    if (!(cfg.eps_min > 0.0) || !(cfg.eps_min < 1.0)) throw InvalidArgument("--eps-min must lie in (0, 1)");
    if (!(cfg.tol > 0.0)) throw InvalidArgument("--tol must be positive");
    if (cfg.count == 0) throw InvalidArgument("--count must be positive");
    if (cfg.branch < 0) throw InvalidArgument("--branch must be >= 1");
}

int run(const RunConfig& cfg) {
    if (cfg.subcommand == "diagram") return run_diagram(cfg);
    if (cfg.subcommand == "spectrum") return run_spectrum(cfg);
    if (cfg.subcommand == "resonance") return run_resonance(cfg);
    if (cfg.subcommand == "tube") return run_tube(cfg);
    if (cfg.subcommand == "morse") return run_morse(cfg);
    throw InvalidArgument("unknown subcommand " + cfg.subcommand);
}

}  // namespace gelfand::cli
