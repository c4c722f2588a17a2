#include "kch/config.hpp"
#include "kch/errors.hpp"
#include "kch/io.hpp"
#include "kch/kernels.hpp"
#include "kch/selftest.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace kch;

namespace {

struct Options {
    std::string config;
    std::string output_dir;
    std::string nu_list;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

std::vector<double> parse_nu_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !(x >= 0.0))
            throw kch::ConfigError("--nu-list: '" + item + "' is not a non-negative number");
        out.push_back(x);
    }
    if (out.empty()) throw kch::ConfigError("--nu-list: empty list");
    return out;
}

RunConfig load(const Options& o) {
    RunConfig cfg = parse_config(o.config);
    if (!o.output_dir.empty()) cfg.output.directory = o.output_dir;
    if (o.seed) cfg.preset.seed = *o.seed;
    if (!o.quiet) std::cout << "# configuration\n" << describe(cfg) << '\n';
    return cfg;
}

InitialData load_data(const Spectral& sp, const RunConfig& cfg, double* t0) {
    if (cfg.snapshot.empty()) return make_initial_data(sp, cfg.preset);
    const auto snap = load_snapshot(cfg.snapshot);
    if (snap.n1 != cfg.n1 || snap.n2 != cfg.n2 || snap.n3 != cfg.n3)
        throw kch::ConfigError(cfg.snapshot + ": snapshot grid does not match [grid]");
    if (t0) *t0 = snap.t;
    return initial_data_of(snap);
}

// A snapshot taken mid-run has w != 0, so the displacement item is not enforced for it.
void gate(const CompatibilityReport& rep, bool from_snapshot) {
    if (!from_snapshot) return require_compatible(rep);
    CompatibilityReport r = rep;
    r.items[1].passed = true;
    require_compatible(r);
}

int cmd_check(const Options& o) {
    const auto cfg = load(o);
    const Grid g = cfg.grid();
    const Spectral sp(g);
    const auto data = load_data(sp, cfg, nullptr);
    const auto rep = check_compatibility(sp, data.v0, data.w0, data.w1);
    std::cout << rep.summary();
    const auto geom = build_geometry(sp, data.w0, data.w1, cfg.solver.epsilon, cfg.solver.c_min);
    const auto s = smallness_report(sp, geom, cfg.solver.epsilon);
    std::cout << "smallness (epsilon " << format_double(s.epsilon) << "): |E-I| " << format_double(s.E_minus_I_sup)
              << ", |F-I| " << format_double(s.F_minus_I_sup) << ", |J-1| " << format_double(s.J_minus_1_sup)
              << (s.within ? "  within\n" : "  EXCEEDED\n");
    gate(rep, !cfg.snapshot.empty());
    return 0;
}

int cmd_run(const Options& o) {
    const auto cfg = load(o);
    const Grid g = cfg.grid();
    const Spectral sp(g);
    double t0 = 0.0;
    const auto data = load_data(sp, cfg, &t0);
    const auto rep = check_compatibility(sp, data.v0, data.w0, data.w1);
    if (!o.quiet) std::cout << rep.summary();
    gate(rep, !cfg.snapshot.empty());

    SystemState state = initial_state(sp, data, cfg.solver);
    state.t = state.plate.t = state.fluid.t = t0;

    fs::create_directories(cfg.output.directory);
    std::ofstream csv;
    if (cfg.output.csv) {
        csv.open(fs::path(cfg.output.directory) / "diagnostics.csv");
        csv << csv_header() << '\n';
    }
    double M = 0.0;
    bool tripped = false;
    int index = 0;
    auto on_output = [&](const OutputRow& row, const SystemState& s) {
        if (csv.is_open()) csv << csv_row(row) << '\n';
        if (cfg.output.snapshots) {
            char name[32];
            std::snprintf(name, sizeof name, "snapshot_%06d.kch", index);
            save_snapshot((fs::path(cfg.output.directory) / name).string(), snapshot_of(s));
        }
        if (index++ == 0) M = apriori_baseline(row.report);
        const auto mon = apriori_monitor(row.report, M, cfg.apriori_c0);
        if (!mon.passed && !tripped) {
            tripped = true;
            std::cerr << "a priori monitor tripped at t = " << format_double(row.t) << " (" << mon.worst
                      << " above " << format_double(mon.bound) << ")\n";
        }
        if (!o.quiet)
            std::cout << "t = " << format_double(row.t) << "  energy " << format_double(row.report.total_energy)
                      << "  v_h35 " << format_double(row.report.v_h35) << '\n';
    };

    TimeConfig tc = cfg.time;
    const auto res = run_simulation(sp, state, cfg.solver, tc, on_output);
    if (!res.ok) {
        std::cerr << "run stopped at t = " << format_double(res.trip_time.value_or(0.0)) << ": " << res.failure << '\n';
        return res.exit_code;
    }
    if (!o.quiet)
        std::cout << "steps " << res.steps << ", max Picard iterations " << res.max_picard_iterations
                  << ", max interface residual " << format_double(res.max_interface_residual)
                  << ", max divergence " << format_double(res.max_divergence) << '\n';
    return 0;
}

int cmd_sweep(const Options& o) {
    if (o.nu_list.empty()) throw kch::ConfigError("sweep-nu: --nu-list is required");
    const auto nus = parse_nu_list(o.nu_list);
    const auto cfg = load(o);
    const Grid g = cfg.grid();
    const Spectral sp(g);
    const auto data = load_data(sp, cfg, nullptr);
    require_compatible(check_compatibility(sp, data.v0, data.w0, data.w1));

    const auto res = nu_sweep(sp, data, cfg.solver, cfg.time, nus);
    fs::create_directories(cfg.output.directory);
    std::ofstream csv(fs::path(cfg.output.directory) / "sweep.csv");
    csv << sweep_csv_header() << '\n';
    for (const auto& row : res.rows) csv << sweep_csv_row(row) << '\n';
    std::cout << "spread v_h35 " << format_double(res.spread[0]) << ", w_h5 " << format_double(res.spread[1]) << '\n';
    for (const auto& row : res.rows)
        if (!row.ok) {
            std::cerr << "nu = " << format_double(row.nu) << " failed: " << row.failure << '\n';
            return static_cast<int>(kch::FailureClass::Numerics);
        }
    return 0;
}

int cmd_selftest(const Options& o) {
    bool all = true;
    run_selftest([&](const SelftestCheck& c) {
        all = all && c.passed;
        if (!o.quiet || !c.passed) std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
    });
    return all ? 0 : static_cast<int>(kch::FailureClass::Numerics);
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("KCH_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) kernels::set_thread_limit(n);
    }

    CLI::App app{"Euler flow under a Koiter plate: simulation and checks"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* c = sub->add_option("--config", o.config, "INI configuration file");
        if (need_config) c->required();
        sub->add_option("--output-dir", o.output_dir, "overrides [output] directory");
        sub->add_option("--seed", o.seed, "overrides [initial_data] seed");
        sub->add_flag("--quiet", o.quiet, "print failures only");
    };
    auto* run = app.add_subcommand("run", "time-step the coupled system");
    add_common(run, true);
    auto* sweep = app.add_subcommand("sweep-nu", "repeat a run for several damping values");
    add_common(sweep, true);
    sweep->add_option("--nu-list", o.nu_list, "comma-separated nu values")->required();
    auto* check = app.add_subcommand("check", "compatibility and smallness of the initial data");
    add_common(check, true);
    auto* self = app.add_subcommand("selftest", "property suite on small grids");
    add_common(self, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(kch::FailureClass::Config);
    }

    try {
        if (*run) return cmd_run(o);
        if (*sweep) return cmd_sweep(o);
        if (*check) return cmd_check(o);
        return cmd_selftest(o);
    } catch (const kch::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(kch::FailureClass::Numerics);
    }
}
