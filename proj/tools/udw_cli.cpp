// Command-line front end: parameter sweeps (CSV + JSON sidecar) and
// consistency-check suites on top of the library. Exit codes: 0 success,
// 1 usage/config error, 2 computation error, 3 check-suite failure.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "udw/earlytime.hpp"
#include "udw/entanglement.hpp"
#include "udw/kernels.hpp"
#include "udw/latetime.hpp"
#include "udw/params.hpp"
#include "udw/twodetector.hpp"

#ifndef UDW_BUILD_ID
#define UDW_BUILD_ID "unknown"
#endif

namespace {

struct RunConfig {
    double mass = 1.0;
    double omega_r = 5.0;
    double gamma = 0.02;
    double image_distance = 1.0;
    double cutoff = 1000.0;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
};

const char* const kConfigKeys[7] = {"mass",   "omega_r", "gamma",  "image_distance",
                                    "cutoff", "abs_tol", "rel_tol"};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Flat key=value file; '#' starts a comment; unknown keys are fatal.
std::map<std::string, double> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::map<std::string, double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        bool known = false;
        for (const char* k : kConfigKeys) known = known || key == k;
        if (!known)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": unknown config key '" + key + "'");
        std::size_t used = 0;
        double parsed;
        try {
            parsed = std::stod(val, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": bad numeric value '" + val + "'");
        }
        if (used != val.size())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": bad numeric value '" + val + "'");
        out[key] = parsed;
    }
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[std::size_t(i)] = n == 1 ? lo : lo + double(i) * (hi - lo) / double(n - 1);
    return out;
}

void write_sidecar(const std::string& csv_path, const RunConfig& cfg,
                   const std::vector<std::string>& schema, double runtime_seconds) {
    nlohmann::json j;
    j["params"] = {{"mass", cfg.mass},
                   {"omega_r", cfg.omega_r},
                   {"gamma", cfg.gamma},
                   {"image_distance", cfg.image_distance},
                   {"cutoff", cfg.cutoff}};
    j["quadrature"] = {{"abs_tol", cfg.abs_tol}, {"rel_tol", cfg.rel_tol}};
    j["schema"] = schema;
    j["runtime_seconds"] = runtime_seconds;
    j["build_id"] = UDW_BUILD_ID;
    std::ofstream out(csv_path + ".json");
    if (!out) throw std::runtime_error("cannot write sidecar for " + csv_path);
    out << j.dump(2) << "\n";
}

udw::PhysicalParams params_at(const RunConfig& cfg, double L) {
    return udw::make_params(cfg.mass, cfg.omega_r, cfg.gamma, L, cfg.cutoff);
}

int run_early_sweep(const RunConfig& cfg, double l_min, double l_max, int l_count, double t_min,
                    double t_max, int t_count, int order, const std::string& output) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> Ls = linspace(l_min, l_max, l_count);
    const std::vector<double> ts = linspace(t_min, t_max, t_count);
    const std::vector<std::string> schema = {"L",   "t",   "v_qq",   "v_pp",
                                             "v_qp", "det", "purity", "entropy"};
    std::ofstream out(output);
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", output.c_str());
        return 2;
    }
    out << "L,t,v_qq,v_pp,v_qp,det,purity,entropy\n";
    for (double L : Ls) {
        double cur_t = ts.front();
        try {
            const udw::PhysicalParams p = params_at(cfg, L);
            const auto rows = udw::early_covariance_sweep(p, udw::half_space(L), ts, order, true);
            for (const auto& r : rows) {
                cur_t = r.time;
                const double det = udw::covariance_det(r.cov);
                const udw::EntanglementResult ent = udw::entropy_from_covariance(r.cov);
                out << fmt17(L) << ',' << fmt17(r.time) << ',' << fmt17(r.cov.v_qq) << ','
                    << fmt17(r.cov.v_pp) << ',' << fmt17(r.cov.v_qp) << ',' << fmt17(det) << ','
                    << fmt17(ent.purity) << ',' << fmt17(ent.linear_entropy) << '\n';
            }
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: cell (L=%g, t=%g): %s\n", L, cur_t, e.what());
            return 2;
        }
    }
    out.close();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_sidecar(output, cfg, schema, secs);
    return 0;
}

int run_late_sweep(const RunConfig& cfg, double l_min, double l_max, int l_count,
                   const std::string& method, const std::string& output) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> Ls = linspace(l_min, l_max, l_count);
    const std::vector<std::string> schema = {"L", "S_free", "S_half", "delta_exact",
                                             "delta_perturbative"};
    const bool want_exact = method == "exact" || method == "both";
    const bool want_pert = method == "perturbative" || method == "both";
    std::ofstream out(output);
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", output.c_str());
        return 2;
    }
    out << "L,S_free,S_half,delta_exact,delta_perturbative\n";
    for (double L : Ls) {
        try {
            const udw::PhysicalParams p = params_at(cfg, L);
            udw::QuadratureSpec spec = udw::default_late_spec();
            spec.abs_tol = cfg.abs_tol;
            spec.rel_tol = cfg.rel_tol;
            std::string s_free, s_half, d_exact, d_pert;
            if (want_exact) {
                const auto lf = udw::late_covariance_exact(udw::free_space(), p, spec);
                const auto lh = udw::late_covariance_exact(udw::half_space(L), p, spec);
                s_free = fmt17(lf.entropy.linear_entropy);
                s_half = fmt17(lh.entropy.linear_entropy);
                d_exact = fmt17(lh.entropy.linear_entropy - lf.entropy.linear_entropy);
            }
            if (want_pert) d_pert = fmt17(udw::perturbative_corrections(p).delta_entropy);
            out << fmt17(L) << ',' << s_free << ',' << s_half << ',' << d_exact << ',' << d_pert
                << '\n';
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: cell (L=%g): %s\n", L, e.what());
            return 2;
        }
    }
    out.close();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_sidecar(output, cfg, schema, secs);
    return 0;
}

struct CheckLine {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
};

int run_check(const RunConfig& cfg, const std::string& suite) {
    std::vector<CheckLine> lines;
    try {
        const udw::PhysicalParams p = params_at(cfg, cfg.image_distance);
        if (suite == "fdt" || suite == "all") {
            const std::vector<double> grid = udw::default_fdt_grid(p);
            lines.push_back({"fdt free_space", udw::fdt_residual(p, udw::free_space(), grid), 1e-8});
            lines.push_back(
                {"fdt half_space", udw::fdt_residual(p, udw::half_space(cfg.image_distance), grid),
                 1e-8});
        }
        if (suite == "oracle" || suite == "all") {
            const double L = cfg.image_distance;
            const double step = std::min({1e-3, 1.0 / (20.0 * p.omega_r), L / 20.0});
            const udw::ModeTrajectory tr = udw::dde_solve(p, std::nullopt, 3.0 * L, step, true);
            double sup = 0.0;
            for (double t = 0.0; t <= 2.99 * L; t += L / 20.0)
                sup = std::max(sup, std::abs(udw::reflection_series_qa(p, t, 3) - tr.at(t)));
            lines.push_back({"oracle series_vs_dde", sup, 1e-6});
        }
        if (suite == "orders" || suite == "all") {
            const auto rep =
                udw::order_counting_check(p, {0.5, 1.0, 2.0, 4.0}, {0.005, 0.01, 0.02, 0.04});
            lines.push_back({"orders mirror_gamma", std::abs(rep.mirror_gamma_exponent - 1.0), 0.1});
            lines.push_back({"orders pair_gamma", std::abs(rep.pair_gamma_exponent - 2.0), 0.2});
            lines.push_back({"orders envelope_L", std::abs(rep.envelope_L_exponent + 1.0), 0.2});
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: check computation failed: %s\n", e.what());
        return 2;
    }
    bool all_pass = true;
    for (const auto& l : lines) {
        const bool ok = l.residual < l.tol;
        all_pass = all_pass && ok;
        std::printf("%-24s residual=%.6e tol=%.1e %s\n", l.name.c_str(), l.residual, l.tol,
                    ok ? "PASS" : "FAIL");
    }
    return all_pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detector-field entanglement sweeps (free space and half space)"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    int threads = 0;
    app.add_option("--config", config_path, "flat key=value config file");
    auto* o_mass = app.add_option("--mass", cfg.mass, "detector mass");
    auto* o_omega = app.add_option("--omega_r", cfg.omega_r, "renormalized frequency");
    auto* o_gamma = app.add_option("--gamma", cfg.gamma, "damping rate");
    auto* o_dist = app.add_option("--image_distance", cfg.image_distance,
                                  "detector-image distance (half space)");
    auto* o_cutoff = app.add_option("--cutoff", cfg.cutoff, "frequency cutoff");
    auto* o_abs = app.add_option("--abs_tol", cfg.abs_tol, "quadrature absolute tolerance");
    auto* o_rel = app.add_option("--rel_tol", cfg.rel_tol, "quadrature relative tolerance");
    app.add_option("--threads", threads, "worker threads (0 = all available)");
    app.footer("Precedence: flags > config file > built-in defaults.\n"
               "Sweeps write <output> (CSV) and <output>.json (metadata sidecar).");

    auto* early = app.add_subcommand("early-sweep", "transient covariance over an (L, t) grid");
    double l_min = 0.5, l_max = 4.5, t_min = 0.0, t_max = 25.0;
    int l_count = 20, t_count = 20, order = udw::kFullOrder;
    std::string early_out;
    early->add_option("--l-min", l_min, "smallest image distance");
    early->add_option("--l-max", l_max, "largest image distance");
    early->add_option("--l-count", l_count, "grid points in L")->check(CLI::Range(2, 100000));
    early->add_option("--t-min", t_min, "earliest sample time");
    early->add_option("--t-max", t_max, "latest sample time");
    early->add_option("--t-count", t_count, "grid points in t")->check(CLI::Range(2, 100000));
    early->add_option("--order", order, "reflection order (0 = before first image)")
        ->check(CLI::Range(0, 1));
    early->add_option("-o,--output", early_out, "CSV output path")->required();

    auto* late = app.add_subcommand("late-sweep", "stationary entropies over an L grid");
    double ll_min = 0.5, ll_max = 10.0;
    int ll_count = 20;
    std::string method = "both", late_out;
    late->add_option("--l-min", ll_min, "smallest image distance");
    late->add_option("--l-max", ll_max, "largest image distance");
    late->add_option("--l-count", ll_count, "grid points in L")->check(CLI::Range(2, 100000));
    late->add_option("--method", method, "columns to fill")
        ->check(CLI::IsMember({"exact", "perturbative", "both"}));
    late->add_option("-o,--output", late_out, "CSV output path")->required();

    auto* check = app.add_subcommand("check", "internal consistency suites");
    std::string suite = "all";
    check->add_option("--suite", suite, "which suite to run")
        ->check(CLI::IsMember({"fdt", "oracle", "orders", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!config_path.empty()) {
            const auto file = parse_config_file(config_path);
            auto apply = [&](const char* key, CLI::Option* opt, double& slot) {
                const auto it = file.find(key);
                if (it != file.end() && opt->count() == 0) slot = it->second;
            };
            apply("mass", o_mass, cfg.mass);
            apply("omega_r", o_omega, cfg.omega_r);
            apply("gamma", o_gamma, cfg.gamma);
            apply("image_distance", o_dist, cfg.image_distance);
            apply("cutoff", o_cutoff, cfg.cutoff);
            apply("abs_tol", o_abs, cfg.abs_tol);
            apply("rel_tol", o_rel, cfg.rel_tol);
        }
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
        // surface parameter problems as usage errors before any computation
        (void)params_at(cfg, cfg.image_distance);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (early->parsed())
            return run_early_sweep(cfg, l_min, l_max, l_count, t_min, t_max, t_count, order,
                                   early_out);
        if (late->parsed()) return run_late_sweep(cfg, ll_min, ll_max, ll_count, method, late_out);
        if (check->parsed()) return run_check(cfg, suite);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
