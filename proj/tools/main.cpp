// supkern: batch front-end for the envelope/estimator/verifier toolkit.
//
// Commands: envelope, survival, kernel, green, verify.  Flags mirror config
// keys 1:1 (flat key=value file via --config; command-line flags win).
// Exit codes: 0 success, 2 verdict violated, 1 usage or runtime error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "supkern/exterior_dhk.hpp"
#include "supkern/verify.hpp"

using namespace supkern;

namespace {

struct CommonOpts {
    int d = 3;
    double beta = 1.0, kappa = 1.0;
    std::string pot_form = "canonical";
    double pot_c = 1.0, pot_theta = 2.0;
    int pot_sign = 1;
    McConfig mc;
    int pde_npd = 200;
    double pde_dt = 2e-4, pde_rmin = 1e-3;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out, format = "csv";
};

template <typename T>
CLI::Option* opt_last(CLI::App* cmd, const std::string& name, T& var,
                      const std::string& desc) {
    return cmd->add_option(name, var, desc)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    opt_last(cmd, "--d", o.d, "dimension");
    opt_last(cmd, "--beta", o.beta, "singularity exponent beta");
    opt_last(cmd, "--kappa", o.kappa, "killing strength kappa");
    opt_last(cmd, "--potential.form", o.pot_form,
                    "canonical|perturbed|critical|zero");
    opt_last(cmd, "--potential.C", o.pot_c, "perturbation strength");
    opt_last(cmd, "--potential.theta", o.pot_theta, "perturbation exponent");
    opt_last(cmd, "--potential.sign", o.pot_sign, "+1 or -1");
    opt_last(cmd, "--mc.paths", o.mc.paths, "Monte Carlo paths");
    opt_last(cmd, "--mc.dt", o.mc.dt, "base time step");
    opt_last(cmd, "--mc.substep_theta", o.mc.substep_theta, "singularity substep rule");
    opt_last(cmd, "--mc.weight_floor", o.mc.weight_floor, "log-weight cutoff (<= 0)");
    opt_last(cmd, "--mc.r_min", o.mc.r_min, "hard cutoff radius");
    opt_last(cmd, "--pde.nodes_per_decade", o.pde_npd, "radial nodes per decade");
    opt_last(cmd, "--pde.dt", o.pde_dt, "PDE time step");
    opt_last(cmd, "--pde.r_min", o.pde_rmin, "inner grid cutoff");
    opt_last(cmd, "--seed", o.seed, "RNG seed");
    opt_last(cmd, "--threads", o.threads, "parallelism degree");
    opt_last(cmd, "--out", o.out, "output file path");
    opt_last(cmd, "--format", o.format, "csv|json");
}

ModelParams params_of(const CommonOpts& o) {
    ModelParams p{o.d, o.beta, o.kappa};
    p.validate();
    return p;
}

Potential potential_of(const CommonOpts& o) {
    const ModelParams p = params_of(o);
    if (o.pot_form == "canonical") return Potential::canonical(p);
    if (o.pot_form == "perturbed")
        return Potential::perturbed(p, o.pot_c, o.pot_theta, o.pot_sign);
    if (o.pot_form == "critical") return Potential::critical(p, o.pot_c, o.pot_sign);
    if (o.pot_form == "zero") return Potential::zero(p);
    throw CLI::ValidationError("--potential.form", "unknown form '" + o.pot_form + "'");
}

McConfig mc_of(const CommonOpts& o) {
    McConfig c = o.mc;
    c.seed = o.seed;
    c.threads = o.threads;
    c.validate();
    return c;
}

VerifyOptions verify_of(const CommonOpts& o) {
    VerifyOptions v;
    v.mc = mc_of(o);
    v.nodes_per_decade = o.pde_npd;
    v.pde_dt = o.pde_dt;
    v.pde_r_min = o.pde_rmin;
    return v;
}

Point parse_point(int d, const std::string& s) {
    Point p;
    p.d = d;
    size_t pos = 0;
    int i = 0;
    while (pos < s.size() && i < d) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        p.v[i++] = std::stod(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return p;
}

void write_out(const CommonOpts& o, const std::string& csv, const std::string& json) {
    const std::string& body = o.format == "json" ? json : csv;
    if (o.out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + o.out);
    f << body;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        v.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return v;
}

int run_envelope(const CommonOpts& o, const std::string& eval, double r, double t,
                 const std::string& xs, const std::string& ys, double big_r, double bp,
                 const EnvelopeConstants& c, double la, double lb) {
    const ModelParams p = params_of(o);
    double value = 0.0;
    if (eval == "h") value = h_boundary(p, r);
    else if (eval == "log_h") value = log_h_boundary(p, r);
    else if (eval == "h_tilde") value = h_tilde(p, r);
    else if (eval == "h_tilde_prime") value = h_tilde_prime(p, r);
    else if (eval == "H") value = big_h(p, t, r);
    else if (eval == "psi") value = psi_exterior(p.d, big_r, t, r);
    else if (eval == "eta0") value = eta0(p);
    else if (eval == "eta1") value = eta1(p);
    else if (eval == "log_shift") value = log_shift(r);
    else if (eval == "u1") value = barrier_u(BarrierKind::u1, p, bp, r);
    else if (eval == "u2") value = barrier_u(BarrierKind::u2, p, bp, r);
    else if (eval == "tradeoff") value = sup_tradeoff_constant(la, lb, p.beta);
    else if (eval == "q")
        value = gaussian_q(p.d, t, parse_point(p.d, xs), parse_point(p.d, ys));
    else if (eval == "small_time")
        value = small_time_envelope(p, c, t, parse_point(p.d, xs), parse_point(p.d, ys)).value;
    else if (eval == "large_time")
        value = large_time_envelope(p, c, t, parse_point(p.d, xs), parse_point(p.d, ys)).value;
    else if (eval == "green")
        value = green_envelope(p, c, parse_point(p.d, xs), parse_point(p.d, ys)).value;
    else
        throw CLI::ValidationError("--eval", "unknown evaluation '" + eval + "'");
    std::printf("%.6g\n", value);
    if (!o.out.empty()) {
        CommonOpts oo = o;
        write_out(oo, "value\n" + format_float(value) + "\n",
                  "{\n  \"value\": " + format_float(value) + "\n}\n");
    }
    return 0;
}

int run_survival(const CommonOpts& o, double t, double r, const std::string& source) {
    const ModelParams p = params_of(o);
    const Potential V = potential_of(o);
    if (source == "mc") {
        const auto est = survival_probability(V, axis_point(p.d, r), t, mc_of(o));
        if (est.zero_weight_frac > 0.999)
            std::fprintf(stderr, "warning: %.1f%% zero-weight paths; the estimate is "
                                 "low-information, prefer --source pde\n",
                         100.0 * est.zero_weight_frac);
        write_out(o, to_csv(est), to_json(est));
        return 0;
    }
    const double r_max = 8.0 * std::sqrt(t) + 1.0;
    RadialGrid g = with_anchors(
        make_radial_grid(o.pde_rmin, r_max, o.pde_npd, o.pde_dt, t > 16 ? 5e-3 : 0.0), {r});
    const auto u = solve_survival(V, p, g, t);
    std::vector<std::pair<double, double>> table(g.r.size());
    for (size_t i = 0; i < g.r.size(); ++i) table[i] = {g.r[i], u[i]};
    write_out(o, to_csv(table, "r", "u"), to_json(table, "r", "u"));
    if (r > 0) std::fprintf(stderr, "u(%g, %g) = %.17g\n", t, r, grid_interp(g, u, r));
    return 0;
}

int run_kernel(const CommonOpts& o, double t, const std::string& xs, const std::string& ys,
               const std::string& source, double exterior_R) {
    const ModelParams p = params_of(o);
    const Point x = parse_point(p.d, xs), y = parse_point(p.d, ys);
    McEstimate est;
    if (exterior_R > 0) {
        // V = 0 Dirichlet kernel outside the closed ball of radius exterior_R
        if (source == "exact") {
            if (p.d != 1)
                throw CLI::ValidationError("--source", "exact exterior kernel is d=1 only");
            est.mean = dhk_exact_1d(exterior_R, t, std::abs(x.v[0]), std::abs(y.v[0]));
            est.n = 1;
        } else {
            est = dhk_bridge_mc({exterior_R, p.d}, t, x, y, mc_of(o));
        }
        write_out(o, to_csv(est), to_json(est));
        return 0;
    }
    const Potential V = potential_of(o);
    if (source == "mc") {
        est = heat_kernel(V, t, x, y, mc_of(o));
        if (est.zero_weight_frac > 0.999 && est.mean > 0.0)
            std::fprintf(stderr, "warning: %.1f%% zero-weight paths; the estimate is "
                                 "low-information, prefer --source pde\n",
                         100.0 * est.zero_weight_frac);
    } else {
        if (p.d != 1) throw CLI::ValidationError("--source", "pde kernel is d=1 only");
        const double r_max = 8.0 * std::sqrt(t) + 1.0;
        RadialGrid g = with_anchors(
            make_radial_grid(o.pde_rmin, r_max, o.pde_npd, o.pde_dt),
            {std::abs(x.v[0]), std::abs(y.v[0])});
        est.mean = x.v[0] * y.v[0] < 0
                       ? 0.0
                       : solve_kernel_1d(V, t, std::abs(x.v[0]), std::abs(y.v[0]), g);
        est.n = 1;
    }
    write_out(o, to_csv(est), to_json(est));
    return 0;
}

int run_green(const CommonOpts& o, const std::string& xs, const std::string& ys,
              double t_max) {
    const ModelParams p = params_of(o);
    const Potential V = potential_of(o);
    const auto g = green_mc_detail(V, parse_point(p.d, xs), parse_point(p.d, ys),
                                   mc_of(o), t_max);
    if (g.truncated_tail)
        std::fprintf(stderr, "warning: d <= 2 has no convergent free tail; "
                             "integral truncated at t_max\n");
    write_out(o, to_csv(g.estimate), to_json(g.estimate));
    return 0;
}

int run_verify(const CommonOpts& o, const std::string& suite, const std::string& ts,
               const std::string& rxs, const std::string& rys, double cap) {
    const ModelParams p = params_of(o);
    const Potential V = potential_of(o);
    VerifyOptions opt = verify_of(o);
    if (cap > 0) opt.spread_cap = std::log(cap);

    if (suite == "small_time" || suite == "large_time" || suite == "green") {
        GridSpec grid;
        grid.potential = V;
        grid.t_values = ts.empty() ? std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0}
                                   : parse_list(ts);
        grid.radii_x = rxs.empty() ? std::vector<double>{0.1, 0.3, 1.0, 3.0}
                                   : parse_list(rxs);
        grid.radii_y = rys.empty() ? grid.radii_x : parse_list(rys);
        if (suite != "small_time") opt.source = NumericSource::mc;
        const FitKind kind = suite == "small_time"  ? FitKind::small_time
                             : suite == "large_time" ? FitKind::large_time
                                                     : FitKind::green;
        const auto rep = fit_constants(kind, grid, opt);
        write_out(o, to_csv(rep), to_json(rep));
        return rep.verdict == Verdict::bounded ? 0 : 2;
    }
    if (suite == "sandwich") {
        std::vector<std::pair<double, double>> tr;
        for (double t : (ts.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.4}
                                    : parse_list(ts)))
            tr.emplace_back(t, 0.5 * eta0(p) * std::pow(t, 1.0 / (2.0 + p.beta)));
        const auto rep = survival_sandwich(V, tr, opt);
        write_out(o, to_csv(rep.upper) + to_csv(rep.lower),
                  to_json(rep.upper) + to_json(rep.lower));
        return rep.upper.verdict == Verdict::bounded ? 0 : 2;
    }
    if (suite == "decay") {
        const auto radii = rxs.empty() ? std::vector<double>{0.20, 0.16, 0.13, 0.11, 0.09}
                                       : parse_list(rxs);
        const double t = ts.empty() ? 0.5 : parse_list(ts).front();
        const auto rep = decay_slope(V, t, radii, opt);
        std::printf("slope %.17g (target %.17g)\n", rep.slope,
                    -std::sqrt(p.kappa) / p.beta);
        write_out(o, to_csv(rep.points, "r_pow_minus_beta", "log_u"),
                  to_json(rep.points, "r_pow_minus_beta", "log_u"));
        return std::abs(rep.slope + std::sqrt(p.kappa) / p.beta) <
                       0.1 * std::sqrt(p.kappa) / p.beta
                   ? 0
                   : 2;
    }
    if (suite == "counterexample") {
        const auto radii = rxs.empty()
                               ? std::vector<double>{0.10, 0.07, 0.05, 0.035, 0.025}
                               : parse_list(rxs);
        const double t = ts.empty() ? 0.5 : parse_list(ts).front();
        const auto rep = counterexample_exponent(V, t, radii, opt);
        std::printf("exponent %.17g\n", rep.slope);
        write_out(o, to_csv(rep.points, "log_r", "log_u_over_h"),
                  to_json(rep.points, "log_r", "log_u_over_h"));
        const bool critical = V.has_tag(ClassTag::critical_lower);
        return (critical ? rep.slope > 0.05 : std::abs(rep.slope) <= 0.05) ? 0 : 2;
    }
    if (suite == "psi_ratio") {
        GridSpec grid;
        grid.t_values = ts.empty() ? std::vector<double>{0.01, 0.1, 1.0, 10.0, 100.0}
                                   : parse_list(ts);
        grid.radii_x = rxs.empty() ? std::vector<double>{1.1, 1.5, 3.0, 20.0}
                                   : parse_list(rxs);
        grid.radii_y = rys.empty() ? std::vector<double>{1.2, 2.0, 8.0} : parse_list(rys);
        const auto rep = psi_ratio_report({1.0, p.d}, grid, mc_of(o));
        write_out(o, to_csv(rep), to_json(rep));
        return rep.verdict == Verdict::bounded ? 0 : 2;
    }
    if (suite == "large_time_factor") {
        // scaled survival u(t, r) * sqrt(t) (d=1) or * Log sqrt(t) (d=2) must stay
        // within a bounded factor across decades of t
        const auto times = ts.empty() ? std::vector<double>{1e2, 1e3, 1e4} : parse_list(ts);
        const double r = rxs.empty() ? 5.0 : parse_list(rxs).front();
        RadialGrid g = with_anchors(
            make_radial_grid(o.pde_rmin, 8.0 * std::sqrt(times.back()) + 1.0, o.pde_npd,
                             1e-3, 5e-3),
            {r});
        const auto snaps = solve_survival_snapshots(V, p, g, times);
        std::vector<std::pair<double, double>> table;
        double lo = 1e300, hi = 0.0;
        for (size_t k = 0; k < times.size(); ++k) {
            const double u = grid_interp(g, snaps[k], r);
            const double scaled = p.d == 2 ? u * log_shift(std::sqrt(times[k]))
                                           : u * std::sqrt(times[k]);
            table.emplace_back(times[k], scaled);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
        write_out(o, to_csv(table, "t", "scaled_survival"),
                  to_json(table, "t", "scaled_survival"));
        std::printf("variation factor %.17g\n", hi / lo);
        return hi / lo < 3.0 ? 0 : 2;
    }
    if (suite == "barriers") {
        std::string csv = "d,beta,kappa,R1,R2\n";
        bool ok = true;
        for (int d : {1, 2, 3})
            for (double beta : {0.5, 1.0, 2.0})
                for (double kappa : {0.5, 1.0, 4.0}) {
                    const ModelParams q{d, beta, kappa};
                    auto Vc = Potential::canonical(q);
                    const double r1 = barrier_radius(BarrierKind::u1, Vc, beta / 2);
                    const double r2 = barrier_radius(BarrierKind::u2, Vc, beta / 2);
                    ok = ok && r1 >= 0.02 && r2 >= 0.02;
                    csv += std::to_string(d) + "," + format_float(beta) + "," +
                           format_float(kappa) + "," + format_float(r1) + "," +
                           format_float(r2) + "\n";
                }
        write_out(o, csv, csv);
        return ok ? 0 : 2;
    }
    throw CLI::ValidationError("--suite", "unknown suite '" + suite + "'");
}

}  // namespace

// flat key=value config support: config-derived flags are spliced in front of
// the user's flags, and TakeLast makes explicit flags win
std::vector<std::string> splice_config(int argc, char** argv) {
    std::vector<std::string> args;
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) {
            config_path = argv[++i];
            continue;
        }
        if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
            continue;
        }
        args.push_back(std::move(a));
    }
    if (config_path.empty()) return args;
    std::ifstream f(config_path);
    if (!f) throw std::runtime_error("cannot read config file " + config_path);
    std::vector<std::string> cfg;
    std::string line;
    while (std::getline(f, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string v) {
            const auto b = v.find_first_not_of(" \t\r");
            const auto e = v.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        cfg.push_back("--" + key);
        cfg.push_back(val);
    }
    // insert after the subcommand token
    std::vector<std::string> out;
    bool placed = false;
    for (auto& a : args) {
        out.push_back(a);
        if (!placed && !a.empty() && a[0] != '-') {
            out.insert(out.end(), cfg.begin(), cfg.end());
            placed = true;
        }
    }
    if (!placed)
        throw std::runtime_error("--config requires a command, e.g. 'kernel'");
    return out;
}

int main(int argc, char** argv) {
    CLI::App app{"supercritical-killing heat kernel toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string eval, xs = "1", ys = "2", source = "pde", suite, ts, rxs, rys;
    double r = 1.0, t = 1.0, big_r = 1.0, bp = 0.5, t_max = 64.0, la = 1.0, lb = 1.0;
    double cap = 0.0, exterior_R = 0.0;
    EnvelopeConstants c;

    auto* env = app.add_subcommand("envelope", "evaluate closed-form comparison functions");
    add_common(env, o);
    opt_last(env, "--eval", eval, "h|h_tilde|h_tilde_prime|H|psi|eta0|eta1|log_shift|"
                                    "u1|u2|q|small_time|large_time|green|tradeoff")
        ->required();
    opt_last(env, "--r", r, "radius");
    opt_last(env, "--t", t, "time");
    opt_last(env, "--x", xs, "point x (comma separated)");
    opt_last(env, "--y", ys, "point y");
    opt_last(env, "--R", big_r, "exterior ball radius (psi)");
    opt_last(env, "--beta_prime", bp, "barrier beta'");
    opt_last(env, "--c_gauss", c.c_gauss, "Gaussian dilation slot");
    opt_last(env, "--c_kill", c.c_kill, "killing slot");
    opt_last(env, "--eta2", c.eta2, "Green scale slot");
    opt_last(env, "--a", la, "tradeoff constant a");
    opt_last(env, "--b", lb, "tradeoff constant b");

    auto* sur = app.add_subcommand("survival", "survival probability P_x(zeta > t)");
    add_common(sur, o);
    opt_last(sur, "--t", t, "horizon")->required();
    opt_last(sur, "--r", r, "starting radius");
    opt_last(sur, "--source", source, "mc|pde");

    auto* ker = app.add_subcommand("kernel", "heat kernel p(t,x,y)");
    add_common(ker, o);
    opt_last(ker, "--t", t, "time")->required();
    opt_last(ker, "--x", xs, "point x")->required();
    opt_last(ker, "--y", ys, "point y")->required();
    opt_last(ker, "--source", source, "mc|pde (or exact with --exterior_R)");
    opt_last(ker, "--exterior_R", exterior_R,
             "evaluate the V=0 exterior-ball Dirichlet kernel instead");

    auto* grn = app.add_subcommand("green", "Green function G(x,y) by time quadrature");
    add_common(grn, o);
    opt_last(grn, "--x", xs, "point x")->required();
    opt_last(grn, "--y", ys, "point y")->required();
    opt_last(grn, "--t_max", t_max, "quadrature horizon");

    auto* ver = app.add_subcommand("verify", "estimate-verification experiments");
    add_common(ver, o);
    opt_last(ver, "--suite", suite,
                    "small_time|large_time|green|sandwich|decay|counterexample|"
                    "psi_ratio|barriers|large_time_factor")
        ->required();
    opt_last(ver, "--t", ts, "time grid (comma separated)");
    opt_last(ver, "--rx", rxs, "x radii grid");
    opt_last(ver, "--ry", rys, "y radii grid");
    opt_last(ver, "--spread_cap", cap, "verdict threshold (ratio, not log)");

    try {
        auto args = splice_config(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11 consumes in reverse
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (env->parsed()) return run_envelope(o, eval, r, t, xs, ys, big_r, bp, c, la, lb);
        if (sur->parsed()) return run_survival(o, t, r, source);
        if (ker->parsed()) return run_kernel(o, t, xs, ys, source, exterior_R);
        if (grn->parsed()) return run_green(o, xs, ys, t_max);
        if (ver->parsed()) return run_verify(o, suite, ts, rxs, rys, cap);
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
