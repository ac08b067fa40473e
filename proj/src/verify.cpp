#include "supkern/verify.hpp"

#include <algorithm>
#include <cmath>

namespace supkern {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GridPoint {
    double t = 0.0;
    Point x, y;
};

// deterministic direction fan for the sampled angle policy
Point direction_point(int d, double r, int k, int n) {
    Point p;
    p.d = d;
    if (d == 1) {
        p.v[0] = r;
        return p;
    }
    const double phi = 2.0 * 3.14159265358979323846 * k / n;
    if (d == 2) {
        p.v[0] = r * std::cos(phi);
        p.v[1] = r * std::sin(phi);
        return p;
    }
    const double z = n > 1 ? -1.0 + 2.0 * k / (n - 1) : 1.0;  // latitude sweep
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    p.v[0] = r * s * std::cos(phi * 2.399963);  // golden-angle scramble
    p.v[1] = r * s * std::sin(phi * 2.399963);
    p.v[2] = r * z;
    if (d > 3) p.v[3] = 0.0;
    return p;
}

std::vector<GridPoint> build_points(const GridSpec& grid, int d) {
    std::vector<GridPoint> pts;
    const int nang = grid.angle == GridSpec::Angle::sampled
                         ? std::max(1, grid.angle_samples)
                         : 1;
    for (double t : grid.t_values)
        for (double rx : grid.radii_x)
            for (double ry : grid.radii_y)
                for (int k = 0; k < nang; ++k) {
                    GridPoint p;
                    p.t = t;
                    p.x = axis_point(d, rx);
                    if (grid.angle == GridSpec::Angle::sampled && d >= 2) {
                        p.y = direction_point(d, ry, k, nang);
                    } else {
                        const double sy =
                            grid.angle == GridSpec::Angle::antipodal ? -ry : ry;
                        p.y = axis_point(d, d == 1 && grid.same_sign ? ry : sy);
                    }
                    pts.push_back(p);
                }
    return pts;
}

// d=1 kernel values from one forward solve per y-radius, all horizons at once
std::vector<double> pde_kernel_values(const Potential& V, const GridSpec& grid,
                                      const std::vector<GridPoint>& pts,
                                      const VerifyOptions& opt) {
    const double t_max = *std::max_element(grid.t_values.begin(), grid.t_values.end());
    std::vector<double> anchors = grid.radii_x;
    anchors.insert(anchors.end(), grid.radii_y.begin(), grid.radii_y.end());
    const double r_max = 8.0 * std::sqrt(t_max) + 1.0;
    RadialGrid g = with_anchors(
        make_radial_grid(opt.pde_r_min, r_max, opt.nodes_per_decade, opt.pde_dt), anchors);
    std::vector<double> vals(pts.size());
    for (double ry : grid.radii_y) {
        const auto snaps = solve_kernel_1d_snapshots(V, grid.t_values, ry, g);
        for (size_t i = 0; i < pts.size(); ++i) {
            if (pts[i].y.norm() != ry) continue;
            const auto it = std::find(grid.t_values.begin(), grid.t_values.end(), pts[i].t);
            const size_t k = it - grid.t_values.begin();
            vals[i] = grid_interp(g, snaps[k], pts[i].x.norm());
        }
    }
    return vals;
}

RatioReport fit_over(const std::vector<GridPoint>& pts, const std::vector<double>& lognum,
                     const std::function<double(const GridPoint&, const EnvelopeConstants&)>&
                         log_envelope,
                     std::vector<int> which_params, EnvelopeConstants c0,
                     const VerifyOptions& opt) {
    auto constants_from = [&](const std::vector<double>& v) {
        EnvelopeConstants c = c0;
        for (size_t j = 0; j < which_params.size(); ++j) {
            if (which_params[j] == 0) c.c_gauss = v[j];
            if (which_params[j] == 1) c.c_kill = v[j];
            if (which_params[j] == 2) c.eta2 = v[j];
        }
        return c;
    };
    auto entries_for = [&](const EnvelopeConstants& c) {
        std::vector<RatioEntry> es(pts.size());
        for (size_t i = 0; i < pts.size(); ++i) {
            const double le = log_envelope(pts[i], c);
            es[i] = {pts[i].t,        pts[i].x.norm(),  pts[i].y.norm(),
                     std::exp(lognum[i]), std::exp(le), lognum[i] - le};
        }
        return es;
    };
    std::vector<double> v0(which_params.size(), 1.0), lo(which_params.size(), 1e-3),
        hi(which_params.size(), 1e3);
    const auto best = coordinate_minimize(
        [&](const std::vector<double>& v) {
            return log_ratio_spread(entries_for(constants_from(v)));
        },
        v0, lo, hi);
    RatioReport rep;
    rep.fitted = constants_from(best);
    rep.entries = entries_for(rep.fitted);
    rep.finalize(opt.spread_cap);
    return rep;
}

std::vector<double> survival_column(const Potential& V, const ModelParams& p, double t,
                                    const std::vector<double>& radii,
                                    const VerifyOptions& opt, RadialGrid& g_out) {
    const double r_max = 8.0 * std::sqrt(t) + 1.0;
    const double r_lo = std::min(opt.pde_r_min,
                                 *std::min_element(radii.begin(), radii.end()) / 20.0);
    g_out = with_anchors(make_radial_grid(r_lo, r_max, opt.nodes_per_decade, opt.pde_dt),
                         radii);
    const auto u = solve_survival(V, p, g_out, t);
    std::vector<double> vals(radii.size());
    for (size_t i = 0; i < radii.size(); ++i) vals[i] = grid_interp(g_out, u, radii[i]);
    return vals;
}

SlopeReport least_squares(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3)
        throw std::invalid_argument("verify: regression needs at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    SlopeReport r;
    r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.intercept = (sy - r.slope * sx) / n;
    r.points = pts;
    return r;
}

}  // namespace

bool in_kloc(const Potential& V) {
    return classify(V, ClassTag::Kloc, default_class_grid()).member;
}

RatioReport fit_constants(FitKind kind, const GridSpec& grid, const VerifyOptions& opt) {
    grid.validate();
    const ModelParams& p = grid.potential.params();
    const Potential& V = grid.potential;

    if (kind == FitKind::green) {
        std::vector<GridPoint> pts;
        for (double rx : grid.radii_x)
            for (double ry : grid.radii_y) {
                if (rx == ry && grid.angle != GridSpec::Angle::antipodal) continue;
                GridPoint gp;
                gp.x = axis_point(p.d, rx);
                gp.y = axis_point(p.d, grid.angle == GridSpec::Angle::antipodal ? -ry : ry);
                pts.push_back(gp);
            }
        std::vector<double> lognum(pts.size());
        for (size_t i = 0; i < pts.size(); ++i)
            lognum[i] =
                std::log(green_mc(V, pts[i].x, pts[i].y, opt.mc, opt.green_t_max).mean);
        auto rep = fit_over(
            pts, lognum,
            [&](const GridPoint& gp, const EnvelopeConstants& c) {
                return log_green_envelope(p, c, gp.x, gp.y);
            },
            {1, 2}, EnvelopeConstants{}, opt);
        rep.experiment = "green_fit";
        rep.regime = "green";
        return rep;
    }

    const bool small = kind == FitKind::small_time;
    for (double t : grid.t_values) {
        if (small && !(t <= 4.0))
            throw std::invalid_argument("fit_constants: small_time needs t <= 4");
        if (!small && !(t >= 4.0))
            throw std::invalid_argument("fit_constants: large_time needs t >= 4");
    }
    auto pts = build_points(grid, p.d);
    std::vector<double> lognum(pts.size());
    if (opt.source == NumericSource::pde) {
        if (p.d != 1)
            throw std::invalid_argument("fit_constants: the PDE kernel source is d=1 only");
        const auto vals = pde_kernel_values(V, grid, pts, opt);
        for (size_t i = 0; i < pts.size(); ++i) lognum[i] = std::log(vals[i]);
    } else {
        for (size_t i = 0; i < pts.size(); ++i)
            lognum[i] =
                std::log(heat_kernel(V, pts[i].t, pts[i].x, pts[i].y, opt.mc).mean);
    }
    auto log_env = [&](const GridPoint& gp, const EnvelopeConstants& c) {
        return small ? log_small_time_envelope(p, c, gp.t, gp.x, gp.y)
                     : log_large_time_envelope(p, c, gp.t, gp.x, gp.y);
    };
    auto rep = fit_over(pts, lognum, log_env, small ? std::vector<int>{0, 1}
                                                    : std::vector<int>{0},
                        EnvelopeConstants{}, opt);
    rep.experiment = small ? "small_time_fit" : "large_time_fit";
    rep.regime = small ? "t<=4" : "t>=4";
    return rep;
}

SlopeReport decay_slope(const Potential& V, double t, const std::vector<double>& radii,
                        const VerifyOptions& opt) {
    const ModelParams& p = V.params();
    const double eta = eta0(p) * std::pow(t, 1.0 / (2.0 + p.beta));
    for (double r : radii)
        if (!(r < eta))
            throw std::invalid_argument(
                "decay_slope: radii must lie below eta0 t^{1/(2+beta)}");
    RadialGrid g;
    const auto u = survival_column(V, p, t, radii, opt, g);
    std::vector<std::pair<double, double>> pts(radii.size());
    for (size_t i = 0; i < radii.size(); ++i)
        pts[i] = {std::pow(radii[i], -p.beta), std::log(u[i])};
    return least_squares(pts);
}

SlopeReport counterexample_exponent(const Potential& V, double t,
                                    const std::vector<double>& radii,
                                    const VerifyOptions& opt) {
    const ModelParams& p = V.params();
    RadialGrid g;
    const auto u = survival_column(V, p, t, radii, opt, g);
    std::vector<std::pair<double, double>> pts(radii.size());
    for (size_t i = 0; i < radii.size(); ++i)
        pts[i] = {std::log(radii[i]), std::log(u[i]) - log_h_boundary(p, radii[i])};
    return least_squares(pts);
}

SlopeReport counterexample_exit_exponent(const Potential& V, double R,
                                         const std::vector<double>& radii,
                                         const VerifyOptions& opt) {
    const ModelParams& p = V.params();
    const double r_lo = std::min(opt.pde_r_min,
                                 *std::min_element(radii.begin(), radii.end()) / 20.0);
    RadialGrid g = with_anchors(
        make_radial_grid(r_lo, R, std::max(opt.nodes_per_decade, 400), opt.pde_dt), radii);
    const auto w = solve_exit_probability(V, p, g);
    std::vector<std::pair<double, double>> pts(radii.size());
    for (size_t i = 0; i < radii.size(); ++i)
        pts[i] = {std::log(radii[i]),
                  std::log(grid_interp(g, w, radii[i])) - log_h_tilde(p, radii[i])};
    return least_squares(pts);
}

SandwichReport survival_sandwich(const Potential& V,
                                 const std::vector<std::pair<double, double>>& t_r,
                                 const VerifyOptions& opt) {
    if (!in_kloc(V))
        throw std::invalid_argument("survival_sandwich: potential not in K^loc(beta,kappa)");
    const ModelParams& p = V.params();
    SandwichReport rep;
    rep.upper.experiment = "survival_sandwich_upper";
    rep.upper.regime = "r < eta0 t^{1/(2+beta)}";
    rep.lower.experiment = "survival_sandwich_lower";
    rep.lower.regime = "exit capped at t/3, R = eta0 (t/4)^{1/(2+beta)}";
    for (auto [t, r] : t_r) {
        const double eta_t = eta0(p) * std::pow(t, 1.0 / (2.0 + p.beta));
        if (!(r < eta_t))
            throw std::invalid_argument("survival_sandwich: grid outside the regime");
        RadialGrid g;
        const double u = survival_column(V, p, t, {r}, opt, g).front();
        const double log_env = log_h_boundary(p, r) - log_h_boundary(p, eta_t);
        rep.upper.entries.push_back(
            {t, r, 0.0, u, std::exp(log_env), std::log(u) - log_env});

        const double R_t = eta0(p) * std::pow(t / 4.0, 1.0 / (2.0 + p.beta));
        const double r_lo = std::min(opt.pde_r_min, r / 20.0);
        RadialGrid ge = with_anchors(
            make_radial_grid(r_lo, R_t, std::max(opt.nodes_per_decade, 400), opt.pde_dt),
            {r});
        const auto w = solve_exit_before_cap(V, p, ge, t / 3.0);
        const double wv = grid_interp(ge, w, r);
        const double log_env2 = log_h_boundary(p, r) - log_h_boundary(p, R_t);
        rep.lower.entries.push_back(
            {t, r, R_t, wv, std::exp(log_env2), std::log(wv) - log_env2});
    }
    rep.upper.finalize(opt.spread_cap);
    rep.lower.finalize(kInf);
    return rep;
}

}  // namespace supkern
