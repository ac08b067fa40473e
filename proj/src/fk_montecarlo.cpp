#include "supkern/fk_montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "supkern/specfun.hpp"

namespace supkern {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Kinetics {
    double kappa, pot_exp, theta, dt_base, r_min, acc_limit;
    std::int64_t max_steps;
    bool hard_cutoff;

    static Kinetics from(const Potential& V, const McConfig& cfg) {
        Kinetics k;
        k.hard_cutoff = V.origin_divergent();
        k.kappa = k.hard_cutoff ? V.params().kappa : 0.0;
        k.pot_exp = 2.0 + 2.0 * V.params().beta;
        k.theta = cfg.substep_theta;
        k.dt_base = cfg.dt;
        k.r_min = cfg.r_min;
        k.acc_limit = -cfg.weight_floor;
        k.max_steps = cfg.max_steps;
        return k;
    }

    // local step cap resolving the killing rate near the origin
    double step_limit(double r) const {
        if (kappa <= 0.0) return dt_base;
        return std::min(dt_base, theta * pow_pos(r, pot_exp) / kappa);
    }
};

// Forward walk accumulating the trapezoid integral of V; stops at time t,
// weight collapse, or the hard cutoff.
double walk_weight(const Potential& V, const Kinetics& k, const Point& start, double t,
                   Rng& rng) {
    Point pos = start;
    double r = pos.norm();
    if (k.hard_cutoff && r < k.r_min) return 0.0;
    double v_here = V(r);
    double acc = 0.0, t_cur = 0.0;
    std::int64_t steps = 0;
    while (t_cur < t) {
        const double dt = std::max(1e-12, std::min(k.step_limit(r), t - t_cur));
        const double sd = std::sqrt(2.0 * dt);
        Point next = pos;
        for (int i = 0; i < pos.d; ++i) next.v[i] += sd * rng.normal();
        const double rn = next.norm();
        if (k.hard_cutoff && rn < k.r_min) return 0.0;
        const double v_next = V(std::max(rn, 1e-300));
        acc += 0.5 * (v_here + v_next) * dt;
        if (acc > k.acc_limit) return 0.0;
        pos = next;
        r = rn;
        v_here = v_next;
        t_cur += dt;
        if (++steps > k.max_steps) return 0.0;
    }
    return std::exp(-acc);
}

// Exit-or-die walk: weight exp(-int V) on first exit of B(0,R) before t_cap.
double exit_weight(const Potential& V, const Kinetics& k, const Point& start, double R,
                   double t_cap, Rng& rng, std::atomic<std::int64_t>& exhausted) {
    Point pos = start;
    double r = pos.norm();
    if (k.hard_cutoff && r < k.r_min) return 0.0;
    double v_here = V(r);
    double acc = 0.0, t_cur = 0.0;
    std::int64_t steps = 0;
    for (;;) {
        // resolve the exit boundary: steps shrink with the distance to the sphere
        const double gap = std::max(R - r, 1e-4 * R);
        const double dt = std::max(1e-12, std::min(k.step_limit(r), gap * gap / 16.0));
        const double sd = std::sqrt(2.0 * dt);
        Point next = pos;
        for (int i = 0; i < pos.d; ++i) next.v[i] += sd * rng.normal();
        const double rn = next.norm();
        if (k.hard_cutoff && rn < k.r_min) return 0.0;
        const double v_next = V(std::max(rn, 1e-300));
        acc += 0.5 * (v_here + v_next) * dt;
        if (acc > k.acc_limit) return 0.0;
        t_cur += dt;
        if (t_cur > t_cap) return 0.0;
        if (rn >= R) return std::exp(-acc);
        pos = next;
        r = rn;
        v_here = v_next;
        if (++steps > k.max_steps) {
            exhausted.fetch_add(1, std::memory_order_relaxed);
            return 0.0;
        }
    }
}

// Dyadic Brownian-bridge refinement of int V ds between pinned endpoints.
struct BridgeAccum {
    const Potential& V;
    const Kinetics& k;
    Rng& rng;
    double acc = 0.0;
    bool dead = false;

    void segment(double t0, const Point& x0, double r0, double v0, double t1,
                 const Point& x1, double r1, double v1, int depth) {
        if (dead) return;
        const double dt = t1 - t0;
        const double lim = k.step_limit(std::min(r0, r1));
        if (dt > lim && dt > 1e-12 && depth < 48) {
            const double tm = 0.5 * (t0 + t1);
            const double sd = std::sqrt(0.5 * dt);  // bridge midpoint: var = dt/2 per axis
            Point xm = x0;
            for (int i = 0; i < x0.d; ++i)
                xm.v[i] = 0.5 * (x0.v[i] + x1.v[i]) + sd * rng.normal();
            const double rm = xm.norm();
            if (k.hard_cutoff && rm < k.r_min) {
                dead = true;
                return;
            }
            const double vm = V(std::max(rm, 1e-300));
            segment(t0, x0, r0, v0, tm, xm, rm, vm, depth + 1);
            segment(tm, xm, rm, vm, t1, x1, r1, v1, depth + 1);
        } else {
            acc += 0.5 * (v0 + v1) * dt;
            if (acc > k.acc_limit) dead = true;
        }
    }
};

double bridge_weight(const Potential& V, const Kinetics& k, double t, const Point& x,
                     double rx, double vx, const Point& y, double ry, double vy,
                     Rng& rng) {
    BridgeAccum b{V, k, rng};
    b.segment(0.0, x, rx, vx, t, y, ry, vy, 0);
    return b.dead ? 0.0 : std::exp(-b.acc);
}

void check_point_nonzero(const Point& x, const char* who) {
    if (x.norm2() == 0.0)
        throw std::invalid_argument(std::string(who) + ": point must be nonzero");
}

}  // namespace

double integrate_potential_along_path(const Potential& V,
                                      const std::vector<std::pair<double, Point>>& path,
                                      double r_min) {
    if (path.size() < 2) throw std::invalid_argument("integrate_potential: need >= 2 samples");
    for (size_t i = 0; i + 1 < path.size(); ++i)
        if (!(path[i].first < path[i + 1].first))
            throw std::invalid_argument("integrate_potential: timestamps must increase");
    double acc = 0.0;
    double v_prev = 0.0;
    for (size_t i = 0; i < path.size(); ++i) {
        const double r = path[i].second.norm();
        if (r < r_min) return kInf;
        const double v = V(r);
        if (i > 0) acc += 0.5 * (v_prev + v) * (path[i].first - path[i - 1].first);
        v_prev = v;
    }
    return acc;
}

McEstimate survival_probability(const Potential& V, const Point& x, double t,
                                const McConfig& cfg) {
    if (!(t > 0)) throw std::invalid_argument("survival_probability: t must be positive");
    check_point_nonzero(x, "survival_probability");
    cfg.validate();
    if (V.is_zero()) {
        McEstimate one;
        one.mean = 1.0;
        one.n = cfg.paths;
        return one;
    }
    const Kinetics k = Kinetics::from(V, cfg);
    return run_batches(cfg, kStreamSurvival,
                       [&](Rng& rng) { return walk_weight(V, k, x, t, rng); });
}

McEstimate heat_kernel(const Potential& V, double t, const Point& x, const Point& y,
                       const McConfig& cfg) {
    if (!(t > 0)) throw std::invalid_argument("heat_kernel: t must be positive");
    check_point_nonzero(x, "heat_kernel");
    check_point_nonzero(y, "heat_kernel");
    cfg.validate();
    const int d = x.d;
    if (d == 1 && x.v[0] * y.v[0] < 0.0) {
        // every bridge crosses the origin: exactly zero
        McEstimate z;
        z.n = cfg.paths;
        z.zero_weight_frac = 1.0;
        return z;
    }
    const double q = gaussian_q(d, t, x, y);
    if (V.is_zero()) {
        McEstimate e;
        e.mean = q;  // all bridge weights are exactly one
        e.n = cfg.paths;
        return e;
    }
    const Kinetics k = Kinetics::from(V, cfg);
    const double rx = x.norm(), ry = y.norm();
    if (k.hard_cutoff && (rx < k.r_min || ry < k.r_min)) {
        McEstimate z;
        z.n = cfg.paths;
        z.zero_weight_frac = 1.0;
        return z;
    }
    const double vx = V(rx), vy = V(ry);
    McEstimate est = run_batches(cfg, kStreamKernel, [&](Rng& rng) {
        return bridge_weight(V, k, t, x, rx, vx, y, ry, vy, rng);
    });
    est.mean *= q;
    est.std_error *= q;
    return est;
}

McEstimate exit_before_death(const Potential& V, const Point& x, double R, double t_cap,
                             const McConfig& cfg) {
    check_point_nonzero(x, "exit_before_death");
    const double rx = x.norm();
    if (!(rx < R)) throw std::invalid_argument("exit_before_death: requires 0 < |x| < R");
    if (!(t_cap > 0)) throw std::invalid_argument("exit_before_death: t_cap must be positive");
    const Kinetics k = Kinetics::from(V, cfg);
    std::atomic<std::int64_t> exhausted{0};
    McEstimate est = run_batches(cfg, kStreamExit, [&](Rng& rng) {
        return exit_weight(V, k, x, R, t_cap, rng, exhausted);
    });
    est.budget_exhausted = exhausted.load();
    return est;
}

double free_green_tail(int d, double t, double dist) {
    if (d < 3) throw std::invalid_argument("free_green_tail: needs d >= 3");
    const double z = dist * dist / (4.0 * t);
    if (d == 3) return std::erf(std::sqrt(z)) / (4.0 * 3.14159265358979323846 * dist);
    // gamma_lower(d/2-1, z) * (4 pi)^{-d/2} (dist^2/4)^{1-d/2}
    const double s = 0.5 * d - 1.0;
    double term = std::pow(z, s) / s, sum = term;
    for (int n = 1; n < 200; ++n) {
        term *= -z * (s + n - 1) / (n * (s + n));
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    }
    return sum * std::pow(4.0 * 3.14159265358979323846, -0.5 * d) *
           std::pow(0.25 * dist * dist, 1.0 - 0.5 * d);
}

GreenEstimate green_mc_detail(const Potential& V, const Point& x, const Point& y,
                              const McConfig& cfg, double t_max) {
    check_point_nonzero(x, "green_mc");
    check_point_nonzero(y, "green_mc");
    const double rho = dist(x, y);
    if (!(rho > 0)) throw std::invalid_argument("green_mc: requires x != y");
    if (!(t_max > 0)) throw std::invalid_argument("green_mc: t_max must be positive");
    const int d = x.d;
    const double t_min = rho * rho / 32.0;
    if (!(t_max > t_min)) throw std::invalid_argument("green_mc: t_max below t_min");
    const int per_decade = 40;
    const int nodes =
        std::max(2, static_cast<int>(std::ceil(std::log10(t_max / t_min) * per_decade)) + 1);

    GreenEstimate out;
    double integral = 0.0, var = 0.0;
    std::int64_t zeros = 0, total = 0;
    std::vector<double> tk(nodes), mk(nodes), sk(nodes);
    for (int i = 0; i < nodes; ++i)
        tk[i] = t_min * std::pow(t_max / t_min, static_cast<double>(i) / (nodes - 1));
    for (int i = 0; i < nodes; ++i) {
        const double q = gaussian_q(d, tk[i], x, y);
        if (V.is_zero()) {
            mk[i] = q;  // all bridge weights are exactly one
            sk[i] = 0.0;
            total += cfg.paths;
            continue;
        }
        McConfig node_cfg = cfg;
        // long-horizon nodes coarsen the base step; local refinement still applies
        node_cfg.dt = std::max(cfg.dt, tk[i] / 4096.0);
        const Kinetics k = Kinetics::from(V, node_cfg);
        const double rx = x.norm(), ry = y.norm();
        const double vx = V(rx), vy = V(ry);
        McEstimate e = run_batches(node_cfg, kStreamGreenBase + static_cast<std::uint64_t>(i),
                                   [&](Rng& rng) {
                                       return bridge_weight(V, k, tk[i], x, rx, vx, y, ry,
                                                            vy, rng);
                                   });
        mk[i] = e.mean * q;
        sk[i] = e.std_error * q;
        zeros += static_cast<std::int64_t>(e.zero_weight_frac * e.n + 0.5);
        total += e.n;
    }
    for (int i = 0; i < nodes; ++i) {
        const double wl = i > 0 ? 0.5 * (tk[i] - tk[i - 1]) : 0.0;
        const double wr = i + 1 < nodes ? 0.5 * (tk[i + 1] - tk[i]) : 0.0;
        const double w = wl + wr;
        integral += w * mk[i];
        var += w * w * sk[i] * sk[i];
    }
    out.quadrature = integral;
    if (d >= 3) {
        out.tail = free_green_tail(d, t_max, rho);
    } else {
        out.truncated_tail = true;
    }
    out.estimate.mean = integral + out.tail;
    out.estimate.std_error = std::sqrt(var);
    out.estimate.n = total;
    out.estimate.zero_weight_frac =
        total > 0 ? static_cast<double>(zeros) / static_cast<double>(total) : 0.0;
    return out;
}

McEstimate green_mc(const Potential& V, const Point& x, const Point& y,
                    const McConfig& cfg, double t_max) {
    return green_mc_detail(V, x, y, cfg, t_max).estimate;
}

}  // namespace supkern
