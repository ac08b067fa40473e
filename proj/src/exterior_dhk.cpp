#include "supkern/exterior_dhk.hpp"

#include <cmath>
#include <stdexcept>

#include "supkern/fk_montecarlo.hpp"
#include "supkern/specfun.hpp"

namespace supkern {

double dhk_exact_1d(double R, double t, double x, double y) {
    if (!(R > 0)) throw std::invalid_argument("dhk_exact_1d: R must be positive");
    if (!(t > 0)) throw std::invalid_argument("dhk_exact_1d: t must be positive");
    if (!(x > R) || !(y > R))
        throw std::invalid_argument("dhk_exact_1d: requires x, y > R "
                                    "(negative half by q(t,x,y) = q(t,-x,-y))");
    return gaussian_q_r(1, t, std::abs(x - y)) - gaussian_q_r(1, t, std::abs(x + y - 2 * R));
}

double dhk_exact_1d_log(double R, double t, double x, double y) {
    if (!(R > 0) || !(t > 0) || !(x > R) || !(y > R))
        throw std::invalid_argument("dhk_exact_1d_log: domain error");
    // (x+y-2R)^2 - (x-y)^2 = 4 (x-R)(y-R)
    return log_gaussian_q_r(1, t, std::abs(x - y)) +
           std::log1p(-std::exp(-(x - R) * (y - R) / t));
}

namespace {

// Bridge survival outside the ball: dyadic refinement with tangent-plane
// crossing corrections per leaf segment.  Signed distances to the sphere.
struct ExteriorBridge {
    double R, dt_base, r_min_over;  // refine while dist < sqrt(dt) and dt > dist^2/16
    Rng& rng;
    double log_surv = 0.0;
    bool dead = false;

    void segment(double t0, const Point& x0, double d0, double t1, const Point& x1,
                 double d1, int depth) {
        if (dead) return;
        const double dt = t1 - t0;
        const double dmin = std::min(d0, d1);
        const bool refine =
            dt > dt_base || (dmin < std::sqrt(dt) && dt > dmin * dmin / 16.0);
        if (refine && dt > 1e-12 && depth < 48) {
            const double tm = 0.5 * (t0 + t1);
            const double sd = std::sqrt(0.5 * dt);
            Point xm = x0;
            for (int i = 0; i < x0.d; ++i)
                xm.v[i] = 0.5 * (x0.v[i] + x1.v[i]) + sd * rng.normal();
            const double dm = xm.norm() - R;
            if (dm <= 0.0) {
                dead = true;
                return;
            }
            segment(t0, x0, d0, tm, xm, dm, depth + 1);
            segment(tm, xm, dm, t1, x1, d1, depth + 1);
        } else {
            // half-space crossing probability against the tangent plane
            log_surv += std::log1p(-std::exp(-d0 * d1 / dt));
            if (log_surv < -745.0) dead = true;
        }
    }
};

}  // namespace

McEstimate dhk_bridge_mc(const ExteriorDomain& dom, double t, const Point& x,
                         const Point& y, const McConfig& cfg) {
    dom.validate();
    cfg.validate();
    if (!(t > 0)) throw std::invalid_argument("dhk_bridge_mc: t must be positive");
    const double dx = x.norm() - dom.R, dy = y.norm() - dom.R;
    if (!(dx > 0) || !(dy > 0))
        throw std::invalid_argument("dhk_bridge_mc: points must lie outside the ball");
    if (dom.d == 1 && x.v[0] * y.v[0] < 0.0) {
        // the exterior of a ball in d=1 is disconnected
        McEstimate z;
        z.n = cfg.paths;
        z.zero_weight_frac = 1.0;
        return z;
    }
    McEstimate est = run_batches(cfg, kStreamDhk, [&](Rng& rng) {
        ExteriorBridge b{dom.R, cfg.dt, cfg.r_min, rng};
        b.segment(0.0, x, dx, t, y, dy, 0);
        return b.dead ? 0.0 : std::exp(b.log_surv);
    });
    const double q = gaussian_q(dom.d, t, x, y);
    est.mean *= q;
    est.std_error *= q;
    return est;
}

RatioReport psi_ratio_report(const ExteriorDomain& dom, const GridSpec& grid,
                             const McConfig& cfg) {
    dom.validate();
    grid.validate();
    RatioReport rep;
    rep.experiment = "psi_ratio";
    rep.regime = "exterior";
    struct Pt {
        double t;
        Point x, y;
    };
    std::vector<Pt> pts;
    for (double t : grid.t_values)
        for (double rx : grid.radii_x)
            for (double ry : grid.radii_y) {
                if (!(rx > dom.R) || !(ry > dom.R))
                    throw std::invalid_argument("psi_ratio_report: radii must exceed R");
                Pt p;
                p.t = t;
                p.x = axis_point(dom.d, rx);
                p.y = axis_point(dom.d,
                                 grid.angle == GridSpec::Angle::antipodal ? -ry : ry);
                if (dom.d == 1 && grid.same_sign) p.y = axis_point(1, ry);
                pts.push_back(p);
            }
    std::vector<double> log_numeric(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        if (dom.d == 1) {
            log_numeric[i] = dhk_exact_1d_log(dom.R, pts[i].t, std::abs(pts[i].x.v[0]),
                                              std::abs(pts[i].y.v[0]));
        } else {
            log_numeric[i] = std::log(dhk_bridge_mc(dom, pts[i].t, pts[i].x, pts[i].y, cfg).mean);
        }
    }
    auto entries_for = [&](double c) {
        std::vector<RatioEntry> es(pts.size());
        for (size_t i = 0; i < pts.size(); ++i) {
            const auto& p = pts[i];
            const double log_env = std::log(psi_exterior(dom.d, dom.R, p.t, p.x.norm())) +
                                   std::log(psi_exterior(dom.d, dom.R, p.t, p.y.norm())) +
                                   log_gaussian_q_r(dom.d, c * p.t, dist(p.x, p.y));
            es[i] = {p.t, p.x.norm(), p.y.norm(), std::exp(log_numeric[i]),
                     std::exp(log_env), log_numeric[i] - log_env};
        }
        return es;
    };
    const auto best = coordinate_minimize(
        [&](const std::vector<double>& v) { return log_ratio_spread(entries_for(v[0])); },
        {1.0}, {1e-2}, {1e2});
    rep.fitted.c_gauss = best[0];
    rep.entries = entries_for(best[0]);
    rep.finalize(std::numeric_limits<double>::infinity());
    return rep;
}

}  // namespace supkern
