#include "supkern/pde_radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace supkern {

namespace {

// Tridiagonal system (a_i, b_i, c_i) x = rhs, overwriting rhs with x.
void thomas_solve(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                  std::vector<double>& rhs) {
    const int n = static_cast<int>(b.size());
    for (int i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= b[n - 1];
    for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / b[i];
}

struct Operator {
    std::vector<double> lo, di, up;
};

// interior rows of d^2/dr^2 + (d-1)/r d/dr (- V when include_v)
Operator assemble(const ModelParams& p, const RadialGrid& g,
                  const std::vector<double>& vcap, bool include_v, bool mirror_outer) {
    const int n = static_cast<int>(g.r.size());
    Operator L;
    L.lo.assign(n, 0.0);
    L.di.assign(n, 0.0);
    L.up.assign(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        const double hm = g.r[i] - g.r[i - 1];
        const double hp = g.r[i + 1] - g.r[i];
        const double drift = (p.d - 1) / g.r[i];
        L.lo[i] = 2.0 / (hm * (hm + hp)) - drift * hp / (hm * (hm + hp));
        L.di[i] = -2.0 / (hm * hp) + drift * (hp - hm) / (hm * hp) -
                  (include_v ? vcap[i] : 0.0);
        L.up[i] = 2.0 / (hp * (hm + hp)) + drift * hm / (hp * (hm + hp));
    }
    if (mirror_outer) {
        // zero-flux outer boundary via a mirrored ghost node (uniform spacing there)
        const int i = n - 1;
        const double h = g.r[i] - g.r[i - 1];
        L.lo[i] = 2.0 / (h * h);
        L.di[i] = -2.0 / (h * h) - (include_v ? vcap[i] : 0.0);
    }
    return L;
}

// Theta stepping on the full operator: Crank-Nicolson where V dt <= 1 and
// implicit Euler at strongly killed nodes.  Plain CN rings there (the decay
// amplification tends to -1 with the capped singular V), while splitting off
// the killing term destroys the quasi-stationary layer balance u'' ~ V u.
// Any per-node theta preserves discrete stationary profiles L u = 0 exactly,
// so the boundary layer is set by the spatial solve.
class Stepper {
public:
    Stepper(const ModelParams& p, const RadialGrid& g, std::vector<double> vcap,
            OuterBc outer)
        : g_(g),
          outer_(outer),
          vcap_(std::move(vcap)),
          L_(assemble(p, g, vcap_, /*include_v=*/true,
                      outer == OuterBc::reflecting)) {
        const int n = static_cast<int>(g.r.size());
        a_.resize(n);
        b_.resize(n);
        c_.resize(n);
        rhs_.resize(n);
    }

    void step(std::vector<double>& u, double dt, double theta_base) {
        const int n = static_cast<int>(u.size());
        rhs_[0] = 0.0;  // absorbing inner boundary
        a_[0] = 0.0;
        b_[0] = 1.0;
        c_[0] = 0.0;
        auto theta_at = [&](int i) {
            return theta_base == 1.0 ? 1.0 : (vcap_[i] * dt > 1.0 ? 1.0 : theta_base);
        };
        for (int i = 1; i < n - 1; ++i) {
            const double th = theta_at(i);
            const double ex = (1.0 - th) * dt, im = th * dt;
            rhs_[i] = u[i] + ex * (L_.lo[i] * u[i - 1] + L_.di[i] * u[i] + L_.up[i] * u[i + 1]);
            a_[i] = -im * L_.lo[i];
            b_[i] = 1.0 - im * L_.di[i];
            c_[i] = -im * L_.up[i];
        }
        const int i = n - 1;
        switch (outer_) {
            case OuterBc::reflecting: {
                const double th = theta_at(i);
                const double ex = (1.0 - th) * dt, im = th * dt;
                rhs_[i] = u[i] + ex * (L_.lo[i] * u[i - 1] + L_.di[i] * u[i]);
                a_[i] = -im * L_.lo[i];
                b_[i] = 1.0 - im * L_.di[i];
                c_[i] = 0.0;
                break;
            }
            case OuterBc::absorbing:
                rhs_[i] = 0.0;
                a_[i] = 0.0;
                b_[i] = 1.0;
                c_[i] = 0.0;
                break;
            case OuterBc::dirichlet_one:
                rhs_[i] = 1.0;
                a_[i] = 0.0;
                b_[i] = 1.0;
                c_[i] = 0.0;
                break;
        }
        thomas_solve(a_, b_, c_, rhs_);
        u.swap(rhs_);
    }

    void advance(std::vector<double>& u, double& t_cur, double t_target, bool rannacher) {
        if (rannacher && t_cur == 0.0) {
            const double dt0 = std::min(g_.dt, t_target);
            step(u, 0.5 * dt0, 1.0);
            step(u, 0.5 * dt0, 1.0);
            t_cur += dt0;
        }
        while (t_cur < t_target * (1.0 - 1e-14)) {
            double dt = g_.dt;
            if (g_.dt_growth > 0.0) {
                const double want = std::max(g_.dt, g_.dt_growth * t_cur);
                while (dt * 1.5 <= want) dt *= 1.5;
            }
            dt = std::min(dt, t_target - t_cur);
            step(u, dt, 0.5);
            t_cur += dt;
        }
    }

private:
    const RadialGrid& g_;
    OuterBc outer_;
    std::vector<double> vcap_;
    Operator L_;
    std::vector<double> a_, b_, c_, rhs_;
};

void check_range(const std::vector<double>& u, double lo, double hi, const char* what) {
    for (double v : u)
        if (!(v >= lo && v <= hi))
            throw std::runtime_error(std::string("pde_radial: instability in ") + what);
}

int nearest_node(const RadialGrid& g, double x) {
    const auto it = std::lower_bound(g.r.begin(), g.r.end(), x);
    int j = static_cast<int>(it - g.r.begin());
    if (j > 0 && (j == static_cast<int>(g.r.size()) || x - g.r[j - 1] < g.r[j] - x)) --j;
    return j;
}

}  // namespace

void RadialGrid::validate() const {
    if (r.size() < 3) throw std::invalid_argument("RadialGrid: need at least 3 nodes");
    if (!(r.front() > 0)) throw std::invalid_argument("RadialGrid: r_min must be positive");
    for (size_t i = 0; i + 1 < r.size(); ++i)
        if (!(r[i] < r[i + 1]))
            throw std::invalid_argument("RadialGrid: nodes must be strictly increasing");
    if (!(dt > 0)) throw std::invalid_argument("RadialGrid: dt must be positive");
}

RadialGrid make_radial_grid(double r_min, double r_max, int nodes_per_decade, double dt,
                            double dt_growth) {
    if (!(r_min > 0) || !(r_max > r_min))
        throw std::invalid_argument("make_radial_grid: need 0 < r_min < r_max");
    RadialGrid g;
    g.dt = dt;
    g.dt_growth = dt_growth;
    const double top = std::min(1.0, r_max);
    const int nlog = std::max(2, static_cast<int>(std::ceil(
                                     std::log10(top / r_min) * nodes_per_decade)));
    for (int i = 0; i <= nlog; ++i)
        g.r.push_back(r_min * std::pow(top / r_min, static_cast<double>(i) / nlog));
    if (r_max > 1.0) {
        const double h = g.r[g.r.size() - 1] - g.r[g.r.size() - 2];
        double v = 1.0;
        while (v < r_max) {
            v += h;
            g.r.push_back(v);
        }
    }
    g.validate();
    return g;
}

RadialGrid with_anchors(RadialGrid g, const std::vector<double>& anchors) {
    for (double x : anchors) {
        const int j = nearest_node(g, x);
        if (j <= 0 || j >= static_cast<int>(g.r.size()) - 1) continue;
        if (x > g.r[j - 1] && x < g.r[j + 1]) g.r[j] = x;
    }
    g.validate();
    return g;
}

std::vector<double> cap_potential(const Potential& V, const RadialGrid& g) {
    std::vector<double> v(g.r.size());
    for (size_t i = 0; i < g.r.size(); ++i) v[i] = std::min(V(g.r[i]), kPotentialCap);
    return v;
}

std::vector<std::vector<double>> solve_survival_snapshots(
    const Potential& V, const ModelParams& p, const RadialGrid& g,
    const std::vector<double>& times, OuterBc outer) {
    g.validate();
    for (size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
            throw std::invalid_argument("solve_survival: times must increase");
    if (times.empty() || !(times.front() > 0))
        throw std::invalid_argument("solve_survival: need positive times");
    if (outer == OuterBc::reflecting && g.r.back() < 8.0 * std::sqrt(times.back()) + 1.0)
        throw std::invalid_argument("solve_survival: requires r_max >= 8 sqrt(t) + 1");
    Stepper st(p, g, cap_potential(V, g), outer);
    std::vector<double> u(g.r.size(), 1.0);
    u[0] = 0.0;
    if (outer == OuterBc::absorbing) u.back() = 0.0;
    double t_cur = 0.0;
    std::vector<std::vector<double>> out;
    for (double t : times) {
        st.advance(u, t_cur, t, /*rannacher=*/true);
        check_range(u, -1e-8, 1.0 + 1e-8, "solve_survival");
        out.push_back(u);
    }
    return out;
}

std::vector<double> solve_survival(const Potential& V, const ModelParams& p,
                                   const RadialGrid& g, double t, OuterBc outer) {
    return solve_survival_snapshots(V, p, g, {t}, outer).front();
}

std::vector<std::vector<double>> solve_kernel_1d_snapshots(
    const Potential& V, const std::vector<double>& times, double y, const RadialGrid& g) {
    g.validate();
    const ModelParams p{1, V.params().beta, V.params().kappa};
    const int n = static_cast<int>(g.r.size());
    if (!(y > g.r.front() && y < g.r.back()))
        throw std::invalid_argument("solve_kernel_1d: y outside the grid");
    Stepper st(p, g, cap_potential(V, g), OuterBc::absorbing);
    // one-cell hat of unit trapezoid mass at the node nearest y
    std::vector<double> u(n, 0.0);
    const int j = std::max(1, std::min(n - 2, nearest_node(g, y)));
    u[j] = 2.0 / (g.r[j + 1] - g.r[j - 1]);
    const double u_max0 = u[j];
    double t_cur = 0.0;
    std::vector<std::vector<double>> out;
    for (double t : times) {
        st.advance(u, t_cur, t, /*rannacher=*/true);
        check_range(u, -1e-8 * u_max0, u_max0 * (1.0 + 1e-8), "solve_kernel_1d");
        out.push_back(u);
    }
    return out;
}

double solve_kernel_1d(const Potential& V, double t, double x, double y,
                       const RadialGrid& g) {
    const auto u = solve_kernel_1d_snapshots(V, {t}, y, g).front();
    // snap to the nearest node: keeps the evaluation discretely symmetric in (x, y)
    return u[nearest_node(g, x)];
}

std::vector<double> solve_exit_before_cap(const Potential& V, const ModelParams& p,
                                          const RadialGrid& g, double t) {
    g.validate();
    Stepper st(p, g, cap_potential(V, g), OuterBc::dirichlet_one);
    std::vector<double> u(g.r.size(), 0.0);
    u.back() = 1.0;
    double t_cur = 0.0;
    st.advance(u, t_cur, t, /*rannacher=*/true);
    check_range(u, -1e-8, 1.0 + 1e-8, "solve_exit_before_cap");
    return u;
}

std::vector<double> solve_exit_probability(const Potential& V, const ModelParams& p,
                                           const RadialGrid& g) {
    g.validate();
    const auto vcap = cap_potential(V, g);
    const auto L = assemble(p, g, vcap, /*include_v=*/true, /*mirror_outer=*/false);
    const int n = static_cast<int>(g.r.size());
    std::vector<double> a(n), b(n), c(n), rhs(n, 0.0);
    a[0] = 0.0;
    b[0] = 1.0;
    c[0] = 0.0;
    for (int i = 1; i < n - 1; ++i) {
        a[i] = L.lo[i];
        b[i] = L.di[i];
        c[i] = L.up[i];
    }
    a[n - 1] = 0.0;
    b[n - 1] = 1.0;
    c[n - 1] = 0.0;
    rhs[n - 1] = 1.0;
    thomas_solve(a, b, c, rhs);
    check_range(rhs, -1e-8, 1.0 + 1e-8, "solve_exit_probability");
    return rhs;
}

double grid_interp(const RadialGrid& g, const std::vector<double>& u, double r) {
    if (!(r >= g.r.front() && r <= g.r.back()))
        throw std::invalid_argument("grid_interp: point outside the grid");
    const auto it = std::upper_bound(g.r.begin(), g.r.end(), r);
    const int j = std::max(1, static_cast<int>(it - g.r.begin()));
    const int i = std::min(j, static_cast<int>(g.r.size()) - 1);
    const double w = (r - g.r[i - 1]) / (g.r[i] - g.r[i - 1]);
    return (1.0 - w) * u[i - 1] + w * u[i];
}

}  // namespace supkern
