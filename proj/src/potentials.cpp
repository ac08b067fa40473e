#include "supkern/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace supkern {

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

}  // namespace

Potential Potential::canonical(const ModelParams& p) {
    p.validate();
    Potential v;
    v.form_ = PotentialForm::canonical;
    v.params_ = p;
    v.outer_c3_ = p.kappa;
    v.outer_gamma_ = 2 * p.beta;
    v.tags_ = {ClassTag::Kloc_ge, ClassTag::Kloc_le, ClassTag::Kloc, ClassTag::K};
    return v;
}

Potential Potential::perturbed(const ModelParams& p, double C, double theta, int sign) {
    p.validate();
    if (!(C > 0)) throw std::invalid_argument("Potential::perturbed: C must be positive");
    if (!(theta > p.beta))
        throw std::invalid_argument("Potential::perturbed: theta must exceed beta");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("Potential::perturbed: sign must be +-1");
    Potential v = canonical(p);
    v.form_ = PotentialForm::perturbed;
    v.C_ = C;
    v.theta_ = theta;
    v.sign_ = sign;
    return v;
}

Potential Potential::critical(const ModelParams& p, double C, int sign) {
    p.validate();
    if (!(C > 0)) throw std::invalid_argument("Potential::critical: C must be positive");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("Potential::critical: sign must be +-1");
    if (sign == -1 && C > p.kappa)
        throw std::invalid_argument("Potential::critical: sign=-1 requires C <= kappa");
    Potential v;
    v.form_ = PotentialForm::critical;
    v.params_ = p;
    v.C_ = C;
    v.sign_ = sign;
    v.outer_c3_ = p.kappa;
    v.outer_gamma_ = 2 * p.beta;
    v.tags_ = {sign > 0 ? ClassTag::critical_lower : ClassTag::critical_upper};
    return v;
}

Potential Potential::custom(const ModelParams& p, std::function<double(double)> f,
                            bool origin_divergent) {
    p.validate();
    Potential v;
    v.form_ = PotentialForm::custom;
    v.params_ = p;
    v.custom_ = std::move(f);
    v.custom_origin_divergent_ = origin_divergent;
    return v;
}

Potential Potential::zero(const ModelParams& p) {
    p.validate();
    Potential v;
    v.form_ = PotentialForm::custom;
    v.params_ = p;
    v.custom_ = [](double) { return 0.0; };
    v.custom_origin_divergent_ = false;
    v.zero_ = true;
    return v;
}

double Potential::operator()(double r) const {
    if (!(r > 0)) throw std::invalid_argument("Potential: radius must be positive");
    if (zero_) return 0.0;
    const double k = params_.kappa, b = params_.beta;
    switch (form_) {
        case PotentialForm::canonical:
            return k * pow_pos(r, -2 - 2 * b);
        case PotentialForm::perturbed:
            if (r > 1.0) return k * pow_pos(r, -2 - 2 * b);
            return std::max(0.0, k + sign_ * C_ * std::pow(r, theta_)) * pow_pos(r, -2 - 2 * b);
        case PotentialForm::critical:
            if (r > 1.0) return k * pow_pos(r, -2 - 2 * b);
            return k * pow_pos(r, -2 - 2 * b) + sign_ * C_ * pow_pos(r, -2 - b);
        case PotentialForm::custom:
            return custom_(r);
    }
    return 0.0;
}

bool Potential::has_tag(ClassTag tag) const {
    return std::find(tags_.begin(), tags_.end(), tag) != tags_.end();
}

void Potential::validate() const {
    const auto& self = *this;
    for (double r : log_spaced(1e-6, 100.0, 400))
        if (self(r) < 0.0)
            throw std::runtime_error("Potential: negative value at r=" + std::to_string(r));
    if (zero_) return;
    // boundedness outside the unit ball
    for (double r : log_spaced(1.0, 100.0, 50))
        if (!std::isfinite(self(r)))
            throw std::runtime_error("Potential: unbounded on {r > 1}");
    // divergence of the radial mass integral near the origin
    if (form_ == PotentialForm::custom && !custom_origin_divergent_)
        throw std::runtime_error("Potential: custom form must declare origin divergence");
    const auto grid = log_spaced(1e-8, 1.0, 600);
    double mass = 0.0;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        const double r0 = grid[i], r1 = grid[i + 1];
        mass += 0.5 * (std::pow(r0, params_.d - 1) * self(r0) +
                       std::pow(r1, params_.d - 1) * self(r1)) * (r1 - r0);
        if (mass > 1e6) break;
    }
    if (mass < 1e6)
        throw std::runtime_error("Potential: int_{B(0,1)} V appears finite");
}

std::map<std::string, std::string> Potential::to_kv() const {
    std::map<std::string, std::string> kv;
    switch (form_) {
        case PotentialForm::canonical: kv["form"] = "canonical"; break;
        case PotentialForm::perturbed: kv["form"] = "perturbed"; break;
        case PotentialForm::critical: kv["form"] = "critical"; break;
        case PotentialForm::custom: kv["form"] = zero_ ? "zero" : "custom"; break;
    }
    kv["beta"] = std::to_string(params_.beta);
    kv["kappa"] = std::to_string(params_.kappa);
    kv["C"] = std::to_string(C_);
    kv["theta"] = std::to_string(theta_);
    kv["sign"] = std::to_string(sign_);
    kv["C3"] = std::to_string(outer_c3_);
    kv["gamma"] = std::to_string(outer_gamma_);
    return kv;
}

Potential Potential::from_kv(const ModelParams& p,
                             const std::map<std::string, std::string>& kv) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : std::stod(it->second);
    };
    ModelParams q = p;
    q.beta = get("beta", p.beta);
    q.kappa = get("kappa", p.kappa);
    auto it = kv.find("form");
    const std::string form = it == kv.end() ? "canonical" : it->second;
    if (form == "canonical") return canonical(q);
    if (form == "perturbed")
        return perturbed(q, get("C", 1.0), get("theta", 2 * q.beta),
                         static_cast<int>(get("sign", 1)));
    if (form == "critical")
        return critical(q, get("C", 1.0), static_cast<int>(get("sign", 1)));
    if (form == "zero") return zero(q);
    throw std::invalid_argument("Potential::from_kv: unknown form '" + form + "'");
}

std::vector<double> default_class_grid() {
    auto g = log_spaced(1e-4, 1.0, 1000);
    const auto tail = log_spaced(1.0, 1e4, 200);
    g.insert(g.end(), tail.begin() + 1, tail.end());
    return g;
}

namespace {

// needed constant for "V >= kappa r^{-2-2b} - C r^{-2-bp}" (ge) or
// "V <= kappa r^{-2-2b} + C r^{-2-bp}" (le) at radius r
double needed_c(const Potential& V, bool ge, double bp, double r) {
    const ModelParams& p = V.params();
    const double gap = p.kappa * pow_pos(r, -2 - 2 * p.beta) - V(r);
    const double signed_gap = ge ? gap : -gap;
    return std::max(0.0, signed_gap) * std::pow(r, 2 + bp);
}

ClassifyReport classify_one_sided(const Potential& V, bool ge,
                                  const std::vector<double>& grid) {
    const double beta = V.params().beta;
    ClassifyReport best;
    best.member = false;
    for (double frac : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95}) {
        const double bp = frac * beta;
        double cmax = 0.0, worst_r = 0.0;
        for (double r : grid) {
            if (r > 1.0) continue;
            const double c = needed_c(V, ge, bp, r);
            if (c > cmax) {
                cmax = c;
                worst_r = r;
            }
        }
        // refinement trend: the sup must not escape to r -> 0
        const double rext = 1e-6;
        if (needed_c(V, ge, bp, rext) > 1.05 * cmax + 1e-12) {
            if (best.worst_r == 0.0) {
                best.worst_r = rext;
                best.worst_excess = needed_c(V, ge, bp, rext);
            }
            continue;
        }
        best.member = true;
        best.witness_c = cmax;
        best.witness_beta_p = bp;
        best.worst_r = worst_r;  // point where the witnessing constant binds
        return best;
    }
    if (best.worst_r == 0.0) best.worst_r = grid.front();
    return best;
}

ClassifyReport classify_tail(const Potential& V, const std::vector<double>& grid) {
    ClassifyReport best;
    for (double gamma : {0.25, 0.5, 1.0, 2 * V.params().beta, 2.0, 4.0}) {
        double cmax = 0.0;
        for (double r : grid) {
            if (r <= 1.0) continue;
            cmax = std::max(cmax, V(r) * std::pow(r, 2 + gamma));
        }
        if (V(1e6) * std::pow(1e6, 2 + gamma) > 1.05 * cmax + 1e-12) continue;
        best.member = true;
        best.witness_c = cmax;
        best.witness_beta_p = gamma;
        return best;
    }
    best.worst_r = 1e6;
    best.worst_excess = V(1e6);
    return best;
}

// strictly positive margin of the critical condition:
//   upper (sign -1): kappa r^{-2-2b} - V(r) >= C r^{-2-b}
//   lower (sign +1): V(r) - kappa r^{-2-2b} >= C r^{-2-b}
ClassifyReport classify_critical(const Potential& V, bool lower,
                                 const std::vector<double>& grid) {
    const ModelParams& p = V.params();
    ClassifyReport rep;
    double cmin = 1e300;
    for (double r : grid) {
        if (r > 1.0) continue;
        const double gap = V(r) - p.kappa * pow_pos(r, -2 - 2 * p.beta);
        const double margin = (lower ? gap : -gap) * std::pow(r, 2 + p.beta);
        if (margin < cmin) {
            cmin = margin;
            rep.worst_r = r;
        }
    }
    rep.member = cmin > 0.0;
    rep.witness_c = cmin;
    rep.witness_beta_p = p.beta;
    rep.worst_excess = cmin;
    return rep;
}

}  // namespace

ClassifyReport classify(const Potential& V, ClassTag tag, const std::vector<double>& grid) {
    if (grid.size() < 100)
        throw std::invalid_argument("classify: grid must have at least 100 points");
    switch (tag) {
        case ClassTag::Kloc_ge:
            return classify_one_sided(V, true, grid);
        case ClassTag::Kloc_le:
            return classify_one_sided(V, false, grid);
        case ClassTag::Kloc: {
            auto a = classify_one_sided(V, true, grid);
            auto b = classify_one_sided(V, false, grid);
            ClassifyReport r = a.member ? b : a;
            r.member = a.member && b.member;
            if (r.member) {
                r.witness_c = std::max(a.witness_c, b.witness_c);
                r.witness_beta_p = std::min(a.witness_beta_p, b.witness_beta_p);
            }
            return r;
        }
        case ClassTag::K: {
            auto loc = classify(V, ClassTag::Kloc, grid);
            if (!loc.member) return loc;
            auto tail = classify_tail(V, grid);
            if (!tail.member) return tail;
            ClassifyReport r = loc;
            r.witness_c = std::max(loc.witness_c, tail.witness_c);
            return r;
        }
        case ClassTag::critical_lower:
            return classify_critical(V, true, grid);
        case ClassTag::critical_upper:
            return classify_critical(V, false, grid);
    }
    throw std::logic_error("classify: unreachable");
}

double apply_generator(const Potential& V, const RadialC2& f, double r) {
    if (!(r > 0)) throw std::invalid_argument("apply_generator: radius must be positive");
    const int d = V.params().d;
    double d1, d2;
    if (f.df && f.d2f) {
        d1 = f.df(r);
        d2 = f.d2f(r);
    } else {
        const double h = 1e-5 * r;
        const double fm = f.f(r - h), f0 = f.f(r), fp = f.f(r + h);
        d1 = (fp - fm) / (2 * h);
        d2 = (fp - 2 * f0 + fm) / (h * h);
    }
    return d2 + (d - 1) / r * d1 - V(r) * f.f(r);
}

RadialC2 make_h_tilde_c2(const ModelParams& p) {
    RadialC2 c;
    c.f = [p](double r) { return h_tilde(p, r); };
    c.df = [p](double r) { return h_tilde_prime(p, r); };
    c.d2f = [p](double r) {
        return p.kappa * pow_pos(r, -2 - 2 * p.beta) * h_tilde(p, r) -
               (p.d - 1) / r * h_tilde_prime(p, r);
    };
    return c;
}

RadialC2 make_power_h_tilde_c2(const ModelParams& p, double a) {
    auto base = make_h_tilde_c2(p);
    RadialC2 c;
    c.f = [p, a](double r) { return std::pow(r, a) * h_tilde(p, r); };
    c.df = [p, a, base](double r) {
        return a * std::pow(r, a - 1) * base.f(r) + std::pow(r, a) * base.df(r);
    };
    c.d2f = [p, a, base](double r) {
        return a * (a - 1) * std::pow(r, a - 2) * base.f(r) +
               2 * a * std::pow(r, a - 1) * base.df(r) + std::pow(r, a) * base.d2f(r);
    };
    return c;
}

RadialC2 make_barrier_c2(BarrierKind kind, const ModelParams& p, double beta_prime) {
    if (!(beta_prime > 0) || !(beta_prime < p.beta))
        throw std::invalid_argument("make_barrier_c2: beta' must lie in (0, beta)");
    const double a = 0.5 * (p.beta - beta_prime);
    const double c0 = kind == BarrierKind::u1 ? 2.0 : 1.0;
    const double c1 = kind == BarrierKind::u1 ? -1.0 : 1.0;
    auto base = make_h_tilde_c2(p);
    auto pw = make_power_h_tilde_c2(p, a);
    RadialC2 c;
    c.f = [=](double r) { return c0 * base.f(r) + c1 * pw.f(r); };
    c.df = [=](double r) { return c0 * base.df(r) + c1 * pw.df(r); };
    c.d2f = [=](double r) { return c0 * base.d2f(r) + c1 * pw.d2f(r); };
    return c;
}

double scaled_generator_power(const Potential& V, double a, double r) {
    const ModelParams& p = V.params();
    const double rho = h_tilde_log_deriv(p, r);
    return a * (a + p.d - 2) * std::pow(r, a - 2) + 2 * a * std::pow(r, a - 1) * rho +
           (p.kappa * pow_pos(r, -2 - 2 * p.beta) - V(r)) * std::pow(r, a);
}

double scaled_generator_u(BarrierKind kind, const Potential& V, double beta_prime,
                          double r) {
    const ModelParams& p = V.params();
    if (!(beta_prime > 0) || !(beta_prime < p.beta))
        throw std::invalid_argument("scaled_generator_u: beta' must lie in (0, beta)");
    const double a = 0.5 * (p.beta - beta_prime);
    const double c0 = kind == BarrierKind::u1 ? 2.0 : 1.0;
    const double c1 = kind == BarrierKind::u1 ? -1.0 : 1.0;
    const double rho = h_tilde_log_deriv(p, r);
    const double lk = c1 * (a * (a + p.d - 2) * std::pow(r, a - 2) +
                            2 * a * std::pow(r, a - 1) * rho);
    return lk + (p.kappa * pow_pos(r, -2 - 2 * p.beta) - V(r)) * (c0 + c1 * std::pow(r, a));
}

double barrier_radius(BarrierKind kind, const Potential& V, double beta_prime) {
    const auto grid = log_spaced(1e-3, 1.0, 600);
    const int n = static_cast<int>(grid.size());
    std::vector<char> ok(n);
    for (int i = 0; i < n; ++i) {
        const double s = scaled_generator_u(kind, V, beta_prime, grid[i]);
        // roundoff slack relative to the dominant scale of the combination
        const double scale = std::abs(s) + pow_pos(grid[i], -2 - 2 * V.params().beta) +
                             std::pow(grid[i], -2.0);
        ok[i] = kind == BarrierKind::u1 ? (s <= 1e-9 * scale) : (s >= -1e-9 * scale);
    }
    for (int iR = n - 1; iR >= 0; --iR) {
        const double R = grid[iR];
        bool good = true;
        for (int j = iR; j >= 0 && grid[j] >= 0.02 * R; --j)
            if (!ok[j]) {
                good = false;
                break;
            }
        if (good) return R;
    }
    return 0.0;
}

double counterexample_exponent_barrier(const Potential& V, int which, double r_hi) {
    const auto grid = log_spaced(1e-3, r_hi, 400);
    for (double a : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
        bool good = true;
        for (double r : grid) {
            const double s = scaled_generator_power(V, which == 1 ? -a : a, r);
            if (which == 1 ? (s < 0.0) : (s > 0.0)) {
                good = false;
                break;
            }
        }
        if (good) return a;
    }
    return 0.0;
}

}  // namespace supkern
