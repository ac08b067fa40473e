#include "supkern/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

namespace supkern {

void GridSpec::validate() const {
    if (t_values.empty() && (radii_x.empty() || radii_y.empty()))
        throw std::invalid_argument("GridSpec: empty grid");
    for (double t : t_values)
        if (!(t > 0)) throw std::invalid_argument("GridSpec: times must be positive");
    for (double r : radii_x)
        if (!(r > 0)) throw std::invalid_argument("GridSpec: radii must be positive");
    for (double r : radii_y)
        if (!(r > 0)) throw std::invalid_argument("GridSpec: radii must be positive");
}

double log_ratio_spread(const std::vector<RatioEntry>& entries) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& e : entries) {
        if (!std::isfinite(e.log_ratio)) return std::numeric_limits<double>::infinity();
        lo = std::min(lo, e.log_ratio);
        hi = std::max(hi, e.log_ratio);
    }
    return entries.empty() ? 0.0 : hi - lo;
}

void RatioReport::finalize(double spread_cap) {
    spread = log_ratio_spread(entries);
    verdict = Verdict::bounded;
    if (!std::isfinite(spread) || spread > spread_cap) {
        verdict = Verdict::violated;
        double worst_abs = -1.0;
        for (const auto& e : entries) {
            const double a = std::isfinite(e.log_ratio)
                                 ? std::abs(e.log_ratio)
                                 : std::numeric_limits<double>::infinity();
            if (a > worst_abs) {
                worst_abs = a;
                worst = e;
            }
        }
    }
}

std::vector<double> coordinate_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    const std::vector<double>& lo, const std::vector<double>& hi, int sweeps, int iters) {
    const size_t n = x0.size();
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (size_t j = 0; j < n; ++j) {
            double a = std::log(lo[j]), b = std::log(hi[j]);
            for (int it = 0; it < iters; ++it) {
                const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
                auto eval = [&](double v) {
                    auto x = x0;
                    x[j] = std::exp(v);
                    return f(x);
                };
                if (eval(m1) <= eval(m2))
                    b = m2;
                else
                    a = m1;
            }
            x0[j] = std::exp(0.5 * (a + b));
        }
    }
    return x0;
}

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const McEstimate& e) {
    std::string s = "mean,stderr,n,zero_weight_frac\n";
    s += format_float(e.mean) + "," + format_float(e.std_error) + "," +
         std::to_string(e.n) + "," + format_float(e.zero_weight_frac) + "\n";
    return s;
}

std::string to_csv(const RatioReport& r) {
    std::string s = "t,rx,ry,numeric,envelope,log_ratio\n";
    for (const auto& e : r.entries)
        s += format_float(e.t) + "," + format_float(e.rx) + "," + format_float(e.ry) +
             "," + format_float(e.numeric) + "," + format_float(e.envelope) + "," +
             format_float(e.log_ratio) + "\n";
    s += "constants,c_gauss=" + format_float(r.fitted.c_gauss) +
         ",c_kill=" + format_float(r.fitted.c_kill) +
         ",eta2=" + format_float(r.fitted.eta2) + ",spread=" + format_float(r.spread) +
         (r.verdict == Verdict::bounded ? ",verdict=bounded" : ",verdict=violated") + "\n";
    return s;
}

std::string to_csv(const std::vector<std::pair<double, double>>& table,
                   const std::string& xname, const std::string& yname) {
    std::string s = xname + "," + yname + "\n";
    for (const auto& [a, b] : table) s += format_float(a) + "," + format_float(b) + "\n";
    return s;
}

namespace {
nlohmann::ordered_json entry_json(const RatioEntry& e) {
    nlohmann::ordered_json j;
    j["t"] = e.t;
    j["rx"] = e.rx;
    j["ry"] = e.ry;
    j["numeric"] = e.numeric;
    j["envelope"] = e.envelope;
    j["log_ratio"] = e.log_ratio;
    return j;
}
}  // namespace

std::string to_json(const McEstimate& e) {
    nlohmann::ordered_json j;
    j["mean"] = e.mean;
    j["stderr"] = e.std_error;
    j["n"] = e.n;
    j["zero_weight_frac"] = e.zero_weight_frac;
    return j.dump(2) + "\n";
}

std::string to_json(const RatioReport& r) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["regime"] = r.regime;
    j["fitted"] = {{"c_gauss", r.fitted.c_gauss},
                   {"c_kill", r.fitted.c_kill},
                   {"eta2", r.fitted.eta2}};
    j["spread"] = r.spread;
    j["verdict"] = r.verdict == Verdict::bounded ? "bounded" : "violated";
    if (r.verdict == Verdict::violated) j["worst"] = entry_json(r.worst);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : r.entries) arr.push_back(entry_json(e));
    j["entries"] = arr;
    return j.dump(2) + "\n";
}

std::string to_json(const std::vector<std::pair<double, double>>& table,
                    const std::string& xname, const std::string& yname) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [a, b] : table) {
        nlohmann::ordered_json row;
        row[xname] = a;
        row[yname] = b;
        arr.push_back(row);
    }
    return arr.dump(2) + "\n";
}

}  // namespace supkern
