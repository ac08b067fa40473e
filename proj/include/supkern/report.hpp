#ifndef SUPKERN_REPORT_HPP
#define SUPKERN_REPORT_HPP

#include <functional>
#include <string>
#include <vector>

#include "supkern/envelopes.hpp"
#include "supkern/mc.hpp"
#include "supkern/potentials.hpp"

namespace supkern {

/// Evaluation grid for verification experiments.
struct GridSpec {
    std::vector<double> t_values;
    std::vector<double> radii_x, radii_y;
    enum class Angle { aligned, antipodal, sampled } angle = Angle::aligned;
    int angle_samples = 0;
    bool same_sign = true;  // d=1: restrict to one half line
    Potential potential = Potential::canonical({3, 1.0, 1.0});

    void validate() const;
};

struct RatioEntry {
    double t = 0.0, rx = 0.0, ry = 0.0;
    double numeric = 0.0, envelope = 0.0;
    double log_ratio = 0.0;
};

enum class Verdict { bounded, violated };

/// Realizes two-sided comparability as bounded log-ratio spread with
/// constants fit per experiment.
struct RatioReport {
    std::string experiment;
    std::string regime;
    std::vector<RatioEntry> entries;
    EnvelopeConstants fitted;
    double spread = 0.0;
    Verdict verdict = Verdict::bounded;
    RatioEntry worst;  // set when violated

    void finalize(double spread_cap);  // computes spread/verdict from entries
};

/// Coordinate descent with ternary search per coordinate on a log scale.
std::vector<double> coordinate_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    const std::vector<double>& lo, const std::vector<double>& hi, int sweeps = 4,
    int iters = 80);

/// max - min of finite log ratios; +inf when any entry is non-finite.
double log_ratio_spread(const std::vector<RatioEntry>& entries);

// --- emission (17 significant digits, fixed column order, stable key order) ---

std::string format_float(double v);

std::string to_csv(const McEstimate& e);
std::string to_csv(const RatioReport& r);
std::string to_csv(const std::vector<std::pair<double, double>>& table,
                   const std::string& xname, const std::string& yname);

std::string to_json(const McEstimate& e);
std::string to_json(const RatioReport& r);
std::string to_json(const std::vector<std::pair<double, double>>& table,
                    const std::string& xname, const std::string& yname);

}  // namespace supkern

#endif
