#ifndef SUPKERN_MC_HPP
#define SUPKERN_MC_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "supkern/params.hpp"

namespace supkern {

/// Monte Carlo controls shared by every estimator.
struct McConfig {
    std::int64_t paths = 100000;
    double dt = 0.005;            // base time step
    double substep_theta = 0.2;   // refine until dt_loc <= theta * r^{2+2 beta} / kappa
    double weight_floor = -745.0; // log-weights below this clamp to exact zero
    std::uint64_t seed = 0;
    int threads = 1;
    double r_min = 1e-4;          // hard cutoff radius: samples inside get weight zero
    std::int64_t max_steps = 1000000;

    void validate() const {
        if (paths < 1) throw std::invalid_argument("McConfig: paths >= 1 required");
        if (!(dt > 0)) throw std::invalid_argument("McConfig: dt must be positive");
        if (!(substep_theta > 0))
            throw std::invalid_argument("McConfig: substep_theta must be positive");
        if (weight_floor > 0)
            throw std::invalid_argument("McConfig: weight_floor must be <= 0");
        if (threads < 1) throw std::invalid_argument("McConfig: threads >= 1 required");
    }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
    double zero_weight_frac = 0.0;
    std::int64_t budget_exhausted = 0;  // informational, not serialized
};

/// Deterministic splittable RNG: xoshiro256++ seeded through splitmix64 from
/// (seed, stream, batch).  Identical results for any thread count.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t batch);
    double uniform();  // (0,1)
    double normal();

private:
    std::uint64_t next();
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Runs `paths` evaluations of path_fn in fixed-size batches with per-batch
/// RNG streams; accumulation is sequential in batch index, so the estimate is
/// bit-identical for any cfg.threads.  path_fn returns the path weight;
/// weights of exactly zero count toward zero_weight_frac.
McEstimate run_batches(const McConfig& cfg, std::uint64_t stream,
                       const std::function<double(Rng&)>& path_fn);

constexpr std::int64_t kBatchSize = 4096;

}  // namespace supkern

#endif
