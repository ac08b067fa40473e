#include "supkern/mc.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace supkern {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t batch) {
    std::uint64_t x = seed;
    x ^= 0xd1b54a32d192ed03ULL * (stream + 1);
    x ^= 0x8cb92ba72f3d8dd7ULL * (batch + 1);
    for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u = uniform(), v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * 3.14159265358979323846 * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

McEstimate run_batches(const McConfig& cfg, std::uint64_t stream,
                       const std::function<double(Rng&)>& path_fn) {
    cfg.validate();
    const std::int64_t nbatch = (cfg.paths + kBatchSize - 1) / kBatchSize;
    struct Partial {
        double sum = 0.0, sumsq = 0.0;
        std::int64_t zeros = 0;
    };
    std::vector<Partial> partials(nbatch);

    std::atomic<std::int64_t> next_batch{0};
    auto worker = [&]() {
        for (;;) {
            const std::int64_t b = next_batch.fetch_add(1);
            if (b >= nbatch) return;
            const std::int64_t lo = b * kBatchSize;
            const std::int64_t hi = std::min(cfg.paths, lo + kBatchSize);
            Rng rng(cfg.seed, stream, static_cast<std::uint64_t>(b));
            Partial p;
            for (std::int64_t i = lo; i < hi; ++i) {
                const double w = path_fn(rng);
                p.sum += w;
                p.sumsq += w * w;
                if (w == 0.0) ++p.zeros;
            }
            partials[b] = p;
        }
    };

    const int nthreads = static_cast<int>(
        std::min<std::int64_t>(cfg.threads, std::max<std::int64_t>(1, nbatch)));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // reference accumulation: sequential in batch index
    double sum = 0.0, sumsq = 0.0;
    std::int64_t zeros = 0;
    for (const auto& p : partials) {
        sum += p.sum;
        sumsq += p.sumsq;
        zeros += p.zeros;
    }
    McEstimate est;
    est.n = cfg.paths;
    est.mean = sum / static_cast<double>(cfg.paths);
    if (cfg.paths > 1) {
        const double var =
            std::max(0.0, (sumsq - sum * est.mean) / static_cast<double>(cfg.paths - 1));
        est.std_error = std::sqrt(var / static_cast<double>(cfg.paths));
    }
    est.zero_weight_frac = static_cast<double>(zeros) / static_cast<double>(cfg.paths);
    return est;
}

}  // namespace supkern
