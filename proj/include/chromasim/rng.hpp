#pragma once

#include <cstdint>
#include <random>

namespace chromasim {

/// 64-bit finalizer from SplitMix64.
std::uint64_t mix64(std::uint64_t x);

/// Stable stream id for work item `index` under `master_seed`. Never depends
/// on thread ids, scheduling, or wall-clock time.
std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t index);

/// Random stream fully determined by (master_seed, stream_id).
///
/// The engine is std::mt19937_64; the distributions are implemented here
/// rather than taken from <random> because the standard leaves their
/// algorithms unspecified, and dataset checksums must not move with the
/// standard library.
class SeededRng {
public:
    SeededRng(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Independent child stream; `tag` distinguishes siblings.
    SeededRng derive(std::uint64_t tag) const;

    std::uint64_t next_u64() { return engine_(); }
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    std::uint64_t below(std::uint64_t n);   // [0, n)
    bool bernoulli(double p) { return uniform() < p; }
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    double lognormal(double mu, double sigma);
    double gamma(double shape, double scale);
    double beta(double a, double b);

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace chromasim
