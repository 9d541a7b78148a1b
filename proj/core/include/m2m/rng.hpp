#pragma once

#include <cstdint>
#include <string_view>

namespace m2m {

/// Deterministic random source. All distributions are implemented on top of
/// raw 64-bit draws so that results are reproducible across platforms and
/// standard-library versions (std::*_distribution is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi);

    double exponential(double rate);
    double normal();
    double gamma(double shape);
    double beta(double a, double b);

    /// Independent stream derived from this generator's seed and a label;
    /// does not consume state from *this.
    Rng derive(std::string_view label, std::uint64_t index = 0) const;

  private:
    std::uint64_t state_[4];
    std::uint64_t seed_;
};

/// SplitMix64 step, used for seed expansion and derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// FNV-1a hash of a label, for derived stream seeds.
std::uint64_t hash_label(std::string_view label);

/// Seed of the stream derived from (base, label, index); what Rng::derive
/// constructs its result from.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index = 0);

}  // namespace m2m
