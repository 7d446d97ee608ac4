#pragma once

#include <cstdint>

namespace edgefaas::overlay {

/// Deterministic PRNG (splitmix64) with a hand-rolled Box-Muller gaussian so that
/// sample streams are bit-identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double next_double();
    /// Standard normal.
    double next_gaussian();
    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n);

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Round-trip delay statistics for one link, in milliseconds. Sampled values are
/// a normal clamped to [min, max]; the location parameter is calibrated so the
/// clamped mean matches `mean` even for heavily skewed rows.
struct LatencyProfile {
    double mean_ms = 0.0;
    double min_ms = 0.0;
    double max_ms = 0.0;
    double std_ms = 0.0;

    bool valid() const {
        return min_ms <= mean_ms && mean_ms <= max_ms && std_ms >= 0.0;
    }

    bool operator==(const LatencyProfile&) const = default;
};

/// Location parameter mu such that E[clamp(N(mu, std), min, max)] == mean.
double calibrate_location(const LatencyProfile& profile);

/// One round-trip delay draw from the profile, always inside [min, max].
double sample_delay(const LatencyProfile& profile, Rng& rng);

/// One-way delay: half of a round-trip draw.
double sample_one_way(const LatencyProfile& profile, Rng& rng);

/// Per-link sampler with the calibrated location cached and its own RNG stream.
class DelaySampler {
public:
    DelaySampler(LatencyProfile profile, std::uint64_t seed);

    double rtt();
    double one_way() { return 0.5 * rtt(); }
    const LatencyProfile& profile() const { return profile_; }

private:
    LatencyProfile profile_;
    double location_;
    Rng rng_;
};

}  // namespace edgefaas::overlay
