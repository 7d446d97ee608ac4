#include "edgefaas/overlay/latency.hpp"

#include <cmath>
#include <stdexcept>

namespace edgefaas::overlay {

std::uint64_t Rng::next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below(0)");
    // Modulo bias is negligible for the ranges used here.
    return next_u64() % n;
}

namespace {

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

/// Mean of N(mu, sigma) clamped (winsorized) to [a, b].
double clamped_mean(double mu, double sigma, double a, double b) {
    double alpha = (a - mu) / sigma;
    double beta = (b - mu) / sigma;
    return a * norm_cdf(alpha) + b * (1.0 - norm_cdf(beta)) +
           mu * (norm_cdf(beta) - norm_cdf(alpha)) + sigma * (norm_pdf(alpha) - norm_pdf(beta));
}

}  // namespace

double calibrate_location(const LatencyProfile& p) {
    if (!p.valid()) throw std::invalid_argument("invalid latency profile");
    if (p.std_ms == 0.0 || p.min_ms == p.max_ms) return p.mean_ms;
    // clamped_mean is strictly increasing in mu; bisect.
    double lo = p.min_ms - 10.0 * p.std_ms;
    double hi = p.max_ms + 10.0 * p.std_ms;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (clamped_mean(mid, p.std_ms, p.min_ms, p.max_ms) < p.mean_ms)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double sample_delay(const LatencyProfile& p, Rng& rng) {
    if (p.std_ms == 0.0 || p.min_ms == p.max_ms) return p.mean_ms;
    double mu = calibrate_location(p);
    double x = mu + p.std_ms * rng.next_gaussian();
    if (x < p.min_ms) return p.min_ms;
    if (x > p.max_ms) return p.max_ms;
    return x;
}

double sample_one_way(const LatencyProfile& p, Rng& rng) {
    return 0.5 * sample_delay(p, rng);
}

DelaySampler::DelaySampler(LatencyProfile profile, std::uint64_t seed)
    : profile_(profile), location_(calibrate_location(profile)), rng_(seed) {}

double DelaySampler::rtt() {
    const LatencyProfile& p = profile_;
    if (p.std_ms == 0.0 || p.min_ms == p.max_ms) return p.mean_ms;
    double x = location_ + p.std_ms * rng_.next_gaussian();
    if (x < p.min_ms) return p.min_ms;
    if (x > p.max_ms) return p.max_ms;
    return x;
}

}  // namespace edgefaas::overlay
