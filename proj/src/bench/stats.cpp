#include "edgefaas/bench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edgefaas::bench {

double percentile(std::vector<double> samples, double p) {
    if (samples.empty()) throw EmptySamples();
    std::sort(samples.begin(), samples.end());
    double idx = p / 100.0 * double(samples.size() - 1);
    std::size_t lo = std::size_t(idx);
    std::size_t hi = std::min(lo + 1, samples.size() - 1);
    double frac = idx - double(lo);
    return samples[lo] * (1.0 - frac) + samples[hi] * frac;
}

Summary summarize(const std::vector<double>& samples) {
    if (samples.empty()) throw EmptySamples();
    Summary s;
    s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / double(samples.size());
    auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
    s.min = *min_it;
    s.max = *max_it;
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double x : samples) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / double(samples.size() - 1));
    }
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    auto interp = [&](double p) {
        double idx = p / 100.0 * double(sorted.size() - 1);
        std::size_t lo = std::size_t(idx);
        std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        double frac = idx - double(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };
    s.p25 = interp(25);
    s.p50 = interp(50);
    s.p75 = interp(75);
    return s;
}

BenchReport BenchReport::make(std::string test, std::string scenario, std::string param,
                              std::vector<double> samples) {
    BenchReport r;
    r.test = std::move(test);
    r.scenario = std::move(scenario);
    r.param = std::move(param);
    r.summary = summarize(samples);
    r.samples = std::move(samples);
    return r;
}

}  // namespace edgefaas::bench
