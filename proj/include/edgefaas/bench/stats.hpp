#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace edgefaas::bench {

struct EmptySamples : std::runtime_error {
    EmptySamples() : std::runtime_error("summarize() needs at least one sample") {}
};

struct Summary {
    double mean = 0, min = 0, max = 0, std = 0, p25 = 0, p50 = 0, p75 = 0;
};

/// Sample standard deviation (n-1); percentiles by linear interpolation over
/// the sorted samples at index p/100 * (n-1).
Summary summarize(const std::vector<double>& samples);

/// Percentile by linear interpolation; samples need not be sorted.
double percentile(std::vector<double> samples, double p);

struct BenchReport {
    std::string test;
    std::string scenario;
    std::string param;
    std::vector<double> samples;
    Summary summary;

    std::size_t n() const { return samples.size(); }

    static BenchReport make(std::string test, std::string scenario, std::string param,
                            std::vector<double> samples);
};

}  // namespace edgefaas::bench
