#pragma once

#include "edgefaas/bench/report.hpp"
#include "edgefaas/bench/scenario.hpp"
#include "edgefaas/docstore/percolator.hpp"
#include "edgefaas/faas/gateway.hpp"
#include "edgefaas/pubsub/broker.hpp"

namespace edgefaas::bench {

struct LinkDown : std::runtime_error {
    explicit LinkDown(const std::string& pair) : std::runtime_error("link down: " + pair) {}
};
struct BenchIncomplete : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DeploymentMissing : std::runtime_error {
    explicit DeploymentMissing(const std::string& fn)
        : std::runtime_error("function not deployed: " + fn) {}
};

/// Stable per-purpose sub-seed derivation.
std::uint64_t derive_seed(std::uint64_t base, const std::string& purpose);

// ---------------------------------------------------------------- latency ----

/// Round-trip measurements over a real established tunnel pair on loopback,
/// with per-direction emulated delays drawn from the scenario link profile.
BenchReport run_latency_bench(const Scenario& scenario, const std::string& from,
                              const std::string& to, int repetitions = 500);

// ------------------------------------------------------------------- faas ----

struct FaasBenchOptions {
    std::vector<int> thread_counts{1, 8, 32};
    int total_requests = 2'000;  // per sweep point; paper scale is 100x
    double timeout_ms = 60'000.0;
    double cooldown_ms = 30'000.0;  // paper-faithful: 900 000
    double tick_interval_ms = 100.0;
    faas::SchedulerPolicy policy = faas::SchedulerPolicy::ResourceCount;
};

struct FaasSweepPoint {
    BenchReport report;  // valid-response latencies only
    std::uint64_t issued = 0;
    std::uint64_t valid = 0;
    std::uint64_t invalid = 0;
};

/// Closed-loop sweep on a virtual clock: each thread count runs
/// `total_requests` requests from that many concurrent clients with no
/// connection reuse, idling for the cooldown between points.
std::vector<FaasSweepPoint> run_faas_bench(const Scenario& scenario,
                                           const faas::FunctionSpec& function,
                                           const FaasBenchOptions& options);

/// Same sweep against an existing deployment.
std::vector<FaasSweepPoint> run_faas_sweep(faas::Gateway& gateway, const Scenario& scenario,
                                           const std::string& function,
                                           const FaasBenchOptions& options);

// ----------------------------------------------------------------- pubsub ----

struct PubSubBenchResult {
    int publishers = 0;
    int subscribers = 0;
    std::vector<double> pub_msgs_per_s;  // one per repetition
    std::vector<double> sub_msgs_per_s;
    double pub_mean = 0.0;
    double sub_mean = 0.0;
    double pub_std = 0.0;
    double sub_std = 0.0;

    std::vector<BenchReport> reports(const std::string& scenario) const;
};

/// N:M throughput on one broker replica per worker node; clients attach to
/// replicas uniformly at random (seeded); repeated `repetitions` times.
PubSubBenchResult run_pubsub_bench(const Scenario& scenario, int n_pubs, int m_subs,
                                   std::size_t msg_size, std::size_t total_msgs,
                                   int repetitions = 5);

// -------------------------------------------------------------- percolate ----

struct PercolateBenchResult {
    BenchReport report;  // per-document latencies
    std::size_t total_matches = 0;
    /// Modeled replica-sync cost accumulated over the index phase.
    double index_sync_ms = 0.0;
};

PercolateBenchResult run_percolate_bench(const Scenario& scenario, std::size_t n_queries,
                                         std::size_t n_docs, bool scoring);

/// Service-time knobs shared by the drivers (work-units).
inline constexpr double kPercolateBaseWork = 2.0;
inline constexpr double kPercolatePerMatchWork = 0.05;
inline constexpr double kPublishCpuWorkPerMessage = 0.02;

}  // namespace edgefaas::bench
