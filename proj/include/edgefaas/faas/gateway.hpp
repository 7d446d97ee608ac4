#pragma once

#include <deque>
#include <functional>
#include <memory>

#include "edgefaas/faas/workloads.hpp"
#include "edgefaas/orchestrator/scheduler.hpp"

namespace edgefaas::faas {

using orchestrator::NodeRegistry;
using orchestrator::Placement;
using orchestrator::ScheduleContext;
using orchestrator::SchedulerPolicy;
using orchestrator::Site;

enum class WorkloadKind { Sentiment, HeavyClassify };

struct FunctionSpec {
    std::string name;
    WorkloadKind kind = WorkloadKind::Sentiment;
    double work_units = 1.0;  // sentiment 1, heavy-classify 1000
    int min_replicas = 1;
    int max_replicas = 8;
    double cold_start_ms = 500.0;
};

FunctionSpec sentiment_spec(int min_replicas = 1, int max_replicas = 8);
FunctionSpec heavy_classify_spec(int min_replicas = 1, int max_replicas = 8);

enum class ReplicaState { Cold, Warm, Busy };

struct Replica {
    int id = 0;
    std::string node;
    Site site = Site::OP;
    double compute_factor = 1.0;
    double warm_at_ms = 0.0;
    double next_free_ms = 0.0;
    double last_used_ms = 0.0;
    std::deque<double> pending_finishes;

    ReplicaState state(double now_ms) const {
        if (now_ms < warm_at_ms) return ReplicaState::Cold;
        return next_free_ms > now_ms ? ReplicaState::Busy : ReplicaState::Warm;
    }
};

enum class Outcome { Ok, Timeout, Error };

struct InvocationRecord {
    std::string function;
    int replica_id = -1;
    std::string node;
    double enqueue_ms = 0.0;
    double start_ms = 0.0;
    double finish_ms = 0.0;
    Outcome outcome = Outcome::Ok;

    double response_ms() const { return finish_ms - enqueue_ms; }
};

struct InvocationResult {
    Bytes body;  // empty on timeout
    InvocationRecord record;
};

struct ScalingAction {
    int scaled_up = 0;
    int scaled_down = 0;
};

struct DuplicateFunction : std::runtime_error {
    explicit DuplicateFunction(const std::string& n)
        : std::runtime_error("function already deployed: " + n) {}
};
struct UnknownFunction : std::runtime_error {
    explicit UnknownFunction(const std::string& n)
        : std::runtime_error("function not deployed: " + n) {}
};

struct AutoscaleConfig {
    double in_flight_threshold = 5.0;
    double window_ms = 1'000.0;
    double cooldown_ms = 30'000.0;  // paper-faithful value is 900 000
};

struct FunctionStats {
    std::uint64_t requests = 0;
    std::uint64_t ok = 0;
    std::uint64_t timeout = 0;
    std::uint64_t error = 0;
};

/// Serverless gateway over the node registry. All timing is expressed on the
/// caller's clock (milliseconds as doubles), so the same core drives both the
/// virtual-clock benchmarks and the wall-clock HTTP API.
class Gateway {
public:
    /// rtt_sampler draws a client<->site round trip per invocation.
    Gateway(NodeRegistry& registry, std::function<double(Site)> rtt_sampler,
            AutoscaleConfig autoscale = {});

    Placement deploy_function(const FunctionSpec& spec, SchedulerPolicy policy,
                              const ScheduleContext& context, double now_ms);

    InvocationResult invoke(const std::string& function, std::span<const std::uint8_t> body,
                            double timeout_ms, double now_ms);

    ScalingAction autoscale_tick(const std::string& function, double now_ms);

    std::vector<FunctionSpec> list_functions() const;
    int live_replicas(const std::string& function) const;
    std::vector<Replica> replicas(const std::string& function) const;
    FunctionStats stats(const std::string& function) const;
    const AutoscaleConfig& autoscale_config() const { return autoscale_; }

    void remove_function(const std::string& function);

private:
    struct Deployment {
        FunctionSpec spec;
        SchedulerPolicy policy;
        ScheduleContext context;
        std::vector<Replica> replicas;
        std::size_t rr_cursor = 0;
        int next_replica_id = 0;
        std::deque<std::pair<double, int>> in_flight_samples;  // (time, total in flight)
        FunctionStats stats;
    };

    Bytes execute(const FunctionSpec& spec, std::span<const std::uint8_t> body) const;
    void add_replica(Deployment& d, const std::string& node, double now_ms);
    int in_flight_total(Deployment& d, double now_ms) const;

    NodeRegistry& registry_;
    std::function<double(Site)> rtt_sampler_;
    AutoscaleConfig autoscale_;
    mutable std::mutex mutex_;
    std::map<std::string, Deployment> deployments_;
};

}  // namespace edgefaas::faas
