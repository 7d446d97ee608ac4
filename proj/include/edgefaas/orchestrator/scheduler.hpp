#pragma once

#include "edgefaas/orchestrator/registry.hpp"

namespace edgefaas::orchestrator {

enum class SchedulerPolicy { ResourceCount, NetworkAware };

std::string policy_name(SchedulerPolicy p);
SchedulerPolicy policy_from_name(const std::string& name);

struct Placement {
    std::string workload;
    std::vector<std::pair<std::string, int>> assignments;  // (node name, replica count)
    SchedulerPolicy policy_used = SchedulerPolicy::ResourceCount;

    int total() const;
    int count_on(const std::string& node) const;
};

struct InsufficientCapacity : std::runtime_error {
    InsufficientCapacity() : std::runtime_error("not enough spare capacity for request") {}
};

/// Scheduling context for the network-aware policy: per-site RTT from the
/// client and the expected work per invocation.
struct ScheduleContext {
    std::map<Site, double> client_rtt_ms;
    double work_units = 0.0;
};

/// cores-times-memory score; deliberately blind to compute_factor.
double score_resource_count(const NodeSpec& node);

/// Expected response time in ms; lower is better.
double score_network_aware(const NodeSpec& node, double client_rtt_ms, double work_units);

/// Greedy one-replica-at-a-time assignment with rescoring; ties go to the
/// lexicographically smallest node name.
Placement schedule(NodeRegistry& registry, const std::string& workload, int replicas,
                   SchedulerPolicy policy, const ScheduleContext& context = {});

/// Release the replicas recorded in a placement.
void release(NodeRegistry& registry, const Placement& placement);

}  // namespace edgefaas::orchestrator
