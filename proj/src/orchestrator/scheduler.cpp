#include "edgefaas/orchestrator/scheduler.hpp"

#include <algorithm>
#include <limits>

namespace edgefaas::orchestrator {

std::string policy_name(SchedulerPolicy p) {
    return p == SchedulerPolicy::ResourceCount ? "resource-count" : "network-aware";
}

SchedulerPolicy policy_from_name(const std::string& name) {
    if (name == "resource-count") return SchedulerPolicy::ResourceCount;
    if (name == "network-aware") return SchedulerPolicy::NetworkAware;
    throw std::invalid_argument("unknown policy: " + name);
}

int Placement::total() const {
    int n = 0;
    for (const auto& [node, count] : assignments) n += count;
    return n;
}

int Placement::count_on(const std::string& node) const {
    for (const auto& [name, count] : assignments)
        if (name == node) return count;
    return 0;
}

double score_resource_count(const NodeSpec& node) {
    double free_cores = std::max(0, node.cpu_cores - node.allocated_replicas);
    return free_cores * node.memory_gb;
}

double score_network_aware(const NodeSpec& node, double client_rtt_ms, double work_units) {
    return client_rtt_ms + work_units / node.compute_factor;
}

Placement schedule(NodeRegistry& registry, const std::string& workload, int replicas,
                   SchedulerPolicy policy, const ScheduleContext& context) {
    if (replicas < 0) throw std::invalid_argument("negative replica count");
    std::lock_guard lock(registry.mutex());
    auto& nodes = registry.unlocked_map();

    int spare = 0;
    for (const auto& [name, spec] : nodes)
        if (!spec.control_plane) spare += spec.spare_capacity();
    if (spare < replicas) throw InsufficientCapacity();

    std::map<std::string, int> assigned;
    for (int i = 0; i < replicas; ++i) {
        const std::string* best = nullptr;
        double best_score = 0.0;
        for (const auto& [name, spec] : nodes) {
            if (spec.control_plane || spec.spare_capacity() <= 0) continue;
            double score;
            if (policy == SchedulerPolicy::ResourceCount) {
                score = score_resource_count(spec);
            } else {
                auto rtt = context.client_rtt_ms.find(spec.site);
                double rtt_ms = rtt == context.client_rtt_ms.end() ? 0.0 : rtt->second;
                // Negated so "higher wins" holds for both policies.
                score = -score_network_aware(spec, rtt_ms, context.work_units);
            }
            // Map iteration is ordered by name, so strict > keeps the
            // lexicographically smallest node on ties.
            if (best == nullptr || score > best_score) {
                best = &name;
                best_score = score;
            }
        }
        if (best == nullptr) throw InsufficientCapacity();
        nodes[*best].allocated_replicas += 1;
        assigned[*best] += 1;
    }

    Placement placement;
    placement.workload = workload;
    placement.policy_used = policy;
    for (const auto& [name, count] : assigned) placement.assignments.emplace_back(name, count);
    return placement;
}

void release(NodeRegistry& registry, const Placement& placement) {
    for (const auto& [name, count] : placement.assignments)
        registry.adjust_allocation(name, -count);
}

}  // namespace edgefaas::orchestrator
