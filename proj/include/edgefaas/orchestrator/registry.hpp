#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "edgefaas/common.hpp"

namespace edgefaas::orchestrator {

enum class Site { OP, RS, CD };

std::string site_name(Site s);
Site site_from_name(const std::string& name);

struct NodeSpec {
    std::string name;
    Site site = Site::OP;
    OverlayIp overlay_ip;
    int cpu_cores = 1;
    double memory_gb = 0.0;
    /// Work-units per millisecond; VMs 1.0, RPis 0.25 by default.
    double compute_factor = 1.0;
    int allocated_replicas = 0;
    bool control_plane = false;

    /// One replica per core.
    int replica_cap() const { return cpu_cores; }
    int spare_capacity() const { return std::max(0, replica_cap() - allocated_replicas); }
};

struct DuplicateNode : std::runtime_error {
    explicit DuplicateNode(const std::string& name)
        : std::runtime_error("node already registered: " + name) {}
};
struct UnknownNode : std::runtime_error {
    explicit UnknownNode(const std::string& name)
        : std::runtime_error("node not registered: " + name) {}
};

class NodeRegistry {
public:
    void register_node(const NodeSpec& spec);

    std::vector<NodeSpec> nodes() const;
    std::vector<NodeSpec> schedulable_nodes() const;
    NodeSpec get(const std::string& name) const;

    void adjust_allocation(const std::string& name, int delta);
    int total_spare_capacity() const;
    void clear();

    /// Internal lock, shared with the scheduler so placement is atomic with
    /// respect to concurrent registrations.
    std::mutex& mutex() const { return mutex_; }
    std::map<std::string, NodeSpec>& unlocked_map() { return nodes_; }

private:
    mutable std::mutex mutex_;
    std::map<std::string, NodeSpec> nodes_;
};

}  // namespace edgefaas::orchestrator
