#include "edgefaas/orchestrator/registry.hpp"

namespace edgefaas::orchestrator {

std::string site_name(Site s) {
    switch (s) {
        case Site::OP: return "OP";
        case Site::RS: return "RS";
        case Site::CD: return "CD";
    }
    return "?";
}

Site site_from_name(const std::string& name) {
    if (name == "OP") return Site::OP;
    if (name == "RS") return Site::RS;
    if (name == "CD") return Site::CD;
    throw std::invalid_argument("unknown site: " + name);
}

void NodeRegistry::register_node(const NodeSpec& spec) {
    if (spec.cpu_cores < 1) throw std::invalid_argument("cpu_cores must be >= 1");
    if (spec.compute_factor <= 0.0) throw std::invalid_argument("compute_factor must be > 0");
    std::lock_guard lock(mutex_);
    if (nodes_.contains(spec.name)) throw DuplicateNode(spec.name);
    NodeSpec stored = spec;
    stored.allocated_replicas = 0;
    nodes_[spec.name] = stored;
}

std::vector<NodeSpec> NodeRegistry::nodes() const {
    std::lock_guard lock(mutex_);
    std::vector<NodeSpec> out;
    for (const auto& [name, spec] : nodes_) out.push_back(spec);
    return out;
}

std::vector<NodeSpec> NodeRegistry::schedulable_nodes() const {
    std::lock_guard lock(mutex_);
    std::vector<NodeSpec> out;
    for (const auto& [name, spec] : nodes_)
        if (!spec.control_plane) out.push_back(spec);
    return out;
}

NodeSpec NodeRegistry::get(const std::string& name) const {
    std::lock_guard lock(mutex_);
    auto it = nodes_.find(name);
    if (it == nodes_.end()) throw UnknownNode(name);
    return it->second;
}

void NodeRegistry::adjust_allocation(const std::string& name, int delta) {
    std::lock_guard lock(mutex_);
    auto it = nodes_.find(name);
    if (it == nodes_.end()) throw UnknownNode(name);
    int next = it->second.allocated_replicas + delta;
    if (next < 0 || next > it->second.replica_cap())
        throw std::invalid_argument("allocation out of range on " + name);
    it->second.allocated_replicas = next;
}

int NodeRegistry::total_spare_capacity() const {
    std::lock_guard lock(mutex_);
    int total = 0;
    for (const auto& [name, spec] : nodes_)
        if (!spec.control_plane) total += spec.spare_capacity();
    return total;
}

void NodeRegistry::clear() {
    std::lock_guard lock(mutex_);
    nodes_.clear();
}

}  // namespace edgefaas::orchestrator
