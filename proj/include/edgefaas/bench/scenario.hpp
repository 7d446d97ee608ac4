#pragma once

#include <map>
#include <string>
#include <vector>

#include "edgefaas/orchestrator/registry.hpp"
#include "edgefaas/overlay/latency.hpp"

namespace edgefaas::bench {

using orchestrator::NodeRegistry;
using orchestrator::NodeSpec;
using orchestrator::Site;
using overlay::LatencyProfile;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IncompleteLinks : std::runtime_error {
    explicit IncompleteLinks(const std::string& pair)
        : std::runtime_error("no latency profile for link " + pair) {}
};

/// Link endpoint: a site or the tester machine.
inline constexpr const char* kTester = "test";

/// Canonical link key, order-independent ("OP-test", "RS-CD", ...).
std::string link_key(const std::string& a, const std::string& b);

struct Scenario {
    std::string name;  // OP, RS, CD, AS (or custom)
    std::uint64_t seed = 1;
    std::vector<NodeSpec> nodes;
    std::map<std::string, LatencyProfile> links;

    const LatencyProfile& link(const std::string& a, const std::string& b) const;
    const LatencyProfile& tester_link(Site site) const;
    std::vector<Site> sites_present() const;

    /// Every node-pair link and every tester link must exist.
    void validate() const;

    void populate(NodeRegistry& registry) const;

    /// Tester->site RTT means, used as scheduling context.
    std::map<Site, double> tester_rtt_means() const;
};

/// The measured mesh round-trip table (ms): mean/min/max/std per link.
const std::map<std::string, LatencyProfile>& reference_link_table();

/// Built-in scenarios. OP: 2 VM workers + control plane. RS: 4 RPis.
/// CD: 2 VM workers. AS: all of the above.
Scenario builtin_scenario(const std::string& name, std::uint64_t seed = 1);

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& s);

}  // namespace edgefaas::bench
