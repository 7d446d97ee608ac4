#include "edgefaas/bench/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace edgefaas::bench {

using nlohmann::json;

std::string link_key(const std::string& a, const std::string& b) {
    // Sites in fixed order, tester always last.
    auto rank = [](const std::string& s) {
        if (s == "OP") return 0;
        if (s == "RS") return 1;
        if (s == "CD") return 2;
        if (s == kTester) return 3;
        throw std::invalid_argument("unknown link endpoint: " + s);
    };
    return rank(a) <= rank(b) ? a + "-" + b : b + "-" + a;
}

const LatencyProfile& Scenario::link(const std::string& a, const std::string& b) const {
    auto it = links.find(link_key(a, b));
    if (it == links.end()) throw IncompleteLinks(link_key(a, b));
    return it->second;
}

const LatencyProfile& Scenario::tester_link(Site site) const {
    return link(orchestrator::site_name(site), kTester);
}

std::vector<Site> Scenario::sites_present() const {
    std::set<Site> sites;
    for (const auto& n : nodes)
        if (!n.control_plane) sites.insert(n.site);
    return {sites.begin(), sites.end()};
}

void Scenario::validate() const {
    if (nodes.empty()) throw ParseError("scenario has no nodes");
    auto sites = sites_present();
    for (const auto& s : sites) {
        tester_link(s);
        for (const auto& t : sites) link(orchestrator::site_name(s), orchestrator::site_name(t));
    }
    for (const auto& [key, profile] : links)
        if (!profile.valid()) throw ParseError("invalid latency profile for " + key);
}

void Scenario::populate(NodeRegistry& registry) const {
    for (const auto& n : nodes) registry.register_node(n);
}

std::map<Site, double> Scenario::tester_rtt_means() const {
    std::map<Site, double> out;
    for (const auto& s : sites_present()) out[s] = tester_link(s).mean_ms;
    return out;
}

const std::map<std::string, LatencyProfile>& reference_link_table() {
    static const std::map<std::string, LatencyProfile> table = {
        {"OP-OP", {0.78, 0.57, 1.25, 0.10}},
        {"OP-test", {1.17, 0.79, 1.97, 0.17}},
        {"RS-RS", {1.23, 0.85, 1.77, 0.28}},
        {"RS-test", {27.57, 25.74, 34.33, 1.63}},
        {"CD-CD", {1.32, 0.46, 10.06, 1.13}},
        {"CD-test", {231.5, 229.1, 242.4, 1.75}},
        {"RS-CD", {232.1, 231.6, 234.2, 0.28}},
        // Cross-site links that were not measured; the tester sits on-premises,
        // so its link to each remote site doubles as the OP link to that site.
        {"OP-RS", {27.57, 25.74, 34.33, 1.63}},
        {"OP-CD", {231.5, 229.1, 242.4, 1.75}},
    };
    return table;
}

namespace {

NodeSpec make_node(const std::string& name, Site site, const std::string& ip, int cores,
                   double mem_gb, double factor, bool control_plane = false) {
    NodeSpec n;
    n.name = name;
    n.site = site;
    n.overlay_ip = OverlayIp::parse(ip);
    n.cpu_cores = cores;
    n.memory_gb = mem_gb;
    n.compute_factor = factor;
    n.control_plane = control_plane;
    return n;
}

std::vector<NodeSpec> op_nodes() {
    return {
        make_node("master", Site::OP, "10.42.0.1", 4, 8, 1.0, true),
        make_node("op-worker-1", Site::OP, "10.42.0.2", 2, 8, 1.0),
        make_node("op-worker-2", Site::OP, "10.42.0.3", 2, 8, 1.0),
    };
}

std::vector<NodeSpec> rs_nodes() {
    return {
        make_node("rpi-1", Site::RS, "10.42.1.1", 4, 8, 0.25),
        make_node("rpi-2", Site::RS, "10.42.1.2", 4, 8, 0.25),
        make_node("rpi-3", Site::RS, "10.42.1.3", 4, 8, 0.25),
        make_node("rpi-4", Site::RS, "10.42.1.4", 4, 8, 0.25),
    };
}

std::vector<NodeSpec> cd_nodes() {
    return {
        make_node("cd-worker-1", Site::CD, "10.42.2.1", 2, 8, 1.0),
        make_node("cd-worker-2", Site::CD, "10.42.2.2", 2, 8, 1.0),
    };
}

}  // namespace

Scenario builtin_scenario(const std::string& name, std::uint64_t seed) {
    Scenario s;
    s.name = name;
    s.seed = seed;
    s.links = reference_link_table();
    if (name == "OP") {
        s.nodes = op_nodes();
    } else if (name == "RS") {
        s.nodes = rs_nodes();
    } else if (name == "CD") {
        s.nodes = cd_nodes();
    } else if (name == "AS") {
        s.nodes = op_nodes();
        auto rs = rs_nodes();
        auto cd = cd_nodes();
        s.nodes.insert(s.nodes.end(), rs.begin(), rs.end());
        s.nodes.insert(s.nodes.end(), cd.begin(), cd.end());
    } else {
        throw ParseError("unknown builtin scenario: " + name);
    }
    s.validate();
    return s;
}

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario JSON: ") + e.what());
    }
    try {
        Scenario s;
        s.name = j.at("name").get<std::string>();
        s.seed = j.value("seed", std::uint64_t(1));
        for (const auto& jn : j.at("nodes")) {
            NodeSpec n = make_node(jn.at("name").get<std::string>(),
                                   orchestrator::site_from_name(jn.at("site").get<std::string>()),
                                   jn.at("overlay_ip").get<std::string>(),
                                   jn.at("cpu_cores").get<int>(), jn.at("memory_gb").get<double>(),
                                   jn.value("compute_factor", 1.0),
                                   jn.value("control_plane", false));
            s.nodes.push_back(n);
        }
        for (const auto& [key, jp] : j.at("links").items()) {
            LatencyProfile p{jp.at("mean").get<double>(), jp.at("min").get<double>(),
                             jp.at("max").get<double>(), jp.at("std").get<double>()};
            s.links[key] = p;
        }
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario JSON: ") + e.what());
    }
}

std::string scenario_to_json_text(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["nodes"] = json::array();
    for (const auto& n : s.nodes) {
        j["nodes"].push_back({{"name", n.name},
                              {"site", orchestrator::site_name(n.site)},
                              {"overlay_ip", n.overlay_ip.str()},
                              {"cpu_cores", n.cpu_cores},
                              {"memory_gb", n.memory_gb},
                              {"compute_factor", n.compute_factor},
                              {"control_plane", n.control_plane}});
    }
    j["links"] = json::object();
    for (const auto& [key, p] : s.links)
        j["links"][key] = {{"mean", p.mean_ms}, {"min", p.min_ms}, {"max", p.max_ms}, {"std", p.std_ms}};
    return j.dump(2);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return scenario_from_json_text(buf.str());
}

}  // namespace edgefaas::bench
