#include "edgefaas/bench/drivers.hpp"

#include <algorithm>
#include <cstring>
#include <queue>
#include <thread>

#include "edgefaas/overlay/mesh.hpp"

namespace edgefaas::bench {

using overlay::DelaySampler;
using overlay::LatencyProfile;

std::uint64_t derive_seed(std::uint64_t base, const std::string& purpose) {
    std::uint64_t h = 1469598103934665603ULL ^ base;
    for (unsigned char c : purpose) h = (h ^ c) * 1099511628211ULL;
    h ^= base * 0x9E3779B97F4A7C15ULL;
    return h;
}

// ---------------------------------------------------------------- latency ----

BenchReport run_latency_bench(const Scenario& scenario, const std::string& from,
                              const std::string& to, int repetitions) {
    LatencyProfile profile;
    try {
        profile = scenario.links.at(link_key(from, to));
    } catch (const std::exception&) {
        throw LinkDown(link_key(from, to));
    }
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");

    using namespace overlay;
    CertificateAuthority ca = CertificateAuthority::generate();
    std::uint64_t now_s = now_unix_seconds();
    NodeIdentity id_a = issue_identity(ca, "bench-" + from, OverlayIp(10, 99, 0, 1), {}, 3600, now_s);
    NodeIdentity id_b = issue_identity(ca, "bench-" + to, OverlayIp(10, 99, 0, 2), {}, 3600, now_s);

    Lighthouse lighthouse(loopback_endpoint(0));
    lighthouse.start();
    MeshNode node_a(id_a, ca.public_key(), lighthouse.endpoint());
    MeshNode node_b(id_b, ca.public_key(), lighthouse.endpoint());
    node_a.start();
    node_b.start();
    node_a.register_with_lighthouse();
    node_b.register_with_lighthouse();

    std::string tag = link_key(from, to);
    node_a.set_link_emulation(id_b.certificate.overlay_ip, profile,
                              derive_seed(scenario.seed, "lat-bwd-" + tag));
    node_b.set_link_emulation(id_a.certificate.overlay_ip, profile,
                              derive_seed(scenario.seed, "lat-fwd-" + tag));

    node_a.establish_tunnel(id_b.certificate.overlay_ip);
    // Responder-side echo loop.
    std::atomic<bool> echo_running{true};
    std::thread echo([&] {
        while (echo_running.load()) {
            auto msg = node_b.recv(20);
            if (!msg) continue;
            Bytes reply = msg->payload;
            // carry the forward-leg delay back to the initiator
            double fwd = msg->emulated_delay_ms;
            reply.resize(sizeof(double));
            std::memcpy(reply.data(), &fwd, sizeof(double));
            node_b.send(msg->from, reply);
        }
    });

    std::vector<double> samples;
    samples.reserve(std::size_t(repetitions));
    Bytes ping(sizeof(double), 0);
    for (int i = 0; i < repetitions; ++i) {
        node_a.send(id_b.certificate.overlay_ip, ping);
        auto pong = node_a.recv(2000);
        if (!pong) throw BenchIncomplete("echo lost on " + tag);
        double fwd = 0.0;
        std::memcpy(&fwd, pong->payload.data(), sizeof(double));
        samples.push_back(fwd + pong->emulated_delay_ms);
    }
    echo_running.store(false);
    echo.join();
    node_a.stop();
    node_b.stop();
    lighthouse.stop();

    return BenchReport::make("latency", scenario.name, tag, std::move(samples));
}

// ------------------------------------------------------------------- faas ----

namespace {

/// One seeded RTT sampler per site for the tester links.
class SiteRttSampler {
public:
    SiteRttSampler(const Scenario& scenario, const std::string& purpose) {
        for (Site site : scenario.sites_present())
            samplers_.emplace(site, DelaySampler(scenario.tester_link(site),
                                                 derive_seed(scenario.seed,
                                                             purpose + orchestrator::site_name(site))));
    }

    double operator()(Site site) {
        auto it = samplers_.find(site);
        return it == samplers_.end() ? 0.0 : it->second.rtt();
    }

private:
    std::map<Site, DelaySampler> samplers_;
};

}  // namespace

std::vector<FaasSweepPoint> run_faas_sweep(faas::Gateway& gateway, const Scenario& scenario,
                                           const std::string& function,
                                           const FaasBenchOptions& options) {
    auto deployed = gateway.list_functions();
    if (std::none_of(deployed.begin(), deployed.end(),
                     [&](const auto& f) { return f.name == function; }))
        throw DeploymentMissing(function);

    std::vector<FaasSweepPoint> points;
    double now = 0.0;
    double next_tick = 0.0;
    auto run_ticks_until = [&](double t) {
        while (next_tick <= t) {
            gateway.autoscale_tick(function, next_tick);
            next_tick += options.tick_interval_ms;
        }
    };

    overlay::Rng body_rng(derive_seed(scenario.seed, "faas-body-" + function));
    static const std::vector<std::string> kPhrases = {
        "a great day at the edge",       "this is not good at all",
        "the service was fast and nice", "terrible delay on the remote link",
        "results look happy and stable", "the worst response we have seen"};

    for (int threads : options.thread_counts) {
        auto before = gateway.stats(function);
        // (ready_time, client_id) min-heap; ties resolved by client id.
        using Event = std::pair<double, int>;
        std::priority_queue<Event, std::vector<Event>, std::greater<>> ready;
        for (int c = 0; c < threads; ++c) ready.emplace(now, c);
        int issued = 0;
        std::vector<double> latencies;
        latencies.reserve(std::size_t(options.total_requests));

        while (issued < options.total_requests) {
            auto [t, client] = ready.top();
            ready.pop();
            run_ticks_until(t);
            const std::string& phrase = kPhrases[body_rng.next_below(kPhrases.size())];
            Bytes body(phrase.begin(), phrase.end());
            auto result = gateway.invoke(function, body, options.timeout_ms, t);
            issued += 1;
            double done = t + result.record.response_ms();
            if (result.record.outcome == faas::Outcome::Ok)
                latencies.push_back(result.record.response_ms());
            now = std::max(now, done);
            if (issued + int(ready.size()) < options.total_requests) ready.emplace(done, client);
        }

        auto after = gateway.stats(function);
        FaasSweepPoint point;
        point.issued = after.requests - before.requests;
        point.valid = after.ok - before.ok;
        point.invalid = point.issued - point.valid;
        point.report = BenchReport::make("faas-" + function, scenario.name,
                                         "threads=" + std::to_string(threads), std::move(latencies));
        points.push_back(std::move(point));

        // Idle through the scale-down cooldown before the next sweep point.
        double idle_end = now + options.cooldown_ms + 2.0 * options.tick_interval_ms;
        run_ticks_until(idle_end);
        now = idle_end;
    }
    return points;
}

std::vector<FaasSweepPoint> run_faas_bench(const Scenario& scenario,
                                           const faas::FunctionSpec& function,
                                           const FaasBenchOptions& options) {
    NodeRegistry registry;
    scenario.populate(registry);
    auto sampler = std::make_shared<SiteRttSampler>(scenario, "faas-rtt-" + function.name);
    faas::Gateway gateway(registry, [sampler](Site s) { return (*sampler)(s); });
    faas::ScheduleContext context{scenario.tester_rtt_means(), function.work_units};
    gateway.deploy_function(function, options.policy, context, 0.0);
    return run_faas_sweep(gateway, scenario, function.name, options);
}

// ----------------------------------------------------------------- pubsub ----

std::vector<BenchReport> PubSubBenchResult::reports(const std::string& scenario) const {
    std::string param = std::to_string(publishers) + ":" + std::to_string(subscribers);
    return {BenchReport::make("pubsub-pub", scenario, param, pub_msgs_per_s),
            BenchReport::make("pubsub-sub", scenario, param, sub_msgs_per_s)};
}

PubSubBenchResult run_pubsub_bench(const Scenario& scenario, int n_pubs, int m_subs,
                                   std::size_t msg_size, std::size_t total_msgs,
                                   int repetitions) {
    if (n_pubs < 1 || m_subs < 1) throw std::invalid_argument("need at least one pub and sub");
    std::vector<NodeSpec> workers;
    for (const auto& n : scenario.nodes)
        if (!n.control_plane) workers.push_back(n);
    if (workers.empty()) throw std::invalid_argument("scenario has no worker nodes");

    PubSubBenchResult result;
    result.publishers = n_pubs;
    result.subscribers = m_subs;

    for (int rep = 0; rep < repetitions; ++rep) {
        std::string rep_tag = "pubsub-rep" + std::to_string(rep);
        auto pair_sampler = std::make_shared<std::map<std::string, DelaySampler>>();

        std::map<std::string, Site> node_site;
        for (const auto& n : workers) node_site[n.name] = n.site;
        std::map<std::string, double> node_factor;
        for (const auto& n : workers) node_factor[n.name] = n.compute_factor;

        auto sync_rtt = [&, pair_sampler](const std::string& a, const std::string& b) {
            std::string key = a < b ? a + "|" + b : b + "|" + a;
            auto it = pair_sampler->find(key);
            if (it == pair_sampler->end()) {
                const LatencyProfile& p = scenario.link(orchestrator::site_name(node_site.at(a)),
                                                        orchestrator::site_name(node_site.at(b)));
                it = pair_sampler
                         ->emplace(key, DelaySampler(p, derive_seed(scenario.seed, rep_tag + key)))
                         .first;
            }
            return it->second.rtt();
        };

        pubsub::BrokerCluster cluster(sync_rtt);
        for (const auto& n : workers) cluster.add_replica(n.name, n.site);

        overlay::Rng attach_rng(derive_seed(scenario.seed, rep_tag + "-attach"));
        const std::string subject = "bench.throughput";

        struct Sub {
            int replica;
            std::shared_ptr<pubsub::Subscription> handle;
        };
        std::vector<Sub> subs;
        for (int s = 0; s < m_subs; ++s) {
            int replica = int(attach_rng.next_below(cluster.replica_count()));
            subs.push_back({replica, cluster.subscribe(replica, subject)});
        }

        std::map<Site, DelaySampler> tester_samplers;
        for (Site site : scenario.sites_present())
            tester_samplers.emplace(
                site, DelaySampler(scenario.tester_link(site),
                                   derive_seed(scenario.seed,
                                               rep_tag + "t" + orchestrator::site_name(site))));

        std::size_t per_pub = total_msgs / std::size_t(n_pubs);
        std::size_t remainder = total_msgs % std::size_t(n_pubs);
        double slowest_publisher = 0.0;
        for (int p = 0; p < n_pubs; ++p) {
            int replica = int(attach_rng.next_below(cluster.replica_count()));
            const std::string& node = cluster.node_of(replica);
            Site site = node_site.at(node);
            double cpu_ms = kPublishCpuWorkPerMessage * double(msg_size) / 64.0 / node_factor.at(node);
            std::size_t count = per_pub + (std::size_t(p) < remainder ? 1 : 0);
            double t = 0.0;
            for (std::size_t m = 0; m < count; ++m) {
                double rtt = tester_samplers.at(site).rtt();
                pubsub::Message msg;
                msg.subject = subject;
                msg.payload.assign(msg_size, std::uint8_t(m & 0xFF));
                msg.publisher_id = "pub-" + std::to_string(p);
                msg.publisher_seq = m + 1;
                double at_node = t + rtt / 2.0 + cpu_ms;
                auto pub = cluster.publish(replica, msg, at_node);
                t = pub.commit_time_ms + rtt / 2.0;  // ack awaited all peers
            }
            slowest_publisher = std::max(slowest_publisher, t);
        }

        double last_delivery = 0.0;
        for (const auto& sub : subs) {
            auto deliveries = sub.handle->drain();
            if (deliveries.size() != total_msgs)
                throw BenchIncomplete("subscriber received " + std::to_string(deliveries.size()) +
                                      " of " + std::to_string(total_msgs));
            for (const auto& d : deliveries) last_delivery = std::max(last_delivery, d.delivered_at_ms);
        }

        result.pub_msgs_per_s.push_back(double(total_msgs) / (slowest_publisher / 1000.0));
        double sub_window = std::max(last_delivery, slowest_publisher);
        result.sub_msgs_per_s.push_back(double(total_msgs * subs.size()) / (sub_window / 1000.0));
    }

    Summary ps = summarize(result.pub_msgs_per_s);
    Summary ss = summarize(result.sub_msgs_per_s);
    result.pub_mean = ps.mean;
    result.sub_mean = ss.mean;
    result.pub_std = ps.std;
    result.sub_std = ss.std;
    return result;
}

// -------------------------------------------------------------- percolate ----

PercolateBenchResult run_percolate_bench(const Scenario& scenario, std::size_t n_queries,
                                         std::size_t n_docs, bool scoring) {
    std::vector<NodeSpec> workers;
    for (const auto& n : scenario.nodes)
        if (!n.control_plane) workers.push_back(n);
    if (workers.empty()) throw std::invalid_argument("scenario has no worker nodes");

    auto corpus = docstore::make_synthetic_corpus(n_queries, n_docs,
                                                  derive_seed(scenario.seed, "percolate-corpus"));
    docstore::PercolatorStore store;

    // Index phase: every registration crosses one replica-sync round trip when
    // the store spans multiple nodes.
    PercolateBenchResult result;
    result.total_matches = 0;
    if (workers.size() > 1) {
        DelaySampler sync(scenario.link(orchestrator::site_name(workers[0].site),
                                        orchestrator::site_name(workers[1].site)),
                          derive_seed(scenario.seed, "percolate-sync"));
        for (const auto& q : corpus.queries) {
            store.register_query(q);
            result.index_sync_ms += sync.rtt();
        }
    } else {
        for (const auto& q : corpus.queries) store.register_query(q);
    }

    std::map<Site, DelaySampler> tester_samplers;
    for (Site site : scenario.sites_present())
        tester_samplers.emplace(site,
                                DelaySampler(scenario.tester_link(site),
                                             derive_seed(scenario.seed,
                                                         "percolate-rtt" + orchestrator::site_name(site))));
    overlay::Rng route_rng(derive_seed(scenario.seed, "percolate-route"));

    std::vector<double> latencies;
    latencies.reserve(n_docs);
    for (const auto& doc : corpus.documents) {
        const NodeSpec& node = workers[route_rng.next_below(workers.size())];
        auto matches = store.percolate(doc, scoring);
        result.total_matches += matches.size();
        double work = kPercolateBaseWork;
        if (scoring) work += kPercolatePerMatchWork * double(matches.size());
        double latency = tester_samplers.at(node.site).rtt() + work / node.compute_factor;
        latencies.push_back(latency);
    }
    result.report = BenchReport::make("percolate", scenario.name,
                                      scoring ? "scoring=on" : "scoring=off", std::move(latencies));
    return result;
}

}  // namespace edgefaas::bench
