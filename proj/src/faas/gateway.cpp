#include "edgefaas/faas/gateway.hpp"

#include <algorithm>

#include "json.hpp"

namespace edgefaas::faas {

FunctionSpec sentiment_spec(int min_replicas, int max_replicas) {
    return FunctionSpec{"sentiment", WorkloadKind::Sentiment, 1.0, min_replicas, max_replicas, 500.0};
}

FunctionSpec heavy_classify_spec(int min_replicas, int max_replicas) {
    return FunctionSpec{"heavy-classify", WorkloadKind::HeavyClassify, 1000.0, min_replicas,
                        max_replicas, 500.0};
}

Gateway::Gateway(NodeRegistry& registry, std::function<double(Site)> rtt_sampler,
                 AutoscaleConfig autoscale)
    : registry_(registry), rtt_sampler_(std::move(rtt_sampler)), autoscale_(autoscale) {
    if (!rtt_sampler_) rtt_sampler_ = [](Site) { return 0.0; };
}

void Gateway::add_replica(Deployment& d, const std::string& node, double now_ms) {
    auto spec = registry_.get(node);
    Replica r;
    r.id = d.next_replica_id++;
    r.node = node;
    r.site = spec.site;
    r.compute_factor = spec.compute_factor;
    r.warm_at_ms = now_ms + d.spec.cold_start_ms;
    r.next_free_ms = now_ms;
    r.last_used_ms = now_ms;
    d.replicas.push_back(std::move(r));
}

Placement Gateway::deploy_function(const FunctionSpec& spec, SchedulerPolicy policy,
                                   const ScheduleContext& context, double now_ms) {
    if (spec.min_replicas < 1 || spec.min_replicas > spec.max_replicas)
        throw std::invalid_argument("need 1 <= min_replicas <= max_replicas");
    if (spec.work_units <= 0.0) throw std::invalid_argument("work_units must be > 0");
    std::unique_lock lock(mutex_);
    if (deployments_.contains(spec.name)) throw DuplicateFunction(spec.name);
    Placement placement =
        orchestrator::schedule(registry_, spec.name, spec.min_replicas, policy, context);
    Deployment d;
    d.spec = spec;
    d.policy = policy;
    d.context = context;
    for (const auto& [node, count] : placement.assignments)
        for (int i = 0; i < count; ++i) add_replica(d, node, now_ms);
    deployments_[spec.name] = std::move(d);
    return placement;
}

Bytes Gateway::execute(const FunctionSpec& spec, std::span<const std::uint8_t> body) const {
    nlohmann::json out;
    std::string text(body.begin(), body.end());
    if (spec.kind == WorkloadKind::Sentiment) {
        SentimentResult r = run_sentiment(text);
        out = {{"polarity", r.polarity}, {"subjectivity", r.subjectivity}};
    } else {
        static const std::vector<std::string> kLabels = {"cat", "dog", "bird", "car", "plane"};
        std::uint64_t seed = 1469598103934665603ULL;  // FNV-1a over the body
        for (std::uint8_t b : body) seed = (seed ^ b) * 1099511628211ULL;
        ClassifyResult r = run_heavy_classify(seed, kLabels);
        out = {{"label", r.label}, {"checksum", r.checksum}};
    }
    std::string s = out.dump();
    return Bytes(s.begin(), s.end());
}

InvocationResult Gateway::invoke(const std::string& function, std::span<const std::uint8_t> body,
                                 double timeout_ms, double now_ms) {
    std::unique_lock lock(mutex_);
    auto it = deployments_.find(function);
    if (it == deployments_.end()) throw UnknownFunction(function);
    Deployment& d = it->second;
    if (d.replicas.empty()) throw UnknownFunction(function);

    Replica& replica = d.replicas[d.rr_cursor % d.replicas.size()];
    d.rr_cursor += 1;

    double rtt = rtt_sampler_(replica.site);
    double arrival = now_ms + rtt / 2.0;
    double start = std::max({arrival, replica.warm_at_ms, replica.next_free_ms});
    double service = d.spec.work_units / replica.compute_factor;
    double finish_at_node = start + service;
    double finish = finish_at_node + rtt / 2.0;

    replica.next_free_ms = finish_at_node;
    replica.last_used_ms = finish_at_node;
    replica.pending_finishes.push_back(finish_at_node);

    InvocationRecord rec;
    rec.function = function;
    rec.replica_id = replica.id;
    rec.node = replica.node;
    rec.enqueue_ms = now_ms;
    rec.start_ms = start;
    rec.finish_ms = finish;

    d.stats.requests += 1;
    InvocationResult result;
    if (rec.response_ms() > timeout_ms) {
        rec.outcome = Outcome::Timeout;
        rec.finish_ms = now_ms + timeout_ms;
        d.stats.timeout += 1;
    } else {
        rec.outcome = Outcome::Ok;
        d.stats.ok += 1;
        FunctionSpec spec = d.spec;
        lock.unlock();
        result.body = execute(spec, body);
    }
    result.record = rec;
    return result;
}

int Gateway::in_flight_total(Deployment& d, double now_ms) const {
    int total = 0;
    for (auto& r : d.replicas) {
        while (!r.pending_finishes.empty() && r.pending_finishes.front() <= now_ms)
            r.pending_finishes.pop_front();
        total += int(r.pending_finishes.size());
    }
    return total;
}

ScalingAction Gateway::autoscale_tick(const std::string& function, double now_ms) {
    std::lock_guard lock(mutex_);
    auto it = deployments_.find(function);
    if (it == deployments_.end()) throw UnknownFunction(function);
    Deployment& d = it->second;
    ScalingAction action;

    int in_flight = in_flight_total(d, now_ms);
    d.in_flight_samples.emplace_back(now_ms, in_flight);
    while (!d.in_flight_samples.empty() &&
           d.in_flight_samples.front().first < now_ms - autoscale_.window_ms)
        d.in_flight_samples.pop_front();

    int warm = 0;
    for (const auto& r : d.replicas)
        if (now_ms >= r.warm_at_ms) warm += 1;

    double mean_in_flight = 0.0;
    for (const auto& [t, n] : d.in_flight_samples) mean_in_flight += n;
    mean_in_flight /= double(d.in_flight_samples.size());

    if (warm > 0 && int(d.replicas.size()) < d.spec.max_replicas &&
        mean_in_flight / double(warm) > autoscale_.in_flight_threshold) {
        try {
            Placement p = orchestrator::schedule(registry_, d.spec.name, 1, d.policy, d.context);
            add_replica(d, p.assignments.front().first, now_ms);
            action.scaled_up = 1;
        } catch (const orchestrator::InsufficientCapacity&) {
            // capacity exhausted: hold at current size
        }
    }

    // Retire idle replicas down toward the floor.
    for (auto r = d.replicas.begin();
         r != d.replicas.end() && int(d.replicas.size()) > d.spec.min_replicas;) {
        bool idle = r->pending_finishes.empty() && r->next_free_ms <= now_ms &&
                    now_ms - r->last_used_ms > autoscale_.cooldown_ms;
        if (idle) {
            registry_.adjust_allocation(r->node, -1);
            r = d.replicas.erase(r);
            action.scaled_down += 1;
        } else {
            ++r;
        }
    }
    return action;
}

std::vector<FunctionSpec> Gateway::list_functions() const {
    std::lock_guard lock(mutex_);
    std::vector<FunctionSpec> out;
    for (const auto& [name, d] : deployments_) out.push_back(d.spec);
    return out;
}

int Gateway::live_replicas(const std::string& function) const {
    std::lock_guard lock(mutex_);
    auto it = deployments_.find(function);
    if (it == deployments_.end()) throw UnknownFunction(function);
    return int(it->second.replicas.size());
}

std::vector<Replica> Gateway::replicas(const std::string& function) const {
    std::lock_guard lock(mutex_);
    auto it = deployments_.find(function);
    if (it == deployments_.end()) throw UnknownFunction(function);
    return it->second.replicas;
}

FunctionStats Gateway::stats(const std::string& function) const {
    std::lock_guard lock(mutex_);
    auto it = deployments_.find(function);
    if (it == deployments_.end()) throw UnknownFunction(function);
    return it->second.stats;
}

void Gateway::remove_function(const std::string& function) {
    std::lock_guard lock(mutex_);
    auto it = deployments_.find(function);
    if (it == deployments_.end()) return;
    for (const auto& r : it->second.replicas) registry_.adjust_allocation(r.node, -1);
    deployments_.erase(it);
}

}  // namespace edgefaas::faas
