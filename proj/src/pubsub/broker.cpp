#include "edgefaas/pubsub/broker.hpp"

#include <algorithm>

namespace edgefaas::pubsub {

void Subscription::push(Delivery d) {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(d));
}

std::vector<Delivery> Subscription::drain() {
    std::lock_guard lock(mutex_);
    std::vector<Delivery> out(queue_.begin(), queue_.end());
    queue_.clear();
    return out;
}

std::size_t Subscription::count() const {
    std::lock_guard lock(mutex_);
    return queue_.size();
}

BrokerCluster::BrokerCluster(std::function<double(const std::string&, const std::string&)> link_rtt)
    : link_rtt_(std::move(link_rtt)) {}

int BrokerCluster::add_replica(const std::string& node_name, Site site) {
    std::lock_guard lock(mutex_);
    Replica r;
    r.node = node_name;
    r.site = site;
    replicas_.push_back(std::move(r));
    return int(replicas_.size()) - 1;
}

int BrokerCluster::replica_count() const {
    std::lock_guard lock(mutex_);
    return int(replicas_.size());
}

const std::string& BrokerCluster::node_of(int replica) const {
    std::lock_guard lock(mutex_);
    return replicas_.at(replica).node;
}

std::shared_ptr<Subscription> BrokerCluster::subscribe(int replica, const std::string& subject) {
    std::lock_guard lock(mutex_);
    auto sub = std::make_shared<Subscription>();
    replicas_.at(replica).subscriptions[subject].push_back(sub);
    return sub;
}

void BrokerCluster::append_and_fan_out(Replica& r, const Message& msg, double arrival_ms) {
    MessageId id{msg.publisher_id, msg.publisher_seq};
    if (r.seen.contains(id)) return;  // exactly-once per replica
    r.seen.insert(id);
    r.log.push_back(msg);
    auto subs = r.subscriptions.find(msg.subject);
    if (subs == r.subscriptions.end()) return;
    for (auto& sub : subs->second) sub->push(Delivery{msg, arrival_ms});
}

PublishResult BrokerCluster::publish(int replica, const Message& msg, double now_ms) {
    std::lock_guard lock(mutex_);
    Replica& local = replicas_.at(replica);
    if (local.down) throw std::runtime_error("publishing to a down replica");
    append_and_fan_out(local, msg, now_ms);

    PublishResult result;
    double slowest_sync = 0.0;
    for (std::size_t i = 0; i < replicas_.size(); ++i) {
        if (int(i) == replica) continue;
        Replica& peer = replicas_[i];
        if (peer.down) {
            result.replica_unreachable = true;
            continue;
        }
        double rtt = link_rtt_ ? link_rtt_(local.node, peer.node) : 0.0;
        append_and_fan_out(peer, msg, now_ms + rtt / 2.0);
        slowest_sync = std::max(slowest_sync, rtt);
    }
    result.commit_time_ms = now_ms + slowest_sync;
    return result;
}

void BrokerCluster::set_replica_down(int replica, bool down) {
    std::lock_guard lock(mutex_);
    replicas_.at(replica).down = down;
}

std::vector<std::set<MessageId>> BrokerCluster::log_id_sets() const {
    std::lock_guard lock(mutex_);
    std::vector<std::set<MessageId>> out;
    for (const auto& r : replicas_) out.push_back(r.seen);
    return out;
}

std::size_t BrokerCluster::log_size(int replica) const {
    std::lock_guard lock(mutex_);
    return replicas_.at(replica).log.size();
}

}  // namespace edgefaas::pubsub
