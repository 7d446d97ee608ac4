#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "edgefaas/common.hpp"
#include "edgefaas/orchestrator/registry.hpp"

namespace edgefaas::pubsub {

using orchestrator::Site;

struct Message {
    std::string subject;
    Bytes payload;
    std::string publisher_id;
    std::uint64_t publisher_seq = 0;
};

struct MessageId {
    std::string publisher_id;
    std::uint64_t seq = 0;
    auto operator<=>(const MessageId&) const = default;
};

struct Delivery {
    Message message;
    /// Virtual timestamp at which the subscriber sees the message.
    double delivered_at_ms = 0.0;
};

class Subscription {
public:
    void push(Delivery d);
    std::vector<Delivery> drain();
    std::size_t count() const;

private:
    mutable std::mutex mutex_;
    std::deque<Delivery> queue_;
};

struct PublishResult {
    /// Acknowledgment time: publish start + slowest peer sync round trip.
    double commit_time_ms = 0.0;
    /// Set when a peer could not be reached; the message is still committed locally.
    bool replica_unreachable = false;
};

/// One broker instance per worker node; every write is synchronously replicated
/// to all peers before acknowledgment.
class BrokerCluster {
public:
    /// link_rtt(node_a, node_b) draws one sync round trip in ms; nullptr = 0.
    explicit BrokerCluster(std::function<double(const std::string&, const std::string&)> link_rtt = {});

    int add_replica(const std::string& node_name, Site site);
    int replica_count() const;
    const std::string& node_of(int replica) const;

    std::shared_ptr<Subscription> subscribe(int replica, const std::string& subject);

    PublishResult publish(int replica, const Message& msg, double now_ms);

    void set_replica_down(int replica, bool down);

    /// Message-id sets per replica log; equal sets mean converged.
    std::vector<std::set<MessageId>> log_id_sets() const;
    std::size_t log_size(int replica) const;

private:
    struct Replica {
        std::string node;
        Site site = Site::OP;
        bool down = false;
        std::vector<Message> log;
        std::set<MessageId> seen;
        std::map<std::string, std::vector<std::shared_ptr<Subscription>>> subscriptions;
    };

    void append_and_fan_out(Replica& r, const Message& msg, double arrival_ms);

    std::function<double(const std::string&, const std::string&)> link_rtt_;
    mutable std::mutex mutex_;
    std::vector<Replica> replicas_;
};

}  // namespace edgefaas::pubsub
