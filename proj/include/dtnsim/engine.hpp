#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtnsim/clustering.hpp"
#include "dtnsim/routing.hpp"
#include "dtnsim/trace.hpp"

namespace dtnsim {

struct RouterConfig {
    RouterKind kind = RouterKind::Cluster;
    GroupMode mode = GroupMode::Exact;
    bool strict = false;
    double threshold = default_group_threshold;
    /// K-means cluster count; unset means one cluster per category.
    std::optional<std::size_t> k_clusters;
    std::size_t max_iter = default_max_iter;
    std::size_t buffer_capacity = 50;  ///< Buffer::unlimited disables eviction
    std::optional<double> ttl;
    std::optional<std::size_t> max_transfers_per_contact;
};

enum class SelectionRule { Uniform, RoundRobin };

const char* to_string(SelectionRule rule);
SelectionRule parse_selection_rule(const std::string& s);

struct MessageCreation {
    double time = 0.0;
    NodeId source = 0;
    Category category = 1;

    friend bool operator==(const MessageCreation&, const MessageCreation&) = default;
};

struct ScheduleConfig {
    std::size_t count = 100;
    double start = 0.0;
    /// Spacing between creations; unset spreads `count` messages evenly
    /// over [start, duration).
    std::optional<double> interval;
    SelectionRule source_rule = SelectionRule::Uniform;
    SelectionRule category_rule = SelectionRule::Uniform;
    /// When set, replaces the generated schedule entirely.
    std::optional<std::vector<MessageCreation>> explicit_events;
    bool track_final_destination = false;
};

struct Scenario {
    ContactTrace trace;
    ProfileSet profiles;
    std::size_t n_categories = 1;
    /// Names used for message classification; defaults to "category_<k>".
    std::vector<std::string> category_names;
    RouterConfig router;
    ScheduleConfig schedule;
    std::uint64_t seed = 1;
};

struct Schedule {
    std::vector<MessageCreation> events;  ///< message id = position
    std::vector<std::string> warnings;
};

/// Deterministic message-creation list. A zero count yields an empty
/// schedule plus an "EmptySchedule" warning.
Schedule build_schedule(const Scenario& scenario);

/// Per-message outcome; mirrors the per-message CSV columns.
struct DeliveryRecord {
    MessageId message_id = 0;
    NodeId source = 0;
    Category category = 1;
    double created_at = 0.0;
    std::size_t group_size = 0;
    std::optional<double> group_delivered_at;
    std::optional<NodeId> first_receiver;
    std::optional<std::size_t> hops_at_delivery;
    std::size_t forwards_total = 0;
    std::optional<double> final_delivered_at;

    friend bool operator==(const DeliveryRecord&, const DeliveryRecord&) = default;
};

/// A node accepting a copy of a message from a peer.
struct Receipt {
    MessageId message = 0;
    NodeId node = 0;
    NodeId from = 0;
    double time = 0.0;
    std::size_t hops = 0;

    friend bool operator==(const Receipt&, const Receipt&) = default;
};

struct DropEvent {
    enum class Reason { Evicted, Expired };
    double time = 0.0;
    NodeId node = 0;
    MessageId message = 0;
    Reason reason = Reason::Evicted;

    friend bool operator==(const DropEvent&, const DropEvent&) = default;
};

struct EventCounts {
    std::size_t contacts_processed = 0;
    std::size_t forwards = 0;
    std::size_t evictions = 0;
    std::size_t expirations = 0;
    std::size_t closes = 0;
};

struct SimResult {
    std::vector<DeliveryRecord> records;
    std::vector<Receipt> receipts;  ///< in processing order
    std::vector<DropEvent> drops;
    EventCounts counts;
    /// Set in kmeans group mode.
    std::optional<Clustering> clustering;
    /// Destination group of every category 1..n.
    std::map<Category, std::vector<NodeId>> groups;
    std::map<Category, bool> group_fallback;
    std::vector<NodeId> nodes;  ///< trace nodes united with profiled nodes
    ValidationReport validation;
    std::vector<std::string> warnings;
    RouterConfig router;
    std::size_t n_categories = 0;
    std::uint64_t seed = 0;
};

/// Replays the trace under the configured router.
///
/// A single event stream is processed in (time, class, a, b, message id)
/// order with classes contact_end < message_creation < contact_start. Every
/// contact start runs a pairwise exchange; a node that gains a message
/// re-runs the exchange on each of its open contacts at the same instant.
/// Transfers are instantaneous copies.
SimResult run(const Scenario& scenario);

} // namespace dtnsim
