#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtnsim/interest.hpp"

namespace dtnsim {

using MessageId = std::uint64_t;

/// One copy of a disseminated message. Every holder has its own copy, so the
/// path and hop count describe how this particular copy travelled.
struct Message {
    MessageId id = 0;
    NodeId source = 0;
    Category category = 1;
    double created_at = 0.0;
    std::vector<NodeId> destination_group;  ///< ascending
    std::optional<NodeId> final_destination;
    std::size_t hop_count = 0;
    std::vector<NodeId> path;  ///< starts with source

    /// Fresh message at its source: path = [source], hop_count = 0.
    static Message create(MessageId id, NodeId source, Category category, double created_at,
                          std::vector<NodeId> destination_group, std::optional<NodeId> final_destination = {});

    /// The copy a peer receives: one more hop, peer appended to the path.
    Message copy_to(NodeId peer) const;

    bool targets(NodeId node) const;
};

/// Returns categories[k - 1]; throws RoutingError(CategoryOutOfRange).
const std::string& classify_message(std::span<const std::string> categories, Category k);

/// Fixed-capacity message store with Drop Oldest eviction.
///
/// Entries are kept ordered by (received_at, message id), which is both the
/// eviction order and the order a carrier offers its messages at a contact.
class Buffer {
public:
    static constexpr std::size_t unlimited = std::numeric_limits<std::size_t>::max();

    struct Entry {
        Message message;
        double received_at = 0.0;
    };

    explicit Buffer(std::size_t capacity = unlimited);

    /// Stores `message` received at `now` and evicts oldest entries while
    /// over capacity. Returns the evicted messages in eviction order. The
    /// inserted message itself is evicted if it sorts first.
    std::vector<Message> insert(Message message, double now);

    bool contains(MessageId id) const;
    const Message* find(MessageId id) const;

    /// Drops every entry matching `pred`; returns the removed messages.
    template <typename Pred>
    std::vector<Message> remove_if(Pred&& pred);

    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
    std::vector<Entry> entries_;
    std::size_t capacity_;
};

template <typename Pred>
std::vector<Message> Buffer::remove_if(Pred&& pred)
{
    std::vector<Message> removed;
    std::vector<Entry> kept;
    kept.reserve(entries_.size());
    for (auto& e : entries_) {
        if (pred(e))
            removed.push_back(std::move(e.message));
        else
            kept.push_back(std::move(e));
    }
    entries_ = std::move(kept);
    return removed;
}

enum class ForwardVerb { Forward, Skip, CloseConnection, Noop };

const char* to_string(ForwardVerb verb);

/// Forwarding rule for interest groups: copy only to group members. A
/// non-member peer is skipped, or in strict mode ends the whole contact.
ForwardVerb interest_cluster_transfer(std::span<const NodeId> group, NodeId carrier, NodeId peer,
                                      const Message& message, bool peer_has_message, bool strict);

/// Flooding baseline: copy to every peer that lacks the message.
ForwardVerb epidemic_decide(NodeId carrier, NodeId peer, const Message& message, bool peer_has_message);

enum class RouterKind { Cluster, Epidemic };
enum class GroupMode { Exact, Kmeans };

const char* to_string(RouterKind kind);
const char* to_string(GroupMode mode);
RouterKind parse_router_kind(const std::string& s);
GroupMode parse_group_mode(const std::string& s);

} // namespace dtnsim
