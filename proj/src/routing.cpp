#include "dtnsim/routing.hpp"

#include <algorithm>
#include <tuple>

#include "dtnsim/error.hpp"

namespace dtnsim {

Message Message::create(MessageId id, NodeId source, Category category, double created_at,
                        std::vector<NodeId> destination_group, std::optional<NodeId> final_destination)
{
    Message m;
    m.id = id;
    m.source = source;
    m.category = category;
    m.created_at = created_at;
    m.destination_group = std::move(destination_group);
    m.final_destination = final_destination;
    m.path = {source};
    return m;
}

Message Message::copy_to(NodeId peer) const
{
    Message m = *this;
    m.path.push_back(peer);
    m.hop_count = m.path.size() - 1;
    return m;
}

bool Message::targets(NodeId node) const
{
    return std::binary_search(destination_group.begin(), destination_group.end(), node);
}

const std::string& classify_message(std::span<const std::string> categories, Category k)
{
    if (k < 1 || k > categories.size())
        throw RoutingError(RoutingError::Kind::CategoryOutOfRange,
                           "CategoryOutOfRange(" + std::to_string(k) + " of " + std::to_string(categories.size()) + ")");
    return categories[k - 1];
}

Buffer::Buffer(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0)
        throw RoutingError(RoutingError::Kind::InvalidArgument, "buffer capacity must be positive");
}

std::vector<Message> Buffer::insert(Message message, double now)
{
    if (contains(message.id))
        throw RoutingError(RoutingError::Kind::DuplicateMessage,
                           "DuplicateMessage(" + std::to_string(message.id) + ")");

    auto key_less = [](const Entry& x, const Entry& y) {
        return std::tie(x.received_at, x.message.id) < std::tie(y.received_at, y.message.id);
    };
    Entry entry{std::move(message), now};
    auto pos = std::upper_bound(entries_.begin(), entries_.end(), entry, key_less);
    entries_.insert(pos, std::move(entry));

    std::vector<Message> evicted;
    while (entries_.size() > capacity_) {
        evicted.push_back(std::move(entries_.front().message));
        entries_.erase(entries_.begin());
    }
    return evicted;
}

bool Buffer::contains(MessageId id) const
{
    return find(id) != nullptr;
}

const Message* Buffer::find(MessageId id) const
{
    for (const auto& e : entries_)
        if (e.message.id == id)
            return &e.message;
    return nullptr;
}

const char* to_string(ForwardVerb verb)
{
    switch (verb) {
    case ForwardVerb::Forward: return "FORWARD";
    case ForwardVerb::Skip: return "SKIP";
    case ForwardVerb::CloseConnection: return "CLOSE_CONNECTION";
    case ForwardVerb::Noop: return "NOOP";
    }
    return "?";
}

ForwardVerb interest_cluster_transfer(std::span<const NodeId> group, NodeId /*carrier*/, NodeId peer,
                                      const Message& /*message*/, bool peer_has_message, bool strict)
{
    if (peer_has_message)
        return ForwardVerb::Noop;
    if (std::find(group.begin(), group.end(), peer) != group.end())
        return ForwardVerb::Forward;
    return strict ? ForwardVerb::CloseConnection : ForwardVerb::Skip;
}

ForwardVerb epidemic_decide(NodeId /*carrier*/, NodeId peer, const Message& message, bool peer_has_message)
{
    if (peer_has_message || peer == message.source)
        return ForwardVerb::Noop;
    return ForwardVerb::Forward;
}

const char* to_string(RouterKind kind)
{
    return kind == RouterKind::Cluster ? "cluster" : "epidemic";
}

const char* to_string(GroupMode mode)
{
    return mode == GroupMode::Exact ? "exact" : "kmeans";
}

RouterKind parse_router_kind(const std::string& s)
{
    if (s == "cluster")
        return RouterKind::Cluster;
    if (s == "epidemic")
        return RouterKind::Epidemic;
    throw RoutingError(RoutingError::Kind::InvalidArgument, "unknown router '" + s + "'");
}

GroupMode parse_group_mode(const std::string& s)
{
    if (s == "exact")
        return GroupMode::Exact;
    if (s == "kmeans")
        return GroupMode::Kmeans;
    throw RoutingError(RoutingError::Kind::InvalidArgument, "unknown group mode '" + s + "'");
}

} // namespace dtnsim
