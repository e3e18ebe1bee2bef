#include <gtest/gtest.h>

#include <random>

#include "dtnsim/error.hpp"
#include "dtnsim/routing.hpp"

using namespace dtnsim;

namespace {

Message msg(MessageId id, NodeId source = 1, std::vector<NodeId> group = {5, 8})
{
    return Message::create(id, source, 1, 0.0, std::move(group));
}

std::vector<MessageId> ids(const Buffer& b)
{
    std::vector<MessageId> out;
    for (const auto& e : b.entries())
        out.push_back(e.message.id);
    return out;
}

} // namespace

TEST(ClassifyMessage, Examples)
{
    const std::vector<std::string> cats{"Content distribution", "Power control", "Service overlays"};
    EXPECT_EQ(classify_message(cats, 3), "Service overlays");
    const std::vector<std::string> one{"Only"};
    EXPECT_EQ(classify_message(one, 1), "Only");
    try {
        classify_message(cats, 4);
        FAIL();
    } catch (const RoutingError& e) {
        EXPECT_EQ(e.kind(), RoutingError::Kind::CategoryOutOfRange);
    }
    EXPECT_THROW(classify_message(cats, 0), RoutingError);
}

TEST(Message, PathAndHops)
{
    const auto m = msg(1, 3);
    EXPECT_EQ(m.path, std::vector<NodeId>{3});
    EXPECT_EQ(m.hop_count, 0u);
    const auto c = m.copy_to(7).copy_to(5);
    EXPECT_EQ(c.path, (std::vector<NodeId>{3, 7, 5}));
    EXPECT_EQ(c.hop_count, 2u);
    EXPECT_EQ(m.path.size(), 1u);
    EXPECT_TRUE(c.targets(5));
    EXPECT_FALSE(c.targets(7));
}

TEST(InterestClusterTransfer, Examples)
{
    const std::vector<NodeId> group{5, 8};
    const auto m = msg(1);
    EXPECT_EQ(interest_cluster_transfer(group, 1, 8, m, false, false), ForwardVerb::Forward);
    EXPECT_EQ(interest_cluster_transfer(group, 1, 3, m, false, true), ForwardVerb::CloseConnection);
    EXPECT_EQ(interest_cluster_transfer(group, 1, 3, m, false, false), ForwardVerb::Skip);
    EXPECT_EQ(interest_cluster_transfer(group, 1, 8, m, true, false), ForwardVerb::Noop);
    EXPECT_EQ(interest_cluster_transfer(group, 1, 8, m, true, true), ForwardVerb::Noop);
}

TEST(InterestClusterTransfer, ForwardImpliesMember)
{
    std::mt19937_64 gen(3);
    for (int i = 0; i < 2000; ++i) {
        std::vector<NodeId> group;
        for (NodeId n = 0; n < 12; ++n)
            if (gen() % 3 == 0)
                group.push_back(n);
        const NodeId peer = gen() % 12;
        const bool has = gen() % 2;
        const bool strict = gen() % 2;
        const auto v = interest_cluster_transfer(group, 99, peer, msg(i), has, strict);
        if (v == ForwardVerb::Forward)
            EXPECT_TRUE(std::find(group.begin(), group.end(), peer) != group.end());
        if (v == ForwardVerb::CloseConnection)
            EXPECT_TRUE(strict);
    }
}

TEST(EpidemicDecide, Examples)
{
    const auto m = msg(1, 1);
    EXPECT_EQ(epidemic_decide(2, 3, m, false), ForwardVerb::Forward);
    EXPECT_EQ(epidemic_decide(2, 3, m, true), ForwardVerb::Noop);
    EXPECT_EQ(epidemic_decide(2, 1, m, false), ForwardVerb::Noop);
}

TEST(Buffer, DropsOldestReceived)
{
    Buffer b(2);
    EXPECT_TRUE(b.insert(msg(1), 5).empty());
    EXPECT_TRUE(b.insert(msg(2), 8).empty());
    const auto ev = b.insert(msg(3), 10);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].id, 1u);
    EXPECT_EQ(ids(b), (std::vector<MessageId>{2, 3}));
    EXPECT_EQ(b.entries()[0].received_at, 8.0);
    EXPECT_EQ(b.entries()[1].received_at, 10.0);
}

TEST(Buffer, NoEvictionBelowCapacity)
{
    Buffer b(3);
    b.insert(msg(1), 1);
    b.insert(msg(2), 2);
    EXPECT_TRUE(b.insert(msg(3), 3).empty());
    EXPECT_EQ(b.size(), 3u);
}

TEST(Buffer, IdBreaksReceivedAtTie)
{
    Buffer b(2);
    b.insert(msg(9), 5);
    b.insert(msg(4), 5);
    const auto ev = b.insert(msg(12), 6);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].id, 4u);
    EXPECT_EQ(ids(b), (std::vector<MessageId>{9, 12}));
}

TEST(Buffer, DuplicateAndZeroCapacity)
{
    Buffer b(2);
    b.insert(msg(1), 0);
    try {
        b.insert(msg(1), 1);
        FAIL();
    } catch (const RoutingError& e) {
        EXPECT_EQ(e.kind(), RoutingError::Kind::DuplicateMessage);
    }
    EXPECT_THROW(Buffer(0), RoutingError);
}

TEST(Buffer, CapacityAndUniquenessInvariant)
{
    std::mt19937_64 gen(8);
    for (std::size_t cap = 1; cap <= 6; ++cap) {
        Buffer b(cap);
        double now = 0;
        for (MessageId id = 0; id < 200; ++id) {
            now += static_cast<double>(gen() % 3);
            const auto ev = b.insert(msg(id), now);
            EXPECT_LE(b.size(), cap);
            EXPECT_LE(ev.size(), 1u);
            const auto v = ids(b);
            EXPECT_EQ(std::set<MessageId>(v.begin(), v.end()).size(), v.size());
            for (std::size_t i = 1; i < b.entries().size(); ++i) {
                const auto& x = b.entries()[i - 1];
                const auto& y = b.entries()[i];
                EXPECT_LE(std::tie(x.received_at, x.message.id), std::tie(y.received_at, y.message.id));
            }
        }
    }
}

TEST(Buffer, RemoveIf)
{
    Buffer b;
    for (MessageId id = 0; id < 5; ++id)
        b.insert(msg(id), static_cast<double>(id));
    const auto removed = b.remove_if([](const Buffer::Entry& e) { return e.message.id % 2 == 0; });
    EXPECT_EQ(removed.size(), 3u);
    EXPECT_EQ(ids(b), (std::vector<MessageId>{1, 3}));
}

TEST(RouterEnums, ParseAndPrint)
{
    EXPECT_EQ(parse_router_kind("cluster"), RouterKind::Cluster);
    EXPECT_EQ(parse_router_kind("epidemic"), RouterKind::Epidemic);
    EXPECT_EQ(parse_group_mode("kmeans"), GroupMode::Kmeans);
    EXPECT_STREQ(to_string(GroupMode::Exact), "exact");
    EXPECT_STREQ(to_string(ForwardVerb::CloseConnection), "CLOSE_CONNECTION");
    EXPECT_THROW(parse_router_kind("prophet"), RoutingError);
}
