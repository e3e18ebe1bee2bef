#include <gtest/gtest.h>

#include <map>
#include <set>

#include "dtnsim/engine.hpp"
#include "dtnsim/error.hpp"
#include "dtnsim/metrics.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace dtnsim;
using fixtures::hand_scenario;
using fixtures::random_small_scenario;

namespace {

using FirstReceipt = std::map<std::pair<MessageId, NodeId>, double>;

FirstReceipt first_receipts(const SimResult& r)
{
    FirstReceipt out;
    for (const auto& rc : r.receipts)
        out.try_emplace({rc.message, rc.node}, rc.time);
    return out;
}

} // namespace

TEST(BuildSchedule, ExplicitList)
{
    auto sc = hand_scenario("0 10 1 2\n", "1 0 1\n2 1 0\n", 2, {{10, 1, 2}});
    const auto s = build_schedule(sc);
    ASSERT_EQ(s.events.size(), 1u);
    EXPECT_EQ(s.events[0], (MessageCreation{10, 1, 2}));
    EXPECT_TRUE(s.warnings.empty());
}

TEST(BuildSchedule, UniformCategoriesConcentrate)
{
    // Multinomial(100, 1/4): each count has mean 25 and sd 4.3, so fewer
    // than 10 is a 3.5-sigma event. Checked over 200 seeds of our generator.
    auto sc = hand_scenario("0 1000 1 2\n", "1 0 0 0 0\n2 0 0 0 0\n3 1 1 1 1\n", 4, {});
    sc.schedule.explicit_events.reset();
    sc.schedule.count = 100;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        sc.seed = seed;
        const auto s = build_schedule(sc);
        ASSERT_EQ(s.events.size(), 100u);
        std::map<Category, int> counts;
        for (const auto& m : s.events) {
            ++counts[m.category];
            EXPECT_TRUE(sc.profiles.contains(m.source));
            EXPECT_GE(m.time, 0.0);
            EXPECT_LE(m.time, 1000.0);
        }
        for (Category k = 1; k <= 4; ++k)
            EXPECT_GE(counts[k], 10) << "seed " << seed << " category " << k;
    }
}

TEST(BuildSchedule, DeterministicAndEmpty)
{
    auto sc = random_small_scenario(4);
    EXPECT_EQ(build_schedule(sc).events, build_schedule(sc).events);
    sc.schedule.count = 0;
    const auto empty = build_schedule(sc);
    EXPECT_TRUE(empty.events.empty());
    ASSERT_EQ(empty.warnings.size(), 1u);
    EXPECT_NE(empty.warnings[0].find("EmptySchedule"), std::string::npos);
    const auto r = run(sc);
    EXPECT_TRUE(r.records.empty());
}

TEST(BuildSchedule, RoundRobin)
{
    auto sc = hand_scenario("0 100 1 2\n", "1 0 0\n2 0 0\n", 2, {});
    sc.schedule.explicit_events.reset();
    sc.schedule.count = 4;
    sc.schedule.source_rule = SelectionRule::RoundRobin;
    sc.schedule.category_rule = SelectionRule::RoundRobin;
    const auto s = build_schedule(sc);
    const std::vector<MessageCreation> want{{0, 1, 1}, {25, 2, 2}, {50, 1, 1}, {75, 2, 2}};
    EXPECT_EQ(s.events, want);
}

TEST(Run, SingleContactDeliversAtCreation)
{
    const auto sc = hand_scenario("0 10 1 2\n", "1 0\n2 1\n", 1, {{5, 1, 1}});
    const auto r = run(sc);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].group_delivered_at, 5.0);
    EXPECT_EQ(r.records[0].hops_at_delivery, 1u);
    EXPECT_EQ(r.records[0].first_receiver, 2u);
    EXPECT_EQ(r.records[0].forwards_total, 1u);
}

TEST(Run, SourceInGroupDeliversAtCreation)
{
    const auto sc = hand_scenario("0 10 1 2\n", "1 1\n2 0\n", 1, {{3, 1, 1}});
    const auto r = run(sc);
    EXPECT_EQ(r.records[0].group_delivered_at, 3.0);
    EXPECT_EQ(r.records[0].hops_at_delivery, 0u);
    EXPECT_EQ(r.records[0].forwards_total, 0u);
}

TEST(Run, EmptyGroupNeverDelivers)
{
    const auto sc = hand_scenario("0 10 1 2\n", "1 0\n2 0\n", 1, {{3, 1, 1}});
    const auto r = run(sc);
    EXPECT_FALSE(r.records[0].group_delivered_at);
    EXPECT_EQ(r.records[0].forwards_total, 0u);
    EXPECT_EQ(r.records[0].group_size, 0u);
}

TEST(Run, RelayChainCountsHops)
{
    // 1 -> 2 -> 3 under epidemic; 3 is the only member of category 1.
    auto sc = hand_scenario("0 10 1 2\n20 30 2 3\n", "1 0\n2 0\n3 1\n", 1, {{1, 1, 1}});
    sc.router.kind = RouterKind::Epidemic;
    const auto r = run(sc);
    EXPECT_EQ(r.records[0].group_delivered_at, 20.0);
    EXPECT_EQ(r.records[0].hops_at_delivery, 2u);
    EXPECT_EQ(r.records[0].forwards_total, 2u);
    EXPECT_DOUBLE_EQ(avg_delay(r.records), 19.0);
    EXPECT_DOUBLE_EQ(avg_hops(r.records), 2.0);
}

TEST(Run, MidIntervalRelayAcrossOpenContacts)
{
    // (2,3) is already open when 2 receives at t=5 over (1,2).
    auto sc = hand_scenario("0 50 2 3\n5 6 1 2\n", "1 0\n2 0\n3 1\n", 1, {{0, 1, 1}});
    sc.router.kind = RouterKind::Epidemic;
    const auto r = run(sc);
    EXPECT_EQ(r.records[0].group_delivered_at, 5.0);
    EXPECT_EQ(r.records[0].hops_at_delivery, 2u);
}

TEST(Run, BothDirectionsForward)
{
    const auto sc = hand_scenario("10 20 1 2\n", "1 1 0\n2 0 1\n", 2, {{1, 1, 2}, {2, 2, 1}});
    const auto r = run(sc);
    EXPECT_EQ(r.records[0].group_delivered_at, 10.0);
    EXPECT_EQ(r.records[1].group_delivered_at, 10.0);
    EXPECT_EQ(r.counts.forwards, 2u);
}

TEST(Run, FullPeerEvictsOldest)
{
    auto sc = hand_scenario("10 20 1 2\n", "1 0\n2 1\n", 1, {{1, 2, 1}, {2, 2, 1}, {3, 1, 1}});
    sc.router.buffer_capacity = 2;
    const auto r = run(sc);
    EXPECT_EQ(r.records[2].group_delivered_at, 10.0);
    ASSERT_EQ(r.drops.size(), 1u);
    EXPECT_EQ(r.drops[0], (DropEvent{10, 2, 0, DropEvent::Reason::Evicted}));
}

TEST(Run, DropOldestScriptedLog)
{
    auto sc = hand_scenario("10 20 1 2\n30 40 2 3\n", "1 0\n2 1\n3 1\n", 1,
                            {{1, 1, 1}, {2, 1, 1}, {3, 1, 1}, {5, 2, 1}});
    sc.router.buffer_capacity = 2;
    const auto r = run(sc);
    const std::vector<DropEvent> drops{{3, 1, 0, DropEvent::Reason::Evicted}, {10, 2, 3, DropEvent::Reason::Evicted}};
    EXPECT_EQ(r.drops, drops);
    const std::vector<Receipt> receipts{{1, 2, 1, 10, 1}, {2, 2, 1, 10, 1}, {1, 3, 2, 30, 2}, {2, 3, 2, 30, 2}};
    EXPECT_EQ(r.receipts, receipts);
}

TEST(Run, StrictModeClosesContact)
{
    const auto base = hand_scenario("5 10 1 2\n", "1 0 0\n2 0 1\n3 1 0\n", 2, {{1, 1, 1}, {2, 1, 2}});
    auto strict = base;
    strict.router.strict = true;
    const auto s = run(strict);
    EXPECT_EQ(s.counts.forwards, 0u);
    EXPECT_EQ(s.counts.closes, 1u);
    EXPECT_FALSE(s.records[1].group_delivered_at);

    const auto d = run(base);
    EXPECT_EQ(d.counts.forwards, 1u);
    EXPECT_EQ(d.counts.closes, 0u);
    EXPECT_EQ(d.records[1].group_delivered_at, 5.0);
}

TEST(Run, TtlPurgesExpiredMessages)
{
    auto sc = hand_scenario("10 20 1 2\n", "1 0\n2 1\n", 1, {{1, 1, 1}, {8, 1, 1}});
    sc.router.ttl = 5.0;
    const auto r = run(sc);
    EXPECT_FALSE(r.records[0].group_delivered_at);
    EXPECT_EQ(r.records[1].group_delivered_at, 10.0);
    // msg 0 at node 1 when msg 1 is created; msg 1 at both nodes at t=20.
    EXPECT_EQ(r.counts.expirations, 3u);
    EXPECT_EQ(r.drops.front(), (DropEvent{8, 1, 0, DropEvent::Reason::Expired}));
}

TEST(Run, MaxTransfersPerContact)
{
    auto sc = hand_scenario("10 20 1 2\n", "1 0\n2 1\n", 1, {{1, 1, 1}, {2, 1, 1}, {3, 1, 1}});
    sc.router.max_transfers_per_contact = 2;
    const auto r = run(sc);
    EXPECT_EQ(r.counts.forwards, 2u);
    EXPECT_FALSE(r.records[2].group_delivered_at);
}

TEST(Run, ContactEndBeforeCreationAtSameInstant)
{
    auto sc = hand_scenario("0 10 1 2\n", "1 0\n2 1\n", 1, {{10, 1, 1}});
    const auto r = run(sc);
    EXPECT_FALSE(r.records[0].group_delivered_at);
}

TEST(Run, FinalDestinationTracking)
{
    auto sc = hand_scenario("0 10 1 2\n20 30 2 3\n", "1 0\n2 1\n3 1\n", 1, {{1, 1, 1}});
    sc.schedule.track_final_destination = true;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        sc.seed = seed;
        const auto r = run(sc);
        const auto& rec = r.records[0];
        ASSERT_TRUE(rec.final_delivered_at);
        EXPECT_GE(*rec.final_delivered_at, *rec.group_delivered_at);
        EXPECT_TRUE(*rec.final_delivered_at == 1.0 || *rec.final_delivered_at == 20.0);
    }
}

TEST(Run, KmeansModeClampsK)
{
    auto sc = hand_scenario("0 10 1 2\n", "1 1 0 0\n2 1 0 0\n", 3, {{1, 1, 1}});
    sc.router.mode = GroupMode::Kmeans;
    const auto r = run(sc);
    ASSERT_TRUE(r.clustering);
    EXPECT_EQ(r.clustering->k, 1u);
    EXPECT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.groups.at(1), (std::vector<NodeId>{1, 2}));
}

TEST(Run, RejectsInconsistentScenario)
{
    auto sc = hand_scenario("0 10 1 2\n", "1 0\n2 1\n", 1, {{1, 1, 1}});
    sc.n_categories = 2;
    EXPECT_THROW(run(sc), ScenarioError);
    auto late = hand_scenario("0 10 1 2\n", "1 0\n2 1\n", 1, {{11, 1, 1}});
    EXPECT_THROW(run(late), ScenarioError);
    auto unknown = hand_scenario("0 10 1 2\n", "1 0\n2 1\n", 1, {{1, 7, 1}});
    EXPECT_THROW(run(unknown), ScenarioError);
}

TEST(Run, Deterministic)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto sc = random_small_scenario(seed);
        sc.router.mode = GroupMode::Kmeans;
        sc.router.buffer_capacity = 5;
        const auto a = run(sc);
        const auto b = run(sc);
        EXPECT_EQ(a.records, b.records);
        EXPECT_EQ(a.receipts, b.receipts);
        EXPECT_EQ(a.drops, b.drops);
        EXPECT_EQ(format_per_message_csv(a.records), format_per_message_csv(b.records));
    }
}

TEST(Run, CausalityAndConservation)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto sc = random_small_scenario(seed);
        sc.router.buffer_capacity = 4;
        for (auto kind : {RouterKind::Cluster, RouterKind::Epidemic}) {
            sc.router.kind = kind;
            const auto r = run(sc);
            std::map<std::pair<MessageId, NodeId>, Receipt> held;
            std::map<MessageId, std::size_t> per_message;
            for (const auto& rec : r.records)
                held[{rec.message_id, rec.source}] = Receipt{rec.message_id, rec.source, rec.source, rec.created_at, 0};
            for (const auto& rc : r.receipts) {
                auto it = held.find({rc.message, rc.from});
                ASSERT_NE(it, held.end()) << "sender never held the message";
                EXPECT_GE(rc.time, it->second.time);
                EXPECT_EQ(rc.hops, it->second.hops + 1);
                EXPECT_TRUE(held.emplace(std::pair{rc.message, rc.node}, rc).second) << "node re-accepted a message";
                ++per_message[rc.message];
            }
            for (const auto& rec : r.records) {
                EXPECT_EQ(rec.forwards_total, per_message[rec.message_id]);
                if (rec.group_delivered_at)
                    EXPECT_GE(*rec.group_delivered_at, rec.created_at);
            }
            if (kind == RouterKind::Cluster)
                for (const auto& rc : r.receipts)
                    EXPECT_TRUE(std::binary_search(r.groups.at(r.records[rc.message].category).begin(),
                                                   r.groups.at(r.records[rc.message].category).end(), rc.node));
        }
    }
}

TEST(Run, GroupDeliveryIsEarliestMemberReceipt)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto sc = random_small_scenario(seed);
        const auto r = run(sc);
        const auto first = first_receipts(r);
        for (const auto& rec : r.records) {
            const auto& group = r.groups.at(rec.category);
            std::optional<double> best;
            if (std::binary_search(group.begin(), group.end(), rec.source))
                best = rec.created_at;
            for (NodeId m : group) {
                auto it = first.find({rec.message_id, m});
                if (it != first.end() && (!best || it->second < *best))
                    best = it->second;
            }
            EXPECT_EQ(rec.group_delivered_at, best);
        }
    }
}

TEST(Run, EpidemicMatchesEarliestArrivalOracle)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto sc = random_small_scenario(seed);
        sc.router.kind = RouterKind::Epidemic;
        const auto r = run(sc);
        const auto first = first_receipts(r);
        std::size_t expected_receipts = 0;
        for (const auto& rec : r.records) {
            const auto oracle = oracle::earliest_arrival(sc.trace, rec.source, rec.created_at);
            for (const auto& [node, t] : oracle) {
                if (node == rec.source)
                    continue;
                ++expected_receipts;
                auto it = first.find({rec.message_id, node});
                ASSERT_NE(it, first.end()) << "seed " << seed << " message " << rec.message_id << " node " << node;
                EXPECT_EQ(it->second, t);
            }
        }
        EXPECT_EQ(first.size(), expected_receipts);
    }
}

TEST(Run, EpidemicDominatesCluster)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto sc = random_small_scenario(seed);
        const auto cluster = run(sc);
        sc.router.kind = RouterKind::Epidemic;
        const auto epidemic = run(sc);
        const auto fe = first_receipts(epidemic);
        for (const auto& [key, t] : first_receipts(cluster)) {
            auto it = fe.find(key);
            ASSERT_NE(it, fe.end());
            EXPECT_LE(it->second, t);
        }
        for (std::size_t i = 0; i < cluster.records.size(); ++i) {
            if (cluster.records[i].group_delivered_at) {
                ASSERT_TRUE(epidemic.records[i].group_delivered_at);
                EXPECT_LE(*epidemic.records[i].group_delivered_at, *cluster.records[i].group_delivered_at);
            }
        }
        EXPECT_GE(delivery_ratio(epidemic.records), delivery_ratio(cluster.records));
        EXPECT_GE(epidemic.counts.forwards, cluster.counts.forwards);
    }
}
