#include "dtnsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "dtnsim/error.hpp"
#include "dtnsim/rng.hpp"

namespace dtnsim {

namespace {

// Sub-seed streams derived from the scenario seed.
constexpr std::uint64_t schedule_stream = 10;
constexpr std::uint64_t kmeans_stream = 11;
constexpr std::uint64_t final_dest_stream = 12;

void check_scenario(const Scenario& s)
{
    if (s.n_categories < 1)
        throw ScenarioError("n_categories must be at least 1");
    for (const auto& [id, v] : s.profiles)
        if (v.size() != s.n_categories)
            throw ScenarioError("profile of node " + std::to_string(id) + " has " + std::to_string(v.size())
                                + " categories, scenario has " + std::to_string(s.n_categories));
    if (!s.category_names.empty() && s.category_names.size() != s.n_categories)
        throw ScenarioError("category_names must list exactly n_categories names");
    const auto& r = s.router;
    if (!(r.threshold > 0.0 && r.threshold <= 1.0))
        throw ScenarioError("threshold must lie in (0, 1]");
    if (r.buffer_capacity == 0)
        throw ScenarioError("buffer_capacity must be positive");
    if (r.ttl && !(*r.ttl > 0.0))
        throw ScenarioError("ttl must be positive");
    if (r.k_clusters && *r.k_clusters == 0)
        throw ScenarioError("k_clusters must be positive");
    if (r.max_transfers_per_contact && *r.max_transfers_per_contact == 0)
        throw ScenarioError("max_transfers_per_contact must be positive");
}

std::vector<NodeId> node_universe(const Scenario& s)
{
    std::set<NodeId> ids;
    for (const auto& e : s.trace.events) {
        ids.insert(e.a);
        ids.insert(e.b);
    }
    for (const auto& [id, v] : s.profiles)
        ids.insert(id);
    return {ids.begin(), ids.end()};
}

enum class EventClass { ContactEnd = 0, MessageCreation = 1, ContactStart = 2 };

struct SimEvent {
    double time;
    EventClass cls;
    NodeId a;
    NodeId b;
    MessageId message;
    std::size_t ref;  // contact index or schedule index
};

bool event_less(const SimEvent& x, const SimEvent& y)
{
    return std::tie(x.time, x.cls, x.a, x.b, x.message, x.ref) < std::tie(y.time, y.cls, y.a, y.b, y.message, y.ref);
}

class Simulation {
public:
    explicit Simulation(const Scenario& scenario) : sc_(scenario)
    {
        check_scenario(sc_);
        result_.router = sc_.router;
        result_.n_categories = sc_.n_categories;
        result_.seed = sc_.seed;
        result_.nodes = node_universe(sc_);
        result_.validation = validate_scenario(sc_.trace, sc_.profiles);

        names_ = sc_.category_names;
        if (names_.empty())
            for (Category k = 1; k <= sc_.n_categories; ++k)
                names_.push_back("category_" + std::to_string(k));

        for (std::size_t i = 0; i < result_.nodes.size(); ++i)
            index_.emplace(result_.nodes[i], i);
        nodes_.reserve(result_.nodes.size());
        for (std::size_t i = 0; i < result_.nodes.size(); ++i)
            nodes_.push_back(NodeState{Buffer(sc_.router.buffer_capacity), {}, {}});

        contacts_.reserve(sc_.trace.events.size());
        for (const auto& e : sc_.trace.events)
            contacts_.push_back(ContactState{e.a, e.b, index_.at(e.a), index_.at(e.b)});

        resolve_groups();
    }

    SimResult run()
    {
        Schedule schedule = build_schedule(sc_);
        result_.warnings.insert(result_.warnings.end(), schedule.warnings.begin(), schedule.warnings.end());
        schedule_ = std::move(schedule.events);
        for (const auto& m : schedule_) {
            if (!index_.contains(m.source))
                throw ScenarioError("message source " + std::to_string(m.source) + " is not a scenario node");
            classify_message(names_, m.category);
        }

        std::vector<SimEvent> events;
        events.reserve(2 * contacts_.size() + schedule_.size());
        for (std::size_t i = 0; i < contacts_.size(); ++i) {
            const auto& e = sc_.trace.events[i];
            events.push_back({e.t_start, EventClass::ContactStart, e.a, e.b, 0, i});
            events.push_back({e.t_end, EventClass::ContactEnd, e.a, e.b, 0, i});
        }
        for (std::size_t i = 0; i < schedule_.size(); ++i)
            events.push_back({schedule_[i].time, EventClass::MessageCreation, 0, 0, i, i});
        std::sort(events.begin(), events.end(), event_less);

        Rng final_rng(derive_seed(sc_.seed, final_dest_stream));
        result_.records.reserve(schedule_.size());
        for (const auto& ev : events) {
            purge_expired(ev.time);
            switch (ev.cls) {
            case EventClass::ContactEnd:
                close_contact(ev.ref);
                break;
            case EventClass::MessageCreation:
                create_message(ev.ref, final_rng);
                break;
            case EventClass::ContactStart:
                open_contact(ev.ref);
                break;
            }
            drain(ev.time);
        }
        return std::move(result_);
    }

private:
    struct NodeState {
        Buffer buffer;
        std::unordered_set<MessageId> seen;  // every id ever held
        std::vector<std::size_t> open;       // open contact indices
    };

    struct ContactState {
        NodeId a;
        NodeId b;
        std::size_t ia;
        std::size_t ib;
        bool open = false;
        bool closed = false;  // strict-mode close for the rest of the interval
        bool pending = false;
        std::size_t transfers = 0;
    };

    void resolve_groups()
    {
        const auto& r = sc_.router;
        if (r.mode == GroupMode::Kmeans && !sc_.profiles.empty()) {
            const std::size_t wanted = r.k_clusters.value_or(sc_.n_categories);
            const std::size_t distinct = distinct_vector_count(sc_.profiles);
            const std::size_t k = std::min(wanted, distinct);
            if (k < wanted)
                result_.warnings.push_back("k_clusters reduced from " + std::to_string(wanted) + " to "
                                           + std::to_string(k) + " distinct interest vectors");
            result_.clustering = kmeans(sc_.profiles, k, derive_seed(sc_.seed, kmeans_stream), r.max_iter);
        }
        for (Category k = 1; k <= sc_.n_categories; ++k) {
            if (result_.clustering) {
                auto res = resolve_group_kmeans(*result_.clustering, sc_.profiles, k, r.threshold);
                result_.groups[k] = std::move(res.members);
                result_.group_fallback[k] = res.fallback;
            } else {
                result_.groups[k] = resolve_group_exact(sc_.profiles, k);
                result_.group_fallback[k] = false;
            }
        }
    }

    void open_contact(std::size_t c)
    {
        auto& ct = contacts_[c];
        ct.open = true;
        ct.closed = false;
        ct.transfers = 0;
        nodes_[ct.ia].open.push_back(c);
        nodes_[ct.ib].open.push_back(c);
        ++result_.counts.contacts_processed;
        enqueue(c);
    }

    void close_contact(std::size_t c)
    {
        auto& ct = contacts_[c];
        ct.open = false;
        for (std::size_t n : {ct.ia, ct.ib}) {
            auto& open = nodes_[n].open;
            open.erase(std::remove(open.begin(), open.end(), c), open.end());
        }
    }

    void create_message(std::size_t idx, Rng& final_rng)
    {
        const auto& mc = schedule_[idx];
        const auto& group = result_.groups.at(mc.category);
        std::optional<NodeId> final_dest;
        if (sc_.schedule.track_final_destination && !group.empty())
            final_dest = group[final_rng.below(group.size())];

        DeliveryRecord rec;
        rec.message_id = idx;
        rec.source = mc.source;
        rec.category = mc.category;
        rec.created_at = mc.time;
        rec.group_size = group.size();
        result_.records.push_back(rec);

        Message m = Message::create(idx, mc.source, mc.category, mc.time, group, final_dest);
        accept(index_.at(mc.source), std::move(m), mc.time);
    }

    // A node takes a copy: seen-set, buffer, delivery bookkeeping, relays.
    void accept(std::size_t node, Message m, double now)
    {
        const NodeId id = result_.nodes[node];
        auto& rec = result_.records[m.id];
        if (m.targets(id) && !rec.group_delivered_at) {
            rec.group_delivered_at = now;
            rec.first_receiver = id;
            rec.hops_at_delivery = m.hop_count;
        }
        if (m.final_destination == id && !rec.final_delivered_at)
            rec.final_delivered_at = now;

        auto& ns = nodes_[node];
        ns.seen.insert(m.id);
        for (auto& ev : ns.buffer.insert(std::move(m), now)) {
            result_.drops.push_back({now, id, ev.id, DropEvent::Reason::Evicted});
            ++result_.counts.evictions;
        }
        for (std::size_t c : ns.open)
            enqueue(c);
    }

    void enqueue(std::size_t c)
    {
        auto& ct = contacts_[c];
        if (ct.pending)
            return;
        ct.pending = true;
        queue_.push_back(c);
    }

    void drain(double now)
    {
        while (!queue_.empty()) {
            const std::size_t c = queue_.front();
            queue_.pop_front();
            contacts_[c].pending = false;
            exchange(c, now);
        }
    }

    ForwardVerb decide(const Message& m, NodeId carrier, NodeId peer, bool peer_has) const
    {
        if (sc_.router.kind == RouterKind::Epidemic)
            return epidemic_decide(carrier, peer, m, peer_has);
        return interest_cluster_transfer(m.destination_group, carrier, peer, m, peer_has, sc_.router.strict);
    }

    // Returns false once the contact can carry nothing more this interval.
    bool transfer_direction(std::size_t c, std::size_t from, std::size_t to, double now)
    {
        auto& ct = contacts_[c];
        const NodeId carrier = result_.nodes[from];
        const NodeId peer = result_.nodes[to];
        // Only the peer's buffer changes during this pass.
        for (const auto& entry : nodes_[from].buffer.entries()) {
            const Message* m = &entry.message;
            const bool peer_has = nodes_[to].seen.contains(m->id);
            switch (decide(*m, carrier, peer, peer_has)) {
            case ForwardVerb::Forward: {
                if (sc_.router.max_transfers_per_contact && ct.transfers >= *sc_.router.max_transfers_per_contact)
                    return false;
                ++ct.transfers;
                ++result_.counts.forwards;
                auto& rec = result_.records[m->id];
                ++rec.forwards_total;
                Message copy = m->copy_to(peer);
                result_.receipts.push_back({copy.id, peer, carrier, now, copy.hop_count});
                accept(to, std::move(copy), now);
                break;
            }
            case ForwardVerb::CloseConnection:
                ct.closed = true;
                ++result_.counts.closes;
                return false;
            case ForwardVerb::Skip:
            case ForwardVerb::Noop:
                break;
            }
        }
        return true;
    }

    void exchange(std::size_t c, double now)
    {
        const auto& ct = contacts_[c];
        if (!ct.open || ct.closed)
            return;
        if (!transfer_direction(c, ct.ia, ct.ib, now))
            return;
        transfer_direction(c, ct.ib, ct.ia, now);
    }

    void purge_expired(double now)
    {
        if (!sc_.router.ttl)
            return;
        const double ttl = *sc_.router.ttl;
        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            auto expired = nodes_[n].buffer.remove_if(
                [&](const Buffer::Entry& e) { return e.message.created_at + ttl <= now; });
            for (const auto& m : expired) {
                result_.drops.push_back({now, result_.nodes[n], m.id, DropEvent::Reason::Expired});
                ++result_.counts.expirations;
            }
        }
    }

    const Scenario& sc_;
    SimResult result_;
    std::vector<std::string> names_;
    std::unordered_map<NodeId, std::size_t> index_;
    std::vector<NodeState> nodes_;
    std::vector<ContactState> contacts_;
    std::vector<MessageCreation> schedule_;
    std::deque<std::size_t> queue_;
};

} // namespace

const char* to_string(SelectionRule rule)
{
    return rule == SelectionRule::Uniform ? "uniform" : "round_robin";
}

SelectionRule parse_selection_rule(const std::string& s)
{
    if (s == "uniform")
        return SelectionRule::Uniform;
    if (s == "round_robin")
        return SelectionRule::RoundRobin;
    throw ScenarioError("unknown selection rule '" + s + "'");
}

Schedule build_schedule(const Scenario& scenario)
{
    const auto& cfg = scenario.schedule;
    const double duration = scenario.trace.duration;
    Schedule out;

    if (cfg.explicit_events) {
        out.events = *cfg.explicit_events;
        for (const auto& m : out.events) {
            if (!(m.time >= 0.0 && m.time <= duration))
                throw ScenarioError("message creation time " + format_time(m.time) + " outside [0, duration]");
            if (m.category < 1 || m.category > scenario.n_categories)
                throw ScenarioError("message category " + std::to_string(m.category) + " out of range");
        }
        std::stable_sort(out.events.begin(), out.events.end(),
                         [](const MessageCreation& x, const MessageCreation& y) { return x.time < y.time; });
        if (out.events.empty())
            out.warnings.emplace_back("EmptySchedule: no messages to create");
        return out;
    }

    if (cfg.count == 0) {
        out.warnings.emplace_back("EmptySchedule: message count is 0");
        return out;
    }
    if (!(cfg.start >= 0.0 && cfg.start <= duration))
        throw ScenarioError("schedule start outside [0, duration]");
    const double interval = cfg.interval.value_or((duration - cfg.start) / static_cast<double>(cfg.count));
    if (!(interval >= 0.0))
        throw ScenarioError("schedule interval must be non-negative");
    const double last = cfg.start + interval * static_cast<double>(cfg.count - 1);
    if (last > duration)
        throw ScenarioError("schedule runs past the trace duration (last creation at " + format_time(last) + ")");

    std::vector<NodeId> sources;
    for (const auto& [id, v] : scenario.profiles)
        sources.push_back(id);
    if (sources.empty())
        throw ScenarioError("no profiled nodes to act as message sources");

    Rng rng(derive_seed(scenario.seed, schedule_stream));
    out.events.reserve(cfg.count);
    for (std::size_t i = 0; i < cfg.count; ++i) {
        MessageCreation m;
        m.time = cfg.start + interval * static_cast<double>(i);
        m.source = cfg.source_rule == SelectionRule::Uniform ? sources[rng.below(sources.size())]
                                                             : sources[i % sources.size()];
        m.category = cfg.category_rule == SelectionRule::Uniform
                         ? 1 + static_cast<Category>(rng.below(scenario.n_categories))
                         : 1 + i % scenario.n_categories;
        out.events.push_back(m);
    }
    return out;
}

SimResult run(const Scenario& scenario)
{
    return Simulation(scenario).run();
}

} // namespace dtnsim
