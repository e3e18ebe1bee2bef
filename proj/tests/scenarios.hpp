#pragma once

// Scenario builders shared by the unit and acceptance tests.

#include <string_view>
#include <vector>

#include "dtnsim/engine.hpp"
#include "dtnsim/rng.hpp"
#include "dtnsim/trace.hpp"

namespace dtnsim::fixtures {

/// Scenario from literal trace and profile text with an explicit message list.
inline Scenario hand_scenario(std::string_view trace, std::string_view profiles, std::size_t n,
                              std::vector<MessageCreation> messages)
{
    Scenario sc;
    sc.trace = parse_contact_trace(trace, TraceFormat::Tabular);
    sc.profiles = parse_interest_profiles(profiles, n);
    sc.n_categories = n;
    sc.schedule.explicit_events = std::move(messages);
    sc.router.buffer_capacity = Buffer::unlimited;
    return sc;
}

/// Small flooding scenario: 5 to 20 nodes, roughly 90 contacts over 1000 s,
/// 3 categories, 25 messages, unlimited buffers, no TTL.
inline Scenario random_small_scenario(std::uint64_t seed)
{
    SyntheticParams p;
    p.node_count = 5 + static_cast<std::size_t>(derive_seed(seed, 1000) % 16);
    p.duration = 1000.0;
    const double pairs = static_cast<double>(p.node_count * (p.node_count - 1) / 2);
    p.contact_rate = 90.0 / (pairs * p.duration);
    p.contact_duration = 40.0;
    p.n_categories = 3;
    p.interest_prob = {0.3};
    auto synth = generate_synthetic_trace(p, seed);

    Scenario sc;
    sc.trace = std::move(synth.trace);
    sc.profiles = std::move(synth.profiles);
    sc.n_categories = p.n_categories;
    sc.router.buffer_capacity = Buffer::unlimited;
    sc.schedule.count = 25;
    sc.seed = seed;
    return sc;
}

} // namespace dtnsim::fixtures
