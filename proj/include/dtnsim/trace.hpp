#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtnsim/interest.hpp"

namespace dtnsim {

/// One contact interval between two nodes. Contacts are symmetric; parsed
/// and generated events always store a < b.
struct ContactEvent {
    double t_start = 0.0;
    double t_end = 0.0;
    NodeId a = 0;
    NodeId b = 0;

    friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

/// Ordering used for traces: (t_start, t_end, a, b).
bool contact_less(const ContactEvent& x, const ContactEvent& y);

struct ContactTrace {
    std::vector<ContactEvent> events;
    double duration = 0.0;
    std::size_t node_count = 0;

    /// Distinct node ids appearing in any event, ascending.
    std::vector<NodeId> nodes() const;
};

enum class TraceFormat { Tabular, OneEvents };

/// Node id -> interest vector, ordered by node id.
using ProfileSet = std::map<NodeId, InterestVector>;

/// Parses a contact trace.
///
/// Tabular lines are `t_start t_end node_a node_b`; one_events lines are
/// `time CONN node_a node_b up|down`. In both formats `#` starts a comment,
/// and the header comments `# duration <seconds>` and `# node_count <n>`
/// override the derived values. Overlapping contacts of one pair are merged
/// and the result is sorted with contact_less.
ContactTrace parse_contact_trace(std::string_view text, TraceFormat format);

/// Serializes to the tabular format, headers included, so that parsing the
/// output yields the same trace.
std::string format_contact_trace(const ContactTrace& trace);

ProfileSet parse_interest_profiles(std::string_view text, std::size_t n_categories);
std::string format_interest_profiles(const ProfileSet& profiles);

/// Truncates or zero-pads every profile to `n_categories` components.
ProfileSet adapt_profiles(const ProfileSet& profiles, std::size_t n_categories);

struct SyntheticParams {
    std::size_t node_count = 20;
    double duration = 10000.0;
    /// Memoryless meeting rate per unordered node pair, in meetings/second.
    double contact_rate = 1e-3;
    /// Mean of the exponential contact length, seconds.
    double contact_duration = 60.0;
    std::size_t n_categories = 5;
    /// Per-category interest probability; a single value applies to all.
    std::vector<double> interest_prob{0.3};
    /// Rate multiplier for pairs sharing at least one interest.
    double group_bias = 1.0;
};

struct SyntheticScenario {
    ContactTrace trace;
    ProfileSet profiles;
};

/// Throws InvalidParams naming the first offending field.
void check_synthetic_params(const SyntheticParams& params);

/// Pure function of (params, seed). Node ids are 0..node_count-1 and every
/// node receives a profile.
SyntheticScenario generate_synthetic_trace(const SyntheticParams& params, std::uint64_t seed);

struct ValidationReport {
    std::vector<NodeId> missing_profile;  ///< in the trace, no profile
    std::vector<NodeId> unused_profile;   ///< has a profile, never in the trace

    bool consistent() const { return missing_profile.empty() && unused_profile.empty(); }
};

ValidationReport validate_scenario(const ContactTrace& trace, const ProfileSet& profiles);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_time(double x);

} // namespace dtnsim
