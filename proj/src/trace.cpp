#include "dtnsim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <tuple>

#include "dtnsim/error.hpp"
#include "dtnsim/rng.hpp"

namespace dtnsim {

namespace {

using Kind = ParseError::Kind;

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn)
{
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        ++line_no;
        fn(text.substr(pos, nl - pos), line_no);
        pos = nl + 1;
    }
}

bool parse_double(std::string_view s, double& out)
{
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size() && std::isfinite(out);
}

template <typename T>
bool parse_uint(std::string_view s, T& out)
{
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

bool is_comment(const std::vector<std::string_view>& tokens)
{
    return !tokens.empty() && tokens.front().front() == '#';
}

struct Header {
    std::optional<double> duration;
    std::optional<std::size_t> node_count;
    std::size_t node_count_line = 0;
};

// Recognizes `# duration X` and `# node_count N`; other comments are ignored.
void read_header(const std::vector<std::string_view>& tokens, std::size_t line_no, Header& header)
{
    std::vector<std::string_view> rest(tokens.begin(), tokens.end());
    if (rest.front() == "#") {
        rest.erase(rest.begin());
    } else {
        rest.front().remove_prefix(1);
    }
    if (rest.size() != 2)
        return;
    if (rest[0] == "duration") {
        double d;
        if (!parse_double(rest[1], d) || d < 0)
            throw ParseError(Kind::MalformedLine, line_no, "bad duration header");
        header.duration = d;
    } else if (rest[0] == "node_count") {
        std::size_t n;
        if (!parse_uint(rest[1], n))
            throw ParseError(Kind::MalformedLine, line_no, "bad node_count header");
        header.node_count = n;
        header.node_count_line = line_no;
    }
}

struct RawEvent {
    ContactEvent ev;
    std::size_t line = 0;
};

ContactEvent normalized(double t0, double t1, NodeId a, NodeId b)
{
    if (a > b)
        std::swap(a, b);
    return ContactEvent{t0, t1, a, b};
}

// Merges overlapping (or touching) intervals per node pair, then sorts.
std::vector<ContactEvent> merge_and_sort(std::vector<ContactEvent> events)
{
    std::sort(events.begin(), events.end(), [](const ContactEvent& x, const ContactEvent& y) {
        return std::tie(x.a, x.b, x.t_start, x.t_end) < std::tie(y.a, y.b, y.t_start, y.t_end);
    });
    std::vector<ContactEvent> merged;
    merged.reserve(events.size());
    for (const auto& e : events) {
        if (!merged.empty()) {
            auto& last = merged.back();
            if (last.a == e.a && last.b == e.b && e.t_start <= last.t_end) {
                last.t_end = std::max(last.t_end, e.t_end);
                continue;
            }
        }
        merged.push_back(e);
    }
    std::sort(merged.begin(), merged.end(), contact_less);
    return merged;
}

ContactTrace finish_trace(const std::vector<RawEvent>& raw, const Header& header, double derived_duration)
{
    ContactTrace trace;
    trace.duration = header.duration.value_or(derived_duration);
    std::vector<ContactEvent> events;
    events.reserve(raw.size());
    for (const auto& r : raw) {
        if (r.ev.t_end > trace.duration)
            throw ParseError(Kind::EventBeyondDuration, r.line, "contact ends after trace duration");
        events.push_back(r.ev);
    }
    trace.events = merge_and_sort(std::move(events));
    const std::size_t distinct = trace.nodes().size();
    if (header.node_count) {
        if (*header.node_count < distinct)
            throw ParseError(Kind::MalformedLine, header.node_count_line,
                             "node_count header smaller than distinct node count");
        trace.node_count = *header.node_count;
    } else {
        trace.node_count = distinct;
    }
    return trace;
}

ContactTrace parse_tabular(std::string_view text)
{
    Header header;
    std::vector<RawEvent> raw;
    double max_end = 0.0;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        auto tok = split_ws(line);
        if (tok.empty())
            return;
        if (is_comment(tok)) {
            read_header(tok, line_no, header);
            return;
        }
        if (tok.size() != 4)
            throw ParseError(Kind::MalformedLine, line_no, "expected 't_start t_end node_a node_b'");
        double t0, t1;
        NodeId a, b;
        if (!parse_double(tok[0], t0) || !parse_double(tok[1], t1) || !parse_uint(tok[2], a)
            || !parse_uint(tok[3], b) || t0 < 0)
            throw ParseError(Kind::MalformedLine, line_no);
        if (t0 >= t1)
            throw ParseError(Kind::InvertedInterval, line_no);
        if (a == b)
            throw ParseError(Kind::SelfContact, line_no);
        raw.push_back({normalized(t0, t1, a, b), line_no});
        max_end = std::max(max_end, t1);
    });
    return finish_trace(raw, header, max_end);
}

ContactTrace parse_one_events(std::string_view text)
{
    Header header;
    std::vector<RawEvent> raw;
    struct Open {
        double t;
        std::size_t line;
    };
    std::map<std::pair<NodeId, NodeId>, Open> open;
    double max_time = 0.0;

    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        auto tok = split_ws(line);
        if (tok.empty())
            return;
        if (is_comment(tok)) {
            read_header(tok, line_no, header);
            return;
        }
        if (tok.size() != 5 || tok[1] != "CONN")
            throw ParseError(Kind::MalformedLine, line_no, "expected 'time CONN node_a node_b up|down'");
        double t;
        NodeId a, b;
        if (!parse_double(tok[0], t) || !parse_uint(tok[2], a) || !parse_uint(tok[3], b) || t < 0)
            throw ParseError(Kind::MalformedLine, line_no);
        if (a == b)
            throw ParseError(Kind::SelfContact, line_no);
        const auto key = std::minmax(a, b);
        max_time = std::max(max_time, t);
        if (tok[4] == "up") {
            // A repeated "up" on an already open pair extends nothing.
            open.try_emplace({key.first, key.second}, Open{t, line_no});
        } else if (tok[4] == "down") {
            auto it = open.find({key.first, key.second});
            if (it == open.end())
                throw ParseError(Kind::MalformedLine, line_no, "'down' without a matching 'up'");
            if (it->second.t >= t)
                throw ParseError(Kind::InvertedInterval, line_no);
            raw.push_back({normalized(it->second.t, t, a, b), line_no});
            open.erase(it);
        } else {
            throw ParseError(Kind::MalformedLine, line_no, "state must be 'up' or 'down'");
        }
    });

    // Unpaired "up" lines stay open until the end of the trace.
    const double duration = header.duration.value_or(max_time);
    for (const auto& [pair, o] : open) {
        if (o.t < duration)
            raw.push_back({ContactEvent{o.t, duration, pair.first, pair.second}, o.line});
    }
    return finish_trace(raw, header, max_time);
}

} // namespace

bool contact_less(const ContactEvent& x, const ContactEvent& y)
{
    return std::tie(x.t_start, x.t_end, x.a, x.b) < std::tie(y.t_start, y.t_end, y.a, y.b);
}

std::vector<NodeId> ContactTrace::nodes() const
{
    std::set<NodeId> ids;
    for (const auto& e : events) {
        ids.insert(e.a);
        ids.insert(e.b);
    }
    return {ids.begin(), ids.end()};
}

ContactTrace parse_contact_trace(std::string_view text, TraceFormat format)
{
    return format == TraceFormat::Tabular ? parse_tabular(text) : parse_one_events(text);
}

std::string format_time(double x)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

std::string format_contact_trace(const ContactTrace& trace)
{
    std::string out;
    out += "# duration " + format_time(trace.duration) + '\n';
    out += "# node_count " + std::to_string(trace.node_count) + '\n';
    for (const auto& e : trace.events) {
        out += format_time(e.t_start);
        out += ' ';
        out += format_time(e.t_end);
        out += ' ';
        out += std::to_string(e.a);
        out += ' ';
        out += std::to_string(e.b);
        out += '\n';
    }
    return out;
}

ProfileSet parse_interest_profiles(std::string_view text, std::size_t n_categories)
{
    ProfileSet profiles;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        auto tok = split_ws(line);
        if (tok.empty() || is_comment(tok))
            return;
        NodeId id;
        if (!parse_uint(tok[0], id))
            throw ParseError(Kind::MalformedLine, line_no, "bad node id");
        if (tok.size() - 1 != n_categories)
            throw ParseError(Kind::WrongArity, line_no,
                             "expected " + std::to_string(n_categories) + " interest bits");
        std::vector<std::uint8_t> bits;
        bits.reserve(n_categories);
        for (std::size_t i = 1; i < tok.size(); ++i) {
            if (tok[i] == "0")
                bits.push_back(0);
            else if (tok[i] == "1")
                bits.push_back(1);
            else
                throw ParseError(Kind::NonBinaryValue, line_no);
        }
        if (!profiles.emplace(id, InterestVector(std::move(bits))).second)
            throw ParseError(Kind::DuplicateNode, id);
    });
    return profiles;
}

std::string format_interest_profiles(const ProfileSet& profiles)
{
    std::string out;
    for (const auto& [id, v] : profiles) {
        out += std::to_string(id);
        for (std::uint8_t b : v.bits()) {
            out += ' ';
            out += b ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

ProfileSet adapt_profiles(const ProfileSet& profiles, std::size_t n_categories)
{
    ProfileSet out;
    for (const auto& [id, v] : profiles)
        out.emplace(id, v.resized(n_categories));
    return out;
}

void check_synthetic_params(const SyntheticParams& params)
{
    if (params.node_count < 2)
        throw InvalidParams("node_count", "need at least 2 nodes");
    if (!(params.duration > 0) || !std::isfinite(params.duration))
        throw InvalidParams("duration", "must be positive");
    if (!(params.contact_rate > 0) || !std::isfinite(params.contact_rate))
        throw InvalidParams("contact_rate", "must be positive");
    if (!(params.contact_duration > 0) || !std::isfinite(params.contact_duration))
        throw InvalidParams("contact_duration", "must be positive");
    if (params.n_categories < 1)
        throw InvalidParams("n_categories", "need at least 1 category");
    if (params.interest_prob.size() != 1 && params.interest_prob.size() != params.n_categories)
        throw InvalidParams("interest_prob", "give one probability or one per category");
    for (double p : params.interest_prob)
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidParams("interest_prob", "probabilities must lie in [0,1]");
    if (!(params.group_bias > 0) || !std::isfinite(params.group_bias))
        throw InvalidParams("group_bias", "must be positive");
}

SyntheticScenario generate_synthetic_trace(const SyntheticParams& params, std::uint64_t seed)
{
    check_synthetic_params(params);

    SyntheticScenario out;
    const auto n = static_cast<NodeId>(params.node_count);

    Rng interest_rng(derive_seed(seed, 0));
    for (NodeId id = 0; id < n; ++id) {
        InterestVector v(params.n_categories);
        for (std::size_t c = 0; c < params.n_categories; ++c) {
            const double p = params.interest_prob.size() == 1 ? params.interest_prob[0] : params.interest_prob[c];
            v.set(c, interest_rng.bernoulli(p));
        }
        out.profiles.emplace(id, std::move(v));
    }

    auto share_interest = [&](NodeId a, NodeId b) {
        const auto& va = out.profiles.at(a);
        const auto& vb = out.profiles.at(b);
        for (std::size_t c = 0; c < params.n_categories; ++c)
            if (va[c] && vb[c])
                return true;
        return false;
    };

    Rng contact_rng(derive_seed(seed, 1));
    std::vector<ContactEvent> events;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            const double rate = params.contact_rate * (share_interest(a, b) ? params.group_bias : 1.0);
            double t = 0.0;
            for (;;) {
                t += contact_rng.exponential(rate);
                if (t >= params.duration)
                    break;
                const double len = contact_rng.exponential(1.0 / params.contact_duration);
                const double end = std::min(t + len, params.duration);
                if (end > t)
                    events.push_back(ContactEvent{t, end, a, b});
            }
        }
    }
    out.trace.events = merge_and_sort(std::move(events));
    out.trace.duration = params.duration;
    out.trace.node_count = params.node_count;
    return out;
}

ValidationReport validate_scenario(const ContactTrace& trace, const ProfileSet& profiles)
{
    ValidationReport report;
    const auto in_trace = trace.nodes();
    for (NodeId id : in_trace)
        if (!profiles.contains(id))
            report.missing_profile.push_back(id);
    for (const auto& [id, v] : profiles)
        if (!std::binary_search(in_trace.begin(), in_trace.end(), id))
            report.unused_profile.push_back(id);
    return report;
}

} // namespace dtnsim
