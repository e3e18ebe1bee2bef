#include "dtnsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dtnsim/error.hpp"

namespace dtnsim {

namespace fs = std::filesystem;

namespace {

using Kind = ConfigError::Kind;

struct Value {
    std::string text;
    fs::path base;  // directory relative paths resolve against
};

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected)
{
    throw ConfigError(Kind::BadValue, key, "bad value '" + value + "' for " + key + " (expected " + expected + ")");
}

std::size_t to_size(const std::string& key, const std::string& v)
{
    std::size_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || p != v.data() + v.size())
        bad_value(key, v, "a non-negative integer");
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out))
        bad_value(key, v, "a number");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    bad_value(key, v, "true or false");
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

fs::path to_path(const Value& v)
{
    fs::path p(v.text);
    if (p.is_relative())
        p = v.base / p;
    return fs::absolute(p).lexically_normal();
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ',';
        out += items[i];
    }
    return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& items)
{
    std::vector<std::string> s;
    for (const auto& x : items) {
        if constexpr (std::is_floating_point_v<T>)
            s.push_back(format_time(x));
        else
            s.push_back(std::to_string(x));
    }
    return join(s);
}

bool is_synthetic_key(const std::string& key)
{
    return key.rfind("synthetic.", 0) == 0;
}

RunConfig interpret(const std::map<std::string, Value>& kv, const fs::path& default_base)
{
    RunConfig c;
    auto get = [&](const std::string& key) -> const Value* {
        auto it = kv.find(key);
        return it == kv.end() || it->second.text.empty() ? nullptr : &it->second;
    };

    if (auto v = get("trace_file"))
        c.trace_file = to_path(*v);
    if (auto v = get("trace_format")) {
        if (v->text == "tabular")
            c.trace_format = TraceFormat::Tabular;
        else if (v->text == "one_events")
            c.trace_format = TraceFormat::OneEvents;
        else
            bad_value("trace_format", v->text, "tabular or one_events");
    }
    if (auto v = get("profile_file"))
        c.profile_file = to_path(*v);
    if (auto v = get("profile_categories"))
        c.profile_categories = to_size("profile_categories", v->text);
    if (auto v = get("category_names_file"))
        c.category_names_file = to_path(*v);
    c.output_dir = get("output_dir") ? to_path(*get("output_dir")) : (default_base / "out").lexically_normal();

    auto& r = c.router;
    if (auto v = get("router")) {
        if (v->text != "cluster" && v->text != "epidemic")
            bad_value("router", v->text, "cluster or epidemic");
        r.kind = parse_router_kind(v->text);
    }
    if (auto v = get("mode")) {
        if (v->text != "exact" && v->text != "kmeans")
            bad_value("mode", v->text, "exact or kmeans");
        r.mode = parse_group_mode(v->text);
    }
    if (auto v = get("strict"))
        r.strict = to_bool("strict", v->text);
    if (auto v = get("threshold")) {
        r.threshold = to_double("threshold", v->text);
        if (!(r.threshold > 0.0 && r.threshold <= 1.0))
            bad_value("threshold", v->text, "a value in (0, 1]");
    }
    if (auto v = get("k_clusters"); v && v->text != "auto") {
        r.k_clusters = to_size("k_clusters", v->text);
        if (*r.k_clusters == 0)
            bad_value("k_clusters", v->text, "a positive integer or auto");
    }
    if (auto v = get("max_iter")) {
        r.max_iter = to_size("max_iter", v->text);
        if (r.max_iter == 0)
            bad_value("max_iter", v->text, "a positive integer");
    }
    if (auto v = get("buffer_capacity")) {
        r.buffer_capacity = v->text == "unlimited" ? Buffer::unlimited : to_size("buffer_capacity", v->text);
        if (r.buffer_capacity == 0)
            bad_value("buffer_capacity", v->text, "a positive integer or unlimited");
    }
    if (auto v = get("ttl"); v && v->text != "none") {
        r.ttl = to_double("ttl", v->text);
        if (!(*r.ttl > 0.0))
            bad_value("ttl", v->text, "a positive number or none");
    }
    if (auto v = get("max_transfers"); v && v->text != "unlimited") {
        r.max_transfers_per_contact = to_size("max_transfers", v->text);
        if (*r.max_transfers_per_contact == 0)
            bad_value("max_transfers", v->text, "a positive integer or unlimited");
    }

    auto& s = c.schedule;
    if (auto v = get("messages"))
        s.count = to_size("messages", v->text);
    if (auto v = get("msg_start"))
        s.start = to_double("msg_start", v->text);
    if (auto v = get("msg_interval"); v && v->text != "auto")
        s.interval = to_double("msg_interval", v->text);
    for (const char* key : {"source_rule", "category_rule"}) {
        if (auto v = get(key)) {
            if (v->text != "uniform" && v->text != "round_robin")
                bad_value(key, v->text, "uniform or round_robin");
            (std::string(key) == "source_rule" ? s.source_rule : s.category_rule) = parse_selection_rule(v->text);
        }
    }
    if (auto v = get("track_final"))
        s.track_final_destination = to_bool("track_final", v->text);

    if (auto v = get("categories")) {
        for (const auto& item : split_list(v->text)) {
            const std::size_t n = to_size("categories", item);
            if (n == 0)
                bad_value("categories", v->text, "positive category counts");
            c.categories.push_back(n);
        }
    }
    if (auto v = get("seeds")) {
        c.seeds.clear();
        for (const auto& item : split_list(v->text))
            c.seeds.push_back(to_size("seeds", item));
    }
    if (auto v = get("workers")) {
        c.workers = to_size("workers", v->text);
        if (c.workers == 0)
            bad_value("workers", v->text, "a positive integer");
    }

    const bool synthetic = std::any_of(kv.begin(), kv.end(), [](const auto& e) {
        return is_synthetic_key(e.first) && !e.second.text.empty();
    });
    if (synthetic) {
        SyntheticParams p;
        if (auto v = get("synthetic.node_count"))
            p.node_count = to_size("synthetic.node_count", v->text);
        if (auto v = get("synthetic.duration"))
            p.duration = to_double("synthetic.duration", v->text);
        if (auto v = get("synthetic.contact_rate"))
            p.contact_rate = to_double("synthetic.contact_rate", v->text);
        if (auto v = get("synthetic.contact_duration"))
            p.contact_duration = to_double("synthetic.contact_duration", v->text);
        if (auto v = get("synthetic.n_categories"))
            p.n_categories = to_size("synthetic.n_categories", v->text);
        else if (!c.categories.empty())
            p.n_categories = *std::max_element(c.categories.begin(), c.categories.end());
        if (auto v = get("synthetic.interest_prob")) {
            p.interest_prob.clear();
            for (const auto& item : split_list(v->text))
                p.interest_prob.push_back(to_double("synthetic.interest_prob", item));
        }
        if (auto v = get("synthetic.group_bias"))
            p.group_bias = to_double("synthetic.group_bias", v->text);
        try {
            check_synthetic_params(p);
        } catch (const InvalidParams& e) {
            throw ConfigError(Kind::BadValue, "synthetic." + e.field(), e.what());
        }
        c.synthetic = p;
    }

    if (c.trace_file && c.synthetic)
        throw ConfigError(Kind::ConflictingSources, "trace_file",
                          "ConflictingSources: set either trace_file or synthetic.* parameters, not both");
    if (!c.trace_file && !c.synthetic)
        throw ConfigError(Kind::MissingRequired, "trace_file",
                          "MissingRequired(trace_file): give a trace file or synthetic.* parameters");
    if (c.trace_file) {
        if (!c.profile_file)
            throw ConfigError(Kind::MissingRequired, "profile_file", "MissingRequired(profile_file)");
        if (!c.profile_categories || *c.profile_categories == 0)
            throw ConfigError(Kind::MissingRequired, "profile_categories", "MissingRequired(profile_categories)");
    }
    if (c.categories.empty())
        c.categories.push_back(c.synthetic ? c.synthetic->n_categories : *c.profile_categories);
    if (c.seeds.empty())
        throw ConfigError(Kind::BadValue, "seeds", "seeds must not be empty");
    return c;
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys{
        "trace_file",          "trace_format",           "profile_file",
        "profile_categories",  "category_names_file",    "output_dir",
        "router",              "mode",                   "strict",
        "threshold",           "k_clusters",             "max_iter",
        "buffer_capacity",     "ttl",                    "max_transfers",
        "messages",            "msg_start",              "msg_interval",
        "source_rule",         "category_rule",          "track_final",
        "categories",          "seeds",                  "workers",
        "synthetic.node_count", "synthetic.duration",    "synthetic.contact_rate",
        "synthetic.contact_duration", "synthetic.n_categories", "synthetic.interest_prob",
        "synthetic.group_bias",
    };
    return keys;
}

RunConfig parse_config_text(std::string_view text, const fs::path& base_dir, const ConfigOverrides& overrides)
{
    const auto& keys = config_keys();
    auto known = [&](const std::string& k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };

    std::map<std::string, Value> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(Kind::BadValue, "", "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        if (!known(key))
            throw ConfigError(Kind::UnknownKey, key, "UnknownKey(" + key + ")");
        if (kv.contains(key))
            throw ConfigError(Kind::BadValue, key, "duplicate key " + key);
        kv[key] = Value{trim(t.substr(eq + 1)), base_dir};
    }
    const fs::path cwd = fs::current_path();
    for (const auto& [key, value] : overrides) {
        if (!known(key))
            throw ConfigError(Kind::UnknownKey, key, "UnknownKey(" + key + ")");
        kv[key] = Value{value, cwd};
    }
    return interpret(kv, base_dir);
}

RunConfig parse_config(const fs::path& file, const ConfigOverrides& overrides)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw ConfigError(Kind::Io, file.string(), "cannot read config file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const fs::path base = fs::absolute(file).parent_path();
    return parse_config_text(ss.str(), base, overrides);
}

std::string format_config(const RunConfig& c)
{
    auto path_or_empty = [](const std::optional<fs::path>& p) { return p ? p->string() : std::string(); };
    const auto& r = c.router;
    const auto& s = c.schedule;

    std::vector<std::pair<std::string, std::string>> items{
        {"trace_file", path_or_empty(c.trace_file)},
        {"trace_format", c.trace_format == TraceFormat::Tabular ? "tabular" : "one_events"},
        {"profile_file", path_or_empty(c.profile_file)},
        {"profile_categories", c.profile_categories ? std::to_string(*c.profile_categories) : ""},
        {"category_names_file", path_or_empty(c.category_names_file)},
        {"output_dir", c.output_dir.string()},
        {"router", to_string(r.kind)},
        {"mode", to_string(r.mode)},
        {"strict", r.strict ? "true" : "false"},
        {"threshold", format_time(r.threshold)},
        {"k_clusters", r.k_clusters ? std::to_string(*r.k_clusters) : "auto"},
        {"max_iter", std::to_string(r.max_iter)},
        {"buffer_capacity", r.buffer_capacity == Buffer::unlimited ? "unlimited" : std::to_string(r.buffer_capacity)},
        {"ttl", r.ttl ? format_time(*r.ttl) : "none"},
        {"max_transfers", r.max_transfers_per_contact ? std::to_string(*r.max_transfers_per_contact) : "unlimited"},
        {"messages", std::to_string(s.count)},
        {"msg_start", format_time(s.start)},
        {"msg_interval", s.interval ? format_time(*s.interval) : "auto"},
        {"source_rule", to_string(s.source_rule)},
        {"category_rule", to_string(s.category_rule)},
        {"track_final", s.track_final_destination ? "true" : "false"},
        {"categories", join_numbers(c.categories)},
        {"seeds", join_numbers(c.seeds)},
        {"workers", std::to_string(c.workers)},
    };
    if (c.synthetic) {
        const auto& p = *c.synthetic;
        items.insert(items.end(), {
            {"synthetic.node_count", std::to_string(p.node_count)},
            {"synthetic.duration", format_time(p.duration)},
            {"synthetic.contact_rate", format_time(p.contact_rate)},
            {"synthetic.contact_duration", format_time(p.contact_duration)},
            {"synthetic.n_categories", std::to_string(p.n_categories)},
            {"synthetic.interest_prob", join_numbers(p.interest_prob)},
            {"synthetic.group_bias", format_time(p.group_bias)},
        });
    }

    std::string out;
    for (const auto& [k, v] : items)
        out += k + " = " + v + '\n';
    return out;
}

} // namespace dtnsim
