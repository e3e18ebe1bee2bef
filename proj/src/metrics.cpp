#include "dtnsim/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "dtnsim/error.hpp"

namespace dtnsim {

namespace {

using Kind = MetricsError::Kind;

std::size_t delivered_count(std::span<const DeliveryRecord> records)
{
    std::size_t n = 0;
    for (const auto& r : records)
        if (r.group_delivered_at)
            ++n;
    return n;
}

std::size_t require_delivered(std::span<const DeliveryRecord> records)
{
    const std::size_t n = delivered_count(records);
    if (n == 0)
        throw MetricsError(Kind::NothingDelivered, "NothingDelivered");
    return n;
}

std::string fixed6(std::optional<double> x)
{
    if (!x)
        return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *x);
    return buf;
}

template <typename T>
std::string opt_field(const std::optional<T>& x)
{
    if (!x)
        return {};
    if constexpr (std::is_floating_point_v<T>)
        return format_time(*x);
    else
        return std::to_string(*x);
}

std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

template <typename T>
T parse_field(std::string_view s, std::size_t line_no)
{
    T value{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw MetricsError(Kind::Malformed, "bad field '" + std::string(s) + "' on line " + std::to_string(line_no));
    return value;
}

template <typename T>
std::optional<T> parse_opt(std::string_view s, std::size_t line_no)
{
    if (s.empty())
        return std::nullopt;
    return parse_field<T>(s, line_no);
}

} // namespace

double delivery_ratio(std::span<const DeliveryRecord> records)
{
    if (records.empty())
        throw MetricsError(Kind::NoMessages, "NoMessages");
    return static_cast<double>(delivered_count(records)) / static_cast<double>(records.size());
}

double avg_delay(std::span<const DeliveryRecord> records)
{
    const std::size_t n = require_delivered(records);
    double sum = 0.0;
    for (const auto& r : records)
        if (r.group_delivered_at)
            sum += *r.group_delivered_at - r.created_at;
    return sum / static_cast<double>(n);
}

double avg_hops(std::span<const DeliveryRecord> records)
{
    const std::size_t n = require_delivered(records);
    double sum = 0.0;
    for (const auto& r : records)
        if (r.group_delivered_at)
            sum += static_cast<double>(r.hops_at_delivery.value_or(0));
    return sum / static_cast<double>(n);
}

double avg_cost(std::span<const DeliveryRecord> records)
{
    const std::size_t n = require_delivered(records);
    double forwards = 0.0;
    for (const auto& r : records)
        forwards += static_cast<double>(r.forwards_total);
    return forwards / static_cast<double>(n);
}

double resource_used(std::span<const NodeId> group, std::size_t all_nodes)
{
    if (all_nodes == 0)
        throw MetricsError(Kind::EmptyNetwork, "EmptyNetwork");
    return static_cast<double>(group.size()) / static_cast<double>(all_nodes);
}

MetricsReport compute_report(const SimResult& result, std::string run_id)
{
    MetricsReport rep;
    rep.meta.run_id = std::move(run_id);
    rep.meta.router = result.router.kind;
    rep.meta.mode = result.router.mode;
    rep.meta.strict = result.router.strict;
    rep.meta.n_categories = result.n_categories;
    if (result.clustering)
        rep.meta.k_clusters = result.clustering->k;
    rep.meta.seed = result.seed;

    const std::span<const DeliveryRecord> records = result.records;
    rep.created = records.size();
    rep.delivered = delivered_count(records);
    if (!records.empty())
        rep.delivery_ratio = delivery_ratio(records);
    if (rep.delivered > 0) {
        rep.avg_delay = avg_delay(records);
        rep.avg_hops = avg_hops(records);
        rep.avg_cost = avg_cost(records);
    }

    std::set<NodeId> used;
    for (const auto& [k, members] : result.groups) {
        rep.group_size_per_category[k] = members.size();
        used.insert(members.begin(), members.end());
    }
    if (!result.nodes.empty()) {
        const std::vector<NodeId> used_list(used.begin(), used.end());
        rep.resource_used = resource_used(used_list, result.nodes.size());
    }
    return rep;
}

std::string summary_csv_header()
{
    return "run_id,router,mode,strict,n_categories,k_clusters,seed,created,delivered,"
           "delivery_ratio,avg_delay,avg_hops,avg_cost,resource_used\n";
}

std::string format_summary_row(const MetricsReport& r)
{
    std::string row;
    row += r.meta.run_id + ',';
    row += std::string(to_string(r.meta.router)) + ',';
    row += std::string(to_string(r.meta.mode)) + ',';
    row += r.meta.strict ? "true," : "false,";
    row += std::to_string(r.meta.n_categories) + ',';
    row += opt_field(r.meta.k_clusters) + ',';
    row += std::to_string(r.meta.seed) + ',';
    row += std::to_string(r.created) + ',';
    row += std::to_string(r.delivered) + ',';
    row += fixed6(r.delivery_ratio) + ',';
    row += fixed6(r.avg_delay) + ',';
    row += fixed6(r.avg_hops) + ',';
    row += fixed6(r.avg_cost) + ',';
    row += fixed6(r.resource_used) + '\n';
    return row;
}

std::string per_message_csv_header()
{
    return "message_id,source,category,created_at,group_size,group_delivered_at,first_receiver,hops,"
           "forwards_total,final_delivered_at\n";
}

std::string format_per_message_csv(std::span<const DeliveryRecord> records)
{
    std::string out = per_message_csv_header();
    for (const auto& r : records) {
        out += std::to_string(r.message_id) + ',';
        out += std::to_string(r.source) + ',';
        out += std::to_string(r.category) + ',';
        out += format_time(r.created_at) + ',';
        out += std::to_string(r.group_size) + ',';
        out += opt_field(r.group_delivered_at) + ',';
        out += opt_field(r.first_receiver) + ',';
        out += opt_field(r.hops_at_delivery) + ',';
        out += std::to_string(r.forwards_total) + ',';
        out += opt_field(r.final_delivered_at) + '\n';
    }
    return out;
}

std::vector<DeliveryRecord> parse_per_message_csv(std::string_view text)
{
    std::vector<DeliveryRecord> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    const std::string header = per_message_csv_header();
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line_no == 1) {
            if (std::string(line) + '\n' != header)
                throw MetricsError(Kind::Malformed, "unexpected per-message CSV header");
            continue;
        }
        if (line.empty())
            continue;
        const auto f = split_csv(line);
        if (f.size() != 10)
            throw MetricsError(Kind::Malformed, "expected 10 fields on line " + std::to_string(line_no));
        DeliveryRecord r;
        r.message_id = parse_field<MessageId>(f[0], line_no);
        r.source = parse_field<NodeId>(f[1], line_no);
        r.category = parse_field<Category>(f[2], line_no);
        r.created_at = parse_field<double>(f[3], line_no);
        r.group_size = parse_field<std::size_t>(f[4], line_no);
        r.group_delivered_at = parse_opt<double>(f[5], line_no);
        r.first_receiver = parse_opt<NodeId>(f[6], line_no);
        r.hops_at_delivery = parse_opt<std::size_t>(f[7], line_no);
        r.forwards_total = parse_field<std::size_t>(f[8], line_no);
        r.final_delivered_at = parse_opt<double>(f[9], line_no);
        out.push_back(r);
    }
    if (line_no == 0)
        throw MetricsError(Kind::Malformed, "missing per-message CSV header");
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw IoError(path.string());
}

void write_report(const MetricsReport& report, std::span<const DeliveryRecord> records,
                  const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError(dir.string());
    write_text_file(dir / "summary.csv", summary_csv_header() + format_summary_row(report));
    write_text_file(dir / "messages.csv", format_per_message_csv(records));
}

} // namespace dtnsim
