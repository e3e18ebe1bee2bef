#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtnsim/engine.hpp"

namespace dtnsim {

/// Delivered / created. Throws MetricsError(NoMessages) on empty input.
double delivery_ratio(std::span<const DeliveryRecord> records);

/// Mean (group_delivered_at - created_at) over delivered records.
double avg_delay(std::span<const DeliveryRecord> records);

/// Mean hop count of the first group receipt over delivered records.
double avg_hops(std::span<const DeliveryRecord> records);

/// Forwards of every message, delivered or not, per delivered message.
double avg_cost(std::span<const DeliveryRecord> records);

/// Share of the network used by a group. Throws MetricsError(EmptyNetwork).
double resource_used(std::span<const NodeId> group, std::size_t all_nodes);

struct RunMeta {
    std::string run_id;
    RouterKind router = RouterKind::Cluster;
    GroupMode mode = GroupMode::Exact;
    bool strict = false;
    std::size_t n_categories = 0;
    std::optional<std::size_t> k_clusters;
    std::uint64_t seed = 0;
};

struct MetricsReport {
    RunMeta meta;
    std::size_t created = 0;
    std::size_t delivered = 0;
    // Unset when undefined (no messages, or nothing delivered).
    std::optional<double> delivery_ratio;
    std::optional<double> avg_delay;
    std::optional<double> avg_hops;
    std::optional<double> avg_cost;
    std::map<Category, std::size_t> group_size_per_category;
    /// Nodes belonging to the group of at least one category, over all nodes.
    double resource_used = 0.0;
};

MetricsReport compute_report(const SimResult& result, std::string run_id);

std::string summary_csv_header();
std::string format_summary_row(const MetricsReport& report);

std::string per_message_csv_header();
std::string format_per_message_csv(std::span<const DeliveryRecord> records);
std::vector<DeliveryRecord> parse_per_message_csv(std::string_view text);

/// Writes `summary.csv` (header + one row) and `messages.csv` into `dir`.
/// Throws IoError naming the path that could not be written.
void write_report(const MetricsReport& report, std::span<const DeliveryRecord> records,
                  const std::filesystem::path& dir);

/// Writes `text` to `path` verbatim; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace dtnsim
