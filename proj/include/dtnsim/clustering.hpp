#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dtnsim/interest.hpp"
#include "dtnsim/trace.hpp"

namespace dtnsim {

double squared_distance(const InterestVector& p, const Centroid& q);
double squared_distance(const Centroid& p, const Centroid& q);

/// Output of kmeans(): centroids, one cluster index per point, and the
/// objective value after every centroid update.
struct Clustering {
    std::size_t k = 0;
    std::vector<Centroid> centroids;
    std::map<NodeId, std::size_t> assignment;
    std::size_t iterations_used = 0;
    std::vector<double> sse_history;

    /// Members of cluster `idx`, ascending.
    std::vector<NodeId> members(std::size_t idx) const;
};

/// Sum of squared distances of every point to its assigned centroid.
/// Throws ClusteringError(UnassignedPoint) if a point has no cluster.
double sse(const ProfileSet& points, const Clustering& clustering);

inline constexpr std::size_t default_max_iter = 100;

/// Lloyd iteration over binary interest vectors.
///
/// Initial centroids: points are drawn uniformly without replacement (seeded)
/// from the ascending node-id list, skipping any whose vector was already
/// drawn, until k distinct vectors are chosen. Each round
/// recomputes centroids as member means, then reassigns every point to its
/// nearest centroid, the lowest index winning ties. An emptied cluster takes
/// the point farthest from its centroid. Stops when no assignment changes or
/// after `max_iter` rounds.
Clustering kmeans(const ProfileSet& points, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter = default_max_iter);

/// Number of distinct interest vectors, the upper bound for k.
std::size_t distinct_vector_count(const ProfileSet& points);

/// Nodes whose interest bit for 1-based `category` is set, ascending.
std::vector<NodeId> resolve_group_exact(const ProfileSet& profiles, Category category);

struct GroupResolution {
    std::vector<NodeId> members;
    bool fallback = false;  ///< true when no centroid met the threshold
};

inline constexpr double default_group_threshold = 0.5;

/// Union of the clusters whose centroid component for `category` reaches
/// `threshold`; falls back to resolve_group_exact when that union is empty.
GroupResolution resolve_group_kmeans(const Clustering& clustering, const ProfileSet& profiles,
                                     Category category, double threshold = default_group_threshold);

/// `idx: c1 c2 ... | m1 m2 ...` per cluster, centroids at 6 decimals.
std::string format_clustering(const Clustering& clustering);

} // namespace dtnsim
