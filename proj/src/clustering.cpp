#include "dtnsim/clustering.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "dtnsim/error.hpp"
#include "dtnsim/rng.hpp"

namespace dtnsim {

namespace {

using Kind = ClusteringError::Kind;

template <typename P, typename Q>
double squared_distance_impl(const P& p, const Q& q)
{
    if (p.size() != q.size())
        throw ClusteringError(Kind::LengthMismatch,
                              "LengthMismatch: " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = static_cast<double>(p[i]) - q[i];
        sum += d * d;
    }
    return sum;
}

struct Point {
    NodeId id;
    const InterestVector* v;
};

class Lloyd {
public:
    Lloyd(std::vector<Point> points, std::size_t k, std::size_t dims)
        : points_(std::move(points)), k_(k), dims_(dims)
    {
    }

    std::vector<Centroid> means(const std::vector<std::size_t>& assign) const
    {
        std::vector<Centroid> out(k_, Centroid{std::vector<double>(dims_, 0.0)});
        std::vector<std::size_t> sizes(k_, 0);
        for (std::size_t i = 0; i < points_.size(); ++i) {
            auto& c = out[assign[i]].components;
            for (std::size_t d = 0; d < dims_; ++d)
                c[d] += (*points_[i].v)[d] ? 1.0 : 0.0;
            ++sizes[assign[i]];
        }
        for (std::size_t j = 0; j < k_; ++j)
            for (double& x : out[j].components)
                x /= static_cast<double>(sizes[j]);
        return out;
    }

    std::vector<std::size_t> nearest(const std::vector<Centroid>& centroids) const
    {
        std::vector<std::size_t> assign(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            std::size_t best = 0;
            double best_d = squared_distance(*points_[i].v, centroids[0]);
            for (std::size_t j = 1; j < k_; ++j) {
                const double d = squared_distance(*points_[i].v, centroids[j]);
                if (d < best_d) {
                    best_d = d;
                    best = j;
                }
            }
            assign[i] = best;
        }
        return assign;
    }

    // Moves the farthest point of a multi-member cluster into each empty one.
    void repair(std::vector<std::size_t>& assign, const std::vector<Centroid>& centroids) const
    {
        std::vector<std::size_t> sizes(k_, 0);
        for (std::size_t a : assign)
            ++sizes[a];
        for (std::size_t empty = 0; empty < k_; ++empty) {
            if (sizes[empty] != 0)
                continue;
            std::size_t pick = points_.size();
            double pick_d = -1.0;
            for (std::size_t i = 0; i < points_.size(); ++i) {
                if (sizes[assign[i]] < 2)
                    continue;
                const double d = squared_distance(*points_[i].v, centroids[assign[i]]);
                if (d > pick_d) {
                    pick_d = d;
                    pick = i;
                }
            }
            --sizes[assign[pick]];
            assign[pick] = empty;
            ++sizes[empty];
        }
    }

    double objective(const std::vector<std::size_t>& assign, const std::vector<Centroid>& centroids) const
    {
        double e = 0.0;
        for (std::size_t i = 0; i < points_.size(); ++i)
            e += squared_distance(*points_[i].v, centroids[assign[i]]);
        return e;
    }

private:
    std::vector<Point> points_;
    std::size_t k_;
    std::size_t dims_;
};

} // namespace

double squared_distance(const InterestVector& p, const Centroid& q)
{
    return squared_distance_impl(p, q);
}

double squared_distance(const Centroid& p, const Centroid& q)
{
    return squared_distance_impl(p, q);
}

std::vector<NodeId> Clustering::members(std::size_t idx) const
{
    std::vector<NodeId> out;
    for (const auto& [id, c] : assignment)
        if (c == idx)
            out.push_back(id);
    return out;
}

double sse(const ProfileSet& points, const Clustering& clustering)
{
    double e = 0.0;
    for (const auto& [id, v] : points) {
        auto it = clustering.assignment.find(id);
        if (it == clustering.assignment.end() || it->second >= clustering.centroids.size())
            throw ClusteringError(Kind::UnassignedPoint, "UnassignedPoint(" + std::to_string(id) + ")");
        e += squared_distance(v, clustering.centroids[it->second]);
    }
    return e;
}

std::size_t distinct_vector_count(const ProfileSet& points)
{
    std::set<InterestVector> distinct;
    for (const auto& [id, v] : points)
        distinct.insert(v);
    return distinct.size();
}

Clustering kmeans(const ProfileSet& points, std::size_t k, std::uint64_t seed, std::size_t max_iter)
{
    if (points.empty())
        throw ClusteringError(Kind::EmptyInput, "EmptyInput: no points to cluster");
    if (k < 1)
        throw ClusteringError(Kind::InvalidArgument, "k must be at least 1");
    if (max_iter < 1)
        throw ClusteringError(Kind::InvalidArgument, "max_iter must be at least 1");

    const std::size_t dims = points.begin()->second.size();
    std::vector<Point> pts;
    pts.reserve(points.size());
    std::set<InterestVector> distinct;
    for (const auto& [id, v] : points) {
        if (v.size() != dims)
            throw ClusteringError(Kind::LengthMismatch, "LengthMismatch at node " + std::to_string(id));
        pts.push_back({id, &v});
        distinct.insert(v);
    }
    if (k > distinct.size())
        throw ClusteringError(Kind::TooFewDistinctPoints, "TooFewDistinctPoints(" + std::to_string(k) + ", "
                                                              + std::to_string(distinct.size()) + ")");

    // Draw points uniformly without replacement (partial Fisher-Yates over the
    // ascending-id list), keeping the first k whose vectors are new.
    Rng rng(seed);
    std::vector<const InterestVector*> order;
    order.reserve(pts.size());
    for (const auto& p : pts)
        order.push_back(p.v);
    std::vector<Centroid> centroids;
    centroids.reserve(k);
    std::set<InterestVector> chosen;
    for (std::size_t i = 0; centroids.size() < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
        std::swap(order[i], order[j]);
        if (chosen.insert(*order[i]).second)
            centroids.push_back(Centroid::from(*order[i]));
    }

    Lloyd lloyd(pts, k, dims);
    Clustering out;
    out.k = k;

    auto assign = lloyd.nearest(centroids);
    lloyd.repair(assign, centroids);
    bool converged = false;
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        centroids = lloyd.means(assign);
        out.sse_history.push_back(lloyd.objective(assign, centroids));
        out.iterations_used = iter;
        auto next = lloyd.nearest(centroids);
        lloyd.repair(next, centroids);
        if (next == assign) {
            converged = true;
            break;
        }
        assign = std::move(next);
    }
    if (!converged) {
        // Keep centroids equal to the means of the returned assignment.
        centroids = lloyd.means(assign);
        out.sse_history.push_back(lloyd.objective(assign, centroids));
    }

    out.centroids = std::move(centroids);
    for (std::size_t i = 0; i < pts.size(); ++i)
        out.assignment.emplace(pts[i].id, assign[i]);
    return out;
}

std::vector<NodeId> resolve_group_exact(const ProfileSet& profiles, Category category)
{
    std::vector<NodeId> out;
    for (const auto& [id, v] : profiles) {
        if (category < 1 || category > v.size())
            throw ClusteringError(Kind::CategoryOutOfRange, "CategoryOutOfRange(" + std::to_string(category) + ")");
        if (v.has(category))
            out.push_back(id);
    }
    return out;
}

GroupResolution resolve_group_kmeans(const Clustering& clustering, const ProfileSet& profiles, Category category,
                                     double threshold)
{
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw ClusteringError(Kind::InvalidArgument, "threshold must lie in (0, 1]");
    const std::size_t dims = clustering.centroids.empty() ? 0 : clustering.centroids.front().size();
    if (category < 1 || category > dims)
        throw ClusteringError(Kind::CategoryOutOfRange, "CategoryOutOfRange(" + std::to_string(category) + ")");

    std::vector<bool> selected(clustering.centroids.size(), false);
    for (std::size_t j = 0; j < clustering.centroids.size(); ++j)
        selected[j] = clustering.centroids[j][category - 1] >= threshold;

    GroupResolution res;
    for (const auto& [id, c] : clustering.assignment)
        if (selected[c])
            res.members.push_back(id);
    if (res.members.empty()) {
        res.members = resolve_group_exact(profiles, category);
        res.fallback = true;
    }
    return res;
}

std::string format_clustering(const Clustering& clustering)
{
    std::string out;
    char buf[32];
    for (std::size_t j = 0; j < clustering.centroids.size(); ++j) {
        out += std::to_string(j) + ':';
        for (double x : clustering.centroids[j].components) {
            std::snprintf(buf, sizeof buf, " %.6f", x);
            out += buf;
        }
        out += " |";
        for (NodeId id : clustering.members(j))
            out += ' ' + std::to_string(id);
        out += '\n';
    }
    return out;
}

} // namespace dtnsim
