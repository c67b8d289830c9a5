#include "trackref/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <utility>

namespace trackref {

namespace {

double pair_distance(const Embedding& a, const Embedding& b) {
    double dot = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) dot += a[k] * b[k];
    return 1.0 - dot;
}

// Mean of the members' unit embeddings, re-normalized. A zero mean (possible
// for anti-aligned members) is returned as-is and compares at distance 1 to
// every point.
std::vector<double> cluster_centroid(std::span<const Embedding> points,
                                     std::span<const std::size_t> members) {
    std::vector<double> c(points[members.front()].dim(), 0.0);
    for (std::size_t m : members) {
        const Embedding& e = points[m];
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += e[k];
    }
    double sq = 0.0;
    for (double x : c) sq += x * x;
    const double norm = std::sqrt(sq);
    if (norm >= 1e-12) {
        for (double& x : c) x /= norm;
    }
    return c;
}

double distance_to_centroid(const Embedding& p, const std::vector<double>& centroid) {
    double dot = 0.0;
    for (std::size_t k = 0; k < centroid.size(); ++k) dot += p[k] * centroid[k];
    return 1.0 - dot;
}

}  // namespace

ClusterLabeling dbscan(std::span<const Embedding> points, double eps, int min_samples) {
    if (!(eps >= 0.0 && eps <= 2.0)) {
        throw ConfigError("eps must lie in [0, 2]");
    }
    if (min_samples < 1) {
        throw ConfigError("min_samples must be >= 1");
    }

    const std::size_t n = points.size();
    ClusterLabeling out;
    out.labels.assign(n, -1);
    if (n == 0) return out;

    std::vector<bool> core(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        int neighbors = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (pair_distance(points[i], points[j]) <= eps) ++neighbors;
        }
        core[i] = neighbors >= min_samples;
    }

    int cluster = 0;
    std::deque<std::size_t> queue;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!core[seed] || out.labels[seed] != -1) continue;
        out.labels[seed] = cluster;
        queue.assign(1, seed);
        while (!queue.empty()) {
            const std::size_t c = queue.front();
            queue.pop_front();
            for (std::size_t j = 0; j < n; ++j) {
                if (out.labels[j] == -1 && pair_distance(points[c], points[j]) <= eps) {
                    out.labels[j] = cluster;
                    if (core[j]) queue.push_back(j);
                }
            }
        }
        ++cluster;
    }
    out.num_clusters = cluster;
    return out;
}

ClusterLabeling assign_outliers(ClusterLabeling labeling, std::span<const Embedding> points) {
    if (labeling.num_clusters == 0) return labeling;

    std::vector<std::vector<std::size_t>> members(labeling.num_clusters);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labeling.labels[i] >= 0) members[labeling.labels[i]].push_back(i);
    }
    std::vector<std::vector<double>> centroids;
    centroids.reserve(members.size());
    for (const auto& m : members) centroids.push_back(cluster_centroid(points, m));

    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labeling.labels[i] != -1) continue;
        int best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int c = 0; c < labeling.num_clusters; ++c) {
            const double d = distance_to_centroid(points[i], centroids[c]);
            if (d < best_dist) {
                best_dist = d;
                best = c;
            }
        }
        labeling.labels[i] = best;
    }
    return labeling;
}

ClusterLabeling cap_clusters(ClusterLabeling labeling, std::span<const Embedding> points,
                             int max_clusters) {
    if (max_clusters < 1) {
        throw ConfigError("max_clusters must be >= 1");
    }
    for (int label : labeling.labels) {
        if (label < 0) throw Error("cap_clusters requires a labeling without noise");
    }
    if (labeling.num_clusters <= max_clusters) return labeling;

    std::vector<std::vector<std::size_t>> clusters(labeling.num_clusters);
    for (std::size_t i = 0; i < points.size(); ++i) {
        clusters[labeling.labels[i]].push_back(i);
    }

    while (static_cast<int>(clusters.size()) > max_clusters) {
        std::vector<std::vector<double>> centroids;
        centroids.reserve(clusters.size());
        for (const auto& m : clusters) centroids.push_back(cluster_centroid(points, m));

        std::size_t best_i = 0, best_j = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double dot = 0.0;
                for (std::size_t k = 0; k < centroids[i].size(); ++k) {
                    dot += centroids[i][k] * centroids[j][k];
                }
                const double d = 1.0 - dot;
                if (d < best) {
                    best = d;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        auto& into = clusters[best_i];
        into.insert(into.end(), clusters[best_j].begin(), clusters[best_j].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_j));
    }

    // Re-index by each cluster's smallest point index.
    std::vector<std::size_t> order(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        order[c] = *std::min_element(clusters[c].begin(), clusters[c].end());
    }
    std::vector<std::size_t> rank(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) rank[c] = c;
    std::sort(rank.begin(), rank.end(),
              [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });

    ClusterLabeling out;
    out.labels.assign(points.size(), -1);
    out.num_clusters = static_cast<int>(clusters.size());
    for (std::size_t r = 0; r < rank.size(); ++r) {
        for (std::size_t i : clusters[rank[r]]) out.labels[i] = static_cast<int>(r);
    }
    return out;
}

std::vector<Tracklet> split_tracklet(const Tracklet& t, const RefineConfig& cfg,
                                     IdAllocator& ids) {
    // Below min_samples no core point can form; every point would be noise.
    if (t.length() < static_cast<std::size_t>(cfg.min_samples())) return {t};

    ClusterLabeling labeling = dbscan(t.embeddings(), cfg.eps(), cfg.min_samples());
    if (labeling.num_clusters == 0) return {t};
    labeling = assign_outliers(std::move(labeling), t.embeddings());
    labeling = cap_clusters(std::move(labeling), t.embeddings(), cfg.max_clusters());
    if (labeling.num_clusters <= 1) return {t};

    std::vector<std::vector<std::size_t>> members(labeling.num_clusters);
    for (std::size_t i = 0; i < t.length(); ++i) {
        members[labeling.labels[i]].push_back(i);
    }

    // Largest fragment keeps the id; ties go to the earliest first frame,
    // i.e. the smallest leading point index.
    std::size_t keeper = 0;
    for (std::size_t c = 1; c < members.size(); ++c) {
        if (members[c].size() > members[keeper].size() ||
            (members[c].size() == members[keeper].size() &&
             members[c].front() < members[keeper].front())) {
            keeper = c;
        }
    }

    std::vector<Tracklet> fragments;
    fragments.reserve(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        std::vector<BoxObservation> obs;
        std::vector<Embedding> emb;
        obs.reserve(members[c].size());
        emb.reserve(members[c].size());
        for (std::size_t i : members[c]) {
            obs.push_back(t.observations()[i]);
            emb.push_back(t.embeddings()[i]);
        }
        const int id = c == keeper ? t.id() : ids.next();
        fragments.emplace_back(id, std::move(obs), std::move(emb));
    }
    return fragments;
}

TrackSet split_all(const TrackSet& ts, const RefineConfig& cfg) {
    IdAllocator ids(ts.max_id() + 1);
    std::vector<Tracklet> out;
    out.reserve(ts.size());
    for (const Tracklet& t : ts.tracklets()) {
        for (Tracklet& fragment : split_tracklet(t, cfg, ids)) {
            out.push_back(std::move(fragment));
        }
    }
    return TrackSet(ts.sequence_name(), std::move(out));
}

}  // namespace trackref
