#pragma once

#include <span>
#include <vector>

#include "trackref/types.hpp"

namespace trackref {

/// Per-point cluster labels. -1 marks noise until outliers are reassigned;
/// cluster indices are contiguous starting at 0.
struct ClusterLabeling {
    std::vector<int> labels;
    int num_clusters = 0;
};

/// Density clustering under cosine distance. A point is a core point iff at
/// least min_samples points (itself included) lie within eps; clusters are
/// the maximal density-connected sets. Clusters are numbered in the order
/// they are discovered by an ascending-index scan, and a border point joins
/// the first cluster that reaches it in that scan, so the full labeling is
/// reproducible. Unreached points are labeled -1.
ClusterLabeling dbscan(std::span<const Embedding> points, double eps, int min_samples);

/// Relabels every noise point to the cluster whose re-normalized centroid is
/// nearest in cosine distance (ties to the lowest cluster index). A labeling
/// without clusters is returned unchanged.
ClusterLabeling assign_outliers(ClusterLabeling labeling, std::span<const Embedding> points);

/// Merges the closest cluster pair (by centroid cosine distance, centroids
/// recomputed after each merge) until at most max_clusters remain. Labels
/// are then re-indexed contiguously, ordered by each cluster's smallest
/// point index. Requires a labeling without noise.
ClusterLabeling cap_clusters(ClusterLabeling labeling, std::span<const Embedding> points,
                             int max_clusters);

/// Hands out fresh tracklet ids, ascending from a fixed start.
class IdAllocator {
public:
    explicit IdAllocator(int first) : next_(first) {}
    int next() { return next_++; }

private:
    int next_;
};

/// Clusters the tracklet's embeddings and emits one fragment per cluster,
/// each carrying its (observation, embedding) pairs in frame order. The
/// largest fragment keeps the input id (ties to the earliest first frame);
/// the others draw fresh ids. Tracklets shorter than min_samples or with a
/// single cluster are returned unchanged.
std::vector<Tracklet> split_tracklet(const Tracklet& t, const RefineConfig& cfg,
                                     IdAllocator& ids);

/// Applies split_tracklet to every tracklet. Fresh ids start above the
/// largest input id, assigned in ascending (input id, fragment) order.
TrackSet split_all(const TrackSet& ts, const RefineConfig& cfg);

}  // namespace trackref
