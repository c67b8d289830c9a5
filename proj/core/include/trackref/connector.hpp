#pragma once

#include <cstddef>
#include <vector>

#include "trackref/types.hpp"

namespace trackref {

/// Symmetric pairwise tracklet distances in [0, 1]. An entry of 1 marks a
/// forbidden association (temporal overlap or failed spatial gate); the
/// diagonal is zero by convention and never read.
class DistanceMatrix {
public:
    explicit DistanceMatrix(std::size_t n) : n_(n), cells_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double at(std::size_t i, std::size_t j) const noexcept { return cells_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, double v) noexcept {
        cells_[i * n_ + j] = v;
        cells_[j * n_ + i] = v;
    }

    bool operator==(const DistanceMatrix&) const = default;

private:
    std::size_t n_;
    std::vector<double> cells_;
};

/// Per-axis association thresholds: the spatial factor times the extent of
/// box centers along that axis.
struct SpatialGate {
    double theta_hor = 0.0;
    double theta_ver = 0.0;

    static SpatialGate from(const TrackSet& ts, double spatial_factor);
};

/// Distance between two distinct tracklets. Temporally overlapping pairs are
/// forbidden (distance 1); otherwise the mean pairwise cosine distance of
/// their embeddings, computed exactly from the cached feature sums as
/// 1 - (sum_a . sum_b) / (N_a * N_b). Anti-aligned features (raw value above
/// 1) clamp to 1 so the matrix convention stays uniform.
double tracklet_distance(const Tracklet& a, const Tracklet& b);

/// Pairwise tracklet_distance over the whole set (upper triangle mirrored).
DistanceMatrix build_matrix(const TrackSet& ts);

/// Forbids every non-overlapping pair whose exit-to-entry center distance
/// exceeds the gate threshold on either axis. With spatial_factor 1 this
/// changes nothing, because no center pair can be farther apart than the
/// extent of all centers.
DistanceMatrix apply_spatial_gate(DistanceMatrix matrix, const TrackSet& ts,
                                  double spatial_factor);

/// Repeatedly merges the closest admissible tracklet pair until the smallest
/// pairwise distance reaches the merge threshold (entries at 1 are never
/// merged). Distances to a merged tracklet are recomputed exactly from its
/// feature sum, and the spatial gate is re-evaluated for its new endpoints.
/// Ties break on the lexicographically smallest id pair; the merged tracklet
/// keeps the smaller id.
TrackSet hierarchical_merge(const TrackSet& ts, const RefineConfig& cfg);

/// The full connector stage: distance matrix, optional spatial gating, then
/// hierarchical merging. Output ids are a subset of input ids.
TrackSet connect(const TrackSet& ts, const RefineConfig& cfg);

}  // namespace trackref
