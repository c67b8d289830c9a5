#include "trackref/connector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace trackref {

namespace {

void check_spatial_factor(double spatial_factor) {
    if (!(spatial_factor > 0.0 && spatial_factor <= 1.0)) {
        throw ConfigError("spatial_factor must lie in (0, 1], got " +
                          std::to_string(spatial_factor));
    }
}

// Exit-to-entry center distance of a non-overlapping pair, checked per axis.
// Valid for any time-ordered pair, not just adjacent ones, so fragments with
// another fragment in between can still associate.
bool gate_blocks(const Tracklet& a, const Tracklet& b, const SpatialGate& gate) {
    const Tracklet& earlier = a.last_frame() < b.first_frame() ? a : b;
    const Tracklet& later = a.last_frame() < b.first_frame() ? b : a;
    const Point2 exit = earlier.exit_point();
    const Point2 entry = later.entry_point();
    return std::abs(exit.x - entry.x) > gate.theta_hor ||
           std::abs(exit.y - entry.y) > gate.theta_ver;
}

double gated_distance(const Tracklet& a, const Tracklet& b, const SpatialGate* gate) {
    if (gate != nullptr && !temporal_overlap(a, b) && gate_blocks(a, b, *gate)) {
        return 1.0;
    }
    return tracklet_distance(a, b);
}

}  // namespace

SpatialGate SpatialGate::from(const TrackSet& ts, double spatial_factor) {
    check_spatial_factor(spatial_factor);
    return {spatial_factor * ts.extent_hor(), spatial_factor * ts.extent_ver()};
}

double tracklet_distance(const Tracklet& a, const Tracklet& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatchError("tracklet_distance: dimensions " +
                                     std::to_string(a.dim()) + " vs " +
                                     std::to_string(b.dim()));
    }
    if (temporal_overlap(a, b)) return 1.0;

    double dot = 0.0;
    const std::vector<double>& sa = a.feature_sum();
    const std::vector<double>& sb = b.feature_sum();
    for (std::size_t k = 0; k < sa.size(); ++k) dot += sa[k] * sb[k];

    const double d =
        1.0 - dot / (static_cast<double>(a.length()) * static_cast<double>(b.length()));
    if (d > 1.0) return 1.0;
    if (d < 0.0) {
        if (d < -1e-9) {
            throw Error("tracklet_distance fell below 0 (" + std::to_string(d) +
                        "); embeddings are not unit length");
        }
        return 0.0;
    }
    return d;
}

DistanceMatrix build_matrix(const TrackSet& ts) {
    if (ts.empty()) {
        throw Error("build_matrix requires at least one tracklet");
    }
    const auto& tracklets = ts.tracklets();
    DistanceMatrix m(tracklets.size());
    for (std::size_t i = 0; i + 1 < tracklets.size(); ++i) {
        for (std::size_t j = i + 1; j < tracklets.size(); ++j) {
            m.set(i, j, tracklet_distance(tracklets[i], tracklets[j]));
        }
    }
    return m;
}

DistanceMatrix apply_spatial_gate(DistanceMatrix matrix, const TrackSet& ts,
                                  double spatial_factor) {
    const SpatialGate gate = SpatialGate::from(ts, spatial_factor);
    const auto& tracklets = ts.tracklets();
    for (std::size_t i = 0; i + 1 < tracklets.size(); ++i) {
        for (std::size_t j = i + 1; j < tracklets.size(); ++j) {
            if (!temporal_overlap(tracklets[i], tracklets[j]) &&
                gate_blocks(tracklets[i], tracklets[j], gate)) {
                matrix.set(i, j, 1.0);
            }
        }
    }
    return matrix;
}

TrackSet hierarchical_merge(const TrackSet& ts, const RefineConfig& cfg) {
    if (ts.size() <= 1) return ts;

    std::optional<SpatialGate> gate;
    if (cfg.spatial_enabled()) {
        gate = SpatialGate::from(ts, cfg.spatial_factor());
    }
    const SpatialGate* gate_ptr = gate ? &*gate : nullptr;

    std::vector<Tracklet> work = ts.tracklets();  // ascending id
    DistanceMatrix m(work.size());
    for (std::size_t i = 0; i + 1 < work.size(); ++i) {
        for (std::size_t j = i + 1; j < work.size(); ++j) {
            m.set(i, j, gated_distance(work[i], work[j], gate_ptr));
        }
    }

    // An entry of exactly 1 is a forbidden pair, never a merge candidate.
    const double stop = std::min(cfg.merge_threshold(), 1.0);

    while (work.size() >= 2) {
        std::size_t best_i = 0, best_j = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < work.size(); ++i) {
            for (std::size_t j = i + 1; j < work.size(); ++j) {
                if (m.at(i, j) < best) {
                    best = m.at(i, j);
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best >= stop) break;

        work[best_i] = Tracklet::merged(work[best_i], work[best_j]);
        work.erase(work.begin() + static_cast<std::ptrdiff_t>(best_j));

        DistanceMatrix next(work.size());
        for (std::size_t i = 0; i + 1 < work.size(); ++i) {
            const std::size_t oi = i < best_j ? i : i + 1;
            for (std::size_t j = i + 1; j < work.size(); ++j) {
                const std::size_t oj = j < best_j ? j : j + 1;
                if (i == best_i || j == best_i) {
                    next.set(i, j, gated_distance(work[i], work[j], gate_ptr));
                } else {
                    next.set(i, j, m.at(oi, oj));
                }
            }
        }
        m = std::move(next);
    }

    return TrackSet(ts.sequence_name(), std::move(work));
}

TrackSet connect(const TrackSet& ts, const RefineConfig& cfg) {
    if (ts.size() <= 1) return ts;
    return hierarchical_merge(ts, cfg);
}

}  // namespace trackref
