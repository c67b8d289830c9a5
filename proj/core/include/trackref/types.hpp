#pragma once

#include <span>
#include <string>
#include <vector>

#include "trackref/errors.hpp"

namespace trackref {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned box in pixel coordinates (left/top corner plus size).
struct BoundingBox {
    double left;
    double top;
    double width;
    double height;

    BoundingBox(double left, double top, double width, double height);

    Point2 center() const noexcept {
        return {left + width / 2.0, top + height / 2.0};
    }
};

/// One detection in a single frame.
struct BoxObservation {
    int frame;
    BoundingBox box;
    double confidence;

    BoxObservation(int frame, BoundingBox box, double confidence);
};

/// Appearance feature vector of one detection. Vectors that enter a
/// Tracklet are unit length; see normalize_embedding().
class Embedding {
public:
    explicit Embedding(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t dim() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    bool operator==(const Embedding&) const = default;

private:
    std::vector<double> values_;
};

/// Scales v to unit L2 norm. Vectors already unit within 1e-6 are returned
/// unchanged so that ingest -> write -> ingest round trips are bit-stable.
/// Throws ZeroVectorError when the norm is below 1e-12.
Embedding normalize_embedding(std::span<const double> v);

/// 1 - a.b for unit vectors. Symmetric, zero iff the vectors coincide.
double cosine_distance(const Embedding& a, const Embedding& b);

/// Time-ordered detections of one track id with aligned embeddings.
/// Immutable except for append() during assembly and the merged() constructor.
class Tracklet {
public:
    Tracklet(int id, std::vector<BoxObservation> observations,
             std::vector<Embedding> embeddings);

    /// Fuses two tracklets into one, interleaving observations by frame.
    /// The result takes the smaller of the two ids and the sum of the two
    /// cached feature sums. Throws MergeConflictError if both inputs have a
    /// box on the same frame.
    static Tracklet merged(const Tracklet& a, const Tracklet& b);

    /// Appends one detection; its frame must exceed last_frame().
    void append(BoxObservation obs, Embedding embedding);

    int id() const noexcept { return id_; }
    std::size_t length() const noexcept { return observations_.size(); }
    std::size_t dim() const noexcept { return embeddings_.front().dim(); }

    const std::vector<BoxObservation>& observations() const noexcept { return observations_; }
    const std::vector<Embedding>& embeddings() const noexcept { return embeddings_; }

    /// Element-wise sum of all embeddings, kept up to date incrementally.
    const std::vector<double>& feature_sum() const noexcept { return feature_sum_; }

    int first_frame() const noexcept { return observations_.front().frame; }
    int last_frame() const noexcept { return observations_.back().frame; }
    Point2 entry_point() const noexcept { return observations_.front().box.center(); }
    Point2 exit_point() const noexcept { return observations_.back().box.center(); }

private:
    struct merged_tag {};
    Tracklet(merged_tag, int id, std::vector<BoxObservation> observations,
             std::vector<Embedding> embeddings, std::vector<double> feature_sum);

    int id_;
    std::vector<BoxObservation> observations_;
    std::vector<Embedding> embeddings_;
    std::vector<double> feature_sum_;
};

/// True iff the frame intervals [first_frame, last_frame] intersect.
/// Interval intersection is deliberate: tracklets may skip frames, and two
/// tracklets interleaved in time must count as overlapping.
bool temporal_overlap(const Tracklet& a, const Tracklet& b) noexcept;

/// feature_sum / length. Not re-normalized; callers that need a unit vector
/// must normalize the result themselves.
Embedding mean_feature(const Tracklet& t);

/// All tracklets of one sequence plus the spatial extents of their box
/// centers. Tracklets are kept sorted by id; ids are unique.
class TrackSet {
public:
    TrackSet() = default;
    TrackSet(std::string sequence_name, std::vector<Tracklet> tracklets);

    const std::string& sequence_name() const noexcept { return sequence_name_; }
    const std::vector<Tracklet>& tracklets() const noexcept { return tracklets_; }

    bool empty() const noexcept { return tracklets_.empty(); }
    std::size_t size() const noexcept { return tracklets_.size(); }
    std::size_t total_observations() const noexcept;

    /// Embedding dimension shared by all tracklets; 0 when empty.
    std::size_t dim() const noexcept;

    /// Largest frame index present; 0 when empty.
    int frame_count() const noexcept { return frame_count_; }

    /// Largest id present; 0 when empty.
    int max_id() const noexcept;

    /// Spread of box centers along each axis (max center - min center).
    double extent_hor() const noexcept { return extent_hor_; }
    double extent_ver() const noexcept { return extent_ver_; }

private:
    std::string sequence_name_;
    std::vector<Tracklet> tracklets_;
    int frame_count_ = 0;
    double extent_hor_ = 0.0;
    double extent_ver_ = 0.0;
};

/// Refinement hyperparameters plus stage toggles. Ranges are enforced at
/// construction. Defaults: min_samples 5, eps 0.6, max_clusters 3,
/// merge_threshold 0.4, spatial_factor 1.0, both stages enabled.
class RefineConfig {
public:
    RefineConfig() : RefineConfig(5, 0.6, 3, 0.4, 1.0) {}

    RefineConfig(int min_samples, double eps, int max_clusters,
                 double merge_threshold, double spatial_factor,
                 bool enable_split = true, bool enable_spatial = true);

    int min_samples() const noexcept { return min_samples_; }
    double eps() const noexcept { return eps_; }
    int max_clusters() const noexcept { return max_clusters_; }
    double merge_threshold() const noexcept { return merge_threshold_; }
    double spatial_factor() const noexcept { return spatial_factor_; }
    bool split_enabled() const noexcept { return enable_split_; }
    bool spatial_enabled() const noexcept { return enable_spatial_; }

    RefineConfig with_split(bool enabled) const;
    RefineConfig with_spatial(bool enabled) const;

private:
    int min_samples_;
    double eps_;
    int max_clusters_;
    double merge_threshold_;
    double spatial_factor_;
    bool enable_split_;
    bool enable_spatial_;
};

}  // namespace trackref
