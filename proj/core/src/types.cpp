#include "trackref/types.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace trackref {

namespace {

constexpr double kZeroNormThreshold = 1e-12;
constexpr double kUnitNormTolerance = 1e-6;

double squared_norm(std::span<const double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return sq;
}

void check_unit_norm(const Embedding& e) {
    const double norm = std::sqrt(squared_norm(e.values()));
    if (std::abs(norm - 1.0) > kUnitNormTolerance) {
        throw Error("tracklet embedding is not unit length (norm " +
                    std::to_string(norm) + ")");
    }
}

}  // namespace

BoundingBox::BoundingBox(double left, double top, double width, double height)
    : left(left), top(top), width(width), height(height) {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw NonPositiveSizeError("bounding box size must be positive, got " +
                                   std::to_string(width) + "x" + std::to_string(height));
    }
}

BoxObservation::BoxObservation(int frame, BoundingBox box, double confidence)
    : frame(frame), box(box), confidence(confidence) {
    if (frame < 0) {
        throw Error("observation frame must be >= 0, got " + std::to_string(frame));
    }
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
        throw Error("confidence must lie in [0, 1], got " + std::to_string(confidence));
    }
}

Embedding normalize_embedding(std::span<const double> v) {
    const double norm = std::sqrt(squared_norm(v));
    if (norm < kZeroNormThreshold) {
        throw ZeroVectorError("cannot normalize a zero vector");
    }
    if (std::abs(norm - 1.0) <= kUnitNormTolerance) {
        return Embedding(std::vector<double>(v.begin(), v.end()));
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (double x : v) out.push_back(x / norm);
    return Embedding(std::move(out));
}

double cosine_distance(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatchError("cosine_distance: dimensions " +
                                     std::to_string(a.dim()) + " vs " +
                                     std::to_string(b.dim()));
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) dot += a[i] * b[i];
    return 1.0 - dot;
}

Tracklet::Tracklet(int id, std::vector<BoxObservation> observations,
                   std::vector<Embedding> embeddings)
    : id_(id),
      observations_(std::move(observations)),
      embeddings_(std::move(embeddings)) {
    if (id_ <= 0) {
        throw Error("tracklet id must be positive, got " + std::to_string(id_));
    }
    if (observations_.empty()) {
        throw Error("tracklet must contain at least one observation");
    }
    if (observations_.size() != embeddings_.size()) {
        throw Error("tracklet has " + std::to_string(observations_.size()) +
                    " observations but " + std::to_string(embeddings_.size()) +
                    " embeddings");
    }
    const std::size_t d = embeddings_.front().dim();
    for (std::size_t i = 1; i < observations_.size(); ++i) {
        if (observations_[i].frame <= observations_[i - 1].frame) {
            throw Error("tracklet frames must be strictly increasing (id " +
                        std::to_string(id_) + ", frame " +
                        std::to_string(observations_[i].frame) + ")");
        }
    }
    feature_sum_.assign(d, 0.0);
    for (const Embedding& e : embeddings_) {
        if (e.dim() != d) {
            throw DimensionMismatchError("tracklet embeddings disagree in dimension");
        }
        check_unit_norm(e);
        for (std::size_t k = 0; k < d; ++k) feature_sum_[k] += e[k];
    }
}

Tracklet::Tracklet(merged_tag, int id, std::vector<BoxObservation> observations,
                   std::vector<Embedding> embeddings, std::vector<double> feature_sum)
    : id_(id),
      observations_(std::move(observations)),
      embeddings_(std::move(embeddings)),
      feature_sum_(std::move(feature_sum)) {}

Tracklet Tracklet::merged(const Tracklet& a, const Tracklet& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatchError("cannot merge tracklets of dimension " +
                                     std::to_string(a.dim()) + " and " +
                                     std::to_string(b.dim()));
    }
    std::vector<BoxObservation> obs;
    std::vector<Embedding> emb;
    obs.reserve(a.length() + b.length());
    emb.reserve(a.length() + b.length());

    std::size_t i = 0, j = 0;
    while (i < a.length() || j < b.length()) {
        if (i < a.length() && j < b.length() &&
            a.observations_[i].frame == b.observations_[j].frame) {
            throw MergeConflictError("tracklets " + std::to_string(a.id_) + " and " +
                                     std::to_string(b.id_) + " both cover frame " +
                                     std::to_string(a.observations_[i].frame));
        }
        const bool take_a =
            j == b.length() ||
            (i < a.length() && a.observations_[i].frame < b.observations_[j].frame);
        if (take_a) {
            obs.push_back(a.observations_[i]);
            emb.push_back(a.embeddings_[i]);
            ++i;
        } else {
            obs.push_back(b.observations_[j]);
            emb.push_back(b.embeddings_[j]);
            ++j;
        }
    }

    std::vector<double> sum = a.feature_sum_;
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += b.feature_sum_[k];

    return Tracklet(merged_tag{}, std::min(a.id_, b.id_), std::move(obs),
                    std::move(emb), std::move(sum));
}

void Tracklet::append(BoxObservation obs, Embedding embedding) {
    if (embedding.dim() != dim()) {
        throw DimensionMismatchError("appended embedding dimension mismatch");
    }
    if (obs.frame <= last_frame()) {
        throw Error("appended frame " + std::to_string(obs.frame) +
                    " does not extend tracklet ending at frame " +
                    std::to_string(last_frame()));
    }
    check_unit_norm(embedding);
    for (std::size_t k = 0; k < feature_sum_.size(); ++k) feature_sum_[k] += embedding[k];
    observations_.push_back(obs);
    embeddings_.push_back(std::move(embedding));
}

bool temporal_overlap(const Tracklet& a, const Tracklet& b) noexcept {
    return a.first_frame() <= b.last_frame() && b.first_frame() <= a.last_frame();
}

Embedding mean_feature(const Tracklet& t) {
    std::vector<double> mean = t.feature_sum();
    const double n = static_cast<double>(t.length());
    for (double& x : mean) x /= n;
    return Embedding(std::move(mean));
}

TrackSet::TrackSet(std::string sequence_name, std::vector<Tracklet> tracklets)
    : sequence_name_(std::move(sequence_name)), tracklets_(std::move(tracklets)) {
    std::sort(tracklets_.begin(), tracklets_.end(),
              [](const Tracklet& a, const Tracklet& b) { return a.id() < b.id(); });
    for (std::size_t i = 1; i < tracklets_.size(); ++i) {
        if (tracklets_[i].id() == tracklets_[i - 1].id()) {
            throw Error("duplicate tracklet id " + std::to_string(tracklets_[i].id()));
        }
        if (tracklets_[i].dim() != tracklets_.front().dim()) {
            throw DimensionMismatchError("tracklets disagree in embedding dimension");
        }
    }

    bool any = false;
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    for (const Tracklet& t : tracklets_) {
        frame_count_ = std::max(frame_count_, t.last_frame());
        for (const BoxObservation& o : t.observations()) {
            const Point2 c = o.box.center();
            if (!any) {
                min_x = max_x = c.x;
                min_y = max_y = c.y;
                any = true;
            } else {
                min_x = std::min(min_x, c.x);
                max_x = std::max(max_x, c.x);
                min_y = std::min(min_y, c.y);
                max_y = std::max(max_y, c.y);
            }
        }
    }
    if (any) {
        extent_hor_ = max_x - min_x;
        extent_ver_ = max_y - min_y;
    }
}

std::size_t TrackSet::total_observations() const noexcept {
    std::size_t n = 0;
    for (const Tracklet& t : tracklets_) n += t.length();
    return n;
}

std::size_t TrackSet::dim() const noexcept {
    return tracklets_.empty() ? 0 : tracklets_.front().dim();
}

int TrackSet::max_id() const noexcept {
    return tracklets_.empty() ? 0 : tracklets_.back().id();
}

RefineConfig::RefineConfig(int min_samples, double eps, int max_clusters,
                           double merge_threshold, double spatial_factor,
                           bool enable_split, bool enable_spatial)
    : min_samples_(min_samples),
      eps_(eps),
      max_clusters_(max_clusters),
      merge_threshold_(merge_threshold),
      spatial_factor_(spatial_factor),
      enable_split_(enable_split),
      enable_spatial_(enable_spatial) {
    if (min_samples_ < 1) {
        throw ConfigError("min_samples must be >= 1, got " + std::to_string(min_samples_));
    }
    if (!(eps_ >= 0.0 && eps_ <= 2.0)) {
        throw ConfigError("eps must lie in [0, 2], got " + std::to_string(eps_));
    }
    if (max_clusters_ < 1) {
        throw ConfigError("max_clusters must be >= 1, got " + std::to_string(max_clusters_));
    }
    if (!(merge_threshold_ >= 0.0 && merge_threshold_ <= 2.0)) {
        throw ConfigError("merge_threshold must lie in [0, 2], got " +
                          std::to_string(merge_threshold_));
    }
    if (!(spatial_factor_ > 0.0 && spatial_factor_ <= 1.0)) {
        throw ConfigError("spatial_factor must lie in (0, 1], got " +
                          std::to_string(spatial_factor_));
    }
}

RefineConfig RefineConfig::with_split(bool enabled) const {
    RefineConfig c = *this;
    c.enable_split_ = enabled;
    return c;
}

RefineConfig RefineConfig::with_spatial(bool enabled) const {
    RefineConfig c = *this;
    c.enable_spatial_ = enabled;
    return c;
}

}  // namespace trackref
