#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sever/linalg.hpp"

namespace sever {

/// One (x, y) pair. For classification y is -1 or +1.
struct LabeledSample {
    std::span<const double> x;
    double y = 0.0;
};

/// Training or test set: features, responses and the active-sample mask that
/// defenses shrink as they remove points. Carries no ground-truth outlier
/// information; that lives in Provenance, which defenses never receive.
class Dataset {
public:
    Dataset() = default;
    Dataset(Matrix x, Vec y);

    std::size_t size() const noexcept { return y_.size(); }
    std::size_t dim() const noexcept { return x_.cols(); }

    const Matrix& features() const noexcept { return x_; }
    const Vec& responses() const noexcept { return y_; }

    LabeledSample sample(std::size_t i) const { return {x_.row(i), y_[i]}; }

    bool is_active(std::size_t i) const { return active_[i] != 0; }
    void deactivate(std::size_t i);
    void activate_all();
    std::size_t active_count() const noexcept { return active_count_; }
    /// Ids of active samples in increasing order.
    std::vector<std::size_t> active_indices() const;
    const std::vector<std::uint8_t>& active_mask() const noexcept { return active_; }

    /// Copy holding only the active samples, all active.
    Dataset active_subset() const;
    /// Copy holding only the listed samples, all active.
    Dataset subset(std::span<const std::size_t> ids) const;

    void append(std::span<const double> x, double y);

    /// True when every response is -1 or +1.
    bool is_binary() const;

    struct ClassCounts {
        std::size_t positive = 0;
        std::size_t negative = 0;
    };
    /// Counts over active samples; y > 0 is positive.
    ClassCounts class_counts() const;

    bool operator==(const Dataset&) const = default;

private:
    Matrix x_;
    Vec y_;
    std::vector<std::uint8_t> active_;
    std::size_t active_count_ = 0;
};

/// Ground-truth outlier flags, index-aligned with a Dataset. Used only for
/// evaluation and score dumps.
struct Provenance {
    std::vector<std::uint8_t> is_outlier;

    std::size_t outlier_count() const;
};

}  // namespace sever
