#include "sever/dataset.hpp"

#include <algorithm>
#include <string>

namespace sever {

Dataset::Dataset(Matrix x, Vec y)
    : x_(std::move(x)), y_(std::move(y)), active_(y_.size(), 1), active_count_(y_.size()) {
    if (x_.rows() != y_.size()) {
        throw Error("dataset: " + std::to_string(x_.rows()) + " feature rows but " +
                    std::to_string(y_.size()) + " responses");
    }
}

void Dataset::deactivate(std::size_t i) {
    if (i >= active_.size()) {
        throw Error("dataset: sample id out of range");
    }
    if (active_[i] != 0) {
        active_[i] = 0;
        --active_count_;
    }
}

void Dataset::activate_all() {
    std::fill(active_.begin(), active_.end(), 1);
    active_count_ = active_.size();
}

std::vector<std::size_t> Dataset::active_indices() const {
    std::vector<std::size_t> ids;
    ids.reserve(active_count_);
    for (std::size_t i = 0; i < active_.size(); ++i) {
        if (active_[i] != 0) {
            ids.push_back(i);
        }
    }
    return ids;
}

Dataset Dataset::active_subset() const {
    const auto ids = active_indices();
    return subset(ids);
}

Dataset Dataset::subset(std::span<const std::size_t> ids) const {
    Matrix x(0, dim());
    Vec y;
    y.reserve(ids.size());
    for (auto i : ids) {
        x.append_row(x_.row(i));
        y.push_back(y_[i]);
    }
    return {std::move(x), std::move(y)};
}

void Dataset::append(std::span<const double> x, double y) {
    x_.append_row(x);
    y_.push_back(y);
    active_.push_back(1);
    ++active_count_;
}

bool Dataset::is_binary() const {
    return std::all_of(y_.begin(), y_.end(), [](double v) { return v == 1.0 || v == -1.0; });
}

Dataset::ClassCounts Dataset::class_counts() const {
    ClassCounts c;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        if (active_[i] == 0) {
            continue;
        }
        if (y_[i] > 0.0) {
            ++c.positive;
        } else {
            ++c.negative;
        }
    }
    return c;
}

std::size_t Provenance::outlier_count() const {
    return static_cast<std::size_t>(std::count(is_outlier.begin(), is_outlier.end(), 1));
}

}  // namespace sever
