#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sever/dataset.hpp"

namespace sever {

enum class AttackKind { ridge_alpha_beta, label_flip_cluster };

std::string_view to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view name);

struct AttackSpec {
    /// Outliers added, as a fraction of the clean sample count.
    double eps = 0.1;
    AttackKind kind = AttackKind::ridge_alpha_beta;
    double alpha = 1.0;
    double beta = 1.0;
    /// Per-outlier Gaussian perturbation scale; unset means 0.01 times the
    /// median per-feature standard deviation of the clean data.
    std::optional<double> noise_scale;
    /// label_flip_cluster: where to plant the outliers. Unset means the mean
    /// of the smaller class.
    std::optional<Vec> cluster_center;
    /// label_flip_cluster: label of the planted points. Unset means the
    /// opposite of the smaller class's label.
    std::optional<double> injected_label;
    std::uint64_t seed = 0;
};

/// Clean samples followed by the appended outliers. Provenance marks the
/// outliers and must not be passed to any defense.
struct CorruptedDataset {
    Dataset data;
    Provenance provenance;
};

/// Number of outliers the attack appends to n clean samples.
std::size_t outlier_count(double eps, std::size_t n);

/// Appends round(eps n) copies of (X^T y / (alpha n_bad) + noise, -beta).
/// With alpha == beta and no noise, w = 0 is the least-squares minimizer on
/// the corrupted set.
CorruptedDataset attack_ridge(const Dataset& clean, const AttackSpec& spec);

/// Appends round(eps n) perturbed copies of a cluster center carrying a
/// flipped label.
CorruptedDataset attack_label_flip(const Dataset& clean, const AttackSpec& spec);

CorruptedDataset apply_attack(const Dataset& clean, const AttackSpec& spec);

}  // namespace sever
