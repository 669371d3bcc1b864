#include "sever/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace sever {

std::string_view to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::ridge_alpha_beta:
            return "ridge-alpha-beta";
        case AttackKind::label_flip_cluster:
            return "label-flip";
    }
    return "unknown";
}

AttackKind parse_attack_kind(std::string_view name) {
    if (name == "ridge-alpha-beta" || name == "ridge_alpha_beta") return AttackKind::ridge_alpha_beta;
    if (name == "label-flip" || name == "label_flip_cluster") return AttackKind::label_flip_cluster;
    throw Error("unknown attack '" + std::string(name) + "'");
}

std::size_t outlier_count(double eps, std::size_t n) {
    return static_cast<std::size_t>(std::llround(eps * static_cast<double>(n)));
}

namespace {

double median_feature_sd(const Dataset& data) {
    const std::size_t n = data.size();
    const std::size_t d = data.dim();
    if (n < 2 || d == 0) {
        return 1.0;
    }
    const Vec mu = mean_rows(data.features());
    Vec sd(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = data.sample(i).x;
        for (std::size_t k = 0; k < d; ++k) {
            sd[k] += (x[k] - mu[k]) * (x[k] - mu[k]);
        }
    }
    for (auto& s : sd) {
        s = std::sqrt(s / static_cast<double>(n - 1));
    }
    std::nth_element(sd.begin(), sd.begin() + static_cast<std::ptrdiff_t>(d / 2), sd.end());
    return sd[d / 2];
}

CorruptedDataset start(const Dataset& clean, const AttackSpec& spec, std::size_t& n_bad) {
    if (clean.size() == 0) {
        throw Error("attack: clean data is empty");
    }
    if (!(spec.eps > 0.0 && spec.eps <= 0.3)) {
        throw Error("attack: eps must lie in (0, 0.3]");
    }
    n_bad = outlier_count(spec.eps, clean.size());
    if (n_bad == 0) {
        throw Error("attack budget empty");
    }
    CorruptedDataset out{clean, {}};
    out.data.activate_all();
    out.provenance.is_outlier.assign(clean.size(), 0);
    return out;
}

void plant(CorruptedDataset& out, const Vec& center, double label, double noise_scale,
           std::size_t n_bad, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Vec x(center.size());
    for (std::size_t b = 0; b < n_bad; ++b) {
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] = center[k] + (noise_scale > 0.0 ? noise_scale * normal(rng) : 0.0);
        }
        out.data.append(x, label);
        out.provenance.is_outlier.push_back(1);
    }
}

}  // namespace

CorruptedDataset attack_ridge(const Dataset& clean, const AttackSpec& spec) {
    if (spec.kind != AttackKind::ridge_alpha_beta) {
        throw Error("attack_ridge: wrong attack kind");
    }
    if (!(spec.alpha > 0.0)) {
        throw Error("attack_ridge: alpha must be positive");
    }
    std::size_t n_bad = 0;
    CorruptedDataset out = start(clean, spec, n_bad);
    // X_bad = y^T X / (alpha n_bad)
    Vec center = multiply_transposed(clean.features(), clean.responses());
    for (auto& c : center) {
        c /= spec.alpha * static_cast<double>(n_bad);
    }
    const double noise = spec.noise_scale.value_or(0.01 * median_feature_sd(clean));
    if (noise < 0.0) {
        throw Error("attack: noise_scale must be nonnegative");
    }
    plant(out, center, -spec.beta, noise, n_bad, spec.seed);
    return out;
}

CorruptedDataset attack_label_flip(const Dataset& clean, const AttackSpec& spec) {
    if (spec.kind != AttackKind::label_flip_cluster) {
        throw Error("attack_label_flip: wrong attack kind");
    }
    if (!clean.is_binary()) {
        throw Error("attack_label_flip: labels must be -1 or +1");
    }
    std::size_t n_bad = 0;
    CorruptedDataset out = start(clean, spec, n_bad);

    const auto counts = out.data.class_counts();
    const double minority = counts.negative < counts.positive ? -1.0 : 1.0;
    Vec center;
    if (spec.cluster_center) {
        center = *spec.cluster_center;
        if (center.size() != clean.dim()) {
            throw Error("attack_label_flip: cluster_center dimension mismatch");
        }
    } else {
        center.assign(clean.dim(), 0.0);
        std::size_t m = 0;
        for (std::size_t i = 0; i < clean.size(); ++i) {
            if (clean.responses()[i] == minority) {
                axpy(1.0, clean.sample(i).x, center);
                ++m;
            }
        }
        for (auto& c : center) {
            c /= static_cast<double>(std::max<std::size_t>(m, 1));
        }
    }
    const double label = spec.injected_label.value_or(-minority);
    if (label != 1.0 && label != -1.0) {
        throw Error("attack_label_flip: injected_label must be -1 or +1");
    }
    const double noise = spec.noise_scale.value_or(0.01 * median_feature_sd(clean));
    if (noise < 0.0) {
        throw Error("attack: noise_scale must be nonnegative");
    }
    plant(out, center, label, noise, n_bad, spec.seed);
    return out;
}

CorruptedDataset apply_attack(const Dataset& clean, const AttackSpec& spec) {
    return spec.kind == AttackKind::ridge_alpha_beta ? attack_ridge(clean, spec)
                                                     : attack_label_flip(clean, spec);
}

}  // namespace sever
