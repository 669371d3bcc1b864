#include "sever/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "sever/filter.hpp"

namespace sever {

namespace {

double median(Vec v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    if (v.size() % 2 == 1) {
        return v[mid];
    }
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + v[mid]);
}

// 1.4826 * MAD of each column.
Vec robust_scales(const Matrix& x) {
    Vec out(x.cols());
    Vec col(x.rows());
    for (std::size_t k = 0; k < x.cols(); ++k) {
        for (std::size_t i = 0; i < x.rows(); ++i) {
            col[i] = x(i, k);
        }
        const double med = median(col);
        for (auto& v : col) {
            v = std::abs(v - med);
        }
        out[k] = 1.4826 * median(col);
    }
    return out;
}

Dataset transform(const Dataset& d, const Vec& center, const Vec& scale) {
    Matrix x = d.features();
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto row = x.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            row[k] = (row[k] - center[k]) / scale[k];
        }
    }
    Dataset out(std::move(x), d.responses());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!d.is_active(i)) {
            out.deactivate(i);
        }
    }
    return out;
}

}  // namespace

CenteredSplit robust_center_scale(const Dataset& train, const Dataset& test, double eps,
                                  bool do_scale, std::uint64_t seed) {
    if (eps < 0.0 || eps > 0.3) {
        throw Error("robust_center_scale: eps must lie in [0, 0.3]");
    }
    if (test.size() > 0 && test.dim() != train.dim()) {
        throw Error("robust_center_scale: train and test dimensions differ");
    }
    const Matrix active = train.active_subset().features();
    if (active.rows() < 2) {
        throw Error("robust_center_scale: need at least two active training samples");
    }
    CenteredSplit out;
    // The filter needs a bound on the spread of clean points; the largest
    // robust coordinate scale stands in for it.
    const Vec spread = robust_scales(active);
    const double sigma = std::max(*std::max_element(spread.begin(), spread.end()), 1e-12);
    FilterConfig fc;
    fc.seed = seed;
    const RobustMeanResult rm = robust_mean(active, sigma, eps, fc);
    out.center = rm.mean;
    out.center_budget_exceeded = rm.budget_exceeded;

    out.scale.assign(train.dim(), 1.0);
    if (do_scale) {
        out.scale = robust_scales(center_rows(active, out.center));
        for (auto& s : out.scale) {
            s = std::max(s, 1e-12);
        }
    }
    out.train = transform(train, out.center, out.scale);
    out.test = test.size() > 0 ? transform(test, out.center, out.scale) : test;
    return out;
}

PFraction compute_p(std::size_t n_plus, std::size_t n_minus, double eps, std::size_t rounds) {
    if (n_plus == 0 || n_minus == 0) {
        throw Error("compute_p: both classes need at least one sample");
    }
    if (rounds == 0) {
        throw Error("compute_p: rounds must be >= 1");
    }
    const double n = static_cast<double>(n_plus + n_minus);
    const double smaller = static_cast<double>(std::min(n_plus, n_minus));
    PFraction out;
    out.p = n / smaller * eps / static_cast<double>(rounds);
    if (out.p > kMaxPFraction) {
        out.p = kMaxPFraction;
        out.capped = true;
    }
    return out;
}

}  // namespace sever
