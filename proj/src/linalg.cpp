#include "sever/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sever {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error("matrix: entry count does not match shape");
    }
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
    if (rows.empty()) {
        return {};
    }
    Matrix m(0, rows.front().size());
    m.data_.reserve(rows.size() * m.cols_);
    for (const auto& r : rows) {
        m.append_row(r);
    }
    return m;
}

void Matrix::append_row(std::span<const double> r) {
    if (rows_ == 0 && cols_ == 0) {
        cols_ = r.size();
    }
    if (r.size() != cols_) {
        throw Error("matrix: row length " + std::to_string(r.size()) + " does not match " +
                    std::to_string(cols_) + " columns");
    }
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error("dot: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm2(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

void axpy(double scale, std::span<const double> b, std::span<double> a) {
    if (a.size() != b.size()) {
        throw Error("axpy: dimension mismatch");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += scale * b[i];
    }
}

Vec scaled(std::span<const double> a, double scale) {
    Vec out(a.begin(), a.end());
    for (auto& x : out) {
        x *= scale;
    }
    return out;
}

Vec subtract(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error("subtract: dimension mismatch");
    }
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
    }
    return out;
}

Vec multiply(const Matrix& m, std::span<const double> v) {
    if (v.size() != m.cols()) {
        throw Error("multiply: dimension mismatch");
    }
    Vec out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out[r] = dot(m.row(r), v);
    }
    return out;
}

Vec multiply_transposed(const Matrix& m, std::span<const double> u) {
    if (u.size() != m.rows()) {
        throw Error("multiply_transposed: dimension mismatch");
    }
    Vec out(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        axpy(u[r], m.row(r), out);
    }
    return out;
}

double frobenius_norm(const Matrix& m) { return norm2(m.data()); }

Vec mean_rows(const Matrix& m) {
    if (m.rows() == 0) {
        throw Error("empty input");
    }
    Vec mu(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        axpy(1.0, m.row(r), mu);
    }
    const double inv = 1.0 / static_cast<double>(m.rows());
    for (auto& x : mu) {
        x *= inv;
    }
    return mu;
}

Matrix center_rows(const Matrix& m, std::span<const double> mu) {
    if (mu.size() != m.cols()) {
        throw Error("center_rows: dimension mismatch");
    }
    Matrix out = m;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        axpy(-1.0, mu, out.row(r));
    }
    return out;
}

namespace {

Vec random_unit(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vec v(dim);
    double n = 0.0;
    while (n < 1e-12) {
        for (auto& x : v) {
            x = normal(rng);
        }
        n = norm2(v);
    }
    for (auto& x : v) {
        x /= n;
    }
    return v;
}

}  // namespace

SingularDirection top_right_singular_vector(const Matrix& m, double tol, std::size_t max_iters,
                                            std::uint64_t seed) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw Error("empty input");
    }
    if (!(tol > 0.0)) {
        throw Error("top_right_singular_vector: tol must be positive");
    }
    SingularDirection out;
    out.v.assign(m.cols(), 0.0);
    out.v[0] = 1.0;
    if (frobenius_norm(m) == 0.0) {
        out.degenerate = true;
        out.converged = true;
        return out;
    }

    std::mt19937_64 rng(seed);
    Vec v = random_unit(m.cols(), rng);
    constexpr std::size_t kMaxRestarts = 8;
    std::size_t restarts = 0;

    for (std::size_t it = 0; it < max_iters; ++it) {
        Vec next = multiply_transposed(m, multiply(m, v));
        const double n = norm2(next);
        out.iterations = it + 1;
        if (n < 1e-12) {
            // Start vector was (numerically) orthogonal to the row space.
            if (++restarts > kMaxRestarts) {
                out.degenerate = true;
                break;
            }
            v = random_unit(m.cols(), rng);
            continue;
        }
        for (auto& x : next) {
            x /= n;
        }
        // Sign-free distance between consecutive iterates.
        const double s = dot(next, v) >= 0.0 ? 1.0 : -1.0;
        double diff = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double e = next[i] - s * v[i];
            diff += e * e;
        }
        v = std::move(next);
        if (std::sqrt(diff) < tol) {
            out.converged = true;
            break;
        }
    }

    if (!out.degenerate) {
        out.v = std::move(v);
    }
    out.sigma = norm2(multiply(m, out.v));
    if (out.sigma == 0.0) {
        out.degenerate = true;
    }
    return out;
}

Vec solve_spd(const Matrix& a, std::span<const double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) {
        throw Error("solve_spd: dimension mismatch");
    }
    // Lower-triangular factor, a = L L^T.
    Matrix l(n, n);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, std::abs(a(i, i)));
    }
    const double pivot_floor = 1e-13 * std::max(max_diag, 1e-300);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > pivot_floor)) {
            throw Error("solve_spd: matrix is not positive definite");
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / ljj;
        }
    }
    Vec z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= l(i, k) * z[k];
        }
        z[i] = s / l(i, i);
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = z[ii];
        for (std::size_t k = ii + 1; k < n; ++k) {
            s -= l(k, ii) * x[k];
        }
        x[ii] = s / l(ii, ii);
    }
    return x;
}

}  // namespace sever
