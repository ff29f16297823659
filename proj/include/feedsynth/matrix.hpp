#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace feedsynth {

// Dense row-major double matrix. Everything in this library is small enough
// that a plain vector-backed matrix with a cache-friendly matmul is plenty.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) return Matrix();
        Matrix m(rows.size(), rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols_)
                throw std::invalid_argument("from_rows: ragged input");
            for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix row_vector(const std::vector<double>& v) {
        Matrix m(1, v.size());
        std::copy(v.begin(), v.end(), m.data_.begin());
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline void check_shape(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("shape mismatch: " + what);
}

// C = A * B
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    check_shape(a.cols() == b.rows(), "matmul");
    Matrix c(a.rows(), b.cols());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        double* crow = c.data() + i * m;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = a(i, p);
            if (av == 0.0) continue;
            const double* brow = b.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

// C = A * B^T
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    check_shape(a.cols() == b.cols(), "matmul_nt");
    Matrix c(a.rows(), b.rows());
    const std::size_t k = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double* ar = a.data() + i * k;
            const double* br = b.data() + j * k;
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += ar[p] * br[p];
            c(i, j) = s;
        }
    return c;
}

// C = A^T * B
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    check_shape(a.rows() == b.rows(), "matmul_tn");
    Matrix c(a.cols(), b.cols());
    const std::size_t m = b.cols();
    for (std::size_t p = 0; p < a.rows(); ++p) {
        const double* br = b.data() + p * m;
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double av = a(p, i);
            if (av == 0.0) continue;
            double* crow = c.data() + i * m;
            for (std::size_t j = 0; j < m; ++j) crow[j] += av * br[j];
        }
    }
    return c;
}

inline Matrix add(const Matrix& a, const Matrix& b) {
    check_shape(a.same_shape(b), "add");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.raw()[i] += b.raw()[i];
    return c;
}

inline Matrix hadamard(const Matrix& a, const Matrix& b) {
    check_shape(a.same_shape(b), "hadamard");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.raw()[i] *= b.raw()[i];
    return c;
}

inline Matrix scale(const Matrix& a, double s) {
    Matrix c = a;
    for (double& v : c.raw()) v *= s;
    return c;
}

// Row-wise softmax; -inf entries get exactly zero weight.
inline Matrix softmax_rows(const Matrix& a) {
    Matrix y(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < a.cols(); ++c) mx = std::max(mx, a(r, c));
        double z = 0.0;
        for (std::size_t c = 0; c < a.cols(); ++c) {
            const double e = std::exp(a(r, c) - mx);
            y(r, c) = e;
            z += e;
        }
        for (std::size_t c = 0; c < a.cols(); ++c) y(r, c) /= z;
    }
    return y;
}

inline Matrix concat_rows(const Matrix& a, const Matrix& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    check_shape(a.cols() == b.cols(), "concat_rows");
    Matrix c(a.rows() + b.rows(), a.cols());
    std::copy(a.raw().begin(), a.raw().end(), c.raw().begin());
    std::copy(b.raw().begin(), b.raw().end(), c.raw().begin() + a.size());
    return c;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    check_shape(a.same_shape(b), "max_abs_diff");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a.raw()[i] - b.raw()[i]));
    return d;
}

// Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
inline Matrix uniform_init(std::size_t rows, std::size_t cols, std::size_t fan_in, std::mt19937_64& rng) {
    const double limit = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, fan_in)));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix m(rows, cols);
    for (double& v : m.raw()) v = dist(rng);
    return m;
}

}  // namespace feedsynth
