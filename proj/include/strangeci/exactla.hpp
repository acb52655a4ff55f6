#pragma once

// Dense exact linear algebra over GF(p^m).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "strangeci/errors.hpp"
#include "strangeci/gf.hpp"

namespace strangeci {

using Vector = std::vector<Coeff>;

class Matrix {
public:
    Matrix(FieldRef field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static Matrix identity(FieldRef field, std::size_t n) {
        Matrix m(std::move(field), n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    /// Rows given as vectors of equal length.
    static Matrix from_rows(FieldRef field, const std::vector<Vector>& rows, std::size_t cols) {
        Matrix m(std::move(field), rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw InvalidInput("ragged matrix rows");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    const FieldRef& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Coeff& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Coeff operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Coeff> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    Vector column(std::size_t j) const {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Drop the listed columns (ascending, unique).
    Matrix without_columns(std::span<const std::size_t> drop) const {
        std::vector<std::size_t> keep;
        for (std::size_t j = 0, d = 0; j < cols_; ++j) {
            if (d < drop.size() && drop[d] == j) {
                ++d;
                continue;
            }
            keep.push_back(j);
        }
        Matrix out(field_, rows_, keep.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < keep.size(); ++j) out(i, j) = (*this)(i, keep[j]);
        return out;
    }

    Vector apply(std::span<const Coeff> x) const {
        if (x.size() != cols_) throw InvalidInput("matrix-vector size mismatch");
        const auto& f = *field_;
        Vector y(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            Coeff acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) acc = f.add(acc, f.mul((*this)(i, j), x[j]));
            y[i] = acc;
        }
        return y;
    }

    Matrix operator*(const Matrix& o) const {
        if (!same_field(*field_, *o.field_)) throw InvalidInput("matrix product over different fields");
        if (cols_ != o.rows_) throw InvalidInput("matrix product size mismatch");
        const auto& f = *field_;
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Coeff a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) = f.add(r(i, j), f.mul(a, o(k, j)));
            }
        return r;
    }

    bool operator==(const Matrix& o) const {
        return same_field(*field_, *o.field_) && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    FieldRef field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Coeff> data_;
};

struct Echelon {
    Matrix reduced;                   // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan elimination. Pivot search is column by column, taking the
/// first row (top to bottom) with a nonzero entry in the current column.
inline Echelon row_reduce(Matrix m) {
    const auto& f = *m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(piv, j));
        const Coeff s = f.inv(m(r, c));
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), s);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            const Coeff factor = f.neg(m(i, c));
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = f.add(m(i, j), f.mul(factor, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

struct RankKernel {
    std::size_t rank = 0;
    /// Basis of {x : M x = 0}, itself in reduced row echelon form.
    std::vector<Vector> kernel;
};

namespace detail {

inline std::vector<Vector> echelon_rows(const FieldRef& field, const std::vector<Vector>& rows, std::size_t cols) {
    if (rows.empty()) return {};
    auto e = row_reduce(Matrix::from_rows(field, rows, cols));
    std::vector<Vector> out;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        auto r = e.reduced.row(i);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

}  // namespace detail

inline RankKernel rank_and_kernel(const Matrix& m) {
    const auto& f = *m.field();
    auto e = row_reduce(m);
    RankKernel out;
    out.rank = e.pivots.size();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<Vector> raw;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vector v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = f.neg(e.reduced(i, free));
        raw.push_back(std::move(v));
    }
    out.kernel = detail::echelon_rows(m.field(), raw, m.cols());
    return out;
}

inline std::size_t rank(const Matrix& m) { return row_reduce(m).pivots.size(); }

/// Decides target in span(generators); on success returns c with
/// target = sum_i c_i * generators[i] (free coordinates set to zero).
inline std::optional<Vector> solve_in_span(const FieldRef& field, std::span<const Coeff> target,
                                           const std::vector<Vector>& generators) {
    const std::size_t n = target.size();
    const std::size_t g = generators.size();
    Matrix aug(field, n, g + 1);
    for (std::size_t j = 0; j < g; ++j) {
        if (generators[j].size() != n) throw InvalidInput("generator length mismatch");
        for (std::size_t i = 0; i < n; ++i) aug(i, j) = generators[j][i];
    }
    for (std::size_t i = 0; i < n; ++i) aug(i, g) = target[i];
    auto e = row_reduce(std::move(aug));
    if (!e.pivots.empty() && e.pivots.back() == g) return std::nullopt;
    Vector c(g, 0);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) c[e.pivots[i]] = e.reduced(i, g);
    return c;
}

inline bool in_span(const FieldRef& field, std::span<const Coeff> target, const std::vector<Vector>& generators) {
    return solve_in_span(field, target, generators).has_value();
}

/// Inverse of a square matrix; throws InvalidInput when singular.
inline Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvalidInput("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    Matrix aug(m.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto e = row_reduce(std::move(aug));
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw InvalidInput("matrix is singular");
    Matrix inv(m.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

inline bool is_invertible(const Matrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

}  // namespace strangeci
