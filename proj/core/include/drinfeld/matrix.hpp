#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "drinfeld/finite_field.hpp"

namespace drinfeld {

/// Dense row-major matrix over a field type C (same requirements as Poly<C>).
template <class C>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols, const C& zero)
        : rows_(rows), cols_(cols), zero_(zero), e_(static_cast<size_t>(rows) * cols, zero) {
        if (rows <= 0 || cols <= 0) throw InvalidInput("matrix dimensions must be positive");
    }
    DenseMatrix(int rows, int cols, const C& zero, std::vector<C> entries)
        : rows_(rows), cols_(cols), zero_(zero), e_(std::move(entries)) {
        if (rows <= 0 || cols <= 0) throw InvalidInput("matrix dimensions must be positive");
        if (e_.size() != static_cast<size_t>(rows) * cols)
            throw InvalidInput("matrix entry count does not match dimensions");
    }

    static DenseMatrix identity(int n, const C& zero) {
        DenseMatrix m(n, n, zero);
        for (int i = 0; i < n; ++i) m(i, i) = zero.one_like();
        return m;
    }
    static DenseMatrix scalar(int n, const C& s) {
        DenseMatrix m(n, n, s.zero_like());
        for (int i = 0; i < n; ++i) m(i, i) = s;
        return m;
    }
    static DenseMatrix column(const std::vector<C>& v) {
        if (v.empty()) throw InvalidInput("empty column vector");
        return DenseMatrix(static_cast<int>(v.size()), 1, v[0].zero_like(), v);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const C& zero() const { return zero_; }
    C& operator()(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const C& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const std::vector<C>& entries() const { return e_; }
    std::vector<C> column_vector(int j) const {
        std::vector<C> v;
        for (int i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
        return v;
    }

    bool is_zero() const {
        for (const C& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }

    DenseMatrix operator-() const {
        DenseMatrix r = *this;
        for (C& x : r.e_) x = -x;
        return r;
    }
    DenseMatrix& operator+=(const DenseMatrix& o) {
        check_same(o);
        for (size_t k = 0; k < e_.size(); ++k) e_[k] = e_[k] + o.e_[k];
        return *this;
    }
    DenseMatrix& operator-=(const DenseMatrix& o) {
        check_same(o);
        for (size_t k = 0; k < e_.size(); ++k) e_[k] = e_[k] - o.e_[k];
        return *this;
    }
    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols_ != b.rows_) throw InvalidInput("matrix product: dimension mismatch");
        DenseMatrix r(a.rows_, b.cols_, a.zero_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const C& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    const C& bkj = b(k, j);
                    if (bkj.is_zero()) continue;
                    r(i, j) = r(i, j) + aik * bkj;
                }
            }
        return r;
    }
    DenseMatrix scaled(const C& s) const {
        DenseMatrix r = *this;
        for (C& x : r.e_) x = x * s;
        return r;
    }
    template <class F>
    auto map(F&& fn) const -> DenseMatrix<decltype(fn(std::declval<const C&>()))> {
        using D = decltype(fn(std::declval<const C&>()));
        std::vector<D> out;
        out.reserve(e_.size());
        for (const C& x : e_) out.push_back(fn(x));
        return DenseMatrix<D>(rows_, cols_, fn(zero_), std::move(out));
    }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (size_t k = 0; k < a.e_.size(); ++k)
            if (!(a.e_[k] == b.e_[k])) return false;
        return true;
    }
    friend bool operator!=(const DenseMatrix& a, const DenseMatrix& b) { return !(a == b); }

private:
    void check_same(const DenseMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix sum: dimension mismatch");
    }
    int rows_ = 0, cols_ = 0;
    C zero_{};
    std::vector<C> e_;
};

enum class StructuredKind { N, N_with_entries, E, E_with_entries, identity };

/// The 0/1 (or entry-filled) patterns N_i and E_i = N_{i-n}.
///
/// N_i (1 <= |i| <= n-1) has its nonzero band on the i-th super-diagonal
/// (sub-diagonal when i < 0).  E_i for 1 <= i <= n is N_{i-n}, with E_n the
/// main diagonal.  For the *_with_entries kinds the supplied entries fill the
/// band from the top-left, and must have exactly the band length.
template <class C>
DenseMatrix<C> structured_matrix(int n, StructuredKind kind, int i, const C& zero,
                                 const std::vector<C>& entries = {}) {
    if (n <= 0) throw InvalidInput("structured_matrix: n must be positive");
    int offset = 0;
    switch (kind) {
        case StructuredKind::identity: return DenseMatrix<C>::identity(n, zero);
        case StructuredKind::N:
        case StructuredKind::N_with_entries:
            if (i == 0 || i >= n || i <= -n) throw InvalidInput("structured_matrix: N_i index out of range");
            offset = i;
            break;
        case StructuredKind::E:
        case StructuredKind::E_with_entries:
            if (i < 1 || i > n) throw InvalidInput("structured_matrix: E_i index out of range");
            offset = i - n;
            break;
    }
    const bool filled = kind == StructuredKind::N_with_entries || kind == StructuredKind::E_with_entries;
    const int band = n - (offset >= 0 ? offset : -offset);
    if (filled && static_cast<int>(entries.size()) != band)
        throw InvalidInput("structured_matrix: entry count does not match band length");
    DenseMatrix<C> m(n, n, zero);
    for (int k = 0; k < band; ++k) {
        const int row = offset >= 0 ? k : k - offset;
        const int col = offset >= 0 ? k + offset : k;
        m(row, col) = filled ? entries[k] : zero.one_like();
    }
    return m;
}

}  // namespace drinfeld
