#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdrstab {

/// Compressed sparse row matrix with a structurally symmetric pattern:
/// (i,j) is stored iff (j,i) is stored, and explicit zeros are kept. Each
/// stored entry knows the index of its mirror, which is what the limiter
/// loops need to pair a_ij with a_ji.
class CsrMatrix {
public:
    CsrMatrix() = default;

    /// Builds the matrix from per-row column lists. The pattern is
    /// symmetrized and the diagonal is always included; values start at 0.
    static CsrMatrix from_pattern(int n, const std::vector<std::vector<int>>& cols) {
        if (static_cast<int>(cols.size()) != n)
            throw std::invalid_argument("CsrMatrix: pattern rows != n");
        std::vector<std::vector<int>> sym(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            sym[static_cast<std::size_t>(i)].push_back(i);
            for (int j : cols[static_cast<std::size_t>(i)]) {
                if (j < 0 || j >= n)
                    throw std::invalid_argument("CsrMatrix: column index out of range");
                sym[static_cast<std::size_t>(i)].push_back(j);
                sym[static_cast<std::size_t>(j)].push_back(i);
            }
        }
        CsrMatrix m;
        m.n_ = n;
        m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int i = 0; i < n; ++i) {
            auto& r = sym[static_cast<std::size_t>(i)];
            std::sort(r.begin(), r.end());
            r.erase(std::unique(r.begin(), r.end()), r.end());
            m.row_ptr_[static_cast<std::size_t>(i) + 1] =
                m.row_ptr_[static_cast<std::size_t>(i)] + static_cast<int>(r.size());
        }
        m.col_.reserve(static_cast<std::size_t>(m.row_ptr_.back()));
        for (int i = 0; i < n; ++i)
            for (int j : sym[static_cast<std::size_t>(i)]) m.col_.push_back(j);
        m.val_.assign(m.col_.size(), 0.0);
        m.build_transpose_map();
        return m;
    }

    /// Same pattern, all values zero.
    CsrMatrix clone_pattern() const {
        CsrMatrix m = *this;
        std::fill(m.val_.begin(), m.val_.end(), 0.0);
        return m;
    }

    int rows() const { return n_; }
    int nnz() const { return static_cast<int>(col_.size()); }

    int row_begin(int i) const { return row_ptr_[static_cast<std::size_t>(i)]; }
    int row_end(int i) const { return row_ptr_[static_cast<std::size_t>(i) + 1]; }
    int col(int k) const { return col_[static_cast<std::size_t>(k)]; }
    double value(int k) const { return val_[static_cast<std::size_t>(k)]; }
    double& value(int k) { return val_[static_cast<std::size_t>(k)]; }

    /// Storage index of the mirrored entry (col(k), row of k).
    int mirror(int k) const { return trans_[static_cast<std::size_t>(k)]; }

    /// Storage index of (i,j), or -1 if not in the pattern.
    int find(int i, int j) const {
        const int lo = row_begin(i), hi = row_end(i);
        auto it = std::lower_bound(col_.begin() + lo, col_.begin() + hi, j);
        if (it != col_.begin() + hi && *it == j)
            return static_cast<int>(it - col_.begin());
        return -1;
    }

    double get(int i, int j) const {
        const int k = find(i, j);
        return k < 0 ? 0.0 : val_[static_cast<std::size_t>(k)];
    }

    double& ref(int i, int j) {
        const int k = find(i, j);
        if (k < 0)
            throw std::out_of_range("CsrMatrix: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") not in pattern");
        return val_[static_cast<std::size_t>(k)];
    }

    double row_sum(int i) const {
        double s = 0.0;
        for (int k = row_begin(i); k < row_end(i); ++k) s += value(k);
        return s;
    }

    std::vector<double> multiply(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != n_)
            throw std::invalid_argument("CsrMatrix::multiply: size mismatch");
        std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (int k = row_begin(i); k < row_end(i); ++k)
                s += value(k) * x[static_cast<std::size_t>(col(k))];
            y[static_cast<std::size_t>(i)] = s;
        }
        return y;
    }

    std::span<const double> values() const { return val_; }
    std::span<double> values() { return val_; }

private:
    void build_transpose_map() {
        trans_.assign(col_.size(), -1);
        for (int i = 0; i < n_; ++i)
            for (int k = row_begin(i); k < row_end(i); ++k) {
                const int t = find(col(k), i);
                if (t < 0)
                    throw std::logic_error("CsrMatrix: pattern not structurally symmetric");
                trans_[static_cast<std::size_t>(k)] = t;
            }
    }

    int n_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_;
    std::vector<double> val_;
    std::vector<int> trans_;
};

} // namespace cdrstab
