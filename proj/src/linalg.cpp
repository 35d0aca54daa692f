#include "lieq/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace lieq {

SparseVec sv_from_dense(const std::vector<Rational>& v) {
    SparseVec out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!is_zero(v[i])) out.emplace_back(static_cast<int>(i), v[i]);
    return out;
}

std::vector<Rational> sv_to_dense(const SparseVec& v, int n) {
    std::vector<Rational> out(n, Rational(0));
    for (auto& [i, c] : v) out.at(i) = c;
    return out;
}

void sv_axpy(SparseVec& v, const Rational& c, const SparseVec& w) {
    if (is_zero(c) || w.empty()) return;
    SparseVec out;
    out.reserve(v.size() + w.size());
    auto a = v.begin();
    auto b = w.begin();
    while (a != v.end() || b != w.end()) {
        if (b == w.end() || (a != v.end() && a->first < b->first))
            out.push_back(*a++);
        else if (a == v.end() || b->first < a->first) {
            out.emplace_back(b->first, c * b->second);
            ++b;
        } else {
            Rational s = a->second + c * b->second;
            if (!is_zero(s)) out.emplace_back(a->first, s);
            ++a, ++b;
        }
    }
    v = std::move(out);
}

void sv_scale(SparseVec& v, const Rational& c) {
    if (is_zero(c)) {
        v.clear();
        return;
    }
    for (auto& [i, x] : v) x *= c;
}

SparseVec RowSpace::reduce(SparseVec v) const {
    std::size_t k = 0;
    while (k < v.size()) {
        auto it = rows_.find(v[k].first);
        if (it == rows_.end()) {
            ++k;
            continue;
        }
        Rational c = -v[k].second;
        sv_axpy(v, c, it->second);  // cancels entry k, touches only later columns
    }
    return v;
}

bool RowSpace::add(SparseVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    sv_scale(v, 1 / v.front().second);
    int p = v.front().first;
    for (auto& [piv, row] : rows_) {
        auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(p, Rational(0)),
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        if (it != row.end() && it->first == p) {
            Rational c = -it->second;
            sv_axpy(row, c, v);
        }
    }
    rows_.emplace(p, std::move(v));
    return true;
}

ColumnSpace::ColumnSpace(int m, const std::vector<SparseVec>& columns)
    : m_(m), n_(static_cast<int>(columns.size())), rs_(m + static_cast<int>(columns.size())) {
    for (int i = 0; i < n_; ++i) {
        SparseVec row = columns[i];
        row.emplace_back(m_ + i, Rational(1));
        rs_.add(std::move(row));
    }
    for (auto& [piv, row] : rs_.rows()) {
        if (piv < m_) {
            ++rank_;
        } else {
            std::vector<Rational> k(n_, Rational(0));
            for (auto& [idx, c] : row) k.at(idx - m_) = c;
            kernel_.push_back(std::move(k));
        }
    }
}

bool ColumnSpace::contains(const SparseVec& b) const {
    return residual(b).empty();
}

SparseVec ColumnSpace::residual(const SparseVec& b) const {
    SparseVec r = rs_.reduce(b);
    SparseVec out;
    for (auto& [i, c] : r)
        if (i < m_) out.emplace_back(i, c);
    return out;
}

std::optional<std::vector<Rational>> ColumnSpace::solve(const SparseVec& b) const {
    SparseVec r = rs_.reduce(b);
    std::vector<Rational> x(n_, Rational(0));
    for (auto& [i, c] : r) {
        if (i < m_) return std::nullopt;
        x.at(i - m_) = -c;
    }
    return x;
}

std::vector<Poly> ColumnSpace::residual_poly(const std::vector<Poly>& b) const {
    if (static_cast<int>(b.size()) != m_) throw std::invalid_argument("residual_poly: bad size");
    std::vector<Poly> r = b;
    for (auto& [piv, row] : rs_.rows()) {
        if (piv >= m_) continue;
        Poly c = r[piv];
        if (c.is_zero_poly()) continue;
        // r -= c * row restricted to target coordinates; pivot entry clears
        for (auto& [idx, a] : row) {
            if (idx >= m_) continue;
            Poly t = c;
            t *= a;
            r[idx] -= t;
        }
    }
    return r;
}

std::optional<std::vector<Poly>> ColumnSpace::solve_poly(const std::vector<Poly>& b) const {
    if (static_cast<int>(b.size()) != m_) throw std::invalid_argument("solve_poly: bad size");
    std::vector<Poly> r = b;
    std::vector<Poly> tail(n_);
    for (auto& [piv, row] : rs_.rows()) {
        if (piv >= m_) continue;
        Poly c = r[piv];
        if (c.is_zero_poly()) continue;
        for (auto& [idx, a] : row) {
            Poly t = c;
            t *= a;
            if (idx < m_)
                r[idx] -= t;
            else
                tail[idx - m_] -= t;
        }
    }
    for (auto& p : r)
        if (!p.is_zero_poly()) return std::nullopt;
    for (auto& p : tail) p *= Rational(-1);
    return tail;
}

std::vector<Poly> rowspace_reduce_poly(const RowSpace& rs, std::vector<Poly> v) {
    if (static_cast<int>(v.size()) != rs.ncols())
        throw std::invalid_argument("rowspace_reduce_poly: bad size");
    for (auto& [piv, row] : rs.rows()) {
        Poly c = v[piv];
        if (c.is_zero_poly()) continue;
        for (auto& [idx, a] : row) {
            Poly t = c;
            t *= a;
            v[idx] -= t;
        }
    }
    return v;
}

int dense_rank(DenseMat a) {
    int m = static_cast<int>(a.size());
    if (m == 0) return 0;
    int n = static_cast<int>(a[0].size());
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        for (int r = rank; r < m; ++r)
            if (!is_zero(a[r][col])) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        Rational inv = 1 / a[rank][col];
        for (int c = col; c < n; ++c) a[rank][c] *= inv;
        for (int r = 0; r < m; ++r) {
            if (r == rank || is_zero(a[r][col])) continue;
            Rational f = a[r][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[rank][c];
        }
        ++rank;
    }
    return rank;
}

Rational dense_det(DenseMat a) {
    int n = static_cast<int>(a.size());
    Rational det(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!is_zero(a[r][col])) {
                piv = r;
                break;
            }
        if (piv < 0) return Rational(0);
        if (piv != col) {
            std::swap(a[col], a[piv]);
            det = -det;
        }
        det *= a[col][col];
        Rational inv = 1 / a[col][col];
        for (int r = col + 1; r < n; ++r) {
            if (is_zero(a[r][col])) continue;
            Rational f = a[r][col] * inv;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

std::optional<std::vector<Rational>> dense_solve(DenseMat a, std::vector<Rational> b) {
    int m = static_cast<int>(a.size());
    if (m == 0) return std::vector<Rational>{};
    int n = static_cast<int>(a[0].size());
    std::vector<SparseVec> cols(n);
    for (int j = 0; j < n; ++j) {
        std::vector<Rational> col(m);
        for (int i = 0; i < m; ++i) col[i] = a[i][j];
        cols[j] = sv_from_dense(col);
    }
    ColumnSpace cs(m, cols);
    return cs.solve(sv_from_dense(b));
}

}  // namespace lieq
