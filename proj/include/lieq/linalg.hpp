#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lieq/poly.hpp"
#include "lieq/rational.hpp"

namespace lieq {

// Sparse vector: (index, coefficient) pairs, strictly increasing index, no zeros.
using SparseVec = std::vector<std::pair<int, Rational>>;

SparseVec sv_from_dense(const std::vector<Rational>& v);
std::vector<Rational> sv_to_dense(const SparseVec& v, int n);
// v += c * w
void sv_axpy(SparseVec& v, const Rational& c, const SparseVec& w);
void sv_scale(SparseVec& v, const Rational& c);

// Row space kept in reduced row echelon form: each stored row starts with a
// leading 1 at its pivot column and pivot columns are cleared in every other
// row. reduce() therefore yields the canonical representative modulo the span.
class RowSpace {
public:
    explicit RowSpace(int ncols) : ncols_(ncols) {}

    SparseVec reduce(SparseVec v) const;
    // reduce, then insert if independent; true iff rank grew
    bool add(SparseVec v);
    bool contains(SparseVec v) const { return reduce(std::move(v)).empty(); }
    int rank() const { return static_cast<int>(rows_.size()); }
    int ncols() const { return ncols_; }
    const std::map<int, SparseVec>& rows() const { return rows_; }

private:
    int ncols_;
    std::map<int, SparseVec> rows_;  // pivot column -> row
};

// Linear map T into Q^m presented by its columns. Augmented RREF over
// [T(e_i) | e_i] provides rank, right kernel, solving, and canonical residues
// modulo the column span, including for right-hand sides with Poly entries.
class ColumnSpace {
public:
    ColumnSpace(int m, const std::vector<SparseVec>& columns);

    int rank() const { return rank_; }
    int target_dim() const { return m_; }
    int source_dim() const { return n_; }
    const std::vector<std::vector<Rational>>& kernel_basis() const { return kernel_; }

    bool contains(const SparseVec& b) const;
    // x with T x = b, if any
    std::optional<std::vector<Rational>> solve(const SparseVec& b) const;
    // canonical representative of b modulo im(T)
    SparseVec residual(const SparseVec& b) const;

    // Same for b with polynomial entries (dense, length m). residual entries
    // vanish at a parameter value iff b evaluated there lies in im(T).
    std::vector<Poly> residual_poly(const std::vector<Poly>& b) const;
    // Particular solution with Poly entries, valid whenever the residual is
    // identically zero; nullopt otherwise.
    std::optional<std::vector<Poly>> solve_poly(const std::vector<Poly>& b) const;

private:
    int m_, n_, rank_ = 0;
    RowSpace rs_;  // width m_ + n_
    std::vector<std::vector<Rational>> kernel_;
};

// Canonical reduction of a dense Poly vector modulo a rational row space.
std::vector<Poly> rowspace_reduce_poly(const RowSpace& rs, std::vector<Poly> v);

// Dense helpers for small matrices.
using DenseMat = std::vector<std::vector<Rational>>;
int dense_rank(DenseMat a);
Rational dense_det(DenseMat a);
std::optional<std::vector<Rational>> dense_solve(DenseMat a, std::vector<Rational> b);

}  // namespace lieq
