#pragma once

#include <vector>
#include <cstdint>

namespace lieq {

// Permutation in one-line form over 0..n-1: slot k of the output holds the input
// letter perm[k]. With this convention an (i,j)-shuffle is ascending on slots
// [0,i) and on [i,i+j).
using Perm = std::vector<int>;

// Parity sign (-1)^{#inversions}.
int sgn_of_perm(const Perm& p);

// Koszul sign of rearranging graded letters x_0..x_{n-1} (degrees[k] = |x_k|)
// into the order x_{p[0]},...,x_{p[n-1]}: one factor (-1)^{|x_{p[k]}||x_{p[l]}|}
// per inversion k<l, p[k]>p[l]. Multiplicative under composition:
// koszul_sign(compose(q,p), deg) == koszul_sign(p, deg o q) * koszul_sign(q, deg).
int koszul_sign(const Perm& p, const std::vector<long>& degrees);

// (q o p)[k] = q[p[k]]; applying p after q in the one-line-form convention above.
Perm compose_perms(const Perm& q, const Perm& p);

// All (i,j)-shuffles of 0..i+j-1. fix_first restricts to those keeping letter 0
// in the first block (p[0] == 0). Counts: C(i+j,i), resp. C(i+j-1,i-1).
std::vector<Perm> shuffles(int i, int j, bool fix_first = false);

// Degree shift of the suspension: an element of degree d in V sits in degree
// d+1 in sV, so (sV)_i = V_{i-1}.
constexpr long suspend_degree(long d) { return d + 1; }
constexpr long desuspend_degree(long d) { return d - 1; }

std::uint64_t binom(int n, int k);

}  // namespace lieq
