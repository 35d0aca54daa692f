#include "lieq/graded.hpp"

#include <numeric>
#include <stdexcept>

namespace lieq {

int sgn_of_perm(const Perm& p) {
    int s = 1;
    for (std::size_t k = 0; k < p.size(); ++k)
        for (std::size_t l = k + 1; l < p.size(); ++l)
            if (p[k] > p[l]) s = -s;
    return s;
}

int koszul_sign(const Perm& p, const std::vector<long>& degrees) {
    if (p.size() != degrees.size()) throw std::invalid_argument("koszul_sign: size mismatch");
    int s = 1;
    for (std::size_t k = 0; k < p.size(); ++k)
        for (std::size_t l = k + 1; l < p.size(); ++l)
            if (p[k] > p[l] && (degrees[p[k]] % 2) && (degrees[p[l]] % 2)) s = -s;
    return s;
}

Perm compose_perms(const Perm& q, const Perm& p) {
    if (q.size() != p.size()) throw std::invalid_argument("compose_perms: size mismatch");
    Perm r(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) r[k] = q[p[k]];
    return r;
}

std::vector<Perm> shuffles(int i, int j, bool fix_first) {
    if (i < 0 || j < 0) throw std::invalid_argument("shuffles: negative block size");
    const int n = i + j;
    std::vector<Perm> out;
    // Walk all ascending i-subsets of 0..n-1 as the first block.
    std::vector<int> sub(i);
    std::iota(sub.begin(), sub.end(), 0);
    auto emit = [&]() {
        if (fix_first && (i == 0 || sub[0] != 0)) return;
        Perm p;
        p.reserve(n);
        p.insert(p.end(), sub.begin(), sub.end());
        std::vector<char> used(n, 0);
        for (int v : sub) used[v] = 1;
        for (int v = 0; v < n; ++v)
            if (!used[v]) p.push_back(v);
        out.push_back(std::move(p));
    };
    if (i == 0) {
        emit();
        return out;
    }
    while (true) {
        emit();
        int k = i - 1;
        while (k >= 0 && sub[k] == n - i + k) --k;
        if (k < 0) break;
        ++sub[k];
        for (int l = k + 1; l < i; ++l) sub[l] = sub[l - 1] + 1;
    }
    return out;
}

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
    return r;
}

}  // namespace lieq
