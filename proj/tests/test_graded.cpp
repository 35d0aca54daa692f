#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "lieq/graded.hpp"

using namespace lieq;

namespace {

std::vector<Perm> all_perms(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<Perm> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

bool ascending_on(const Perm& p, int from, int to) {
    for (int k = from + 1; k < to; ++k)
        if (p[k - 1] > p[k]) return false;
    return true;
}

}  // namespace

TEST_CASE("permutation parity") {
    CHECK(sgn_of_perm({0, 1, 2}) == 1);
    CHECK(sgn_of_perm({1, 0, 2}) == -1);
    CHECK(sgn_of_perm({2, 0, 1}) == 1);
    CHECK(sgn_of_perm({}) == 1);
}

TEST_CASE("koszul sign on small swaps") {
    // identity rearranges nothing
    CHECK(koszul_sign({0, 1}, {3, 5}) == 1);
    // swapping two odd letters costs a sign
    CHECK(koszul_sign({1, 0}, {1, 1}) == -1);
    CHECK(koszul_sign({1, 0}, {3, 7}) == -1);
    // swapping odd past even is free
    CHECK(koszul_sign({1, 0}, {1, 2}) == 1);
    CHECK(koszul_sign({1, 0}, {2, 4}) == 1);
    // three odd letters reversed: three inversions
    CHECK(koszul_sign({2, 1, 0}, {1, 1, 1}) == -1);
}

TEST_CASE("koszul sign is multiplicative under composition") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 6);
        std::vector<long> deg(n);
        for (auto& d : deg) d = 1 + static_cast<long>(rng() % 6);
        Perm p(n), q(n);
        std::iota(p.begin(), p.end(), 0);
        std::iota(q.begin(), q.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        std::shuffle(q.begin(), q.end(), rng);
        std::vector<long> deg_q(n);
        for (int k = 0; k < n; ++k) deg_q[k] = deg[q[k]];
        CHECK(koszul_sign(compose_perms(q, p), deg) ==
              koszul_sign(p, deg_q) * koszul_sign(q, deg));
        CHECK(sgn_of_perm(compose_perms(q, p)) == sgn_of_perm(p) * sgn_of_perm(q));
    }
}

TEST_CASE("shuffles enumerate exactly the block-ascending permutations") {
    for (int i = 0; i <= 4; ++i) {
        for (int j = 0; i + j <= 7; ++j) {
            if (i + j == 0) continue;
            auto sh = shuffles(i, j);
            CHECK(sh.size() == binom(i + j, i));
            std::set<Perm> got(sh.begin(), sh.end());
            CHECK(got.size() == sh.size());
            std::set<Perm> want;
            for (auto& p : all_perms(i + j))
                if (ascending_on(p, 0, i) && ascending_on(p, i, i + j)) want.insert(p);
            CHECK(got == want);

            auto shf = shuffles(i, j, true);
            std::set<Perm> wantf;
            for (auto& p : want)
                if (i > 0 && p[0] == 0) wantf.insert(p);
            CHECK(std::set<Perm>(shf.begin(), shf.end()) == wantf);
            if (i > 0) CHECK(shf.size() == binom(i + j - 1, i - 1));
        }
    }
}

TEST_CASE("pinned small shuffle sets") {
    auto s11 = shuffles(1, 1, true);
    REQUIRE(s11.size() == 1);
    CHECK(s11[0] == Perm{0, 1});

    auto s22 = shuffles(2, 2, true);
    REQUIRE(s22.size() == 3);
    CHECK(s22[0] == Perm{0, 1, 2, 3});
    CHECK(s22[1] == Perm{0, 2, 1, 3});
    CHECK(s22[2] == Perm{0, 3, 1, 2});
}

TEST_CASE("suspension shifts degree by one") {
    CHECK(suspend_degree(2) == 3);
    CHECK(desuspend_degree(suspend_degree(7)) == 7);
}
