#include <doctest.h>

#include <functional>
#include <random>

#include "lieq/free_lie.hpp"

using namespace lieq;

namespace {

// every bracketing of a fixed word, as expression handles
std::vector<FreeLie::Expr> all_bracketings(FreeLie& fl, const FreeLie::Word& w, int lo, int hi) {
    std::vector<FreeLie::Expr> out;
    if (hi - lo == 1) {
        out.push_back(fl.leaf(w[lo]));
        return out;
    }
    for (int mid = lo + 1; mid < hi; ++mid)
        for (auto l : all_bracketings(fl, w, lo, mid))
            for (auto r : all_bracketings(fl, w, mid, hi)) out.push_back(fl.bracket(l, r));
    return out;
}

FreeLie::Expr random_tree(FreeLie& fl, std::mt19937& rng, int depth) {
    if (depth == 0 || rng() % 3 == 0) return fl.leaf(static_cast<int>(rng() % fl.gens().size()));
    return fl.bracket(random_tree(fl, rng, depth - 1), random_tree(fl, rng, depth - 1));
}

}  // namespace

TEST_CASE("generator validation") {
    CHECK_THROWS(GeneratorSet(0));
    GeneratorSet gs(10);
    gs.add("x", 1);
    CHECK_THROWS(gs.add("x", 2));
    CHECK_THROWS(gs.add("bad", 0));
    CHECK(gs.index_of("x") == 0);
    CHECK(gs.index_of("y") == -1);
}

TEST_CASE("bracket expansion uses concatenation with a single sign") {
    GeneratorSet gs(10);
    int x = gs.add("x", 1);
    int y = gs.add("y", 2);
    FreeLie fl(gs);
    auto ex = fl.leaf(x), ey = fl.leaf(y);

    // odd/even: xy - yx
    auto t = fl.expand(fl.bracket(ex, ey));
    CHECK(t.coeff({x, y}) == Rational(1));
    CHECK(t.coeff({y, x}) == Rational(-1));

    // odd/odd: xx + xx
    auto s = fl.expand(fl.bracket(ex, ex));
    CHECK(s.coeff({x, x}) == Rational(2));

    // even/even vanishes on equal arguments
    auto z = fl.expand(fl.bracket(ey, ey));
    CHECK(z.is_zero());
}

TEST_CASE("expanded antisymmetry and Jacobi for random trees") {
    GeneratorSet gs(64);
    gs.add("x", 1);
    gs.add("y", 2);
    gs.add("z", 3);
    FreeLie fl(gs);
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 80; ++trial) {
        auto a = random_tree(fl, rng, 2);
        auto b = random_tree(fl, rng, 2);
        auto c = random_tree(fl, rng, 2);

        // [a,b] + (-1)^{|a||b|} [b,a] = 0
        FreeLie::Tensor anti = fl.expand(fl.bracket(a, b));
        FreeLie::Tensor ba = fl.expand(fl.bracket(b, a));
        ba *= Rational(neg_one_pow(fl.degree(a) * fl.degree(b)));
        anti += ba;
        CHECK(anti.is_zero());

        // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
        FreeLie::Tensor jac = fl.expand(fl.bracket(a, fl.bracket(b, c)));
        jac -= fl.expand(fl.bracket(fl.bracket(a, b), c));
        FreeLie::Tensor t = fl.expand(fl.bracket(b, fl.bracket(a, c)));
        t *= Rational(neg_one_pow(fl.degree(a) * fl.degree(b)));
        jac -= t;
        CHECK(jac.is_zero());
    }
}

TEST_CASE("squares and cubes of a single generator") {
    GeneratorSet gs(12);
    int x = gs.add("x", 1);  // odd
    int y = gs.add("y", 2);  // even
    FreeLie fl(gs);
    auto ex = fl.leaf(x), ey = fl.leaf(y);
    CHECK_FALSE(fl.expand(fl.bracket(ex, ex)).is_zero());
    CHECK(fl.expand(fl.bracket(ey, ey)).is_zero());
    // [[x,x],x] already vanishes rationally
    CHECK(fl.expand(fl.bracket(fl.bracket(ex, ex), ex)).is_zero());
}

TEST_CASE("piece dimensions for pinned small algebras") {
    SUBCASE("one odd generator") {
        GeneratorSet gs(6);
        gs.add("x", 1);
        FreeLie fl(gs);
        CHECK(fl.piece_dim(1) == 1);
        CHECK(fl.piece_dim(2) == 1);  // [x,x]
        CHECK(fl.piece_dim(3) == 0);
        CHECK(fl.piece_dim(4) == 0);
    }
    SUBCASE("one even generator") {
        GeneratorSet gs(8);
        gs.add("y", 2);
        FreeLie fl(gs);
        CHECK(fl.piece_dim(2) == 1);
        CHECK(fl.piece_dim(4) == 0);
        CHECK(fl.piece_dim(6) == 0);
    }
    SUBCASE("two odd generators of degree one") {
        GeneratorSet gs(4);
        gs.add("x", 1);
        gs.add("y", 1);
        FreeLie fl(gs);
        CHECK(fl.piece_dim(1) == 2);
        CHECK(fl.piece_dim(2) == 3);  // symmetric square of an odd plane
    }
    SUBCASE("even generators match ungraded Witt dimensions") {
        GeneratorSet gs(8);
        gs.add("a", 2);
        gs.add("b", 2);
        FreeLie fl(gs);
        CHECK(fl.piece_dim(2) == 2);
        CHECK(fl.piece_dim(4) == 1);  // [a,b]
        CHECK(fl.piece_dim(6) == 2);  // [[a,b],a], [[a,b],b]
        CHECK(fl.piece_dim(8) == 3);
    }
    SUBCASE("three even generators") {
        GeneratorSet gs(6);
        gs.add("a", 2);
        gs.add("b", 2);
        gs.add("c", 2);
        FreeLie fl(gs);
        CHECK(fl.piece_dim(4) == 3);
        CHECK(fl.piece_dim(6) == 8);  // (3^3 - 3)/3
    }
}

TEST_CASE("left-normed candidates span every bracketing up to weight four") {
    GeneratorSet gs(8);
    gs.add("x", 1);
    gs.add("y", 2);
    FreeLie fl(gs);
    for (long degree = 1; degree <= 8; ++degree) {
        fl.piece_basis(degree);
        RowSpace span(static_cast<int>(fl.words(degree).size()));
        for (auto e : fl.piece_basis(degree)) span.add(fl.tensor_coords(fl.expand(e), degree));
        RowSpace everything(static_cast<int>(fl.words(degree).size()));
        int all_rank_growth = 0;
        for (auto& w : fl.words(degree)) {
            if (w.size() > 4) continue;
            for (auto e : all_bracketings(fl, w, 0, static_cast<int>(w.size()))) {
                auto t = fl.expand(e);
                if (t.is_zero()) continue;
                auto row = fl.tensor_coords(t, degree);
                CHECK(span.contains(row));
                if (everything.add(row)) ++all_rank_growth;
            }
        }
        // weights occupy disjoint word coordinates, so the rank of all
        // bracketings of weight <= 4 must equal the basis count there
        int basis_rank_le4 = 0;
        for (auto e : fl.piece_basis(degree))
            if (fl.weight(e) <= 4) ++basis_rank_le4;
        CHECK(all_rank_growth == basis_rank_le4);
    }
}

TEST_CASE("coordinates in a certified basis round-trip") {
    GeneratorSet gs(8);
    gs.add("x", 1);
    gs.add("y", 2);
    FreeLie fl(gs);
    std::mt19937 rng(20250814);
    for (long degree = 2; degree <= 7; ++degree) {
        auto& basis = fl.piece_basis(degree);
        if (basis.empty()) continue;
        LieSum<Rational> v;
        std::vector<Rational> want(basis.size(), Rational(0));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            long c = static_cast<long>(rng() % 7) - 3;
            want[i] = Rational(c);
            v.add(basis[i], Rational(c));
        }
        auto got = fl.coords_in_basis(fl.expand(v), degree);
        CHECK(got == want);
    }
}
