#include <doctest.h>

#include <functional>
#include <random>

#include "lieq/dgl.hpp"
#include "lieq/quillen_ss.hpp"

using namespace lieq;

namespace {

// the running example chains: letters sx, sy, sz of suspended degrees 2, 4, 7
Coderivation example_chains() {
    LInfStructure L({{"x", 1}, {"y", 3}, {"z", 6}}, 3);
    L.set_bracket({1, 1}, LInfStructure::Elt(2));
    L.set_bracket({0, 0, 1}, LInfStructure::Elt(2));
    return brackets_to_coderivation(L);
}

// free Lie algebra on u(1), g(3) with dg = [u,u], repackaged at the window
Dgl two_gen_dgl(long truncation) {
    GeneratorSet gs(truncation);
    gs.add("u", 1);
    int g = gs.add("g", 3);
    Dgl dgl(gs);
    FreeLie& fl = dgl.lie();
    dgl.set_d(g, LieSum<Rational>(fl.bracket(fl.leaf(0), fl.leaf(0))));
    return dgl;
}

// coordinates of delta on the word list of one degree
DenseMat delta_matrix(const FilteredCDGC& C, long n) {
    const std::vector<Wedge>& src = C.words(n);
    const std::vector<Wedge>& dst = C.words(n - 1);
    std::map<Wedge, int> index;
    for (int i = 0; i < static_cast<int>(dst.size()); ++i) index[dst[i]] = i;
    DenseMat m(dst.size(), std::vector<Rational>(src.size(), Rational(0)));
    for (std::size_t j = 0; j < src.size(); ++j)
        for (auto& [w, c] : C.delta().delta(src[j]).terms()) m[index.at(w)][j] = c;
    return m;
}

long homology_dim(const FilteredCDGC& C, long n) {
    const long cycles =
        static_cast<long>(C.words(n).size()) - dense_rank(delta_matrix(C, n));
    return cycles - dense_rank(delta_matrix(C, n + 1));
}

long total_dim(const SSPage& pg, long n) {
    long t = 0;
    for (auto& [key, b] : pg.blocks())
        if (b.degree == n) t += static_cast<long>(b.reps.size());
    return t;
}

// words of length p and total degree n over letter groups (sdegree, count),
// single use per letter when the suspended degree is odd
long wedge_count(const std::vector<std::pair<long, int>>& groups, std::size_t at,
                 int p, long n) {
    if (p == 0) return n == 0 ? 1 : 0;
    if (at == groups.size() || n <= 0) return 0;
    auto [s, dim] = groups[at];
    long total = 0;
    for (int take = 0; take <= p && take * s <= n; ++take) {
        long ways = s % 2 ? binom(dim, take) : binom(dim + take - 1, take);
        if (ways == 0) continue;
        total += ways * wedge_count(groups, at + 1, p - take, n - take * s);
    }
    return total;
}

int iterations_to_kill(const Coderivation& D, const Wedge& w) {
    using State = LinComb<std::vector<Wedge>, Rational>;
    State cur(std::vector<Wedge>{w});
    int steps = 0;
    while (!cur.is_zero()) {
        ++steps;
        State next;
        for (auto& [tensor, c] : cur.terms()) {
            auto split = reduced_diagonal(D, tensor.back());
            for (auto& [pr, s] : split.terms()) {
                std::vector<Wedge> t(tensor.begin(), tensor.end() - 1);
                t.push_back(pr.first);
                t.push_back(pr.second);
                next.add(t, c * s);
            }
        }
        cur = next;
        REQUIRE(steps <= 8);
    }
    return steps;
}

}  // namespace

TEST_CASE("word filtration enumerates canonical prefixes") {
    FilteredCDGC C(example_chains(), 31);
    CHECK(C.max_length() == 15);
    CHECK(C.safe_degree() == 30);

    // degree 11 forces one z and an even remainder
    CHECK(C.words(11) == std::vector<Wedge>{{1, 2}, {0, 0, 2}});
    CHECK(C.words(1).empty());
    CHECK(C.words(7) == std::vector<Wedge>{{2}});
    CHECK(C.words(10) ==
          std::vector<Wedge>{{0, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 0, 0}});
    // every word is x^n y^m or x^n y^m z: z never repeats
    for (long n = 2; n <= 20; ++n)
        for (const Wedge& w : C.words(n)) {
            int zs = 0;
            for (std::size_t i = 1; i < w.size(); ++i) {
                CHECK(w[i - 1] <= w[i]);
                if (w[i] == 2 && w[i - 1] == 2) ++zs;
            }
            CHECK(zs == 0);
        }

    CHECK(C.filtration_subspace(0, 8).empty());
    CHECK(C.filtration_subspace(1, 7) == std::vector<Wedge>{{2}});
    CHECK(C.filtration_subspace(2, 6) == std::vector<Wedge>{{0, 1}});
    CHECK(C.filtration_subspace(3, 6) == std::vector<Wedge>{{0, 1}, {0, 0, 0}});
    CHECK_THROWS(C.filtration_subspace(16, 4));
    CHECK_THROWS(C.filtration_subspace(2, 32));
    CHECK_THROWS(C.words(32));

    // reduced basis required
    CHECK_THROWS(FilteredCDGC(Coderivation({{"u", 0}}, 2), 6));

    // the p-fold reduced diagonal kills exactly the words of length <= p
    Coderivation D = example_chains();
    auto split = reduced_diagonal(D, {0, 1});
    CHECK(split.coeff({Wedge{0}, Wedge{1}}) == Rational(1));
    CHECK(split.coeff({Wedge{1}, Wedge{0}}) == Rational(1));
    CHECK(reduced_diagonal(D, {0, 0}).coeff({Wedge{0}, Wedge{0}}) == Rational(2));
    CHECK(reduced_diagonal(D, {2}).is_zero());
    for (long n = 2; n <= 14; ++n)
        for (const Wedge& w : C.words(n))
            CHECK(iterations_to_kill(D, w) == static_cast<int>(w.size()));
}

TEST_CASE("zero codifferential keeps every page equal to the chains") {
    Coderivation D({{"a", 1}, {"b", 2}, {"c", 3}}, 2);
    FilteredCDGC C(D, 12);
    for (int k = 0; k <= 3; ++k) {
        SSPage pg = page(C, k);
        for (long n = 2; n <= pg.max_degree(); ++n)
            for (int p = 1; p <= static_cast<int>(n / 2); ++p) {
                long expect = 0;
                for (const Wedge& w : C.words(n))
                    if (static_cast<int>(w.size()) == p) ++expect;
                CHECK(pg.dim(p, n) == expect);
            }
        for (auto& [key, b] : pg.blocks())
            for (auto& row : b.d)
                for (auto& entry : row) CHECK(is_zero(entry));
    }
    CollapseReport rep = collapses_through(C, 0, C.safe_degree());
    CHECK(rep.collapsed);
    CHECK(rep.max_degree == C.safe_degree());
}

TEST_CASE("early pages recover chains on letters and homology letters") {
    Dgl dgl = two_gen_dgl(6);
    FilteredCDGC C(quillen_chains(dgl, 6), 8);

    // E^0 blocks are the fixed-length word spans and d^0 is the
    // length-preserving part of delta
    SSPage p0 = page(C, 0);
    for (auto& [key, b] : p0.blocks()) {
        const std::vector<Wedge>& ws = C.words(b.degree);
        std::vector<Wedge> mine;
        for (std::size_t j = 0; j < b.reps.size(); ++j) {
            REQUIRE(b.reps[j].terms().size() == 1);
            const Wedge& w = b.reps[j].terms().begin()->first;
            CHECK(static_cast<int>(w.size()) == b.p);
            mine.push_back(w);
        }
        const SSBlock* tb = p0.block(b.p, b.degree - 1);
        for (std::size_t j = 0; j < mine.size(); ++j) {
            CoalgElt dz = C.delta().delta(mine[j]);
            for (std::size_t i = 0; i < b.d.size(); ++i) {
                const Wedge& tw = tb->reps[i].terms().begin()->first;
                CHECK(b.d[i][j] == dz.coeff(tw));
            }
        }
        (void)ws;
    }

    // E^1 has the dimensions of the free graded-commutative object on the
    // suspended homology of the Lie algebra
    std::vector<std::pair<long, int>> groups;
    for (long m = 1; m <= 5; ++m) {
        int h = dgl.homology(m).dim();
        if (h > 0) groups.push_back({m + 1, h});
    }
    SSPage p1 = page(C, 1);
    for (long n = 2; n <= 6; ++n)
        for (int p = 1; p <= static_cast<int>(n / 2); ++p)
            CHECK(p1.dim(p, n) == wedge_count(groups, 0, p, n));
}

TEST_CASE("pages compose as homology of the previous differential") {
    Dgl dgl = two_gen_dgl(6);
    std::vector<FilteredCDGC> complexes;
    complexes.emplace_back(quillen_chains(dgl, 6), 8);
    complexes.emplace_back(example_chains(), 16);
    for (const FilteredCDGC& C : complexes)
        for (int k = 0; k <= 3; ++k) {
            SSPage cur = page(C, k);
            SSPage nxt = page(C, k + 1);
            for (auto& [key, b] : cur.blocks()) {
                // (d^k)^2 = 0
                const SSBlock* tb = cur.block(b.p - k, b.degree - 1);
                if (tb && !tb->d.empty() && !b.d.empty())
                    for (std::size_t i = 0; i < tb->d.size(); ++i)
                        for (std::size_t j = 0; j < b.reps.size(); ++j) {
                            Rational acc(0);
                            for (std::size_t t = 0; t < b.d.size(); ++t)
                                acc += tb->d[i][t] * b.d[t][j];
                            CHECK(is_zero(acc));
                        }
                // dim E^{k+1} = dim ker d^k - rank of the incoming d^k
                if (b.degree + 1 > cur.max_degree()) continue;
                long out_rank = b.d.empty() ? 0 : dense_rank(b.d);
                const SSBlock* in = cur.block(b.p + k, b.degree + 1);
                long in_rank = 0;
                if (in && !in->d.empty()) in_rank = dense_rank(in->d);
                CHECK(nxt.dim(b.p, b.degree) ==
                      static_cast<long>(b.reps.size()) - out_rank - in_rank);
            }
        }
}

TEST_CASE("stable page dimensions add up to chain homology") {
    Dgl dgl = two_gen_dgl(6);
    std::vector<FilteredCDGC> complexes;
    complexes.emplace_back(example_chains(), 20);
    complexes.emplace_back(quillen_chains(dgl, 6), 8);
    for (const FilteredCDGC& C : complexes) {
        const long safe = C.safe_degree();
        const int kstar = static_cast<int>(safe / 2) + 1;
        SSPage stable = page(C, kstar);
        for (long n = 2; n < safe; ++n) CHECK(total_dim(stable, n) == homology_dim(C, n));
    }
}

TEST_CASE("a lone triple bracket lives on the second differential") {
    // degrees 1,1,2 -> 5: the only operation drops word length by two
    LInfStructure L({{"a", 1}, {"b", 1}, {"c", 2}, {"e", 5}}, 3);
    L.set_bracket({0, 1, 2}, LInfStructure::Elt(3));
    REQUIRE(check_generalized_jacobi(L, 6).ok);
    FilteredCDGC C(brackets_to_coderivation(L), 14);

    // below the operation's page the chains pass through untouched
    for (int k = 0; k <= 1; ++k) {
        SSPage pg = page(C, k);
        for (auto& [key, b] : pg.blocks())
            for (auto& row : b.d)
                for (auto& entry : row) CHECK(is_zero(entry));
        for (long n = 2; n <= pg.max_degree(); ++n)
            for (int p = 1; p <= static_cast<int>(n / 2); ++p) {
                long expect = 0;
                for (const Wedge& w : C.words(n))
                    if (static_cast<int>(w.size()) == p) ++expect;
                CHECK(pg.dim(p, n) == expect);
            }
    }
    // d^2 on the page of sa^sb^sc words equals the bracket coefficient
    SSPage p2 = page(C, 2);
    const SSBlock* src = p2.block(3, 7);
    REQUIRE(src);
    bool hit = false;
    for (std::size_t j = 0; j < src->reps.size(); ++j) {
        if (is_zero(src->reps[j].coeff({0, 1, 2}))) continue;
        for (std::size_t i = 0; i < src->d.size(); ++i)
            if (!is_zero(src->d[i][j])) hit = true;
    }
    CHECK(hit);

    CollapseReport bad = collapses_through(C, 2, C.safe_degree());
    CHECK_FALSE(bad.collapsed);
    CHECK(bad.page == 2);
    CHECK_FALSE(bad.witness.empty());
    // nothing else moves: one degree-shift means every other page is zero
    CHECK(collapses_through(C, 3, C.safe_degree()).collapsed);

    CHECK_THROWS(page(C, -1));
    CHECK_THROWS(page(C, 2, C.safe_degree() + 1));
    CHECK_THROWS(collapses_through(C, 2, C.safe_degree() + 1));
}

TEST_CASE("bracket-only structures collapse at the second page") {
    std::mt19937 rng(77310);
    for (int r = 0; r < 10; ++r) {
        const int ngens = 2 + static_cast<int>(rng() % 2);
        const long T = 5 + static_cast<long>(rng() % 3);
        GeneratorSet gs(T);
        for (int i = 0; i < ngens; ++i)
            gs.add("g" + std::to_string(i), 1 + static_cast<long>(rng() % 3));
        Dgl dgl(gs);
        FilteredCDGC C(quillen_chains(dgl, T), T + 2);
        CollapseReport rep = collapses_through(C, 2, C.safe_degree());
        CHECK(rep.collapsed);
        CHECK(rep.from_page == 2);
    }
    // the running example collapses at the second page through degree 30
    FilteredCDGC C(example_chains(), 31);
    CollapseReport rep = collapses_through(C, 2, 30);
    CHECK(rep.collapsed);
    CHECK(rep.max_degree == 30);
}
