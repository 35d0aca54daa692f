#include <doctest.h>

#include <numeric>

#include "lieq/linalg.hpp"
#include "lieq/whitehead.hpp"

using namespace lieq;

namespace {

bool all_zero(const std::vector<Rational>& v) {
    for (auto& r : v)
        if (!is_zero(r)) return false;
    return true;
}

bool all_zero(const std::vector<Poly>& v) {
    for (auto& p : v)
        if (!p.is_zero_poly()) return false;
    return true;
}

// Nineteen-generator complex: four 3-sphere classes v1..v4 with cells v_S
// killing every product obstruction (one generator per subset, including the
// top cell), one extra degree-5 cycle z, and three cells a,b,c attached along
// [z,v2], [z,v3], [z,v4]. The class [v1,z] survives in degree 7.
struct NineCell {
    Dgl dgl;
    std::vector<int> vgen;  // subset mask -> generator id
    int z = -1;
    std::vector<LieSum<Rational>> classes;
};

NineCell& nine_cell() {
    static NineCell* nc = [] {
        const std::vector<long> dims{3, 3, 3, 3};
        GeneratorSet gs(12);
        std::vector<int> vgen(1 << 4, -1);
        for (int s = 1; s <= 4; ++s)
            for (int S = 1; S < (1 << 4); ++S) {
                if (__builtin_popcount(S) != s) continue;
                std::string name = "v";
                long deg = -1;
                for (int i = 0; i < 4; ++i)
                    if (S >> i & 1) {
                        name += std::to_string(i + 1);
                        deg += 3;
                    }
                vgen[S] = gs.add(name, deg);
            }
        int z = gs.add("z", 5);
        int a = gs.add("a", 8), b = gs.add("b", 8), c = gs.add("c", 8);

        auto* out = new NineCell{Dgl(gs), vgen, z, {}};
        auto& fl = out->dgl.lie();
        for (int S = 1; S < (1 << 4); ++S) {
            if (__builtin_popcount(S) < 2) continue;
            LieSum<Rational> sum;
            for (const Splitting& sp : anchored_splittings(dims, S))
                sum.add(fl.bracket(fl.leaf(vgen[sp.first]), fl.leaf(vgen[sp.second])),
                        Rational(sp.sign));
            out->dgl.set_d(vgen[S], sum);
        }
        int killed[3] = {a, b, c};
        for (int j = 1; j <= 3; ++j)
            out->dgl.set_d(killed[j - 1],
                           LieSum<Rational>(fl.bracket(fl.leaf(z), fl.leaf(vgen[1 << j]))));
        for (int i = 0; i < 4; ++i)
            out->classes.push_back(LieSum<Rational>(fl.leaf(vgen[1 << i])));
        REQUIRE(out->dgl.check_d_squared(12));
        return out;
    }();
    return *nc;
}

// Three-class version without a top cell, so the three-term product sum keeps
// a nonzero class in degree 7. Optionally adds an acyclic pair (e, t) with
// d(t) = e to provide boundaries in the class degree.
struct Small {
    Dgl dgl;
    int v1, v2, v3, v12, v13, v23, z, a, b, e, t;
    std::vector<LieSum<Rational>> classes;
};

Small small_complex(bool with_pair) {
    GeneratorSet gs(8);
    int v1 = gs.add("v1", 2), v2 = gs.add("v2", 2), v3 = gs.add("v3", 2);
    int v12 = gs.add("v12", 5), v13 = gs.add("v13", 5), v23 = gs.add("v23", 5);
    int z = gs.add("z", 5);
    int a = gs.add("a", 8), b = gs.add("b", 8);
    int e = -1, t = -1;
    if (with_pair) {
        e = gs.add("e", 2);
        t = gs.add("t", 3);
    }
    Small out{Dgl(gs), v1, v2, v3, v12, v13, v23, z, a, b, e, t, {}};
    auto& fl = out.dgl.lie();
    auto br = [&](int g, int h) { return LieSum<Rational>(fl.bracket(fl.leaf(g), fl.leaf(h))); };
    out.dgl.set_d(v12, br(v1, v2));
    out.dgl.set_d(v13, br(v1, v3));
    out.dgl.set_d(v23, br(v2, v3));
    out.dgl.set_d(a, br(z, v2));
    out.dgl.set_d(b, br(z, v3));
    if (with_pair) out.dgl.set_d(t, LieSum<Rational>(fl.leaf(e)));
    REQUIRE(out.dgl.check_d_squared(8));
    out.classes = {LieSum<Rational>(fl.leaf(v1)), LieSum<Rational>(fl.leaf(v2)),
                   LieSum<Rational>(fl.leaf(v3))};
    return out;
}

}  // namespace

TEST_CASE("splitting signs match the pinned tables") {
    auto signs = [](const std::vector<long>& d) {
        std::vector<int> out;
        for (auto& sp : anchored_splittings(d, (1 << d.size()) - 1)) out.push_back(sp.sign);
        return out;
    };
    // blocks are enumerated with the anchor first: {1}, {1,2}, {1,3}, ...
    CHECK(signs({3, 3, 3}) == std::vector<int>{-1, 1, -1});
    CHECK(signs({2, 3, 4}) == std::vector<int>{1, 1, -1});
    CHECK(signs({3, 4, 5}) == std::vector<int>{-1, 1, -1});
    CHECK(signs({2, 2, 2}) == std::vector<int>{1, 1, 1});
    CHECK(signs({3, 3, 3, 3}) == std::vector<int>{1, 1, -1, 1, 1, -1, 1});

    // every pair splits with a plus sign
    for (long n = 2; n <= 7; ++n)
        for (long m = 2; m <= 7; ++m) CHECK(split_sign({n, m}, {0}) == 1);

    CHECK_THROWS_AS(split_sign({3, 3}, {}), std::invalid_argument);
    CHECK_THROWS_AS(split_sign({3, 3}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(split_sign({3, 3, 3}, {1, 1}), std::invalid_argument);
}

TEST_CASE("built models certify square-zero differentials across shapes") {
    const std::vector<std::vector<long>> shapes = {
        {3, 3, 3},          {2, 2, 2},       {2, 3, 4},          {2, 2, 3},
        {3, 4, 5},          {3, 3, 4},       {4, 5, 6},          {2, 2, 4},
        {2, 4, 6},          {3, 5, 7},       {3, 3, 3, 3},       {2, 2, 2, 2},
        {2, 3, 4, 5},       {3, 3, 4, 4},    {3, 3, 3, 3, 3},    {2, 3, 3, 4, 4},
        {3, 3, 3, 3, 3, 3}, {2, 2, 3, 3, 4, 4}};
    for (auto& dims : shapes) {
        long N = std::accumulate(dims.begin(), dims.end(), 0L);
        WhiteheadModel m = build_model(dims, N + 1);  // certifies d^2=0, d(w)=0
        for (auto& [e, c] : m.w.terms()) CHECK(m.dgl.lie().degree(e) == N - 2);
    }
}

TEST_CASE("attaching cycle of the all-threes four-class model is the seven-term sum") {
    WhiteheadModel m = build_model({3, 3, 3, 3}, 13);
    auto& fl = m.dgl.lie();
    CHECK(m.w.size() == 7);
    auto wc = [&](int A, int B) {
        return m.w.coeff(fl.bracket(fl.leaf(m.gen(A)), fl.leaf(m.gen(B))));
    };
    CHECK(wc(0b0001, 0b1110) == Rational(1));
    CHECK(wc(0b0011, 0b1100) == Rational(1));
    CHECK(wc(0b0101, 0b1010) == Rational(-1));
    CHECK(wc(0b0111, 0b1000) == Rational(1));
    CHECK(wc(0b1001, 0b0110) == Rational(1));
    CHECK(wc(0b1011, 0b0100) == Rational(-1));
    CHECK(wc(0b1101, 0b0010) == Rational(1));

    // pairs get the plus sign, and the three-index differential matches the
    // pinned pattern
    auto dv = m.dgl.d(LieSum<Rational>(fl.leaf(m.gen(0b0011))));
    CHECK(dv == LieSum<Rational>(fl.bracket(fl.leaf(m.gen(0b0001)), fl.leaf(m.gen(0b0010)))));
    auto d123 = m.dgl.d(LieSum<Rational>(fl.leaf(m.gen(0b0111))));
    CHECK(d123.coeff(fl.bracket(fl.leaf(m.gen(0b0001)), fl.leaf(m.gen(0b0110)))) == Rational(-1));
    CHECK(d123.coeff(fl.bracket(fl.leaf(m.gen(0b0011)), fl.leaf(m.gen(0b0100)))) == Rational(1));
    CHECK(d123.coeff(fl.bracket(fl.leaf(m.gen(0b0101)), fl.leaf(m.gen(0b0010)))) == Rational(-1));

    // w is a cycle one degree below the missing top generator
    for (auto& [e, cfc] : m.w.terms()) CHECK(fl.degree(e) == 10);
    CHECK(fl.expand(m.dgl.d(m.w)).is_zero());
}

TEST_CASE("model construction validates its input") {
    CHECK_THROWS_AS(build_model({3}, 10), std::invalid_argument);
    CHECK_THROWS_AS(build_model({3, 1}, 10), std::invalid_argument);
    CHECK_THROWS_AS(build_model({3, 3}, 6), std::invalid_argument);
    CHECK_NOTHROW(build_model({3, 3}, 7));
}

TEST_CASE("two-class bracket set is the singleton product class") {
    GeneratorSet gs(8);
    int a = gs.add("a", 2), b = gs.add("b", 4);
    Dgl dgl(gs);
    auto& fl = dgl.lie();
    std::vector<LieSum<Rational>> cls{LieSum<Rational>(fl.leaf(a)),
                                      LieSum<Rational>(fl.leaf(b))};

    auto dt = dgl_target(dgl);
    BracketSet bs = bracket_set(*dt, cls, {3, 5});
    CHECK(bs.status == BracketSet::Status::Decided);
    CHECK(bs.degree == 6);
    CHECK(bs.params.empty());
    CHECK(bs.value ==
          dgl.class_coords(LieSum<Poly>(fl.bracket(fl.leaf(a), fl.leaf(b)), Poly(Rational(1))), 6));

    Classification c = classify(bs);
    CHECK(c.cardinality == Classification::Cardinality::Singleton);
    CHECK(c.zero == Classification::Zero::No);

    // the square of an even class vanishes identically
    BracketSet sq = bracket_set(*dt, {cls[0], cls[0]}, {3, 3});
    Classification csq = classify(sq);
    CHECK(csq.cardinality == Classification::Cardinality::Singleton);
    CHECK(csq.zero == Classification::Zero::Yes);
    CHECK(all_zero(csq.singleton));
}

TEST_CASE("bracket set is empty when a pairwise product obstruction survives") {
    GeneratorSet gs(9);
    int x1 = gs.add("x1", 2), x2 = gs.add("x2", 2), x3 = gs.add("x3", 2);
    Dgl dgl(gs);
    auto& fl = dgl.lie();
    std::vector<LieSum<Rational>> cls{LieSum<Rational>(fl.leaf(x1)),
                                      LieSum<Rational>(fl.leaf(x2)),
                                      LieSum<Rational>(fl.leaf(x3))};

    auto dt = dgl_target(dgl);
    BracketSet bs = bracket_set(*dt, cls, {3, 3, 3});
    CHECK(bs.status == BracketSet::Status::Empty);
    CHECK(bs.note.find("u12") != std::string::npos);
    Classification c = classify(bs);
    CHECK(c.cardinality == Classification::Cardinality::Empty);
    CHECK(c.zero == Classification::Zero::No);

    auto ht = homology_target(dgl);
    BracketSet bh = bracket_set(*ht, cls, {3, 3, 3});
    CHECK(bh.status == BracketSet::Status::Empty);

    // the formality criteria require a nonempty set
    CHECK_THROWS_AS(formality_obstruction(dgl, cls, {3, 3, 3}), std::invalid_argument);
}

TEST_CASE("zero-differential target with a nonempty set always contains zero") {
    Small sc = small_complex(false);
    auto ht = homology_target(sc.dgl);
    BracketSet bs = bracket_set(*ht, sc.classes, {3, 3, 3});
    CHECK(bs.status == BracketSet::Status::Decided);
    CHECK(bs.degree == 7);
    CHECK(bs.params.size() == 1);

    Classification c = classify(bs);
    CHECK(c.cardinality == Classification::Cardinality::Infinite);
    CHECK(c.witnesses.size() == 3);
    CHECK(c.zero == Classification::Zero::Yes);
    for (auto& [v, r] : c.zero_witness) CHECK(is_zero(r));
}

TEST_CASE("affine class that misses zero is detected") {
    Small sc = small_complex(false);
    auto& fl = sc.dgl.lie();

    auto dt = dgl_target(sc.dgl);
    BracketSet bs = bracket_set(*dt, sc.classes, {3, 3, 3});
    CHECK(bs.status == BracketSet::Status::Decided);
    CHECK(!bs.params.empty());

    // independent check that the value is (three-term sum) - mu*[v1,z] with
    // the two classes linearly independent: the constant part equals the
    // class of the product sum and no specialization can reach zero
    auto br = [&](int g, int h) { return fl.bracket(fl.leaf(g), fl.leaf(h)); };
    LieSum<Rational> psum;
    psum.add(br(sc.v1, sc.v23), Rational(-1));
    psum.add(br(sc.v12, sc.v3), Rational(1));
    psum.add(br(sc.v13, sc.v2), Rational(-1));
    auto psum_cls = sc.dgl.class_coords(psum, 7);
    CHECK(!all_zero(psum_cls));
    for (std::size_t i = 0; i < bs.value.size(); ++i)
        CHECK(bs.value[i].affine_const() == psum_cls[i]);
    auto v1z_cls = sc.dgl.class_coords(LieSum<Rational>(br(sc.v1, sc.z)), 7);
    DenseMat m(bs.value.size(), std::vector<Rational>(2));
    for (std::size_t i = 0; i < bs.value.size(); ++i) m[i] = {psum_cls[i], v1z_cls[i]};
    CHECK(dense_rank(m) == 2);

    Classification c = classify(bs);
    CHECK(c.cardinality == Classification::Cardinality::Infinite);
    CHECK(c.zero == Classification::Zero::No);

    FormalityReport fr = formality_obstruction(sc.dgl, sc.classes, {3, 3, 3});
    CHECK(fr.verdict == FormalityReport::Verdict::NotFormal1);
}

TEST_CASE("classification is stable under a representative change by a boundary") {
    Small sc = small_complex(true);
    auto& fl = sc.dgl.lie();
    auto dt = dgl_target(sc.dgl);

    BracketSet plain = bracket_set(*dt, sc.classes, {3, 3, 3});
    auto shifted_classes = sc.classes;
    shifted_classes[0].add(fl.leaf(sc.e), Rational(1));  // v1 + d(t)
    BracketSet shifted = bracket_set(*dt, shifted_classes, {3, 3, 3});

    CHECK(plain.status == BracketSet::Status::Decided);
    CHECK(shifted.status == BracketSet::Status::Decided);
    Classification cp = classify(plain), cs = classify(shifted);
    CHECK(cp.cardinality == cs.cardinality);
    CHECK(cp.zero == cs.zero);
    CHECK(cp.cardinality == Classification::Cardinality::Infinite);
    CHECK(cp.zero == Classification::Zero::No);
}

TEST_CASE("triple product of the projective-plane-type model avoids zero") {
    GeneratorSet gs(8);
    int a = gs.add("a", 1), b = gs.add("b", 3);
    Dgl dgl(gs);
    auto& fl = dgl.lie();
    dgl.set_d(b, LieSum<Rational>(fl.bracket(fl.leaf(a), fl.leaf(a))));
    REQUIRE(dgl.check_d_squared(8));
    std::vector<LieSum<Rational>> cls(3, LieSum<Rational>(fl.leaf(a)));

    auto dt = dgl_target(dgl);
    BracketSet bs = bracket_set(*dt, cls, {2, 2, 2});
    CHECK(bs.status == BracketSet::Status::Decided);
    CHECK(bs.degree == 4);
    CHECK(bs.params.empty());  // no cycles survive in the extension degree
    Classification c = classify(bs);
    CHECK(c.cardinality == Classification::Cardinality::Singleton);
    CHECK(c.zero == Classification::Zero::No);
    // the single value is 3*[a,b]
    auto expected = dgl.class_coords(
        LieSum<Poly>(fl.bracket(fl.leaf(a), fl.leaf(b)), Poly(Rational(3))), 4);
    CHECK(bs.value == expected);

    auto ht = homology_target(dgl);
    Classification ch = classify(bracket_set(*ht, cls, {2, 2, 2}));
    CHECK(ch.cardinality == Classification::Cardinality::Singleton);
    CHECK(ch.zero == Classification::Zero::Yes);

    FormalityReport fr = formality_obstruction(dgl, cls, {2, 2, 2});
    CHECK(fr.verdict == FormalityReport::Verdict::NotFormal1);
}

TEST_CASE("free model with a single even class is inconclusive") {
    GeneratorSet gs(8);
    int x = gs.add("x", 2);
    Dgl dgl(gs);
    auto& fl = dgl.lie();
    std::vector<LieSum<Rational>> cls(3, LieSum<Rational>(fl.leaf(x)));

    FormalityReport fr = formality_obstruction(dgl, cls, {3, 3, 3});
    CHECK(fr.verdict == FormalityReport::Verdict::Inconclusive);
    CHECK(fr.cls_dgl.cardinality == Classification::Cardinality::Singleton);
    CHECK(fr.cls_dgl.zero == Classification::Zero::Yes);
    CHECK(fr.cls_homology.cardinality == Classification::Cardinality::Singleton);
}

TEST_CASE("classification of synthetic parameter classes") {
    Var l = intern_param("l"), m = intern_param("m");
    auto mk = [](std::vector<Poly> value, std::vector<Var> params) {
        BracketSet b;
        b.status = BracketSet::Status::Decided;
        b.degree = 0;
        b.value = std::move(value);
        b.params = std::move(params);
        return b;
    };

    // product form: zero needs the bounded search
    Classification c1 = classify(mk({Poly::variable(l) * Poly::variable(m) - Poly(Rational(6))},
                                    {l, m}));
    CHECK(c1.cardinality == Classification::Cardinality::Infinite);
    CHECK(c1.zero == Classification::Zero::Yes);
    {
        Rational prod(1);
        for (auto& [v, r] : c1.zero_witness) prod *= r;
        CHECK(prod == Rational(6));
    }

    // no rational root at all
    Classification c2 = classify(mk({Poly::variable(l) * Poly::variable(l) - Poly(Rational(2))},
                                    {l}));
    CHECK(c2.cardinality == Classification::Cardinality::Infinite);
    CHECK(c2.zero == Classification::Zero::Unknown);

    // inconsistent affine system
    Classification c3 = classify(mk({Poly::variable(l) + Poly(Rational(1)),
                                     Poly::variable(l) - Poly(Rational(1))},
                                    {l}));
    CHECK(c3.cardinality == Classification::Cardinality::Infinite);
    CHECK(c3.zero == Classification::Zero::No);

    // constants
    Classification c4 = classify(mk({Poly(Rational(2))}, {}));
    CHECK(c4.cardinality == Classification::Cardinality::Singleton);
    CHECK(c4.zero == Classification::Zero::No);
    Classification c5 = classify(mk({Poly(), Poly()}, {}));
    CHECK(c5.cardinality == Classification::Cardinality::Singleton);
    CHECK(c5.zero == Classification::Zero::Yes);

    // undecided status propagates
    BracketSet u;
    u.status = BracketSet::Status::Undecided;
    u.note = "nonlinear constraint";
    Classification c6 = classify(u);
    CHECK(c6.cardinality == Classification::Cardinality::Undecided);
    CHECK(c6.zero == Classification::Zero::Unknown);
}

TEST_CASE("bracket set validates its class inputs") {
    GeneratorSet gs(8);
    int a = gs.add("a", 2), b = gs.add("b", 3);
    Dgl dgl(gs);
    auto& fl = dgl.lie();
    dgl.set_d(b, LieSum<Rational>(fl.leaf(a)));
    auto dt = dgl_target(dgl);

    // b is not a cycle; a is a cycle but of degree 2, not 3
    std::vector<LieSum<Rational>> bad1{LieSum<Rational>(fl.leaf(b)),
                                       LieSum<Rational>(fl.leaf(b))};
    CHECK_THROWS_AS(bracket_set(*dt, bad1, {4, 4}), std::invalid_argument);
    std::vector<LieSum<Rational>> bad2{LieSum<Rational>(fl.leaf(a)),
                                       LieSum<Rational>(fl.leaf(a))};
    CHECK_THROWS_AS(bracket_set(*dt, bad2, {4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(bracket_set(*dt, bad2, {3}), std::invalid_argument);
}

TEST_CASE("nine-cell homology matches the hand computation") {
    NineCell& nc = nine_cell();
    auto& fl = nc.dgl.lie();
    CHECK(nc.dgl.homology(2).dim() == 4);
    CHECK(nc.dgl.homology(4).dim() == 0);
    CHECK(nc.dgl.homology(5).dim() == 1);
    CHECK(nc.dgl.homology(7).dim() == 1);
    CHECK(nc.dgl.homology(8).dim() == 0);

    // z spans degree 5; [v1,z] survives in degree 7 while [vj,z] bounds
    CHECK(!all_zero(nc.dgl.class_coords(LieSum<Rational>(fl.leaf(nc.z)), 5)));
    auto vz = [&](int i) {
        return LieSum<Rational>(fl.bracket(fl.leaf(nc.vgen[1 << i]), fl.leaf(nc.z)));
    };
    CHECK(!all_zero(nc.dgl.class_coords(vz(0), 7)));
    for (int j = 1; j <= 3; ++j) CHECK(all_zero(nc.dgl.class_coords(vz(j), 7)));
}

TEST_CASE("nine-cell bracket sets and the formality verdict") {
    NineCell& nc = nine_cell();
    const std::vector<long> dims{3, 3, 3, 3};

    auto dt = dgl_target(nc.dgl);
    BracketSet in_dgl = bracket_set(*dt, nc.classes, dims);
    CHECK(in_dgl.status == BracketSet::Status::Decided);
    CHECK(in_dgl.degree == 10);
    CHECK(in_dgl.extension.size() == 14);
    CHECK(!in_dgl.params.empty());
    Classification cd = classify(in_dgl);
    CHECK(cd.cardinality == Classification::Cardinality::Infinite);
    CHECK(cd.witnesses.size() == 3);
    CHECK(cd.zero == Classification::Zero::Yes);
    for (auto& [v, r] : cd.zero_witness) CHECK(is_zero(r));

    auto ht = homology_target(nc.dgl);
    BracketSet in_h = bracket_set(*ht, nc.classes, dims);
    CHECK(in_h.status == BracketSet::Status::Decided);
    CHECK(in_h.params.empty());
    CHECK(all_zero(in_h.value));
    Classification chh = classify(in_h);
    CHECK(chh.cardinality == Classification::Cardinality::Singleton);
    CHECK(chh.zero == Classification::Zero::Yes);

    FormalityReport fr = formality_obstruction(nc.dgl, nc.classes, dims);
    CHECK(fr.verdict == FormalityReport::Verdict::NotFormal2);
}
