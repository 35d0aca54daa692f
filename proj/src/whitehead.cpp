#include "lieq/whitehead.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "lieq/graded.hpp"
#include "lieq/linalg.hpp"

namespace lieq {

namespace {

int popcnt(int m) { return std::popcount(static_cast<unsigned>(m)); }

bool poly_expand_zero(FreeLie& fl, const LieSum<Poly>& v) {
    std::map<FreeLie::Word, Poly> acc;
    for (auto& [e, p] : v.terms())
        for (auto& [w, c] : fl.expand(e).terms()) {
            Poly q = p;
            q *= c;
            acc[w] += q;
        }
    for (auto& [w, q] : acc)
        if (!q.is_zero_poly()) return false;
    return true;
}

}  // namespace

int split_sign(const std::vector<long>& dims, const std::vector<int>& first_block) {
    int s = static_cast<int>(dims.size());
    int p = static_cast<int>(first_block.size());
    if (p < 1 || p >= s) throw std::invalid_argument("split block must be proper and nonempty");
    std::vector<char> in_a(s, 0);
    int prev = -1;
    for (int j : first_block) {
        if (j <= prev || j >= s) throw std::invalid_argument("split block must be ascending positions");
        prev = j;
        in_a[j] = 1;
    }
    Perm seq(first_block.begin(), first_block.end());
    for (int j = 0; j < s; ++j)
        if (!in_a[j]) seq.push_back(j);
    std::vector<long> udeg(dims);
    for (auto& d : udeg) d -= 1;
    long ua = -1;
    for (int j : first_block) ua += dims[j];
    int sign = sgn_of_perm(seq) * koszul_sign(seq, udeg);
    if (((s + p + 1) & 1) && ((ua + 1) & 1)) sign = -sign;
    return sign;
}

std::vector<Splitting> anchored_splittings(const std::vector<long>& dims, int subset) {
    int k = static_cast<int>(dims.size());
    if (subset <= 0 || subset >= (1 << k))
        throw std::invalid_argument("subset out of range");
    std::vector<int> idx;
    for (int i = 0; i < k; ++i)
        if (subset >> i & 1) idx.push_back(i);
    int s = static_cast<int>(idx.size());
    if (s < 2) throw std::invalid_argument("splittings need at least two indices");
    std::vector<long> mm(s);
    for (int j = 0; j < s; ++j) mm[j] = dims[idx[j]];
    std::vector<Splitting> out;
    for (int am = 1; am < (1 << s) - 1; ++am) {
        if (!(am & 1)) continue;  // anchor the smallest index in the first block
        std::vector<int> a;
        int ag = 0;
        for (int j = 0; j < s; ++j)
            if (am >> j & 1) {
                a.push_back(j);
                ag |= 1 << idx[j];
            }
        out.push_back({ag, subset ^ ag, split_sign(mm, a)});
    }
    return out;
}

std::string subset_label(int subset, int k) {
    std::string n = "u";
    bool first = true;
    for (int i = 0; i < k; ++i)
        if (subset >> i & 1) {
            if (!first && k > 9) n += "_";
            n += std::to_string(i + 1);
            first = false;
        }
    return n;
}

WhiteheadModel build_model(const std::vector<long>& dims, long truncation) {
    int k = static_cast<int>(dims.size());
    if (k < 2) throw std::invalid_argument("need at least two dimensions");
    long N = 0;
    for (long n : dims) {
        if (n < 2) throw std::invalid_argument("dimensions must be at least 2");
        N += n;
    }
    if (truncation < N + 1)
        throw std::invalid_argument("truncation must be at least the dimension sum plus one");

    int full = (1 << k) - 1;
    GeneratorSet gs(truncation);
    std::vector<int> gid(1 << k, -1);
    for (int s = 1; s < k; ++s)
        for (int S = 1; S < full; ++S) {
            if (popcnt(S) != s) continue;
            long deg = -1;
            for (int i = 0; i < k; ++i)
                if (S >> i & 1) deg += dims[i];
            gid[S] = gs.add(subset_label(S, k), deg);
        }

    WhiteheadModel m{dims, Dgl(std::move(gs)), std::move(gid), {}};
    FreeLie& fl = m.dgl.lie();
    auto splitting_sum = [&](int S) {
        LieSum<Rational> v;
        for (const Splitting& sp : anchored_splittings(dims, S))
            v.add(fl.bracket(fl.leaf(m.gen(sp.first)), fl.leaf(m.gen(sp.second))),
                  Rational(sp.sign));
        return v;
    };
    for (int S = 1; S < full; ++S)
        if (m.gen_of_subset[S] >= 0 && popcnt(S) >= 2)
            m.dgl.set_d(m.gen_of_subset[S], splitting_sum(S));
    m.w = splitting_sum(full);

    std::string witness;
    if (!m.dgl.check_d_squared(truncation, &witness))
        throw std::logic_error("model differential does not square to zero: " + witness);
    if (!fl.expand(m.dgl.d(m.w)).is_zero())
        throw std::logic_error("attaching element is not a cycle");
    return m;
}

void Target::Elt::scale_add(const Poly& c, const Elt& o) {
    if (c.is_zero_poly()) return;
    for (auto& [e, p] : o.lie.terms()) lie.add(e, c * p);
    if (coords.size() < o.coords.size()) coords.resize(o.coords.size());
    for (std::size_t i = 0; i < o.coords.size(); ++i) coords[i] += c * o.coords[i];
}

void Target::Elt::subst(Var v, const Poly& value) {
    LieSum<Poly> nl;
    for (auto& [e, p] : lie.terms()) nl.add(e, p.subst(v, value));
    lie = std::move(nl);
    for (auto& p : coords) p = p.subst(v, value);
}

std::set<Var> Target::Elt::vars() const {
    std::set<Var> out;
    for (auto& [e, p] : lie.terms()) {
        auto vs = p.vars();
        out.insert(vs.begin(), vs.end());
    }
    for (auto& p : coords) {
        auto vs = p.vars();
        out.insert(vs.begin(), vs.end());
    }
    return out;
}

namespace {

class DglTarget final : public Target {
public:
    explicit DglTarget(Dgl& L) : L_(L) {}

    Elt zero(long degree) override {
        Elt e;
        e.degree = degree;
        return e;
    }

    Elt from_cycle(const LieSum<Rational>& rep, long degree) override {
        if (!L_.is_cycle(rep, degree))
            throw std::invalid_argument("class representative is not a cycle of degree " +
                                        std::to_string(degree));
        Elt e;
        e.degree = degree;
        for (auto& [ex, c] : rep.terms()) e.lie.add(ex, Poly(c));
        return e;
    }

    Elt bracket(const Elt& a, const Elt& b) override {
        Elt e;
        e.degree = a.degree + b.degree;
        e.lie = lieq::bracket(L_.lie(), a.lie, b.lie);
        return e;
    }

    bool is_zero(const Elt& e) override { return poly_expand_zero(L_.lie(), e.lie); }

    BoundarySolve solve_boundary(const Elt& target, long n) override {
        Dgl::PreimagePoly pre = L_.boundary_preimage(target.lie, n);
        BoundarySolve out;
        out.obstruction = std::move(pre.obstruction);
        out.particular.degree = n + 1;
        out.particular.lie = std::move(pre.particular);
        for (auto& kc : pre.kernel) {
            Elt ke;
            ke.degree = n + 1;
            for (auto& [ex, c] : kc.terms()) ke.lie.add(ex, Poly(c));
            out.kernel.push_back(std::move(ke));
        }
        return out;
    }

    std::vector<Poly> class_coords(const Elt& cycle, long n) override {
        if (!poly_expand_zero(L_.lie(), L_.d(cycle.lie)))
            throw std::logic_error("staged extension broke the chain map");
        return L_.class_coords(cycle.lie, n);
    }

    const std::vector<LieSum<Rational>>& class_basis(long n) override {
        return L_.homology(n).reps;
    }

    std::string to_string(const Elt& e) override {
        std::string s = lieq::to_string(L_.lie(), e.lie);
        return s.empty() ? "0" : s;
    }

private:
    Dgl& L_;
};

class HomologyTarget final : public Target {
public:
    explicit HomologyTarget(Dgl& L) : L_(L) {}

    Elt zero(long degree) override {
        Elt e;
        e.degree = degree;
        e.coords.assign(dim(degree), Poly());
        return e;
    }

    Elt from_cycle(const LieSum<Rational>& rep, long degree) override {
        Elt e;
        e.degree = degree;
        for (auto& c : L_.class_coords(rep, degree)) e.coords.push_back(Poly(c));
        return e;
    }

    Elt bracket(const Elt& a, const Elt& b) override {
        long dc = a.degree + b.degree;
        auto& sc = constants(a.degree, b.degree);
        Elt out = zero(dc);
        for (std::size_t i = 0; i < a.coords.size(); ++i) {
            if (a.coords[i].is_zero_poly()) continue;
            for (std::size_t j = 0; j < b.coords.size(); ++j) {
                if (b.coords[j].is_zero_poly()) continue;
                Poly prod = a.coords[i] * b.coords[j];
                const auto& row = sc[i][j];
                for (std::size_t r = 0; r < row.size(); ++r) {
                    if (lieq::is_zero(row[r])) continue;
                    Poly t = prod;
                    t *= row[r];
                    out.coords[r] += t;
                }
            }
        }
        return out;
    }

    bool is_zero(const Elt& e) override {
        for (auto& p : e.coords)
            if (!p.is_zero_poly()) return false;
        return true;
    }

    // the differential is zero: solvable iff the target class vanishes, and
    // every class one degree up is in the kernel
    BoundarySolve solve_boundary(const Elt& target, long n) override {
        BoundarySolve out;
        out.obstruction = target.coords;
        out.particular = zero(n + 1);
        for (long i = 0; i < dim(n + 1); ++i) {
            Elt k = zero(n + 1);
            k.coords[i] = Poly(Rational(1));
            out.kernel.push_back(std::move(k));
        }
        return out;
    }

    std::vector<Poly> class_coords(const Elt& cycle, long n) override {
        if (cycle.degree != n)
            throw std::invalid_argument("class of an element of the wrong degree");
        std::vector<Poly> out = cycle.coords;
        out.resize(dim(n));
        return out;
    }

    const std::vector<LieSum<Rational>>& class_basis(long n) override {
        return L_.homology(n).reps;
    }

    std::string to_string(const Elt& e) override {
        const auto& reps = L_.homology(e.degree).reps;
        std::string out;
        for (std::size_t i = 0; i < e.coords.size(); ++i) {
            if (e.coords[i].is_zero_poly()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + e.coords[i].to_string() + ")*[" +
                   lieq::to_string(L_.lie(), reps[i]) + "]";
        }
        return out.empty() ? "0" : out;
    }

private:
    long dim(long n) { return L_.homology(n).dim(); }

    using Table = std::vector<std::vector<std::vector<Rational>>>;
    Table& constants(long da, long db) {
        auto key = std::make_pair(da, db);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const auto& A = L_.homology(da).reps;
        const auto& B = L_.homology(db).reps;
        Table t(A.size(), std::vector<std::vector<Rational>>(B.size()));
        for (std::size_t i = 0; i < A.size(); ++i)
            for (std::size_t j = 0; j < B.size(); ++j)
                t[i][j] = L_.class_coords(lieq::bracket(L_.lie(), A[i], B[j]), da + db);
        return cache_.emplace(key, std::move(t)).first->second;
    }

    Dgl& L_;
    std::map<std::pair<long, long>, Table> cache_;
};

}  // namespace

std::unique_ptr<Target> dgl_target(Dgl& L) { return std::make_unique<DglTarget>(L); }
std::unique_ptr<Target> homology_target(Dgl& L) { return std::make_unique<HomologyTarget>(L); }

BracketSet bracket_set(Target& target, const std::vector<LieSum<Rational>>& classes,
                       const std::vector<long>& dims) {
    int k = static_cast<int>(dims.size());
    if (k < 2) throw std::invalid_argument("need at least two classes");
    if (classes.size() != dims.size())
        throw std::invalid_argument("one class per dimension required");
    long N = 0;
    for (long n : dims) {
        if (n < 2) throw std::invalid_argument("dimensions must be at least 2");
        N += n;
    }
    int full = (1 << k) - 1;

    std::vector<Target::Elt> phi(1 << k);
    std::vector<char> got(1 << k, 0);
    for (int i = 0; i < k; ++i) {
        phi[1 << i] = target.from_cycle(classes[i], dims[i] - 1);
        got[1 << i] = 1;
    }

    BracketSet out;
    out.degree = N - 2;
    auto subset_degree = [&](int S) {
        long d = -1;
        for (int i = 0; i < k; ++i)
            if (S >> i & 1) d += dims[i];
        return d;
    };
    auto target_of = [&](int S) {
        Target::Elt acc = target.zero(subset_degree(S) - 1);
        for (const Splitting& sp : anchored_splittings(dims, S))
            acc.scale_add(Poly(Rational(sp.sign)), target.bracket(phi[sp.first], phi[sp.second]));
        return acc;
    };
    auto record_extension = [&]() {
        for (int s = 1; s < k; ++s)
            for (int S = 1; S < full; ++S)
                if (popcnt(S) == s && got[S])
                    out.extension.push_back({subset_label(S, k), target.to_string(phi[S])});
    };

    for (int s = 2; s < k; ++s) {
        for (int S = 1; S < full; ++S) {
            if (popcnt(S) != s) continue;
            long dS = subset_degree(S);
            while (true) {
                Target::BoundarySolve sol = target.solve_boundary(target_of(S), dS - 1);
                const Poly* bad = nullptr;
                for (auto& q : sol.obstruction)
                    if (!q.is_zero_poly()) {
                        bad = &q;
                        break;
                    }
                if (!bad) {
                    Target::Elt val = std::move(sol.particular);
                    for (auto& ke : sol.kernel)
                        val.scale_add(Poly::variable(fresh_param("c")), ke);
                    phi[S] = std::move(val);
                    got[S] = 1;
                    break;
                }
                if (bad->is_constant()) {
                    out.status = BracketSet::Status::Empty;
                    out.note = "no extension over " + subset_label(S, k) +
                               ": constant obstruction " + bad->to_string();
                    record_extension();
                    return out;
                }
                if (!bad->is_affine()) {
                    out.status = BracketSet::Status::Undecided;
                    out.note = "nonlinear solvability constraint over " + subset_label(S, k) +
                               ": " + bad->to_string() + " = 0";
                    record_extension();
                    return out;
                }
                // eliminate the newest parameter of the affine constraint
                Var v = *bad->vars().rbegin();
                Rational cv = bad->affine_coeff(v);
                Poly rhs = *bad;
                Poly sub = Poly::variable(v);
                sub *= -cv;
                rhs += sub;
                rhs *= Rational(-1) / cv;
                for (int S2 = 1; S2 < full; ++S2)
                    if (got[S2]) phi[S2].subst(v, rhs);
            }
        }
    }

    out.value = target.class_coords(target_of(full), N - 2);
    std::set<Var> vs;
    for (auto& p : out.value) {
        auto pv = p.vars();
        vs.insert(pv.begin(), pv.end());
    }
    out.params.assign(vs.begin(), vs.end());
    out.status = BracketSet::Status::Decided;
    record_extension();
    return out;
}

namespace {

Rational eval_poly(const Poly& p, const std::map<Var, Rational>& a) {
    Rational acc(0);
    for (auto& [m, c] : p.terms()) {
        Rational t = c;
        for (auto& [v, e] : m.factors) {
            auto it = a.find(v);
            if (it == a.end()) throw std::logic_error("unbound parameter in evaluation");
            for (unsigned q = 0; q < e; ++q) t *= it->second;
        }
        acc += t;
    }
    return acc;
}

std::vector<Rational> eval_value(const std::vector<Poly>& value,
                                 const std::map<Var, Rational>& a) {
    std::vector<Rational> out;
    out.reserve(value.size());
    for (auto& p : value) out.push_back(eval_poly(p, a));
    return out;
}

// assignments over the value list ordered by total index weight; f returning
// true stops the walk
template <class F>
void enumerate_assignments(const std::vector<Var>& vars, const std::vector<Rational>& values,
                           long cap, F&& f) {
    int m = static_cast<int>(vars.size());
    long top = static_cast<long>(values.size()) - 1;
    long seen = 0;
    bool done = false;
    std::vector<int> idx(m, 0);
    auto go = [&](auto&& self, int pos, long rem) -> void {
        if (done || seen >= cap) return;
        if (pos == m) {
            if (rem == 0) {
                std::map<Var, Rational> a;
                for (int i = 0; i < m; ++i) a[vars[i]] = values[idx[i]];
                ++seen;
                if (f(a)) done = true;
            }
            return;
        }
        long lo = std::max<long>(0, rem - top * (m - pos - 1));
        long hi = std::min(top, rem);
        for (long v = lo; v <= hi && !done && seen < cap; ++v) {
            idx[pos] = static_cast<int>(v);
            self(self, pos + 1, rem - v);
        }
    };
    for (long w = 0; w <= top * m && !done && seen < cap; ++w) go(go, 0, w);
}

std::vector<Rational> bounded_rationals(long bound) {
    struct Item {
        long num, den;
    };
    std::vector<Item> items;
    for (long den = 1; den <= bound; ++den)
        for (long num = -bound; num <= bound; ++num) {
            if (num == 0 && den != 1) continue;
            if (num != 0 && std::gcd(num < 0 ? -num : num, den) != 1) continue;
            items.push_back({num, den});
        }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        long ma = std::max(a.num < 0 ? -a.num : a.num, a.den);
        long mb = std::max(b.num < 0 ? -b.num : b.num, b.den);
        if (ma != mb) return ma < mb;
        if (a.den != b.den) return a.den < b.den;
        long aa = a.num < 0 ? -a.num : a.num, ab = b.num < 0 ? -b.num : b.num;
        if (aa != ab) return aa < ab;
        return a.num > b.num;  // positive before negative
    });
    std::vector<Rational> out;
    out.reserve(items.size());
    for (auto& it : items) out.push_back(frac(it.num, it.den));
    return out;
}

}  // namespace

Classification classify(const BracketSet& b) {
    Classification c;
    if (b.status == BracketSet::Status::Empty) {
        c.cardinality = Classification::Cardinality::Empty;
        c.zero = Classification::Zero::No;
        c.detail = b.note;
        return c;
    }
    if (b.status == BracketSet::Status::Undecided) {
        c.cardinality = Classification::Cardinality::Undecided;
        c.zero = Classification::Zero::Unknown;
        c.detail = b.note;
        return c;
    }

    const std::vector<Var>& vars = b.params;
    if (vars.empty()) {
        c.cardinality = Classification::Cardinality::Singleton;
        bool allz = true;
        for (auto& p : b.value) {
            c.singleton.push_back(p.is_zero_poly() ? Rational(0) : p.constant_value());
            allz = allz && is_zero(c.singleton.back());
        }
        c.zero = allz ? Classification::Zero::Yes : Classification::Zero::No;
        if (!allz) c.detail = "the set is a single nonzero class";
        return c;
    }

    // more than one value: exhibit three distinct outputs
    {
        std::vector<Rational> probe;
        for (long v = 0; v <= 4; ++v) probe.push_back(Rational(v));
        std::set<std::vector<Rational>> outs;
        enumerate_assignments(vars, probe, 200000, [&](const std::map<Var, Rational>& a) {
            outs.insert(eval_value(b.value, a));
            return outs.size() >= 3;
        });
        if (outs.size() >= 3) {
            c.cardinality = Classification::Cardinality::Infinite;
            for (auto& o : outs) c.witnesses.push_back(o);
        } else {
            c.cardinality = Classification::Cardinality::Undecided;
            c.detail = "parameters remain but three distinct values were not exhibited";
        }
    }

    // zero membership: all-zero assignment first
    std::map<Var, Rational> zeros;
    for (Var v : vars) zeros[v] = Rational(0);
    auto at_zero = eval_value(b.value, zeros);
    bool allz = true;
    for (auto& r : at_zero) allz = allz && is_zero(r);
    if (allz) {
        c.zero = Classification::Zero::Yes;
        for (Var v : vars) c.zero_witness.push_back({v, Rational(0)});
        return c;
    }

    bool affine = true;
    for (auto& p : b.value) affine = affine && p.is_affine();
    if (affine) {
        DenseMat A(b.value.size(), std::vector<Rational>(vars.size(), Rational(0)));
        std::vector<Rational> rhs(b.value.size(), Rational(0));
        for (std::size_t r = 0; r < b.value.size(); ++r) {
            for (std::size_t j = 0; j < vars.size(); ++j)
                A[r][j] = b.value[r].affine_coeff(vars[j]);
            rhs[r] = -b.value[r].affine_const();
        }
        auto sol = dense_solve(A, rhs);
        if (sol) {
            std::map<Var, Rational> a;
            for (std::size_t j = 0; j < vars.size(); ++j) a[vars[j]] = (*sol)[j];
            for (auto& r : eval_value(b.value, a))
                if (!is_zero(r)) throw std::logic_error("affine zero solve produced a non-root");
            c.zero = Classification::Zero::Yes;
            for (std::size_t j = 0; j < vars.size(); ++j)
                c.zero_witness.push_back({vars[j], (*sol)[j]});
        } else {
            c.zero = Classification::Zero::No;
        }
        return c;
    }

    // bounded search over small rationals
    bool found = false;
    std::map<Var, Rational> hit;
    enumerate_assignments(vars, bounded_rationals(20), 50000,
                          [&](const std::map<Var, Rational>& a) {
                              auto val = eval_value(b.value, a);
                              for (auto& r : val)
                                  if (!is_zero(r)) return false;
                              found = true;
                              hit = a;
                              return true;
                          });
    if (found) {
        c.zero = Classification::Zero::Yes;
        for (auto& [v, r] : hit) c.zero_witness.push_back({v, r});
    } else {
        c.zero = Classification::Zero::Unknown;
        if (c.detail.empty())
            c.detail = "zero membership undecided by the bounded search";
    }
    return c;
}

FormalityReport formality_obstruction(Dgl& L, const std::vector<LieSum<Rational>>& classes,
                                      const std::vector<long>& dims) {
    FormalityReport r;
    auto dt = dgl_target(L);
    r.in_dgl = bracket_set(*dt, classes, dims);
    r.cls_dgl = classify(r.in_dgl);
    if (r.cls_dgl.cardinality == Classification::Cardinality::Empty)
        throw std::invalid_argument(
            "the bracket set inside the DGL is empty; the criteria need a nonempty set");

    auto ht = homology_target(L);
    r.in_homology = bracket_set(*ht, classes, dims);
    r.cls_homology = classify(r.in_homology);

    if (r.cls_dgl.zero == Classification::Zero::No) {
        r.verdict = FormalityReport::Verdict::NotFormal1;
        r.detail = "the zero class is not attainable inside the DGL";
        return r;
    }
    auto decided = [](Classification::Cardinality cc) {
        return cc == Classification::Cardinality::Empty ||
               cc == Classification::Cardinality::Singleton ||
               cc == Classification::Cardinality::Infinite;
    };
    if (decided(r.cls_dgl.cardinality) && decided(r.cls_homology.cardinality) &&
        r.cls_dgl.cardinality != r.cls_homology.cardinality) {
        r.verdict = FormalityReport::Verdict::NotFormal2;
        auto name = [](Classification::Cardinality cc) {
            switch (cc) {
                case Classification::Cardinality::Empty: return "empty";
                case Classification::Cardinality::Singleton: return "a single class";
                case Classification::Cardinality::Infinite: return "infinite";
                default: return "undecided";
            }
        };
        r.detail = std::string("the set is ") + name(r.cls_dgl.cardinality) +
                   " inside the DGL but " + name(r.cls_homology.cardinality) +
                   " inside the homology";
        return r;
    }
    r.verdict = FormalityReport::Verdict::Inconclusive;
    r.detail = "the discard criteria do not apply";
    return r;
}

}  // namespace lieq
