#include "lieq/dgl.hpp"

#include <stdexcept>

namespace lieq {

void Dgl::set_d(int gen, LieSum<Rational> value) {
    long gd = fl_.gens().gen(gen).degree;
    if (gd == 1 && !value.is_zero())
        throw std::invalid_argument("differential of a degree-1 generator must vanish");
    for (auto& [e, c] : value.terms())
        if (fl_.degree(e) != gd - 1)
            throw std::invalid_argument("differential value is not homogeneous of degree " +
                                        std::to_string(gd - 1));
    d_gen_[gen] = std::move(value);
    d_memo_.clear();
    homology_.clear();
    d_cols_.clear();
}

LieSum<Rational> Dgl::d_gen(int gen) const {
    auto it = d_gen_.find(gen);
    return it == d_gen_.end() ? LieSum<Rational>{} : it->second;
}

LieSum<Rational> Dgl::d(FreeLie::Expr e) {
    auto it = d_memo_.find(e);
    if (it != d_memo_.end()) return it->second;
    LieSum<Rational> out;
    if (fl_.is_leaf(e)) {
        out = d_gen(fl_.leaf_gen(e));
    } else {
        FreeLie::Expr a = fl_.left(e), b = fl_.right(e);
        LieSum<Rational> la(a, Rational(1)), lb(b, Rational(1));
        out = bracket(fl_, d(a), lb);
        LieSum<Rational> t = bracket(fl_, la, d(b));
        t *= Rational(neg_one_pow(fl_.degree(a)));
        out += t;
    }
    d_memo_.emplace(e, out);
    return out;
}

LieSum<Rational> Dgl::d(const LieSum<Rational>& v) {
    LieSum<Rational> out;
    for (auto& [e, c] : v.terms()) {
        LieSum<Rational> t = d(e);
        t *= c;
        out += t;
    }
    return out;
}

LieSum<Poly> Dgl::d(const LieSum<Poly>& v) {
    LieSum<Poly> out;
    for (auto& [e, p] : v.terms()) {
        LieSum<Rational> de = d(e);
        for (auto& [e2, c] : de.terms()) {
            Poly t = p;
            t *= c;
            out.add(e2, t);
        }
    }
    return out;
}

bool Dgl::check_d_squared(long max_degree, std::string* witness) {
    for (int g = 0; g < gens().size(); ++g) {
        if (gens().gen(g).degree > max_degree) continue;
        LieSum<Rational> dd = d(d(fl_.leaf(g)));
        if (!fl_.expand(dd).is_zero()) {
            if (witness)
                *witness = "d(d(" + gens().gen(g).name + ")) = " + to_string(fl_, dd);
            return false;
        }
    }
    return true;
}

ColumnSpace& Dgl::d_columns(long n) {
    auto it = d_cols_.find(n);
    if (it != d_cols_.end()) return *it->second;
    const auto& basis = fl_.piece_basis(n);
    int m = n >= 2 ? static_cast<int>(fl_.words(n - 1).size()) : 0;
    std::vector<SparseVec> cols;
    cols.reserve(basis.size());
    for (auto e : basis) {
        LieSum<Rational> de = d(e);
        FreeLie::Tensor t = fl_.expand(de);
        cols.push_back(t.is_zero() ? SparseVec{} : fl_.tensor_coords(t, n - 1));
    }
    auto cs = std::make_unique<ColumnSpace>(m, cols);
    return *d_cols_.emplace(n, std::move(cs)).first->second;
}

const Dgl::Homology& Dgl::homology(long n) {
    return class_data(n).h;
}

Dgl::ClassData& Dgl::class_data(long n) {
    auto it = homology_.find(n);
    if (it != homology_.end()) return it->second;
    if (n < 1 || n + 1 > fl_.gens().truncation())
        throw std::out_of_range("homology degree needs n >= 1 and n+1 within truncation");

    ClassData cd;
    cd.h.degree = n;
    int m = static_cast<int>(fl_.words(n).size());
    cd.h.boundaries = RowSpace(m);
    for (auto e : fl_.left_normed_candidates(n + 1)) {
        FreeLie::Tensor t = fl_.expand(d(e));
        if (!t.is_zero()) cd.h.boundaries.add(fl_.tensor_coords(t, n));
    }

    ColumnSpace& dc = d_columns(n);
    const auto& basis = fl_.piece_basis(n);
    RowSpace modspan = cd.h.boundaries;
    for (auto& combo : dc.kernel_basis()) {
        LieSum<Rational> v;
        for (std::size_t i = 0; i < combo.size(); ++i) v.add(basis[i], combo[i]);
        if (v.is_zero()) continue;
        SparseVec row = fl_.tensor_coords(fl_.expand(v), n);
        if (modspan.add(row)) cd.h.reps.push_back(std::move(v));
    }
    return homology_.emplace(n, std::move(cd)).first->second;
}

std::vector<Rational> Dgl::class_coords(const LieSum<Rational>& cycle, long n) {
    ClassData& cd = class_data(n);
    if (!is_cycle(cycle, n)) throw std::invalid_argument("class_coords: not a cycle");
    if (!cd.rep_coords) {
        std::vector<SparseVec> cols;
        for (auto& r : cd.h.reps)
            cols.push_back(cd.h.boundaries.reduce(fl_.tensor_coords(fl_.expand(r), n)));
        cd.rep_coords =
            std::make_unique<ColumnSpace>(static_cast<int>(fl_.words(n).size()), cols);
    }
    FreeLie::Tensor t = fl_.expand(cycle);
    SparseVec res =
        cd.h.boundaries.reduce(t.is_zero() ? SparseVec{} : fl_.tensor_coords(t, n));
    auto sol = cd.rep_coords->solve(res);
    if (!sol) throw std::logic_error("cycle class escaped the homology basis");
    return *sol;
}

std::vector<Poly> Dgl::class_coords(const LieSum<Poly>& cycle, long n) {
    ClassData& cd = class_data(n);
    class_coords(LieSum<Rational>{}, n);  // force rep_coords
    int m = static_cast<int>(fl_.words(n).size());
    std::vector<Poly> dense(m);
    for (auto& [e, p] : cycle.terms())
        for (auto& [w, c] : fl_.expand(e).terms()) {
            Poly t = p;
            t *= c;
            dense[fl_.word_index(n, w)] += t;
        }
    std::vector<Poly> red = rowspace_reduce_poly(cd.h.boundaries, std::move(dense));
    auto sol = cd.rep_coords->solve_poly(red);
    if (!sol) throw std::logic_error("parameterized cycle class escaped the homology basis");
    return *sol;
}

LieSum<Poly> Dgl::Preimage::general() const {
    LieSum<Poly> out;
    for (auto& [e, c] : particular.terms()) out.add(e, Poly(c));
    for (auto& k : kernel) {
        Poly t = Poly::variable(fresh_param());
        for (auto& [e, c] : k.terms()) {
            Poly tc = t;
            tc *= c;
            out.add(e, tc);
        }
    }
    return out;
}

Dgl::Preimage Dgl::boundary_preimage(const LieSum<Rational>& target, long n) {
    for (auto& [e, c] : target.terms())
        if (fl_.degree(e) != n) throw std::invalid_argument("preimage target not of stated degree");
    Preimage out;
    ColumnSpace& dc = d_columns(n + 1);
    const auto& basis = fl_.piece_basis(n + 1);
    FreeLie::Tensor t = fl_.expand(target);
    auto sol = dc.solve(t.is_zero() ? SparseVec{} : fl_.tensor_coords(t, n));
    if (!sol) return out;
    out.exists = true;
    for (std::size_t i = 0; i < sol->size(); ++i) out.particular.add(basis[i], (*sol)[i]);
    for (auto& combo : dc.kernel_basis()) {
        LieSum<Rational> k;
        for (std::size_t i = 0; i < combo.size(); ++i) k.add(basis[i], combo[i]);
        if (!k.is_zero()) out.kernel.push_back(std::move(k));
    }
    return out;
}

Dgl::PreimagePoly Dgl::boundary_preimage(const LieSum<Poly>& target, long n) {
    for (auto& [e, p] : target.terms())
        if (fl_.degree(e) != n) throw std::invalid_argument("preimage target not of stated degree");
    PreimagePoly out;
    ColumnSpace& dc = d_columns(n + 1);
    std::vector<Poly> dense(fl_.words(n).size());
    for (auto& [e, p] : target.terms())
        for (auto& [w, c] : fl_.expand(e).terms()) {
            Poly t = p;
            t *= c;
            dense[fl_.word_index(n, w)] += t;
        }
    out.obstruction = dc.residual_poly(dense);
    if (!out.solvable()) return out;
    auto sol = dc.solve_poly(dense);
    if (!sol) throw std::logic_error("zero residual but no polynomial solution");
    const auto& basis = fl_.piece_basis(n + 1);
    for (std::size_t i = 0; i < sol->size(); ++i)
        if (!(*sol)[i].is_zero_poly()) out.particular.add(basis[i], (*sol)[i]);
    for (auto& combo : dc.kernel_basis()) {
        LieSum<Rational> k;
        for (std::size_t i = 0; i < combo.size(); ++i) k.add(basis[i], combo[i]);
        if (!k.is_zero()) out.kernel.push_back(std::move(k));
    }
    return out;
}

bool Dgl::is_cycle(const LieSum<Rational>& v, long n) {
    for (auto& [e, c] : v.terms())
        if (fl_.degree(e) != n) return false;
    return fl_.expand(d(v)).is_zero();
}

}  // namespace lieq
