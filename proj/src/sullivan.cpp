#include "lieq/sullivan.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lieq/graded.hpp"

namespace lieq {

namespace {

// product of a word over generator images, used by multiplication and the
// derivation extension of d
template <typename C>
LinComb<GAMonomial, C> scaled(const GAMonomial& m, C c, int sign) {
    LinComb<GAMonomial, C> out;
    if (sign < 0) c *= C(-1);
    if (sign != 0) out.add(m, c);
    return out;
}

}  // namespace

SullivanAlgebraPresentation::SullivanAlgebraPresentation(std::vector<BasisElt> generators, bool ks)
    : gens_(std::move(generators)), ks_(ks), d_(gens_.size()) {
    for (const BasisElt& g : gens_)
        if (g.degree < 1)
            throw std::invalid_argument("SullivanAlgebraPresentation: generator degree must be positive");
}

long SullivanAlgebraPresentation::word_degree(const GAMonomial& m) const {
    long d = 0;
    for (int i : m) d += degree(i);
    return d;
}

std::pair<int, GAMonomial> SullivanAlgebraPresentation::normalize(GAMonomial m) const {
    int sign = 1;
    for (std::size_t i = 1; i < m.size(); ++i)
        for (std::size_t j = i; j > 0 && m[j - 1] > m[j]; --j) {
            if (degree(m[j - 1]) % 2 != 0 && degree(m[j]) % 2 != 0) sign = -sign;
            std::swap(m[j - 1], m[j]);
        }
    for (std::size_t j = 0; j + 1 < m.size(); ++j)
        if (m[j] == m[j + 1] && degree(m[j]) % 2 != 0) return {0, std::move(m)};
    return {sign, std::move(m)};
}

template <typename C>
static LinComb<GAMonomial, C> mul_impl(const SullivanAlgebraPresentation& P,
                                       const LinComb<GAMonomial, C>& a,
                                       const LinComb<GAMonomial, C>& b) {
    LinComb<GAMonomial, C> out;
    for (auto& [ma, ca] : a.terms())
        for (auto& [mb, cb] : b.terms()) {
            GAMonomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            auto [sign, cm] = P.normalize(std::move(m));
            if (sign == 0) continue;
            C c = ca;
            c *= cb;
            if (sign < 0) c *= C(-1);
            out.add(cm, c);
        }
    return out;
}

GAElt SullivanAlgebraPresentation::mul(const GAElt& a, const GAElt& b) const {
    return mul_impl(*this, a, b);
}

SymElt SullivanAlgebraPresentation::mul(const SymElt& a, const SymElt& b) const {
    return mul_impl(*this, a, b);
}

void SullivanAlgebraPresentation::set_d(int gen, const GAElt& value) {
    const long want = degree(gen) + 1;
    for (auto& [m, c] : value.terms()) {
        (void)c;
        if (word_degree(m) != want)
            throw std::invalid_argument("set_d: image of " + gens_[gen].name +
                                        " is not homogeneous of degree " + std::to_string(want));
        if (ks_)
            for (int letter : m)
                if (letter >= gen)
                    throw std::invalid_argument("set_d: KS order forbids " + gens_[letter].name +
                                                " in the image of " + gens_[gen].name);
    }
    d_.at(gen) = value;
}

const GAElt& SullivanAlgebraPresentation::d(int gen) const { return d_.at(gen); }

GAElt SullivanAlgebraPresentation::d_part(int gen, int length) const {
    GAElt out;
    for (auto& [m, c] : d_.at(gen).terms())
        if (static_cast<int>(m.size()) == length) out.add(m, c);
    return out;
}

template <typename C>
static LinComb<GAMonomial, C> d_impl(const SullivanAlgebraPresentation& P,
                                     const std::vector<GAElt>& table,
                                     const LinComb<GAMonomial, C>& v) {
    LinComb<GAMonomial, C> out;
    for (auto& [m, c] : v.terms()) {
        int prefix = 1;  // Koszul sign of moving d past the letters already read
        for (std::size_t t = 0; t < m.size(); ++t) {
            for (auto& [dm, dc] : table[m[t]].terms()) {
                GAMonomial merged(m.begin(), m.begin() + t);
                merged.insert(merged.end(), dm.begin(), dm.end());
                merged.insert(merged.end(), m.begin() + t + 1, m.end());
                auto [sign, cm] = P.normalize(std::move(merged));
                if (sign == 0) continue;
                C coeff = c;
                coeff *= C(dc);
                if (prefix * sign < 0) coeff *= C(-1);
                out.add(cm, coeff);
            }
            if (P.degree(m[t]) % 2 != 0) prefix = -prefix;
        }
    }
    return out;
}

GAElt SullivanAlgebraPresentation::d(const GAElt& v) const { return d_impl(*this, d_, v); }

SymElt SullivanAlgebraPresentation::d(const SymElt& v) const { return d_impl(*this, d_, v); }

int SullivanAlgebraPresentation::max_d_length() const {
    int len = 0;
    for (const GAElt& image : d_)
        for (auto& [m, c] : image.terms()) {
            (void)c;
            len = std::max(len, static_cast<int>(m.size()));
        }
    return len;
}

bool SullivanAlgebraPresentation::declare_ks() {
    for (int i = 0; i < dim(); ++i)
        for (auto& [m, c] : d_[i].terms()) {
            (void)c;
            for (int letter : m)
                if (letter >= i) return false;
        }
    ks_ = true;
    return true;
}

bool SullivanAlgebraPresentation::d_squared_zero(std::string* witness) const {
    // d^2 is a derivation, so vanishing on generators is vanishing everywhere
    for (int i = 0; i < dim(); ++i) {
        GAElt dd = d(d(i));
        if (!dd.is_zero()) {
            if (witness) *witness = "d^2(" + gens_[i].name + ") = " + to_string(dd);
            return false;
        }
    }
    return true;
}

std::string SullivanAlgebraPresentation::word_str(const GAMonomial& m) const {
    if (m.empty()) return "1";
    std::ostringstream out;
    for (std::size_t t = 0; t < m.size();) {
        std::size_t run = t;
        while (run < m.size() && m[run] == m[t]) ++run;
        if (t > 0) out << " ";
        out << gens_[m[t]].name;
        if (run - t > 1) out << "^" << (run - t);
        t = run;
    }
    return out.str();
}

std::string SullivanAlgebraPresentation::to_string(const GAElt& v) const {
    if (v.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto& [m, c] : v.terms()) {
        if (!first) out << " + ";
        first = false;
        out << "(" << rat_to_string(c) << ") " << word_str(m);
    }
    return out.str();
}

PairingTable::PairingTable(std::vector<long> v_degrees, std::vector<long> sx_degrees,
                           DenseMat values)
    : vdeg_(std::move(v_degrees)), sxdeg_(std::move(sx_degrees)), values_(std::move(values)) {
    if (values_.size() != vdeg_.size())
        throw std::invalid_argument("PairingTable: one row per left generator");
    for (const auto& row : values_)
        if (row.size() != sxdeg_.size())
            throw std::invalid_argument("PairingTable: one column per suspended generator");
}

PairingTable PairingTable::dual_bases(std::vector<long> sx_degrees) {
    const int n = static_cast<int>(sx_degrees.size());
    DenseMat id(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) id[i][i] = 1;
    return PairingTable(sx_degrees, sx_degrees, std::move(id));
}

const Rational& PairingTable::value(int p, int q) const { return values_.at(p).at(q); }

Rational PairingTable::eval(const GAMonomial& vs, const Wedge& xs) const {
    if (vs.size() != xs.size()) return 0;
    const int k = static_cast<int>(vs.size());
    if (k == 0) return 1;
    if (k > 9) throw std::logic_error("PairingTable::eval: word too long for the permutation sum");
    std::vector<long> vd(k);
    for (int t = 0; t < k; ++t) vd[t] = v_degree(vs[t]);
    // slot j of the expansion pairs against the j-th wedge factor from the right
    Wedge rev(xs.rbegin(), xs.rend());
    Perm p(k);
    std::iota(p.begin(), p.end(), 0);
    Rational total(0);
    do {
        Rational term(koszul_sign(p, vd));
        for (int j = 0; j < k && !is_zero(term); ++j) term *= value(vs[p[j]], rev[j]);
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

DualPresentation dualize(const LInfStructure& L, bool certify) {
    const int n = L.dim();
    std::vector<long> sx(n);
    for (int i = 0; i < n; ++i) {
        if (L.degree(i) < 0) throw std::invalid_argument("dualize: negatively graded input");
        sx[i] = L.degree(i) + 1;
    }
    PairingTable P = PairingTable::dual_bases(sx);
    std::vector<BasisElt> gens;
    for (int i = 0; i < n; ++i) gens.push_back({L.basis()[i].name, sx[i]});
    SullivanAlgebraPresentation A(std::move(gens), false);

    std::vector<GAElt> d(n);
    for (auto& [w, val] : L.table()) {
        const int k = static_cast<int>(w.size());
        long tail = 0;
        for (int j = 1; j <= k - 1; ++j) tail += (k - j) * L.degree(w[j - 1]);
        GAMonomial m(w.begin(), w.end());
        Rational g = P.eval(m, w);  // +-(product of letter multiplicities), never zero
        for (auto& [i, c] : val.terms()) {
            Rational coeff = c / g;
            if ((sx[i] + tail) % 2 != 0) coeff = -coeff;
            d[i].add(m, coeff);
        }
    }
    for (int i = 0; i < n; ++i)
        if (!d[i].is_zero()) A.set_d(i, d[i]);
    A.declare_ks();

    if (certify && check_generalized_jacobi(L, 2 * L.arity_bound()).ok) {
        std::string witness;
        if (!A.d_squared_zero(&witness))
            throw std::logic_error("dualize: d^2 != 0 against a Jacobi-true input: " + witness);
    }
    return {std::move(A), std::move(P)};
}

LInfStructure dualize_back(const DualPresentation& D, int arity_bound) {
    const SullivanAlgebraPresentation& A = D.algebra;
    const PairingTable& P = D.pairing;
    const int n = A.dim();
    if (arity_bound < 0) arity_bound = std::max(2, A.max_d_length());
    std::vector<BasisElt> basis;
    for (int i = 0; i < n; ++i) basis.push_back({A.generators()[i].name, A.degree(i) - 1});
    LInfStructure L(std::move(basis), arity_bound);

    std::map<Wedge, LInfStructure::Elt> table;
    for (int i = 0; i < n; ++i)
        for (auto& [m, c] : A.d(i).terms()) {
            Wedge w(m.begin(), m.end());
            const int k = static_cast<int>(w.size());
            long tail = 0;
            for (int j = 1; j <= k - 1; ++j) tail += (k - j) * (P.sx_degree(w[j - 1]) - 1);
            Rational v = c * P.eval(m, w);
            if ((A.degree(i) + tail) % 2 != 0) v = -v;
            table[w].add(i, v);
        }
    for (auto& [w, v] : table) L.set_bracket(w, v);
    return L;
}

Rational graded_det(const DenseMat& a, const std::vector<long>& degrees) {
    const int r = static_cast<int>(degrees.size());
    if (static_cast<int>(a.size()) != r)
        throw std::invalid_argument("graded_det: one degree per row");
    for (const auto& row : a)
        if (static_cast<int>(row.size()) != r)
            throw std::invalid_argument("graded_det: matrix must be square");
    if (r == 0) return 1;
    if (r > 9) throw std::logic_error("graded_det: size too large for the permutation sum");
    Perm p(r);
    std::iota(p.begin(), p.end(), 0);
    Rational total(0);
    do {
        Rational term(koszul_sign(p, degrees));
        for (int i = 0; i < r && !is_zero(term); ++i) term *= a[i][p[i]];
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

namespace {

// suspended degree of a homogeneous combination over the pairing's right basis
long class_sx_degree(const PairingTable& P, const LInfStructure::Elt& c) {
    long deg = 0;
    bool seen = false;
    for (auto& [j, coeff] : c.terms()) {
        (void)coeff;
        if (!seen) deg = P.sx_degree(j), seen = true;
        else if (P.sx_degree(j) != deg)
            throw std::invalid_argument("classes must be homogeneous");
    }
    return deg;
}

Rational pair_letter_class(const PairingTable& P, int letter, const LInfStructure::Elt& c) {
    Rational out(0);
    for (auto& [j, coeff] : c.terms()) out += coeff * P.value(letter, j);
    return out;
}

}  // namespace

RhoResult rho(const SullivanAlgebraPresentation& S, const GAElt& phi, const PairingTable& P,
              const std::vector<LInfStructure::Elt>& classes) {
    if (S.dim() != P.v_count())
        throw std::invalid_argument("rho: presentation and pairing disagree on the basis");
    const int r = static_cast<int>(classes.size());
    if (r < 1) throw std::invalid_argument("rho: need at least one class");
    for (auto& [m, c] : phi.terms()) {
        (void)c;
        if (static_cast<int>(m.size()) < r)
            throw std::invalid_argument("rho: component below word length " + std::to_string(r));
    }
    std::vector<long> n(r);
    for (int q = 0; q < r; ++q) n[q] = class_sx_degree(P, classes[q]);

    RhoResult out;
    out.value = 0;
    for (auto& [m, c] : phi.terms()) {
        if (static_cast<int>(m.size()) != r) continue;
        DenseMat a(r, std::vector<Rational>(r));
        for (int p = 0; p < r; ++p)
            for (int q = 0; q < r; ++q) a[p][q] = pair_letter_class(P, m[p], classes[q]);
        out.value += c * graded_det(a, n);
    }
    for (const BasisElt& g : S.generators()) out.ks_basis.push_back(g.name);
    return out;
}

ArkowitzReport andrews_arkowitz_check(const DualPresentation& D, const LInfStructure& H, int v,
                                      const std::vector<LInfStructure::Elt>& classes,
                                      const LInfStructure::Elt& x) {
    const SullivanAlgebraPresentation& A = D.algebra;
    const PairingTable& P = D.pairing;
    if (v < 0 || v >= A.dim()) throw std::invalid_argument("andrews_arkowitz_check: bad generator");
    if (H.dim() != P.sx_count())
        throw std::invalid_argument("andrews_arkowitz_check: structure and pairing disagree");
    const int r = static_cast<int>(classes.size());
    if (r < 1) throw std::invalid_argument("andrews_arkowitz_check: need at least one class");

    ArkowitzReport rep;
    for (const BasisElt& g : A.generators()) rep.ks_basis.push_back(g.name);

    long e = A.degree(v);
    for (int j = 1; j <= r - 1; ++j) e += (r - j) * (class_sx_degree(P, classes[j - 1]) - 1);
    rep.eps = (e % 2 != 0) ? -1 : 1;

    rep.lhs = pair_letter_class(P, v, x);
    rep.rhs_suspended = pair_letter_class(P, v, multi_bracket(H, classes));
    rep.rhs_suspended *= Rational(rep.eps);
    rep.equal = rep.lhs == rep.rhs_suspended;

    rep.rho_defined = true;
    for (auto& [m, c] : A.d(v).terms()) {
        (void)c;
        if (static_cast<int>(m.size()) < r) rep.rho_defined = false;
    }
    if (rep.rho_defined) {
        long alpha = 0;
        for (int q = 0; q < r; ++q)
            for (int p = 0; p < q; ++p)
                alpha += class_sx_degree(P, classes[p]) * class_sx_degree(P, classes[q]);
        rep.alpha_sign = (alpha % 2 != 0) ? -1 : 1;
        rep.rhs_classical = rho(A, A.d(v), P, classes).value * Rational(rep.alpha_sign);
        rep.classical_equal = rep.lhs == rep.rhs_classical;
        rep.signs_consistent = rep.rhs_suspended == rep.rhs_classical;
    } else {
        rep.caveat = "d(" + A.generators()[v].name + ") has a component below word length " +
                     std::to_string(r) +
                     "; the rho form needs an adapted homotopy retract there and is not evaluated";
    }
    return rep;
}

namespace {

// weakly ascending index tuples; an index repeats only when its degree is odd
void ascending_tuples(int dim, const std::function<long(int)>& deg, int len,
                      const std::function<void(const std::vector<int>&)>& emit) {
    std::vector<int> cur;
    std::function<void(int)> walk = [&](int from) {
        if (static_cast<int>(cur.size()) == len) {
            emit(cur);
            return;
        }
        for (int i = from; i < dim; ++i) {
            if (!cur.empty() && cur.back() == i && deg(i) % 2 == 0) continue;
            cur.push_back(i);
            walk(i);
            cur.pop_back();
        }
    };
    walk(0);
}

SparseVec elt_to_sv(const LInfStructure::Elt& v) {
    SparseVec out;
    for (auto& [i, c] : v.terms()) out.push_back({i, c});
    return out;
}

LInfStructure::Elt sv_to_elt(const SparseVec& v) {
    LInfStructure::Elt out;
    for (auto& [i, c] : v) out.add(i, c);
    return out;
}

}  // namespace

SullivanReport is_sullivan(const LInfStructure& L) {
    const int n = L.dim();
    for (int i = 0; i < n; ++i)
        if (L.degree(i) < 0) throw std::invalid_argument("is_sullivan: negatively graded input");

    SullivanReport rep;
    if (n == 0) {
        rep.ok = true;
        return rep;
    }

    RowSpace peeled(n);
    std::vector<std::vector<LInfStructure::Elt>> layers;
    while (peeled.rank() < n) {
        // the center modulo the peeled part, degree by degree: candidates whose
        // every bracket against basis tuples reduces into the peeled span;
        // constraints reduce against the span frozen at the start of the pass
        // so consecutive layers stay distinct
        RowSpace frozen = peeled;
        std::vector<LInfStructure::Elt> layer;
        std::set<long> degrees;
        for (int i = 0; i < n; ++i) degrees.insert(L.degree(i));
        for (long deg : degrees) {
            std::vector<int> cand;
            for (int i = 0; i < n; ++i)
                if (L.degree(i) == deg) cand.push_back(i);
            // one stacked column per candidate: all reduced bracket values
            std::vector<std::vector<Rational>> stacked(cand.size());
            int rows = 0;
            auto append_constraints = [&](const std::vector<int>& tuple) {
                std::vector<SparseVec> reduced(cand.size());
                int width = 0;
                for (std::size_t t = 0; t < cand.size(); ++t) {
                    std::vector<LInfStructure::Elt> args = {LInfStructure::Elt(cand[t])};
                    for (int u : tuple) args.push_back(LInfStructure::Elt(u));
                    reduced[t] = frozen.reduce(elt_to_sv(multi_bracket(L, args)));
                    for (auto& [idx, c] : reduced[t]) {
                        (void)c;
                        width = std::max(width, idx + 1);
                    }
                }
                for (std::size_t t = 0; t < cand.size(); ++t) {
                    std::vector<Rational> dense = sv_to_dense(reduced[t], n);
                    stacked[t].insert(stacked[t].end(), dense.begin(), dense.end());
                }
                rows += n;
            };
            for (int k = 1; k <= L.arity_bound(); ++k)
                ascending_tuples(
                    n, [&](int i) { return L.degree(i); }, k - 1, append_constraints);
            std::vector<SparseVec> cols(cand.size());
            for (std::size_t t = 0; t < cand.size(); ++t) cols[t] = sv_from_dense(stacked[t]);
            ColumnSpace cs(rows, cols);
            for (const std::vector<Rational>& combo : cs.kernel_basis()) {
                SparseVec vec;
                for (std::size_t t = 0; t < cand.size(); ++t)
                    if (!is_zero(combo[t])) vec.push_back({cand[t], combo[t]});
                std::sort(vec.begin(), vec.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                SparseVec residue = peeled.reduce(vec);
                if (!residue.empty() && peeled.add(residue)) layer.push_back(sv_to_elt(residue));
            }
        }
        if (layer.empty()) {
            rep.ok = false;
            rep.stages = static_cast<int>(layers.size());
            rep.witness_degree = 0;
            bool found = false;
            std::vector<long> sorted_degrees;
            for (int i = 0; i < n; ++i) sorted_degrees.push_back(L.degree(i));
            std::sort(sorted_degrees.begin(), sorted_degrees.end());
            for (long deg : sorted_degrees) {
                for (int i = 0; i < n && !found; ++i)
                    if (L.degree(i) == deg && !peeled.contains(elt_to_sv(LInfStructure::Elt(i)))) {
                        rep.witness_degree = deg;
                        found = true;
                    }
                if (found) break;
            }
            return rep;
        }
        layers.push_back(std::move(layer));
    }

    rep.ok = true;
    rep.stages = static_cast<int>(layers.size());
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
        std::stable_sort(it->begin(), it->end(),
                         [&](const LInfStructure::Elt& a, const LInfStructure::Elt& b) {
                             long da = L.degree(a.terms().begin()->first);
                             long db = L.degree(b.terms().begin()->first);
                             return da > db;
                         });
        for (LInfStructure::Elt& v : *it) rep.ordered_basis.push_back(std::move(v));
    }
    return rep;
}

AutomorphismFamily::AutomorphismFamily(const SullivanAlgebraPresentation& S)
    : S_(&S), images_(S.dim()) {
    for (int i = 0; i < S.dim(); ++i) images_[i].add({i}, Frac(Rational(1)));
}

void AutomorphismFamily::set_image(int gen, SymElt value) {
    const long want = S_->degree(gen);
    for (auto& [m, c] : value.terms()) {
        (void)c;
        if (S_->word_degree(m) != want)
            throw std::invalid_argument("set_image: image must be homogeneous of degree " +
                                        std::to_string(want));
    }
    images_.at(gen) = std::move(value);
}

void AutomorphismFamily::require_nonzero(Var p) {
    if (std::find(nonzero_.begin(), nonzero_.end(), p) == nonzero_.end()) nonzero_.push_back(p);
}

namespace {

// invertible scalar under declared constraints: a nonzero rational multiple
// of a quotient of monomials in constrained parameters
bool unit_under(const Frac& c, const std::vector<Var>& nonzero) {
    if (c.is_zero_frac()) return false;
    if (c.num().terms().size() != 1 || c.den().terms().size() != 1) return false;
    for (const Poly* p : {&c.num(), &c.den()})
        for (Var v : p->vars())
            if (std::find(nonzero.begin(), nonzero.end(), v) == nonzero.end()) return false;
    return true;
}

}  // namespace

bool AutomorphismFamily::invertible(std::string* why) const {
    for (int i = 0; i < S_->dim(); ++i) {
        Frac diag;
        for (auto& [m, c] : images_[i].terms()) {
            if (m == GAMonomial{i}) {
                diag = c;
                continue;
            }
            for (int letter : m)
                if (letter >= i) {
                    if (why)
                        *why = "image of " + S_->generators()[i].name +
                               " is not triangular: it touches " + S_->generators()[letter].name;
                    return false;
                }
        }
        if (diag.is_zero_frac()) {
            if (why)
                *why = "image of " + S_->generators()[i].name + " keeps no " +
                       S_->generators()[i].name + " term";
            return false;
        }
        if (!unit_under(diag, nonzero_)) {
            if (why)
                *why = "diagonal coefficient of " + S_->generators()[i].name +
                       " is not a unit monomial in the declared nonzero parameters";
            return false;
        }
    }
    return true;
}

SymElt AutomorphismFamily::apply(const SymElt& v) const {
    SymElt out;
    for (auto& [m, c] : v.terms()) {
        SymElt term;
        term.add({}, c);
        for (int letter : m) term = S_->mul(term, images_[letter]);
        out += term;
    }
    return out;
}

AutomorphismFamily AutomorphismFamily::inverse() const {
    std::string why;
    if (!invertible(&why)) throw std::invalid_argument("AutomorphismFamily::inverse: " + why);
    AutomorphismFamily G(*S_);
    G.nonzero_ = nonzero_;
    for (int i = 0; i < S_->dim(); ++i) {
        Frac diag;
        SymElt rest;
        for (auto& [m, c] : images_[i].terms()) {
            if (m == GAMonomial{i}) diag = c;
            else rest.add(m, c);
        }
        // rest only touches earlier generators, where G is already built
        SymElt gi;
        gi.add({i}, Frac(Rational(1)));
        gi -= G.apply(rest);
        gi *= Frac(diag.den(), diag.num());
        G.images_[i] = std::move(gi);
    }
    return G;
}

std::vector<SymElt> conjugated_differential(const SullivanAlgebraPresentation& S,
                                            const AutomorphismFamily& F) {
    if (&F.presentation() != &S)
        throw std::invalid_argument("conjugated_differential: family built on another presentation");
    AutomorphismFamily G = F.inverse();
    std::vector<SymElt> out(S.dim());
    for (int i = 0; i < S.dim(); ++i) out[i] = F.apply(S.d(G.image(i)));
    return out;
}

namespace {

Rational eval_poly_at(const Poly& p, const std::map<Var, Rational>& at) {
    Rational out(0);
    for (auto& [m, c] : p.terms()) {
        Rational t = c;
        for (auto& [v, e] : m.factors) {
            auto it = at.find(v);
            Rational x = it == at.end() ? Rational(0) : it->second;
            for (unsigned s = 0; s < e; ++s) t *= x;
        }
        out += t;
    }
    return out;
}

struct SolveCtx {
    std::vector<Poly> original;
    std::vector<Var> nonzero;
};

// try small rational assignments for the free variables, replay the recorded
// eliminations, and accept only assignments that verify against the original
// system and every nonvanishing constraint
SolveVerdict finish_leaf(const SolveCtx& ctx, const std::vector<std::pair<Var, Poly>>& elim) {
    std::set<Var> assigned;
    for (auto& [v, expr] : elim) {
        (void)expr;
        assigned.insert(v);
    }
    std::vector<Var> free_vars;
    std::set<Var> seen;
    auto note = [&](Var v) {
        if (!assigned.count(v) && seen.insert(v).second) free_vars.push_back(v);
    };
    for (const Poly& p : ctx.original)
        for (Var v : p.vars()) note(v);
    for (Var v : ctx.nonzero) note(v);

    const std::vector<Rational> pool = {Rational(1),  Rational(-1), Rational(2), Rational(-2),
                                        Rational(3),  Rational(-3), Rational(1, 2),
                                        Rational(-1, 2)};
    const std::size_t nfree = free_vars.size();
    std::vector<std::size_t> pick(nfree, 0);
    long attempts = 0;
    while (attempts < 4096) {
        ++attempts;
        std::map<Var, Rational> at;
        for (std::size_t t = 0; t < nfree; ++t) {
            bool constrained = std::find(ctx.nonzero.begin(), ctx.nonzero.end(), free_vars[t]) !=
                               ctx.nonzero.end();
            at[free_vars[t]] = constrained ? pool[pick[t]]
                                           : (pick[t] == 0 ? Rational(0) : pool[pick[t] - 1]);
        }
        for (auto it = elim.rbegin(); it != elim.rend(); ++it)
            at[it->first] = eval_poly_at(it->second, at);
        bool good = true;
        for (Var v : ctx.nonzero)
            if (is_zero(at[v])) good = false;
        for (const Poly& p : ctx.original)
            if (good && !is_zero(eval_poly_at(p, at))) good = false;
        if (good) {
            SolveVerdict v;
            v.kind = SolveVerdict::Kind::Solvable;
            v.witness = std::move(at);
            v.reason = "verified witness";
            return v;
        }
        // advance the odometer
        std::size_t t = 0;
        for (; t < nfree; ++t) {
            if (++pick[t] < pool.size()) break;
            pick[t] = 0;
        }
        if (t == nfree) break;
        if (nfree == 0) break;
    }
    SolveVerdict v;
    v.kind = SolveVerdict::Kind::Undecided;
    v.reason = "consistent system, but no verified rational witness in the search grid";
    return v;
}

SolveVerdict solve_rec(const SolveCtx& ctx, std::vector<Poly> eqs,
                       std::vector<std::pair<Var, Poly>> elim, int depth) {
    if (depth <= 0) {
        SolveVerdict v;
        v.kind = SolveVerdict::Kind::Undecided;
        v.reason = "elimination depth exhausted";
        return v;
    }
    auto constrained = [&](Var v) {
        return std::find(ctx.nonzero.begin(), ctx.nonzero.end(), v) != ctx.nonzero.end();
    };

    // strip declared-nonzero monomial content and drop trivial equations
    std::vector<Poly> live;
    for (Poly p : eqs) {
        if (p.is_zero_poly()) continue;
        Monomial content = p.monomial_content();
        Monomial keep = Monomial::one();
        for (auto& [v, e] : content.factors)
            if (!constrained(v)) keep = keep.times(Monomial{{{v, e}}});
        p = p.divide_monomial(content.divide(keep));
        if (p.is_constant()) {
            if (!is_zero(p.constant_value())) {
                SolveVerdict v;
                v.kind = SolveVerdict::Kind::Unsolvable;
                v.reason = "a nonzero constant remains after eliminations";
                return v;
            }
            continue;
        }
        live.push_back(std::move(p));
    }
    if (live.empty()) return finish_leaf(ctx, elim);

    // constant-coefficient linear elimination
    for (std::size_t t = 0; t < live.size(); ++t)
        for (Var v : live[t].vars()) {
            Rational a(0);
            Poly b;
            bool linear = true;
            for (auto& [m, c] : live[t].terms()) {
                unsigned dv = m.degree_in(v);
                if (dv == 0) b.add_term(m, c);
                else if (dv == 1 && m.total_degree() == 1) a += c;
                else linear = false;
            }
            if (!linear || is_zero(a)) continue;
            Poly value = b;
            value *= Rational(-1) / a;
            std::vector<Poly> next;
            for (std::size_t s = 0; s < live.size(); ++s)
                if (s != t) next.push_back(live[s].subst(v, value));
            elim.push_back({v, value});
            return solve_rec(ctx, std::move(next), std::move(elim), depth - 1);
        }

    // branch on an unconstrained monomial factor: the product vanishes iff
    // one of its variables does or the primitive part does
    for (std::size_t t = 0; t < live.size(); ++t) {
        Monomial content = live[t].monomial_content();
        std::vector<Var> branch_vars;
        for (auto& [v, e] : content.factors) {
            (void)e;
            if (!constrained(v)) branch_vars.push_back(v);
        }
        if (branch_vars.empty()) continue;
        bool undecided = false;
        for (Var v : branch_vars) {
            std::vector<Poly> next;
            for (const Poly& p : live) next.push_back(p.subst(v, Poly(Rational(0))));
            auto elim2 = elim;
            elim2.push_back({v, Poly(Rational(0))});
            SolveVerdict sub = solve_rec(ctx, std::move(next), std::move(elim2), depth - 1);
            if (sub.kind == SolveVerdict::Kind::Solvable) return sub;
            if (sub.kind == SolveVerdict::Kind::Undecided) undecided = true;
        }
        {
            std::vector<Poly> next = live;
            next[t] = live[t].divide_monomial(content);
            SolveVerdict sub = solve_rec(ctx, std::move(next), elim, depth - 1);
            if (sub.kind == SolveVerdict::Kind::Solvable) return sub;
            if (sub.kind == SolveVerdict::Kind::Undecided) undecided = true;
        }
        SolveVerdict v;
        if (undecided) {
            v.kind = SolveVerdict::Kind::Undecided;
            v.reason = "a branch stayed undecided";
        } else {
            v.kind = SolveVerdict::Kind::Unsolvable;
            v.reason = "every branch ends in a nonzero constant";
        }
        return v;
    }

    SolveVerdict v;
    v.kind = SolveVerdict::Kind::Undecided;
    v.reason = "no elimination rule applies";
    return v;
}

}  // namespace

SolveVerdict solve_poly_system(std::vector<Poly> eqs, std::vector<Var> nonzero) {
    SolveCtx ctx{eqs, nonzero};
    return solve_rec(ctx, std::move(eqs), {}, 40);
}

SolveVerdict quadratic_obstruction(const SullivanAlgebraPresentation& S,
                                   const AutomorphismFamily& F) {
    std::vector<SymElt> dp = conjugated_differential(S, F);
    std::set<Poly> numerators;
    for (const SymElt& image : dp)
        for (auto& [m, c] : image.terms())
            if (m.size() != 2) numerators.insert(c.num());
    SolveVerdict v = solve_poly_system(std::vector<Poly>(numerators.begin(), numerators.end()),
                                       F.nonzero());
    if (v.kind == SolveVerdict::Kind::Unsolvable) {
        std::string names;
        for (std::size_t t = 0; t < F.nonzero().size(); ++t) {
            if (t > 0) names += ", ";
            names += param_name(F.nonzero()[t]);
        }
        v.reason = names.empty() ? "no rational solution"
                                 : "no rational solution with " + names + " != 0";
    }
    return v;
}

CoformalityVerdict intrinsic_coformality(const std::vector<long>& sphere_dims) {
    for (long n : sphere_dims)
        if (n % 2 == 0 || n < 3)
            throw std::invalid_argument("intrinsic_coformality: sphere dimensions must be odd and >= 3");
    CoformalityVerdict out;
    const int k = static_cast<int>(sphere_dims.size());
    if (k <= 4) return out;
    if (k > 24) throw std::invalid_argument("intrinsic_coformality: too many factors to enumerate");
    for (int i = 0; i < k; ++i)
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            int bits = __builtin_popcount(mask);
            if (bits < 4 || bits % 2 != 0) continue;
            long sum = -1;
            for (int j = 0; j < k; ++j)
                if (mask & (1u << j)) sum += sphere_dims[j];
            if (sum != sphere_dims[i]) continue;
            out.coformal = false;
            out.witness_index = i;
            for (int j = 0; j < k; ++j)
                if (mask & (1u << j)) out.witness_subset.push_back(j);
            return out;
        }
    return out;
}

CoformalityVerdict intrinsic_coformality_em(const std::vector<long>& em_degrees) {
    for (long n : em_degrees)
        if (n % 2 != 0 || n < 2)
            throw std::invalid_argument("intrinsic_coformality_em: degrees must be even and >= 2");
    return {};
}

}  // namespace lieq
