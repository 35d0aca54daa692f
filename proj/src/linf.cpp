#include "lieq/linf.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace lieq {

namespace {

// stable argsort: slot k holds the original position of the k-th smallest letter
Perm sort_perm(const std::vector<int>& w) {
    Perm p(w.size());
    std::iota(p.begin(), p.end(), 0);
    std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return w[a] < w[b]; });
    return p;
}

// degs indexed by original position; repeat_parity is the degree parity that
// tolerates equal letters, everything else collapses to sign 0
std::pair<int, std::vector<int>> sorted_with_sign(const std::vector<int>& w,
                                                  const std::vector<long>& degs,
                                                  bool with_sgn, int repeat_parity) {
    Perm p = sort_perm(w);
    int s = koszul_sign(p, degs);
    if (with_sgn) s *= sgn_of_perm(p);
    std::vector<int> out(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) out[k] = w[p[k]];
    for (std::size_t k = 0; k + 1 < out.size(); ++k)
        if (out[k] == out[k + 1] && ((degs[p[k]] % 2) + 2) % 2 != repeat_parity)
            return {0, std::move(out)};
    return {s, std::move(out)};
}

// weakly ascending index tuples of the given length; an index repeats only
// when its degree has the repeat parity
void canonical_tuples(int dim, const std::function<long(int)>& deg, int repeat_parity,
                      int len, const std::function<void(const std::vector<int>&)>& emit) {
    std::vector<int> cur;
    std::function<void(int)> walk = [&](int from) {
        if (static_cast<int>(cur.size()) == len) {
            emit(cur);
            return;
        }
        for (int i = from; i < dim; ++i) {
            if (!cur.empty() && cur.back() == i && ((deg(i) % 2) + 2) % 2 != repeat_parity)
                continue;
            cur.push_back(i);
            walk(i);
            cur.pop_back();
        }
    };
    walk(0);
}

// canonical words of total suspended degree <= max_sdeg and length <= max_len,
// one visit each; visit returns false to stop. Assumes suspended degrees >= 1.
void window_words(const Coderivation& D, long max_sdeg, int max_len,
                  const std::function<bool(const Wedge&)>& visit) {
    std::vector<int> cur;
    bool stop = false;
    std::function<void(int, long)> walk = [&](int from, long left) {
        if (stop) return;
        if (!cur.empty() && !visit(cur)) {
            stop = true;
            return;
        }
        if (static_cast<int>(cur.size()) == max_len) return;
        for (int i = from; i < D.dim() && !stop; ++i) {
            if (D.sdegree(i) > left) continue;
            if (!cur.empty() && cur.back() == i && D.sdegree(i) % 2 != 0) continue;
            cur.push_back(i);
            walk(i, left - D.sdegree(i));
            cur.pop_back();
        }
    };
    walk(0, max_sdeg);
}

// sign of s l_k (s^-1)^{x k}: the k desuspensions crossing the arguments give
// (-1)^{sum_j (k-j)|sx_j|}, and the convention carries an extra (-1)^k
int conv_sign(const std::vector<long>& sdegs) {
    const int k = static_cast<int>(sdegs.size());
    long m = 0;
    for (int j = 0; j < k; ++j) m += static_cast<long>(k - 1 - j) * sdegs[j];
    int s = (k % 2) ? -1 : 1;
    if (m % 2) s = -s;
    return s;
}

// unordered set partitions of 0..n-1; blocks arrive sorted by (size, least
// element) with ascending elements
void for_each_partition(int n, const std::function<void(const std::vector<std::vector<int>>&)>& emit) {
    std::vector<int> which(n, 0);
    std::function<void(int, int)> walk = [&](int t, int used) {
        if (t == n) {
            std::vector<std::vector<int>> blocks(used);
            for (int u = 0; u < n; ++u) blocks[which[u]].push_back(u);
            std::stable_sort(blocks.begin(), blocks.end(),
                             [](const std::vector<int>& a, const std::vector<int>& b) {
                                 if (a.size() != b.size()) return a.size() < b.size();
                                 return a[0] < b[0];
                             });
            emit(blocks);
            return;
        }
        for (int b = 0; b <= used; ++b) {
            which[t] = b;
            walk(t + 1, std::max(used, b + 1));
        }
    };
    walk(1, 1);
}

}  // namespace

LInfStructure::LInfStructure(std::vector<BasisElt> basis, int arity_bound)
    : basis_(std::move(basis)), arity_bound_(arity_bound) {
    if (arity_bound_ < 1) throw std::invalid_argument("LInfStructure: arity bound must be positive");
}

std::pair<int, std::vector<int>> LInfStructure::normalize(std::vector<int> args) const {
    std::vector<long> degs(args.size());
    for (std::size_t t = 0; t < args.size(); ++t) degs[t] = degree(args[t]);
    return sorted_with_sign(args, degs, true, 1);
}

void LInfStructure::set_bracket(std::vector<int> args, const Elt& value) {
    const int k = static_cast<int>(args.size());
    if (k < 1 || k > arity_bound_) throw std::invalid_argument("set_bracket: arity out of range");
    long want = k - 2;
    for (int i : args) want += degree(i);
    for (auto& [y, c] : value.terms()) {
        (void)c;
        if (degree(y) != want)
            throw std::invalid_argument("set_bracket: value is not homogeneous of the right degree");
    }
    auto [sign, canon] = normalize(std::move(args));
    if (sign == 0) {
        if (!value.is_zero())
            throw std::invalid_argument("set_bracket: a repeated even argument forces the value zero");
        return;
    }
    if (value.is_zero()) {
        table_.erase(canon);
        return;
    }
    Elt v = value;
    if (sign < 0) v *= Rational(-1);
    table_[std::move(canon)] = std::move(v);
}

LInfStructure::Elt LInfStructure::bracket(std::vector<int> args) const {
    if (static_cast<int>(args.size()) > arity_bound_) return {};
    auto [sign, canon] = normalize(std::move(args));
    if (sign == 0) return {};
    auto it = table_.find(canon);
    if (it == table_.end()) return {};
    Elt v = it->second;
    if (sign < 0) v *= Rational(-1);
    return v;
}

bool LInfStructure::is_minimal() const {
    for (auto& [w, v] : table_) {
        (void)v;
        if (w.size() == 1) return false;
    }
    return true;
}

bool LInfStructure::is_reduced() const {
    for (auto& b : basis_)
        if (b.degree < 1) return false;
    return true;
}

LInfStructure::Elt multi_bracket(const LInfStructure& L,
                                 const std::vector<LInfStructure::Elt>& args) {
    LInfStructure::Elt out;
    std::vector<int> idx(args.size());
    std::function<void(std::size_t, Rational)> walk = [&](std::size_t pos, Rational c) {
        if (pos == args.size()) {
            LInfStructure::Elt v = L.bracket(idx);
            for (auto& [y, cy] : v.terms()) out.add(y, cy * c);
            return;
        }
        for (auto& [i, ci] : args[pos].terms()) {
            idx[pos] = i;
            walk(pos + 1, c * ci);
        }
    };
    walk(0, Rational(1));
    return out;
}

std::string to_string(const LInfStructure& L, const LInfStructure::Elt& v) {
    std::string out;
    for (auto& [i, c] : v.terms()) {
        if (!out.empty()) out += " + ";
        out += rat_to_string(c) + "*" + L.basis()[i].name;
    }
    return out;
}

LInfStructure::Elt jacobi_defect(const LInfStructure& L, const std::vector<int>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<long> degs(n);
    for (int t = 0; t < n; ++t) degs[t] = L.degree(x[t]);
    LInfStructure::Elt acc;
    for (int i = 1; i <= n; ++i) {
        const int j = n + 1 - i;
        if (i > L.arity_bound() || j > L.arity_bound()) continue;
        const int phase = ((i * (j - 1)) % 2) ? -1 : 1;
        for (const Perm& p : shuffles(i, n - i)) {
            const int s0 = sgn_of_perm(p) * koszul_sign(p, degs) * phase;
            std::vector<int> head(i);
            for (int t = 0; t < i; ++t) head[t] = x[p[t]];
            LInfStructure::Elt inner = L.bracket(head);
            if (inner.is_zero()) continue;
            std::vector<int> outer(j);
            for (int t = 1; t < j; ++t) outer[t] = x[p[i + t - 1]];
            for (auto& [y, c] : inner.terms()) {
                outer[0] = y;
                LInfStructure::Elt o = L.bracket(outer);
                const Rational cc = c * Rational(s0);
                for (auto& [z, cz] : o.terms()) acc.add(z, cz * cc);
            }
        }
    }
    return acc;
}

JacobiReport check_generalized_jacobi(const LInfStructure& L, int up_to_n) {
    if (up_to_n < 1)
        throw std::invalid_argument("check_generalized_jacobi: arity window must be positive");
    if (up_to_n > 2 * L.arity_bound())
        throw std::invalid_argument(
            "check_generalized_jacobi: relations beyond twice the arity bound hold vacuously");
    for (int n = 1; n <= up_to_n; ++n) {
        JacobiReport bad;
        bool failed = false;
        canonical_tuples(
            L.dim(), [&](int i) { return L.degree(i); }, 1, n,
            [&](const std::vector<int>& x) {
                if (failed) return;
                LInfStructure::Elt acc = jacobi_defect(L, x);
                if (acc.is_zero()) return;
                failed = true;
                std::string w = "(";
                for (int t = 0; t < n; ++t) w += std::string(t ? ", " : "") + L.basis()[x[t]].name;
                w += ") -> " + to_string(L, acc);
                bad = {false, n, w};
            });
        if (failed) return bad;
    }
    return {};
}

Coderivation::Coderivation(std::vector<BasisElt> basis, int arity_bound)
    : basis_(std::move(basis)), arity_bound_(arity_bound) {
    if (arity_bound_ < 1) throw std::invalid_argument("Coderivation: arity bound must be positive");
}

std::pair<int, Wedge> Coderivation::normalize(Wedge w) const {
    std::vector<long> degs(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) degs[t] = sdegree(w[t]);
    return sorted_with_sign(w, degs, false, 0);
}

long Coderivation::word_sdegree(const Wedge& w) const {
    long d = 0;
    for (int i : w) d += sdegree(i);
    return d;
}

void Coderivation::set_h(Wedge word, const Elt& value) {
    const int k = static_cast<int>(word.size());
    if (k < 1 || k > arity_bound_) throw std::invalid_argument("set_h: arity out of range");
    long want = -1;
    for (int i : word) want += sdegree(i);
    for (auto& [y, c] : value.terms()) {
        (void)c;
        if (sdegree(y) != want)
            throw std::invalid_argument("set_h: value is not homogeneous of the right degree");
    }
    auto [sign, canon] = normalize(std::move(word));
    if (sign == 0) {
        if (!value.is_zero())
            throw std::invalid_argument("set_h: a repeated odd letter forces the value zero");
        return;
    }
    if (value.is_zero()) {
        table_.erase(canon);
        return;
    }
    Elt v = value;
    if (sign < 0) v *= Rational(-1);
    table_[std::move(canon)] = std::move(v);
    delta_memo_.clear();
}

Coderivation::Elt Coderivation::h(Wedge word) const {
    if (static_cast<int>(word.size()) > arity_bound_) return {};
    auto [sign, canon] = normalize(std::move(word));
    if (sign == 0) return {};
    auto it = table_.find(canon);
    if (it == table_.end()) return {};
    Elt v = it->second;
    if (sign < 0) v *= Rational(-1);
    return v;
}

const CoalgElt& Coderivation::delta(const Wedge& w) const {
    auto found = delta_memo_.find(w);
    if (found != delta_memo_.end()) return found->second;
    const int n = static_cast<int>(w.size());
    std::vector<long> sdegs(n);
    for (int t = 0; t < n; ++t) sdegs[t] = sdegree(w[t]);
    CoalgElt out;
    for (int k = 1; k <= std::min(n, arity_bound_); ++k) {
        for (const Perm& p : shuffles(k, n - k)) {
            const int es = koszul_sign(p, sdegs);
            Wedge sub(k);
            for (int t = 0; t < k; ++t) sub[t] = w[p[t]];
            auto it = table_.find(sub);
            if (it == table_.end()) continue;
            Wedge rest(n - k + 1);
            for (int t = 1; t <= n - k; ++t) rest[t] = w[p[k + t - 1]];
            for (auto& [y, c] : it->second.terms()) {
                rest[0] = y;
                auto [s2, canon] = normalize(rest);
                if (s2 == 0) continue;
                out.add(canon, c * Rational(es * s2));
            }
        }
    }
    auto pos = delta_memo_.emplace(w, std::move(out)).first;
    return pos->second;
}

CoalgElt Coderivation::delta(const CoalgElt& v) const {
    CoalgElt out;
    for (auto& [w, c] : v.terms())
        for (auto& [u, cu] : delta(w).terms()) out.add(u, cu * c);
    return out;
}

std::string Coderivation::word_str(const Wedge& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (int i : w) {
        if (!out.empty()) out += "^";
        out += "s" + basis_[i].name;
    }
    return out;
}

std::string to_string(const Coderivation& D, const CoalgElt& v) {
    std::string out;
    for (auto& [w, c] : v.terms()) {
        if (!out.empty()) out += " + ";
        out += rat_to_string(c) + "*" + D.word_str(w);
    }
    return out;
}

DeltaReport check_delta_squared(const Coderivation& D, long max_sdegree) {
    for (int i = 0; i < D.dim(); ++i)
        if (D.degree(i) < 1)
            throw std::invalid_argument("check_delta_squared: basis must be reduced");
    DeltaReport rep;
    window_words(D, max_sdegree, static_cast<int>(max_sdegree / 2) + 1, [&](const Wedge& w) {
        CoalgElt dd = D.delta(D.delta(w));
        if (dd.is_zero()) return true;
        rep.ok = false;
        rep.witness = D.word_str(w) + " -> " + to_string(D, dd);
        return false;
    });
    return rep;
}

Coderivation brackets_to_coderivation(const LInfStructure& L) {
    Coderivation D(L.basis(), L.arity_bound());
    for (auto& [args, val] : L.table()) {
        std::vector<long> sdegs;
        sdegs.reserve(args.size());
        for (int i : args) sdegs.push_back(L.degree(i) + 1);
        LInfStructure::Elt v = val;
        if (conv_sign(sdegs) < 0) v *= Rational(-1);
        D.set_h(args, v);
    }
    return D;
}

LInfStructure coderivation_to_brackets(const Coderivation& D) {
    LInfStructure L(D.basis(), D.arity_bound());
    for (auto& [word, val] : D.table()) {
        std::vector<long> sdegs;
        sdegs.reserve(word.size());
        for (int i : word) sdegs.push_back(D.sdegree(i));
        Coderivation::Elt v = val;
        if (conv_sign(sdegs) < 0) v *= Rational(-1);
        L.set_bracket(word, v);
    }
    return L;
}

LInfStructure linf_from_dgl(Dgl& dgl, long truncation) {
    FreeLie& fl = dgl.lie();
    if (truncation < 1 || truncation > fl.gens().truncation())
        throw std::invalid_argument("linf_from_dgl: window must lie inside the generator truncation");
    std::string witness;
    if (!dgl.check_d_squared(truncation, &witness))
        throw std::invalid_argument("linf_from_dgl: differential does not square to zero: " + witness);
    std::vector<BasisElt> basis;
    std::vector<FreeLie::Expr> exprs;
    std::map<long, int> offset;
    for (long n = 1; n <= truncation; ++n) {
        offset[n] = static_cast<int>(basis.size());
        for (FreeLie::Expr e : fl.piece_basis(n)) {
            basis.push_back({fl.to_string(e), n});
            exprs.push_back(e);
        }
    }
    LInfStructure L(std::move(basis), 2);
    auto coords_elt = [&](const LieSum<Rational>& v, long n) {
        LInfStructure::Elt out;
        if (v.is_zero()) return out;
        std::vector<Rational> c = fl.coords_in_basis(fl.expand(v), n);
        for (std::size_t t = 0; t < c.size(); ++t)
            if (!is_zero(c[t])) out.add(offset.at(n) + static_cast<int>(t), c[t]);
        return out;
    };
    const int dim = static_cast<int>(exprs.size());
    for (int i = 0; i < dim; ++i) {
        const long n = L.degree(i);
        if (n == 1) continue;
        LInfStructure::Elt v = coords_elt(dgl.d(exprs[i]), n - 1);
        if (!v.is_zero()) L.set_bracket({i}, v);
    }
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            const long n = L.degree(i) + L.degree(j);
            if (n > truncation) continue;
            if (i == j && L.degree(i) % 2 == 0) continue;
            LieSum<Rational> b;
            b.add(fl.bracket(exprs[i], exprs[j]), Rational(1));
            LInfStructure::Elt v = coords_elt(b, n);
            if (!v.is_zero()) L.set_bracket({i, j}, v);
        }
    return L;
}

Coderivation quillen_chains(Dgl& dgl, long truncation) {
    Coderivation D = brackets_to_coderivation(linf_from_dgl(dgl, truncation));
    // the square of delta is again a coderivation, so its corestrictions, which
    // live on words of length <= 3 here, certify it zero through the window
    std::string bad;
    window_words(D, truncation + 2, 3, [&](const Wedge& w) {
        if (D.delta(D.delta(w)).is_zero()) return true;
        bad = D.word_str(w);
        return false;
    });
    if (!bad.empty())
        throw std::logic_error("quillen_chains: differential square is nonzero on " + bad);
    return D;
}

LInfMorphism::LInfMorphism(LInfStructure source, LInfStructure target, int arity_bound)
    : source_(std::move(source)), target_(std::move(target)), arity_bound_(arity_bound) {
    if (arity_bound_ < 1) throw std::invalid_argument("LInfMorphism: arity bound must be positive");
}

void LInfMorphism::set_f(std::vector<int> args, const Elt& value) {
    const int k = static_cast<int>(args.size());
    if (k < 1 || k > arity_bound_) throw std::invalid_argument("set_f: arity out of range");
    long want = k - 1;
    for (int i : args) want += source_.degree(i);
    for (auto& [y, c] : value.terms()) {
        (void)c;
        if (target_.degree(y) != want)
            throw std::invalid_argument("set_f: value is not homogeneous of the right degree");
    }
    auto [sign, canon] = source_.normalize(std::move(args));
    if (sign == 0) {
        if (!value.is_zero())
            throw std::invalid_argument("set_f: a repeated even argument forces the value zero");
        return;
    }
    if (value.is_zero()) {
        table_.erase(canon);
        return;
    }
    Elt v = value;
    if (sign < 0) v *= Rational(-1);
    table_[std::move(canon)] = std::move(v);
}

LInfMorphism::Elt LInfMorphism::f(std::vector<int> args) const {
    if (static_cast<int>(args.size()) > arity_bound_) return {};
    auto [sign, canon] = source_.normalize(std::move(args));
    if (sign == 0) return {};
    auto it = table_.find(canon);
    if (it == table_.end()) return {};
    Elt v = it->second;
    if (sign < 0) v *= Rational(-1);
    return v;
}

LInfMorphism::Elt morphism_defect(const LInfMorphism& F, const std::vector<int>& x) {
    const LInfStructure& S = F.source();
    const LInfStructure& T = F.target();
    const int n = static_cast<int>(x.size());
    std::vector<long> degs(n);
    for (int t = 0; t < n; ++t) degs[t] = S.degree(x[t]);
    LInfMorphism::Elt lhs;
    for (int i = 1; i <= n; ++i) {
        const int j = n + 1 - i;
        const int phase = ((i * (j - 1)) % 2) ? -1 : 1;
        for (const Perm& p : shuffles(i, n - i)) {
            const int s0 = sgn_of_perm(p) * koszul_sign(p, degs) * phase;
            std::vector<int> head(i);
            for (int t = 0; t < i; ++t) head[t] = x[p[t]];
            LInfStructure::Elt inner = S.bracket(head);
            if (inner.is_zero()) continue;
            std::vector<int> outer(j);
            for (int t = 1; t < j; ++t) outer[t] = x[p[i + t - 1]];
            for (auto& [y, c] : inner.terms()) {
                outer[0] = y;
                LInfMorphism::Elt val = F.f(outer);
                const Rational cc = c * Rational(s0);
                for (auto& [z, cz] : val.terms()) lhs.add(z, cz * cc);
            }
        }
    }
    LInfMorphism::Elt rhs;
    for_each_partition(n, [&](const std::vector<std::vector<int>>& blocks) {
        const int k = static_cast<int>(blocks.size());
        if (k > T.arity_bound()) return;
        Perm tau;
        tau.reserve(n);
        for (auto& B : blocks) tau.insert(tau.end(), B.begin(), B.end());
        int s1 = sgn_of_perm(tau) * koszul_sign(tau, degs);
        long ek = 0;
        for (int l = 0; l < k; ++l)
            ek += static_cast<long>(k - 1 - l) * (static_cast<long>(blocks[l].size()) - 1);
        if (ek % 2) s1 = -s1;
        std::vector<LInfStructure::Elt> fb(k);
        for (int l = 0; l < k; ++l) {
            std::vector<int> ar;
            ar.reserve(blocks[l].size());
            for (int t : blocks[l]) ar.push_back(x[t]);
            fb[l] = F.f(ar);
            if (fb[l].is_zero()) return;
        }
        LInfStructure::Elt term = multi_bracket(T, fb);
        for (auto& [y, c] : term.terms()) rhs.add(y, c * Rational(s1));
    });
    lhs -= rhs;
    return lhs;
}

MorphismReport check_linf_morphism(const LInfMorphism& F, int up_to_n) {
    if (up_to_n < 1)
        throw std::invalid_argument("check_linf_morphism: arity window must be positive");
    for (int n = 1; n <= up_to_n; ++n) {
        MorphismReport bad;
        bool failed = false;
        canonical_tuples(
            F.source().dim(), [&](int i) { return F.source().degree(i); }, 1, n,
            [&](const std::vector<int>& x) {
                if (failed) return;
                LInfMorphism::Elt d = morphism_defect(F, x);
                if (d.is_zero()) return;
                failed = true;
                std::string w = "(";
                for (int t = 0; t < n; ++t)
                    w += std::string(t ? ", " : "") + F.source().basis()[x[t]].name;
                w += ") -> " + to_string(F.target(), d);
                bad = {false, n, w};
            });
        if (failed) return bad;
    }
    return {};
}

namespace {

// sign carried by the blockwise suspension (-1)^{k(k-1)/2} s f_k (s^-1)^{x k}:
// the desuspensions crossing the arguments give (-1)^{sum_j (k-j)|sx_j|} on
// top of the prefactor. With this choice the coalgebra condition and the
// operation-level identity cut out the same tables, tuple by tuple.
int block_sign(const std::vector<long>& sdegs) {
    const int k = static_cast<int>(sdegs.size());
    long m = 0;
    for (int j = 0; j < k; ++j) m += static_cast<long>(k - 1 - j) * sdegs[j];
    int s = ((k * (k - 1) / 2) % 2) ? -1 : 1;
    if (m % 2) s = -s;
    return s;
}

// coalgebra map induced by the morphism tables on one canonical source word
CoalgElt coalg_map(const LInfMorphism& F, const Coderivation& Dt, const Wedge& w) {
    const LInfStructure& S = F.source();
    const int n = static_cast<int>(w.size());
    CoalgElt out;
    if (n == 0) {
        out.add({}, Rational(1));
        return out;
    }
    std::vector<long> sdegs(n);
    for (int t = 0; t < n; ++t) sdegs[t] = S.degree(w[t]) + 1;
    for_each_partition(n, [&](const std::vector<std::vector<int>>& blocks) {
        const int k = static_cast<int>(blocks.size());
        Perm tau;
        tau.reserve(n);
        for (auto& B : blocks) tau.insert(tau.end(), B.begin(), B.end());
        int sign = koszul_sign(tau, sdegs);
        std::vector<LInfMorphism::Elt> vals(k);
        for (int l = 0; l < k; ++l) {
            std::vector<int> ar;
            std::vector<long> bs;
            ar.reserve(blocks[l].size());
            for (int t : blocks[l]) {
                ar.push_back(w[t]);
                bs.push_back(sdegs[t]);
            }
            vals[l] = F.f(ar);
            if (vals[l].is_zero()) return;
            sign *= block_sign(bs);
        }
        std::vector<int> letters(k);
        std::function<void(int, Rational)> walk = [&](int l, Rational c) {
            if (l == k) {
                auto [s2, canon] = Dt.normalize(letters);
                if (s2 != 0) out.add(canon, c * Rational(s2));
                return;
            }
            for (auto& [y, cy] : vals[l].terms()) {
                letters[l] = y;
                walk(l + 1, c * cy);
            }
        };
        walk(0, Rational(sign));
    });
    return out;
}

CoalgElt full_coalg_defect(const LInfMorphism& F, const Coderivation& Ds,
                           const Coderivation& Dt, const Wedge& w) {
    CoalgElt a;
    for (auto& [u, c] : Ds.delta(w).terms()) {
        CoalgElt fu = coalg_map(F, Dt, u);
        for (auto& [v, cv] : fu.terms()) a.add(v, cv * c);
    }
    CoalgElt b = Dt.delta(coalg_map(F, Dt, w));
    a -= b;
    return a;
}

}  // namespace

LInfMorphism::Elt morphism_defect_coalgebra(const LInfMorphism& F, const Wedge& w) {
    Coderivation Ds = brackets_to_coderivation(F.source());
    Coderivation Dt = brackets_to_coderivation(F.target());
    CoalgElt d = full_coalg_defect(F, Ds, Dt, w);
    LInfMorphism::Elt out;
    for (auto& [v, c] : d.terms())
        if (v.size() == 1) out.add(v[0], c);
    return out;
}

MorphismReport check_linf_morphism_coalgebra(const LInfMorphism& F, int up_to_n) {
    if (up_to_n < 1)
        throw std::invalid_argument("check_linf_morphism_coalgebra: arity window must be positive");
    const Coderivation Ds = brackets_to_coderivation(F.source());
    const Coderivation Dt = brackets_to_coderivation(F.target());
    for (int n = 1; n <= up_to_n; ++n) {
        MorphismReport bad;
        bool failed = false;
        canonical_tuples(
            F.source().dim(), [&](int i) { return F.source().degree(i); }, 1, n,
            [&](const std::vector<int>& x) {
                if (failed) return;
                CoalgElt d = full_coalg_defect(F, Ds, Dt, x);
                if (d.is_zero()) return;
                failed = true;
                bad = {false, n, Ds.word_str(x) + " -> " + to_string(Dt, d)};
            });
        if (failed) return bad;
    }
    return {};
}

}  // namespace lieq
