#include "lieq/quillen_ss.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "lieq/graded.hpp"

namespace lieq {

namespace {

void enum_words(const Coderivation& D, long budget, int from, Wedge& cur,
                std::vector<Wedge>& out) {
    if (budget == 0) {
        if (!cur.empty()) out.push_back(cur);
        return;
    }
    for (int i = from; i < D.dim(); ++i) {
        const long s = D.sdegree(i);
        if (s > budget) continue;
        if (!cur.empty() && cur.back() == i && s % 2 != 0) continue;
        cur.push_back(i);
        enum_words(D, budget - s, i, cur, out);
        cur.pop_back();
    }
}

SparseVec reverse_coords(const SparseVec& v, int m) {
    SparseVec out;
    out.reserve(v.size());
    for (auto it = v.rbegin(); it != v.rend(); ++it)
        out.push_back({m - 1 - it->first, it->second});
    return out;
}

// all block data of one page in one degree range; degree n-1 cells are
// always built before degree n needs them as targets
struct Engine {
    const FilteredCDGC& C;
    int k;
    long maxdeg;

    std::map<long, std::vector<SparseVec>> dvecs_;

    struct Cell {
        std::vector<SparseVec> reps;        // residues, original coordinates
        std::optional<ColumnSpace> solver;  // columns [reps | denominator]
    };
    std::map<std::pair<int, long>, Cell> cells;

    Engine(const FilteredCDGC& c, int page, long md) : C(c), k(page), maxdeg(md) {
        for (long n = 2; n <= maxdeg; ++n) {
            const int pmax = static_cast<int>(n / 2) + 1;
            for (int p = 1; p <= pmax; ++p) build_cell(p, n);
        }
    }

    const std::vector<Wedge>& words(long n) const {
        static const std::vector<Wedge> none;
        return n >= 2 ? C.words(n) : none;
    }

    // words are listed shortest first, so F_p is a coordinate prefix
    int cut(int p, long n) const {
        const std::vector<Wedge>& ws = words(n);
        if (p <= 0) return 0;
        int c = 0;
        while (c < static_cast<int>(ws.size()) &&
               static_cast<int>(ws[c].size()) <= p)
            ++c;
        return c;
    }

    const std::vector<SparseVec>& dvec(long n) {
        auto it = dvecs_.find(n);
        if (it != dvecs_.end()) return it->second;
        const std::vector<Wedge>& ws = words(n);
        std::map<Wedge, int> index;
        const std::vector<Wedge>& lower = words(n - 1);
        for (int i = 0; i < static_cast<int>(lower.size()); ++i) index[lower[i]] = i;
        std::vector<SparseVec> vs(ws.size());
        for (std::size_t i = 0; i < ws.size(); ++i) {
            std::vector<std::pair<int, Rational>> entries;
            for (auto& [w, c] : C.delta().delta(ws[i]).terms())
                entries.push_back({index.at(w), c});
            std::sort(entries.begin(), entries.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            vs[i] = SparseVec(entries.begin(), entries.end());
        }
        return dvecs_.emplace(n, std::move(vs)).first->second;
    }

    // basis of Z^j_p = F_p with delta landing in F_{p-j}, degree n
    std::vector<SparseVec> zspace(int p, int j, long n) {
        std::vector<SparseVec> out;
        if (n < 2) return out;
        const int c = cut(p, n);
        if (c == 0) return out;
        const int total = static_cast<int>(words(n - 1).size());
        const int keep = cut(p - j, n - 1);
        const std::vector<SparseVec>& dv = dvec(n);
        if (keep >= total) {
            for (int i = 0; i < c; ++i) out.push_back(SparseVec{{i, Rational(1)}});
            return out;
        }
        std::vector<SparseVec> cols(c);
        for (int i = 0; i < c; ++i)
            for (auto& [idx, coef] : dv[i])
                if (idx >= keep) cols[i].push_back({idx - keep, coef});
        ColumnSpace cs(total - keep, cols);
        for (const std::vector<Rational>& kv : cs.kernel_basis())
            out.push_back(sv_from_dense(kv));
        return out;
    }

    // spanning set of D^j_p = F_p intersected with delta(F_{p+j}), degree n
    std::vector<SparseVec> dspace(int p, int j, long n) {
        std::vector<SparseVec> out;
        if (n + 1 > C.max_degree()) throw std::logic_error("boundary space beyond truncation");
        const int src = cut(p + j, n + 1);
        if (src == 0) return out;
        const int keep = cut(p, n);
        const int total = static_cast<int>(words(n).size());
        const std::vector<SparseVec>& dv = dvec(n + 1);
        RowSpace seen(total);
        auto emit = [&](const SparseVec& v) {
            if (seen.add(v)) out.push_back(v);
        };
        if (keep >= total) {
            for (int i = 0; i < src; ++i) emit(dv[i]);
            return out;
        }
        std::vector<SparseVec> cols(src);
        for (int i = 0; i < src; ++i)
            for (auto& [idx, coef] : dv[i])
                if (idx >= keep) cols[i].push_back({idx - keep, coef});
        ColumnSpace cs(total - keep, cols);
        for (const std::vector<Rational>& kv : cs.kernel_basis()) {
            SparseVec v;
            for (int i = 0; i < src; ++i)
                if (!is_zero(kv[i])) sv_axpy(v, kv[i], dv[i]);
            emit(v);
        }
        return out;
    }

    void build_cell(int p, long n) {
        Cell cell;
        const int m = static_cast<int>(words(n).size());
        if (m == 0) {
            cells.emplace(std::make_pair(p, n), std::move(cell));
            return;
        }
        std::vector<SparseVec> den = zspace(p - 1, k - 1, n);
        for (SparseVec& v : dspace(p, k - 1, n)) den.push_back(std::move(v));
        // residues with maximal word-length components eliminated first:
        // reduction runs in reversed coordinates, longest words leading
        RowSpace wrev(m);
        for (const SparseVec& v : den) wrev.add(reverse_coords(v, m));
        RowSpace erev(m);
        for (const SparseVec& z : zspace(p, k, n)) erev.add(wrev.reduce(reverse_coords(z, m)));
        for (auto& [piv, row] : erev.rows()) cell.reps.push_back(reverse_coords(row, m));
        if (!cell.reps.empty() || !den.empty()) {
            std::vector<SparseVec> cols = cell.reps;
            for (SparseVec& v : den) cols.push_back(std::move(v));
            cell.solver.emplace(m, cols);
        }
        cells.emplace(std::make_pair(p, n), std::move(cell));
    }

    const Cell* cell(int p, long n) const {
        auto it = cells.find({p, n});
        return it == cells.end() ? nullptr : &it->second;
    }

    // coordinates of delta(rep) one degree down
    SparseVec push(const SparseVec& rep, long n) {
        SparseVec acc;
        const std::vector<SparseVec>& dv = dvec(n);
        for (auto& [idx, c] : rep) sv_axpy(acc, c, dv[idx]);
        return acc;
    }
};

}  // namespace

FilteredCDGC::FilteredCDGC(Coderivation delta, long max_degree, int max_length)
    : delta_(std::move(delta)), max_degree_(max_degree), max_length_(max_length) {
    if (max_degree_ < 1) throw std::invalid_argument("max_degree must be positive");
    for (int i = 0; i < delta_.dim(); ++i)
        if (delta_.degree(i) < 1)
            throw std::invalid_argument("filtered chains need a reduced basis");
    if (max_length_ < 0) max_length_ = static_cast<int>(max_degree_ / 2);
    if (max_length_ < 1) throw std::invalid_argument("max_length must be positive");
}

const std::vector<Wedge>& FilteredCDGC::words(long degree) const {
    if (degree > max_degree_) throw std::invalid_argument("degree beyond truncation");
    auto it = words_.find(degree);
    if (it != words_.end()) return it->second;
    std::vector<Wedge> out;
    if (degree >= 1) {
        Wedge cur;
        enum_words(delta_, degree, 0, cur, out);
    }
    std::stable_sort(out.begin(), out.end(), [](const Wedge& a, const Wedge& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return words_.emplace(degree, std::move(out)).first->second;
}

std::vector<Wedge> FilteredCDGC::filtration_subspace(int p, long degree) const {
    if (p < 0 || p > max_length_ || degree > max_degree_)
        throw std::invalid_argument("truncation exceeded");
    std::vector<Wedge> out;
    for (const Wedge& w : words(degree)) {
        if (static_cast<int>(w.size()) > p) break;
        out.push_back(w);
    }
    return out;
}

long FilteredCDGC::safe_degree() const {
    return std::min(max_degree_ - 1, 2L * max_length_ + 1);
}

LinComb<std::pair<Wedge, Wedge>, Rational> reduced_diagonal(const Coderivation& D,
                                                            const Wedge& w) {
    LinComb<std::pair<Wedge, Wedge>, Rational> out;
    const int n = static_cast<int>(w.size());
    std::vector<long> sdegs(n);
    for (int t = 0; t < n; ++t) sdegs[t] = D.sdegree(w[t]);
    for (int r = 1; r < n; ++r)
        for (const Perm& p : shuffles(r, n - r)) {
            Wedge left(r), right(n - r);
            for (int t = 0; t < r; ++t) left[t] = w[p[t]];
            for (int t = r; t < n; ++t) right[t - r] = w[p[t]];
            out.add({left, right}, Rational(koszul_sign(p, sdegs)));
        }
    return out;
}

const SSBlock* SSPage::block(int p, long degree) const {
    auto it = blocks_.find({p, degree});
    return it == blocks_.end() ? nullptr : &it->second;
}

long SSPage::dim(int p, long degree) const {
    const SSBlock* b = block(p, degree);
    return b ? static_cast<long>(b->reps.size()) : 0;
}

SSPage page(const FilteredCDGC& C, int k) { return page(C, k, C.safe_degree()); }

SSPage page(const FilteredCDGC& C, int k, long max_degree) {
    if (k < 0) throw std::invalid_argument("page index must be non-negative");
    if (max_degree > C.safe_degree())
        throw std::invalid_argument("requested range not certifiable at this truncation");
    SSPage out;
    out.k_ = k;
    out.max_degree_ = max_degree;
    Engine eng(C, k, max_degree);
    for (auto& [key, cell] : eng.cells) {
        if (cell.reps.empty()) continue;
        auto [p, n] = key;
        SSBlock b;
        b.p = p;
        b.degree = n;
        const std::vector<Wedge>& ws = C.words(n);
        for (const SparseVec& r : cell.reps) {
            CoalgElt e;
            for (auto& [idx, c] : r) e.add(ws[idx], c);
            b.reps.push_back(std::move(e));
        }
        const Engine::Cell* tc = eng.cell(p - k, n - 1);
        const int trep = tc ? static_cast<int>(tc->reps.size()) : 0;
        b.d.assign(trep, std::vector<Rational>(cell.reps.size(), Rational(0)));
        for (std::size_t j = 0; j < cell.reps.size(); ++j) {
            SparseVec img = eng.push(cell.reps[j], n);
            if (img.empty()) continue;
            if (!tc || !tc->solver)
                throw std::logic_error("differential escapes the page decomposition");
            std::optional<std::vector<Rational>> sol = tc->solver->solve(img);
            if (!sol) throw std::logic_error("differential escapes the page decomposition");
            for (int i = 0; i < trep; ++i) b.d[i][j] = (*sol)[i];
        }
        out.blocks_.emplace(key, std::move(b));
    }
    return out;
}

CollapseReport collapses_through(const FilteredCDGC& C, int from_page, long max_degree) {
    if (from_page < 0) throw std::invalid_argument("page index must be non-negative");
    if (max_degree > C.safe_degree())
        throw std::invalid_argument("requested range not certifiable at this truncation");
    CollapseReport rep;
    rep.from_page = from_page;
    rep.max_degree = max_degree;
    const int jmax = static_cast<int>(max_degree / 2);
    rep.last_page = std::max(from_page, jmax);
    for (int j = from_page; j <= jmax; ++j) {
        SSPage pg = page(C, j, max_degree);
        for (auto& [key, b] : pg.blocks())
            for (std::size_t col = 0; col < b.reps.size(); ++col)
                for (std::size_t row = 0; row < b.d.size(); ++row) {
                    if (is_zero(b.d[row][col])) continue;
                    rep.collapsed = false;
                    rep.page = j;
                    rep.p = b.p;
                    rep.degree = b.degree;
                    const SSBlock* tb = pg.block(b.p - j, b.degree - 1);
                    CoalgElt img;
                    for (std::size_t i = 0; i < b.d.size(); ++i) {
                        CoalgElt t = tb->reps[i];
                        t *= b.d[i][col];
                        img += t;
                    }
                    rep.witness = "d^" + std::to_string(j) + "(" +
                                  to_string(C.delta(), b.reps[col]) + ") = " +
                                  to_string(C.delta(), img);
                    return rep;
                }
    }
    rep.collapsed = true;
    return rep;
}

}  // namespace lieq
