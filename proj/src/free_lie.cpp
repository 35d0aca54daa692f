#include "lieq/free_lie.hpp"

#include <algorithm>
#include <stdexcept>

namespace lieq {

GeneratorSet::GeneratorSet(long truncation) : truncation_(truncation) {
    if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
}

int GeneratorSet::add(const std::string& name, long degree) {
    if (degree < 1) throw std::invalid_argument("generator degree must be >= 1: " + name);
    if (by_name_.count(name)) throw std::invalid_argument("duplicate generator: " + name);
    int idx = static_cast<int>(gens_.size());
    gens_.push_back({name, degree});
    by_name_.emplace(name, idx);
    return idx;
}

int GeneratorSet::index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : it->second;
}

FreeLie::FreeLie(GeneratorSet gens) : gens_(std::move(gens)) {
    leaf_of_gen_.assign(gens_.size(), -1);
}

FreeLie::Expr FreeLie::leaf(int gen) {
    if (gen < 0 || gen >= gens_.size()) throw std::out_of_range("leaf: bad generator");
    if (leaf_of_gen_[gen] >= 0) return leaf_of_gen_[gen];
    Expr e = static_cast<Expr>(nodes_.size());
    nodes_.push_back({gen, -1, gens_.gen(gen).degree, 1});
    expand_memo_.emplace_back();
    leaf_of_gen_[gen] = e;
    return e;
}

FreeLie::Expr FreeLie::bracket(Expr a, Expr b) {
    auto key = std::make_pair(a, b);
    auto it = intern_.find(key);
    if (it != intern_.end()) return it->second;
    Expr e = static_cast<Expr>(nodes_.size());
    nodes_.push_back({a, b, nodes_[a].degree + nodes_[b].degree,
                      nodes_[a].weight + nodes_[b].weight});
    expand_memo_.emplace_back();
    intern_.emplace(key, e);
    return e;
}

std::string FreeLie::to_string(Expr e) const {
    if (is_leaf(e)) return gens_.gen(leaf_gen(e)).name;
    return "[" + to_string(left(e)) + "," + to_string(right(e)) + "]";
}

const FreeLie::Tensor& FreeLie::expand(Expr e) {
    if (expand_memo_[e]) return *expand_memo_[e];
    Tensor t;
    if (is_leaf(e)) {
        t.add(Word{leaf_gen(e)}, Rational(1));
    } else {
        const Tensor& ta = expand(left(e));
        const Tensor& tb = expand(right(e));
        long sign_exp = degree(left(e)) * degree(right(e));
        Rational s = neg_one_pow(sign_exp);
        for (auto& [wa, ca] : ta.terms())
            for (auto& [wb, cb] : tb.terms()) {
                Word ab = wa;
                ab.insert(ab.end(), wb.begin(), wb.end());
                t.add(ab, ca * cb);
                Word ba = wb;
                ba.insert(ba.end(), wa.begin(), wa.end());
                t.add(ba, -s * ca * cb);
            }
    }
    expand_memo_[e] = std::move(t);
    return *expand_memo_[e];
}

FreeLie::Tensor FreeLie::expand(const LinComb<Expr, Rational>& v) {
    Tensor out;
    for (auto& [e, c] : v.terms()) {
        Tensor t = expand(e);
        t *= c;
        out += t;
    }
    return out;
}

long FreeLie::word_degree(const Word& w) const {
    long d = 0;
    for (int g : w) d += gens_.gen(g).degree;
    return d;
}

void FreeLie::enumerate_words(long degree, Word& prefix, std::vector<Word>& out) const {
    if (degree == 0) {
        if (!prefix.empty()) out.push_back(prefix);
        return;
    }
    for (int g = 0; g < gens_.size(); ++g) {
        long d = gens_.gen(g).degree;
        if (d > degree) continue;
        prefix.push_back(g);
        enumerate_words(degree - d, prefix, out);
        prefix.pop_back();
    }
}

FreeLie::Piece& FreeLie::piece(long degree) {
    if (degree < 1 || degree > gens_.truncation())
        throw std::out_of_range("degree outside truncation window");
    auto it = pieces_.find(degree);
    if (it != pieces_.end()) return it->second;
    Piece p;
    Word prefix;
    enumerate_words(degree, prefix, p.words);
    std::sort(p.words.begin(), p.words.end());
    for (std::size_t i = 0; i < p.words.size(); ++i) p.index.emplace(p.words[i], static_cast<int>(i));
    return pieces_.emplace(degree, std::move(p)).first->second;
}

const std::vector<FreeLie::Word>& FreeLie::words(long degree) { return piece(degree).words; }

int FreeLie::word_index(long degree, const Word& w) {
    auto& p = piece(degree);
    auto it = p.index.find(w);
    if (it == p.index.end()) throw std::out_of_range("word not in degree piece");
    return it->second;
}

const std::vector<FreeLie::Expr>& FreeLie::left_normed_candidates(long degree) {
    Piece& p = piece(degree);
    if (p.candidates) return *p.candidates;
    // Word lists are sorted, so candidate order is (weight, word) deterministic.
    std::vector<Expr> cand;
    std::vector<std::pair<int, Word>> by_weight;
    for (auto& w : p.words) by_weight.emplace_back(static_cast<int>(w.size()), w);
    std::sort(by_weight.begin(), by_weight.end());
    for (auto& [wt, w] : by_weight) {
        Expr e = leaf(w[0]);
        for (std::size_t k = 1; k < w.size(); ++k) e = bracket(e, leaf(w[k]));
        cand.push_back(e);
    }
    p.candidates = std::move(cand);
    return *p.candidates;
}

const std::vector<FreeLie::Expr>& FreeLie::piece_basis(long degree) {
    Piece& p = piece(degree);
    if (p.basis) return *p.basis;
    const auto& cand = left_normed_candidates(degree);
    RowSpace rs(static_cast<int>(p.words.size()));
    std::vector<Expr> basis;
    for (Expr e : cand) {
        SparseVec row = tensor_coords(expand(e), degree);
        if (rs.add(std::move(row))) basis.push_back(e);
    }
    p.basis = std::move(basis);
    return *p.basis;
}

SparseVec FreeLie::tensor_coords(const Tensor& t, long degree) {
    Piece& p = piece(degree);
    SparseVec out;
    for (auto& [w, c] : t.terms()) {
        auto it = p.index.find(w);
        if (it == p.index.end()) throw std::out_of_range("tensor term outside degree piece");
        out.emplace_back(it->second, c);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

std::vector<Rational> FreeLie::coords_in_basis(const Tensor& t, long degree) {
    Piece& p = piece(degree);
    piece_basis(degree);
    if (!p.coords) {
        std::vector<SparseVec> cols;
        for (Expr e : *p.basis) cols.push_back(tensor_coords(expand(e), degree));
        p.coords = std::make_unique<ColumnSpace>(static_cast<int>(p.words.size()), cols);
    }
    auto sol = p.coords->solve(tensor_coords(t, degree));
    if (!sol) throw std::logic_error("element not in span of piece basis");
    return *sol;
}

}  // namespace lieq
