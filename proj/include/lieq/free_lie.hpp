#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lieq/graded.hpp"
#include "lieq/lincomb.hpp"
#include "lieq/linalg.hpp"
#include "lieq/poly.hpp"

namespace lieq {

struct Generator {
    std::string name;
    long degree;  // >= 1, so every degree piece is finite dimensional
};

// Generators with a hard degree cutoff. Nothing above the truncation degree is
// ever enumerated, which keeps all piece computations finite and explicit.
class GeneratorSet {
public:
    explicit GeneratorSet(long truncation);
    int add(const std::string& name, long degree);
    int index_of(const std::string& name) const;  // -1 if absent
    const Generator& gen(int i) const { return gens_.at(i); }
    int size() const { return static_cast<int>(gens_.size()); }
    long truncation() const { return truncation_; }

private:
    long truncation_;
    std::vector<Generator> gens_;
    std::map<std::string, int> by_name_;
};

// Free graded Lie algebra on a GeneratorSet. Elements are hash-consed bracket
// trees (Expr handles); linear combinations are LinComb<Expr, C>. The tensor
// representation realizes [a,b] = a (x) b - (-1)^{|a||b|} b (x) a with plain
// concatenation and no further signs, so equality of Lie elements is equality
// of expanded tensors.
class FreeLie {
public:
    using Expr = int;
    using Word = std::vector<int>;           // generator indices
    using Tensor = LinComb<Word, Rational>;  // element of the tensor algebra

    explicit FreeLie(GeneratorSet gens);

    const GeneratorSet& gens() const { return gens_; }

    Expr leaf(int gen);
    Expr bracket(Expr a, Expr b);
    bool is_leaf(Expr e) const { return nodes_[e].right < 0; }
    int leaf_gen(Expr e) const { return nodes_[e].left; }
    Expr left(Expr e) const { return nodes_[e].left; }
    Expr right(Expr e) const { return nodes_[e].right; }
    long degree(Expr e) const { return nodes_[e].degree; }
    int weight(Expr e) const { return nodes_[e].weight; }
    std::string to_string(Expr e) const;

    const Tensor& expand(Expr e);
    Tensor expand(const LinComb<Expr, Rational>& v);

    long word_degree(const Word& w) const;

    // All words of the given total degree, sorted; index = coordinate.
    const std::vector<Word>& words(long degree);
    int word_index(long degree, const Word& w);
    // Left-normed bracketings [[[g0,g1],g2],...] of every word of the degree,
    // weight-1 leaves included. These span the degree piece.
    const std::vector<Expr>& left_normed_candidates(long degree);
    // Subset of the candidates certified linearly independent by incremental
    // row reduction of their expansions; a basis of the degree piece.
    const std::vector<Expr>& piece_basis(long degree);
    int piece_dim(long degree) { return static_cast<int>(piece_basis(degree).size()); }

    SparseVec tensor_coords(const Tensor& t, long degree);
    // Coordinates with respect to piece_basis(degree); throws if not in span.
    std::vector<Rational> coords_in_basis(const Tensor& t, long degree);

private:
    struct Node {
        int left, right;  // right < 0: leaf, left = generator index
        long degree;
        int weight;
    };
    struct Piece {
        std::vector<Word> words;
        std::map<Word, int> index;
        std::optional<std::vector<Expr>> candidates;
        std::optional<std::vector<Expr>> basis;
        std::unique_ptr<ColumnSpace> coords;  // columns = expansions of basis
    };

    Piece& piece(long degree);
    void enumerate_words(long degree, Word& prefix, std::vector<Word>& out) const;

    GeneratorSet gens_;
    std::vector<Node> nodes_;
    std::map<std::pair<int, int>, Expr> intern_;
    std::vector<int> leaf_of_gen_;
    std::vector<std::optional<Tensor>> expand_memo_;
    std::map<long, Piece> pieces_;
};

template <typename C = Rational>
using LieSum = LinComb<FreeLie::Expr, C>;

// Bilinear bracket on linear combinations.
template <typename C>
LieSum<C> bracket(FreeLie& fl, const LieSum<C>& a, const LieSum<C>& b) {
    LieSum<C> out;
    for (auto& [ea, ca] : a.terms())
        for (auto& [eb, cb] : b.terms()) out.add(fl.bracket(ea, eb), ca * cb);
    return out;
}

inline std::string coeff_str(const Rational& c) { return rat_to_string(c); }
inline std::string coeff_str(const Poly& p) { return "(" + p.to_string() + ")"; }

template <typename C>
std::string to_string(const FreeLie& fl, const LinComb<FreeLie::Expr, C>& v) {
    if (v.is_zero()) return "0";
    std::string out;
    for (auto& [e, c] : v.terms()) {
        if (!out.empty()) out += " + ";
        out += coeff_str(c) + "*" + fl.to_string(e);
    }
    return out;
}

}  // namespace lieq
