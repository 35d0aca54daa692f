#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lieq/dgl.hpp"
#include "lieq/graded.hpp"
#include "lieq/lincomb.hpp"
#include "lieq/rational.hpp"

namespace lieq {

struct BasisElt {
    std::string name;
    long degree;
};

// L-infinity structure on a finite graded basis: for each k up to the arity
// bound a table of ell_k on canonical argument tuples. ell_k has degree k-2
// and is graded antisymmetric, so tuples are stored weakly ascending by basis
// index; evaluation on any other order sorts the arguments and multiplies by
// the signature times the Koszul sign. A repeated argument of even degree is
// forced to zero by antisymmetry and is never stored.
class LInfStructure {
public:
    using Elt = LinComb<int, Rational>;

    LInfStructure(std::vector<BasisElt> basis, int arity_bound);

    const std::vector<BasisElt>& basis() const { return basis_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    long degree(int i) const { return basis_.at(i).degree; }
    int arity_bound() const { return arity_bound_; }

    // args in any order; value must be homogeneous of degree
    // sum |x_i| + k - 2, and zero whenever the canonical form of args is zero
    void set_bracket(std::vector<int> args, const Elt& value);
    Elt bracket(std::vector<int> args) const;

    // canonical tuples only; zero values are not stored
    const std::map<std::vector<int>, Elt>& table() const { return table_; }

    bool is_minimal() const;  // no unary bracket
    bool is_reduced() const;  // every basis degree >= 1

    // (sign, sorted tuple); sign 0 when an even-degree argument repeats
    std::pair<int, std::vector<int>> normalize(std::vector<int> args) const;

private:
    std::vector<BasisElt> basis_;
    int arity_bound_;
    std::map<std::vector<int>, Elt> table_;
};

// ell_k extended multilinearly to linear-combination arguments
LInfStructure::Elt multi_bracket(const LInfStructure& L,
                                 const std::vector<LInfStructure::Elt>& args);

std::string to_string(const LInfStructure& L, const LInfStructure::Elt& v);

struct JacobiReport {
    bool ok = true;
    int arity = 0;       // first n where a relation fails
    std::string witness; // offending tuple and its nonzero defect
};

// Generalized Jacobi relation in arity n:
//   sum_{i+j=n+1} sum over (i,n-i)-shuffles s of
//     sgn(s) kappa(s) (-1)^{i(j-1)} ell_j(ell_i(x_{s1},...,x_{si}), x_{s(i+1)},...)
// vanishes. Checked for n = 1..up_to_n on every canonical basis tuple; the
// result is a truncated certificate, never an unconditional pass. Relations
// with n > 2*arity_bound - 1 hold vacuously, so up_to_n beyond 2*arity_bound
// is rejected as a caller error.
JacobiReport check_generalized_jacobi(const LInfStructure& L, int up_to_n);

// value of the arity-n relation on one argument tuple; zero iff it holds there
LInfStructure::Elt jacobi_defect(const LInfStructure& L, const std::vector<int>& args);

// Canonical word in the free graded-commutative algebra on the suspended
// basis: weakly ascending indices; a letter may repeat only when its
// suspended degree is even.
using Wedge = std::vector<int>;
using CoalgElt = LinComb<Wedge, Rational>;

// Degree -1 coderivation of the cofree cocommutative coalgebra on the
// suspension, recorded through its corestrictions h_k on canonical words.
// delta applies every h_k to every k-subset of a word with the commutative
// Koszul extraction sign and wedges the value back into the remainder.
class Coderivation {
public:
    using Elt = LinComb<int, Rational>;

    Coderivation(std::vector<BasisElt> basis, int arity_bound);

    const std::vector<BasisElt>& basis() const { return basis_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    long degree(int i) const { return basis_.at(i).degree; }  // degree in L
    long sdegree(int i) const { return basis_.at(i).degree + 1; }
    int arity_bound() const { return arity_bound_; }

    void set_h(Wedge word, const Elt& value);
    Elt h(Wedge word) const;
    const std::map<Wedge, Elt>& table() const { return table_; }

    long word_sdegree(const Wedge& w) const;
    // (sign, sorted word); sign 0 when a letter of odd suspended degree repeats
    std::pair<int, Wedge> normalize(Wedge w) const;

    const CoalgElt& delta(const Wedge& w) const;
    CoalgElt delta(const CoalgElt& v) const;

    std::string word_str(const Wedge& w) const;

private:
    std::vector<BasisElt> basis_;
    int arity_bound_;
    std::map<Wedge, Elt> table_;
    mutable std::map<Wedge, CoalgElt> delta_memo_;
};

std::string to_string(const Coderivation& D, const CoalgElt& v);

struct DeltaReport {
    bool ok = true;
    std::string witness;
};

// delta(delta(w)) == 0 for every canonical word of total suspended degree
// <= max_sdegree. Requires a reduced basis so that the word window is finite.
DeltaReport check_delta_squared(const Coderivation& D, long max_sdegree);

// The operations and the corestrictions determine each other through
//   h_k(sx_1 ^ ... ^ sx_k) = sign * s ell_k(x_1,...,x_k),
//   sign = (-1)^k * (-1)^{sum_j (k-j)|sx_j|},
// the Koszul factor coming from moving the k desuspensions past the
// arguments. In particular h_1(sx) = -s dx and h_2(sx^sy) = -(-1)^{|x|}
// s[x,y]. The two conversions are mutually inverse on tables, and delta^2 = 0
// exactly when the brackets satisfy the generalized Jacobi relations.
Coderivation brackets_to_coderivation(const LInfStructure& L);
LInfStructure coderivation_to_brackets(const Coderivation& D);

// Free DGL repackaged as a structure on its piece bases up to the degree
// window: unary table from the differential, binary from the Lie bracket.
// Brackets landing above the window are cut to zero. The cut is a Lie
// quotient but not a chain quotient: the differential lowers degree and does
// not descend, so the arity-2 relations fail exactly on pairs whose degrees
// sum to one past the window and hold everywhere else.
LInfStructure linf_from_dgl(Dgl& dgl, long truncation);

// Coalgebra presentation of the DGL's chain coalgebra on the window:
// delta = delta_1 + delta_2 with h_1(sx) = -s dx, h_2(sx^sy) =
// -(-1)^{|x|} s[x,y]. Certifies delta^2 = 0 before returning: the square is
// itself a coderivation, so its corestrictions live on words of length <= 3
// and checking those through the degree window is the honest truncated
// certificate.
Coderivation quillen_chains(Dgl& dgl, long truncation);

// Morphism tables between two structures: for each n a graded antisymmetric
// f_n of degree n-1, stored on canonical source tuples.
class LInfMorphism {
public:
    using Elt = LinComb<int, Rational>;

    LInfMorphism(LInfStructure source, LInfStructure target, int arity_bound);

    const LInfStructure& source() const { return source_; }
    const LInfStructure& target() const { return target_; }
    int arity_bound() const { return arity_bound_; }

    void set_f(std::vector<int> args, const Elt& value);
    Elt f(std::vector<int> args) const;
    const std::map<std::vector<int>, Elt>& table() const { return table_; }

private:
    LInfStructure source_, target_;
    int arity_bound_;
    std::map<std::vector<int>, Elt> table_;
};

struct MorphismReport {
    bool ok = true;
    int arity = 0;
    std::string witness;
};

// Defining identity in arity n, checked on every canonical source tuple up
// to up_to_n. One side runs the source operations first:
//   sum_{i+j=n+1} sum over (i,n-i)-shuffles of
//     sgn kappa (-1)^{i(j-1)} f_j(ell_i(...), ...).
// The other runs the morphism first, summing over partitions of the
// arguments into blocks B_1..B_k ordered by (size, least element):
//   sgn(tau) kappa(tau) (-1)^{sum_l (k-l)(|B_l|-1)}
//     ell'_k(f_{|B_1|}(x_{B_1}), ..., f_{|B_k|}(x_{B_k})),
// tau the permutation laying the blocks out in order.
MorphismReport check_linf_morphism(const LInfMorphism& F, int up_to_n);

// difference of the two sides of the identity on one argument tuple
LInfMorphism::Elt morphism_defect(const LInfMorphism& F, const std::vector<int>& args);

// corestriction onto the target suspension of (F delta - delta' F) on one
// canonical source word; vanishing of these over all arities is the full
// coalgebra-level condition by cofreeness
LInfMorphism::Elt morphism_defect_coalgebra(const LInfMorphism& F, const Wedge& w);

// Same condition on the coalgebra side: the induced coalgebra map must
// intertwine the two codifferentials on every canonical source word of
// length <= up_to_n. Blockwise suspension of f_k carries the sign
// (-1)^{k(k-1)/2} (-1)^{sum_j (k-j)|sx_j|}; with that convention the two
// checks accept exactly the same tables.
MorphismReport check_linf_morphism_coalgebra(const LInfMorphism& F, int up_to_n);

}  // namespace lieq
