#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lieq/linalg.hpp"
#include "lieq/linf.hpp"
#include "lieq/poly.hpp"

namespace lieq {

// Canonical word in a free commutative graded algebra: weakly ascending
// generator indices, a letter may repeat only when its degree is even.
using GAMonomial = std::vector<int>;
using GAElt = LinComb<GAMonomial, Rational>;
using SymElt = LinComb<GAMonomial, Frac>;

// Free commutative graded algebra on an ordered generator list, with a
// differential recorded per generator and extended as a derivation. The
// generator order doubles as the declared KS-order; once the ks flag is set,
// every differential image must live in the subalgebra on strictly earlier
// generators.
class SullivanAlgebraPresentation {
public:
    explicit SullivanAlgebraPresentation(std::vector<BasisElt> generators, bool ks = false);

    const std::vector<BasisElt>& generators() const { return gens_; }
    int dim() const { return static_cast<int>(gens_.size()); }
    long degree(int i) const { return gens_.at(i).degree; }
    long word_degree(const GAMonomial& m) const;
    bool ks() const { return ks_; }

    // (sign, sorted word); sign 0 when an odd-degree letter repeats
    std::pair<int, GAMonomial> normalize(GAMonomial m) const;
    GAElt mul(const GAElt& a, const GAElt& b) const;
    SymElt mul(const SymElt& a, const SymElt& b) const;

    // image must be homogeneous of degree |v_i| + 1
    void set_d(int gen, const GAElt& value);
    const GAElt& d(int gen) const;
    GAElt d_part(int gen, int length) const;
    GAElt d(const GAElt& v) const;
    SymElt d(const SymElt& v) const;
    int max_d_length() const;

    // validates triangularity of every stored image, then turns the flag on;
    // returns false (flag untouched) when some image is not triangular
    bool declare_ks();

    bool d_squared_zero(std::string* witness = nullptr) const;

    std::string word_str(const GAMonomial& m) const;
    std::string to_string(const GAElt& v) const;

private:
    std::vector<BasisElt> gens_;
    bool ks_;
    std::vector<GAElt> d_;
};

// Evaluation table <v_p ; sx_q> between two graded bases, extended to words
// of equal length by the signed permutation expansion; the wedge argument is
// read right to left, so a pair of odd dual generators evaluates to -1 on
// the ascending word and a squared even letter to +2. Words of different
// lengths pair to zero.
class PairingTable {
public:
    PairingTable(std::vector<long> v_degrees, std::vector<long> sx_degrees, DenseMat values);
    static PairingTable dual_bases(std::vector<long> sx_degrees);

    int v_count() const { return static_cast<int>(vdeg_.size()); }
    int sx_count() const { return static_cast<int>(sxdeg_.size()); }
    long v_degree(int p) const { return vdeg_.at(p); }
    long sx_degree(int q) const { return sxdeg_.at(q); }
    const Rational& value(int p, int q) const;
    Rational eval(const GAMonomial& vs, const Wedge& xs) const;

private:
    std::vector<long> vdeg_, sxdeg_;
    DenseMat values_;
};

struct DualPresentation {
    SullivanAlgebraPresentation algebra;  // generator i dual to the suspended basis element i
    PairingTable pairing;                 // dual-bases table, the source of every evaluation
};

// Cochain algebra of the structure: one generator per basis element, one
// degree up, with the word-length-k differential part determined against the
// dual bases. The coefficient of a word is the suspended bracket evaluation
// divided by the word's self-pairing, whose magnitude is the product of the
// letter multiplicities; a squared letter therefore picks up the bracket
// coefficient at half weight. With certify set, d^2 = 0 is re-checked
// whenever the input satisfies the generalized Jacobi relations.
DualPresentation dualize(const LInfStructure& L, bool certify = true);

// Reads the bracket tables back off the word coefficients; inverts dualize.
LInfStructure dualize_back(const DualPresentation& D, int arity_bound = -1);

// Signed permutation expansion sum_sigma eps_sigma a_{0 sigma(0)} ... over a
// square matrix, eps_sigma the Koszul sign of reordering generators of the
// given degrees. All degrees odd gives the ordinary determinant; a zero row
// or column gives 0.
Rational graded_det(const DenseMat& A, const std::vector<long>& degrees);

struct RhoResult {
    Rational value;
    std::vector<std::string> ks_basis;  // generator order the expansion was taken in
};

// Sum, over the word-length-r component of phi, of the coefficient times
// graded_det of the evaluation matrix a_{pq} = <v_{i_p} ; s class_q>. Words
// longer than r are ignored; a component shorter than r is refused. Classes
// are linear combinations over the pairing's suspended basis.
RhoResult rho(const SullivanAlgebraPresentation& S, const GAElt& phi,
              const PairingTable& P, const std::vector<LInfStructure::Elt>& classes);

struct ArkowitzReport {
    Rational lhs;            // <v ; sx>
    Rational rhs_suspended;  // eps <v ; s ell_r(classes)>
    int eps = 1;
    bool equal = false;

    // the classical form needs d(v) concentrated in word length >= r
    bool rho_defined = false;
    Rational rhs_classical;  // (-1)^alpha rho(d v), only when rho_defined
    int alpha_sign = 1;
    bool classical_equal = false;
    bool signs_consistent = false;  // rhs_suspended == rhs_classical
    std::string caveat;             // names the unmet hypothesis otherwise
    std::vector<std::string> ks_basis;
};

// Evaluates both readings of the bracket-detection equality on one instance:
// the suspended form against ell_r and the classical rho form against d(v).
// x is the supplied bracket-set member. When d(v) has a component below word
// length r the rho form is refused through the caveat, since without that
// hypothesis the equality needs an adapted retract, and only the suspended
// form is computed.
ArkowitzReport andrews_arkowitz_check(const DualPresentation& D, const LInfStructure& H,
                                      int v, const std::vector<LInfStructure::Elt>& classes,
                                      const LInfStructure::Elt& x);

struct SullivanReport {
    bool ok = false;
    // adapted ordering when ok: brackets of listed vectors only ever hit
    // strictly later ones
    std::vector<LInfStructure::Elt> ordered_basis;
    long witness_degree = 0;  // least degree of the unpeelable quotient
    int stages = 0;           // central layers peeled
};

// Decides degreewise nilpotency by peeling central layers: a vector is
// central when every bracket with it as an argument vanishes, and the
// structure is Sullivan exactly when repeated peeling of the quotient
// centers exhausts the basis. This is equivalent to the lower central
// series dying in every degree, but unlike a plateau test on that series
// it terminates provably. The emitted order lists the layers from last
// peeled to first, degrees descending inside a layer, which places every
// bracket value strictly after all of its arguments. Negative degrees are
// out of domain.
SullivanReport is_sullivan(const LInfStructure& L);

// Degree-preserving algebra endomorphism family with coefficients in the
// rational parameter field. Images default to the identity. Invertibility
// demands triangularity: image(v_i) = lambda_i v_i + terms in strictly
// earlier generators, each lambda_i a monomial quotient in parameters
// declared nonzero.
class AutomorphismFamily {
public:
    explicit AutomorphismFamily(const SullivanAlgebraPresentation& S);

    const SullivanAlgebraPresentation& presentation() const { return *S_; }
    void set_image(int gen, SymElt value);  // homogeneous of the generator's degree
    const SymElt& image(int gen) const { return images_.at(gen); }
    void require_nonzero(Var p);
    const std::vector<Var>& nonzero() const { return nonzero_; }

    bool invertible(std::string* why = nullptr) const;
    SymElt apply(const SymElt& v) const;
    AutomorphismFamily inverse() const;  // throws when not invertible

private:
    const SullivanAlgebraPresentation* S_;
    std::vector<SymElt> images_;
    std::vector<Var> nonzero_;
};

// d' = F d F^{-1}, one symbolic image per generator.
std::vector<SymElt> conjugated_differential(const SullivanAlgebraPresentation& S,
                                            const AutomorphismFamily& F);

struct SolveVerdict {
    enum class Kind { Solvable, Unsolvable, Undecided };
    Kind kind = Kind::Undecided;
    std::map<Var, Rational> witness;  // verified assignment when found
    std::string reason;
};

// Common rational zero of the polynomials with every listed parameter
// nonzero. Decides systems reducible by unit-content stripping, branching on
// unconstrained monomial factors, and constant-coefficient linear
// elimination; anything richer is reported undecided rather than guessed.
SolveVerdict solve_poly_system(std::vector<Poly> eqs, std::vector<Var> nonzero);

// Collects the numerators of every coefficient of F d F^{-1} sitting in word
// length other than two and asks the solver whether the family can kill them
// all, keeping its nonvanishing constraints.
SolveVerdict quadratic_obstruction(const SullivanAlgebraPresentation& S,
                                   const AutomorphismFamily& F);

struct CoformalityVerdict {
    bool coformal = true;
    int witness_index = -1;            // i with n_i = sum of the subset minus 1
    std::vector<int> witness_subset;   // even count >= 4 of sphere indices
};

// Products of odd spheres: up to four factors the answer is always yes;
// from five on, exactly the relations n_i = n_{j_1} + ... + n_{j_r} - 1 over
// even-size index subsets with r >= 4 obstruct. Even dimensions are refused.
CoformalityVerdict intrinsic_coformality(const std::vector<long>& sphere_dims);

// Products of even Eilenberg-MacLane factors carry no obstruction.
CoformalityVerdict intrinsic_coformality_em(const std::vector<long>& em_degrees);

}  // namespace lieq
