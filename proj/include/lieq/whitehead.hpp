#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lieq/dgl.hpp"
#include "lieq/poly.hpp"

namespace lieq {

// Sign of the splitting term [u_A, u_B] in the differential of u_S, where
// dims lists the sphere dimensions n_i of S in ascending index order and
// first_block the positions of A (0-based, strictly increasing). With sigma
// the permutation sorting (A asc, B asc) and |u_A| = sum_{i in A} n_i - 1:
//   sgn(sigma) * koszul(sigma; degrees n_i - 1) * (-1)^{(s+p+1)(|u_A|+1)}.
// Calibrated so that d(u_ij) = +[u_i, u_j] and the model differential squares
// to zero for every dimension vector.
int split_sign(const std::vector<long>& dims, const std::vector<int>& first_block);

// All splittings of an index subset into blocks (A, B) with min(S) in A, with
// their signs. Block masks are over the full index set {0..k-1}.
struct Splitting {
    int first = 0;
    int second = 0;
    int sign = 1;
};
std::vector<Splitting> anchored_splittings(const std::vector<long>& dims, int subset);

// Free model carrying one generator u_S per proper nonempty subset S of the
// index set, |u_S| = sum_{i in S} n_i - 1, with d(u_S) the signed splitting
// sum. w is that sum for the full set: a cycle of degree N-2, N = sum n_i.
struct WhiteheadModel {
    std::vector<long> dims;
    Dgl dgl;
    std::vector<int> gen_of_subset;  // subset mask -> generator id, -1 if absent
    LieSum<Rational> w;

    int k() const { return static_cast<int>(dims.size()); }
    int gen(int subset) const { return gen_of_subset.at(subset); }
};

std::string subset_label(int subset, int k);

// Requires k >= 2, every n_i >= 2 and truncation >= N + 1. Certifies d^2 = 0
// and d(w) = 0 before returning; a failed certificate is a logic error.
WhiteheadModel build_model(const std::vector<long>& dims, long truncation);

// A target for staged extensions: either a free DGL itself or its homology
// with the induced bracket and zero differential. Elements carry polynomial
// coefficients so a stage can keep its free parameters symbolic.
class Target {
public:
    struct Elt {
        long degree = 0;
        LieSum<Poly> lie;          // used by DGL targets
        std::vector<Poly> coords;  // used by homology targets

        void scale_add(const Poly& c, const Elt& o);  // *this += c * o
        void subst(Var v, const Poly& value);
        std::set<Var> vars() const;
    };

    struct BoundarySolve {
        // canonical residual of the target modulo boundaries; the stage is
        // solvable for every parameter value iff every entry is zero
        std::vector<Poly> obstruction;
        Elt particular;            // one degree above the target
        std::vector<Elt> kernel;   // parameter-free cycles, same degree
    };

    virtual ~Target() = default;
    virtual Elt zero(long degree) = 0;
    // validates that rep is a cycle of the stated degree
    virtual Elt from_cycle(const LieSum<Rational>& rep, long degree) = 0;
    virtual Elt bracket(const Elt& a, const Elt& b) = 0;
    virtual bool is_zero(const Elt& e) = 0;
    virtual BoundarySolve solve_boundary(const Elt& target, long n) = 0;
    virtual std::vector<Poly> class_coords(const Elt& cycle, long n) = 0;
    // homology basis the coordinates refer to
    virtual const std::vector<LieSum<Rational>>& class_basis(long n) = 0;
    virtual std::string to_string(const Elt& e) = 0;
};

std::unique_ptr<Target> dgl_target(Dgl& L);
std::unique_ptr<Target> homology_target(Dgl& L);

// Result of the staged extension computation. When Decided, value gives the
// class of phi(w) in the basis Target::class_basis(degree), polynomial in the
// free parameters params; the set is {value(q) : q rational assignment}.
struct BracketSet {
    enum class Status { Decided, Empty, Undecided };
    Status status = Status::Undecided;
    std::string note;  // obstruction detail when Empty or Undecided
    long degree = 0;   // N - 2
    std::vector<Poly> value;
    std::vector<Var> params;
    // general extension after eliminations, one entry per model generator
    std::vector<std::pair<std::string, std::string>> extension;
};

// Staged computation of the k-fold bracket set of the given classes: extend
// subset by subset in ascending size, solving d(phi(u_S)) = phi(d u_S) with
// the general solution kept symbolic. Affine solvability constraints are
// eliminated into the parameters; a nonzero constant obstruction certifies
// the empty set; a nonlinear constraint is reported as Undecided.
BracketSet bracket_set(Target& target, const std::vector<LieSum<Rational>>& classes,
                       const std::vector<long>& dims);

struct Classification {
    enum class Cardinality { Empty, Singleton, Infinite, Undecided };
    Cardinality cardinality = Cardinality::Undecided;
    std::vector<Rational> singleton;               // coordinates when Singleton
    std::vector<std::vector<Rational>> witnesses;  // 3 distinct values when Infinite
    enum class Zero { Yes, No, Unknown };
    Zero zero = Zero::Unknown;
    std::vector<std::pair<Var, Rational>> zero_witness;  // assignment when Yes
    std::string detail;
};

// Cardinality of the set plus membership of the zero class. Zero membership
// tries the all-zero assignment, then an exact affine solve when the value is
// affine in its parameters, then a bounded search over small rationals
// (numerators and denominators up to 20); only the affine route can say No.
Classification classify(const BracketSet& b);

// Discard criteria for formality of the target DGL with respect to the given
// classes: (1) the zero class is not attainable inside the DGL although the
// set is nonempty, or (2) the set inside the DGL and the set inside its
// homology have different cardinalities. Requires the set inside the DGL to
// be nonempty.
struct FormalityReport {
    enum class Verdict { NotFormal1, NotFormal2, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    BracketSet in_dgl, in_homology;
    Classification cls_dgl, cls_homology;
    std::string detail;
};
FormalityReport formality_obstruction(Dgl& L, const std::vector<LieSum<Rational>>& classes,
                                      const std::vector<long>& dims);

}  // namespace lieq
