#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lieq/linalg.hpp"
#include "lieq/linf.hpp"

namespace lieq {

// Chain coalgebra of a reduced structure carrying the word-length filtration
// F_p = span of words of length <= p. Every arity-k piece of the
// codifferential drops word length by k-1 >= 0, so each F_p is a subcomplex.
// Degrees are total suspended degrees throughout. max_degree stamps the range
// on which the codifferential is trusted; every certificate derived from this
// object inherits that stamp.
class FilteredCDGC {
public:
    // max_length caps the filtration index; by default it is the longest word
    // any trusted degree supports (letters have suspended degree >= 2)
    FilteredCDGC(Coderivation delta, long max_degree, int max_length = -1);

    const Coderivation& delta() const { return delta_; }
    long max_degree() const { return max_degree_; }
    int max_length() const { return max_length_; }

    // canonical words of the given total degree, shortest first
    const std::vector<Wedge>& words(long degree) const;
    // basis of F_p in the given degree
    std::vector<Wedge> filtration_subspace(int p, long degree) const;

    // largest total degree with complete subquotient data: every Z and D
    // space in a block of that degree only looks one degree up
    long safe_degree() const;

private:
    Coderivation delta_;
    long max_degree_;
    int max_length_;
    mutable std::map<long, std::vector<Wedge>> words_;
};

// one reduced-diagonal split of a word, with Koszul signs on suspended
// degrees; the l-fold iterate kills exactly the words of length <= l, which
// is the coalgebra-level description of the filtration
LinComb<std::pair<Wedge, Wedge>, Rational> reduced_diagonal(const Coderivation& D,
                                                            const Wedge& w);

struct SSBlock {
    int p = 0;
    long degree = 0;
    // representatives of a basis of E^k_{p,degree}; residues modulo the
    // denominator with maximal word-length components eliminated first
    std::vector<CoalgElt> reps;
    // matrix of d^k into the block at (p-k, degree-1): d[row][col] is the
    // coefficient of that block's reps[row] in d^k(reps[col]); no rows when
    // the target vanishes
    DenseMat d;
};

class SSPage {
public:
    int k() const { return k_; }
    long max_degree() const { return max_degree_; }
    const std::map<std::pair<int, long>, SSBlock>& blocks() const { return blocks_; }
    const SSBlock* block(int p, long degree) const;
    long dim(int p, long degree) const;

private:
    friend SSPage page(const FilteredCDGC&, int, long);
    int k_ = 0;
    long max_degree_ = 0;
    std::map<std::pair<int, long>, SSBlock> blocks_;
};

// E^k with Z^k_p = F_p intersect delta^{-1}(F_{p-k}) and
// D^k_p = F_p intersect delta(F_{p+k}),
// E^k_p = Z^k_p / (Z^{k-1}_{p-1} + D^{k-1}_p), together with the induced d^k.
// max_degree (default: the safe degree) bounds the certified range; beyond it
// the boundary spaces would need untrusted evaluations, so it is refused.
SSPage page(const FilteredCDGC& C, int k);
SSPage page(const FilteredCDGC& C, int k, long max_degree);

struct CollapseReport {
    bool collapsed = false;
    int from_page = 0;
    // certified range: d^j = 0 for from_page <= j <= last_page, total degree
    // <= max_degree; higher pages act by zero there for length reasons
    long max_degree = 0;
    int last_page = 0;
    // counterexample location when not collapsed
    int page = -1;
    int p = -1;
    long degree = -1;
    std::string witness;
};

// range-stamped collapse certificate, never a global claim
CollapseReport collapses_through(const FilteredCDGC& C, int from_page, long max_degree);

}  // namespace lieq
