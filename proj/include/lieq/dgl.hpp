#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lieq/free_lie.hpp"

namespace lieq {

// Free DGL: free graded Lie algebra with a degree -1 differential given on
// generators and extended by the Leibniz rule
//   d[a,b] = [da,b] + (-1)^{|a|} [a,db].
class Dgl {
public:
    explicit Dgl(GeneratorSet gens) : fl_(std::move(gens)) {}

    FreeLie& lie() { return fl_; }
    const GeneratorSet& gens() const { return fl_.gens(); }

    // value must be homogeneous of degree deg(gen) - 1 (zero for degree-1 generators)
    void set_d(int gen, LieSum<Rational> value);
    LieSum<Rational> d_gen(int gen) const;

    LieSum<Rational> d(FreeLie::Expr e);
    LieSum<Rational> d(const LieSum<Rational>& v);
    LieSum<Poly> d(const LieSum<Poly>& v);

    // d(d(g)) expands to zero for every generator of degree <= max_degree;
    // by the derivation property this certifies d^2 = 0 on the whole window.
    bool check_d_squared(long max_degree, std::string* witness = nullptr);

    // H_n = ker(d|L_n) / im(d|L_{n+1}). The boundary space is generated by the
    // images of spanning candidates of degree n+1; no basis extraction above
    // degree n is needed. Requires n+1 <= truncation.
    struct Homology {
        long degree = 0;
        std::vector<LieSum<Rational>> reps;
        RowSpace boundaries{0};  // row space in word coordinates of the degree
        int dim() const { return static_cast<int>(reps.size()); }
    };
    const Homology& homology(long n);

    // coordinates of a cycle's class in the basis homology(n).reps; throws if
    // the element is not a cycle of that degree
    std::vector<Rational> class_coords(const LieSum<Rational>& cycle, long n);
    std::vector<Poly> class_coords(const LieSum<Poly>& cycle, long n);

    struct Preimage {
        bool exists = false;
        LieSum<Rational> particular;
        std::vector<LieSum<Rational>> kernel;  // cycles one degree up
        // particular + fresh parameters spanning the kernel
        LieSum<Poly> general() const;
    };
    // solve d(x) = target with x of degree n+1; target homogeneous of degree n
    Preimage boundary_preimage(const LieSum<Rational>& target, long n);

    // Same with polynomial coefficients. The obstruction is the canonical
    // residual of the target modulo im(d) in word coordinates: the system is
    // solvable for every parameter value iff all entries are the zero
    // polynomial, and only then are particular/kernel filled in.
    struct PreimagePoly {
        std::vector<Poly> obstruction;
        LieSum<Poly> particular;
        std::vector<LieSum<Rational>> kernel;  // cycles one degree up
        bool solvable() const {
            for (auto& q : obstruction)
                if (!q.is_zero_poly()) return false;
            return true;
        }
    };
    PreimagePoly boundary_preimage(const LieSum<Poly>& target, long n);

    bool is_cycle(const LieSum<Rational>& v, long n);

private:
    struct ClassData {
        Homology h;
        std::unique_ptr<ColumnSpace> rep_coords;  // columns: boundary-reduced reps
    };
    ClassData& class_data(long n);
    ColumnSpace& d_columns(long n);  // columns = d(basis of L_n) in words(n-1)

    FreeLie fl_;
    std::map<int, LieSum<Rational>> d_gen_;
    std::map<FreeLie::Expr, LieSum<Rational>> d_memo_;
    std::map<long, ClassData> homology_;
    std::map<long, std::unique_ptr<ColumnSpace>> d_cols_;
};

}  // namespace lieq
