#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lieq/dgl.hpp"
#include "lieq/linf.hpp"
#include "lieq/sullivan.hpp"

namespace lieq {

// located failure in a presentation document or an expression; positions are
// 1-based
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

// One presentation file. Exactly one kernel object is engaged, matching kind;
// generators, degrees and differential values live inside it.
//
// Format, one statement per line, '#' starts a comment:
//   kind dgl|linf|cdga          first statement
//   truncation N                dgl only, before the generators
//   arity N                     linf only
//   ks                          cdga only: the differential must be triangular
//   option KEY VALUE            free-form, preserved
//   gen NAME DEGREE
//   d NAME EXPR                 dgl: Lie expression; cdga: word polynomial
//   bracket (N1,...,Nk) EXPR    linf: linear combination of generators
struct PresentationDocument {
    enum class Kind { Dgl, Linf, Cdga };
    Kind kind = Kind::Dgl;
    long truncation = -1;
    int arity = -1;
    bool ks = false;
    std::vector<std::pair<std::string, std::string>> options;

    std::shared_ptr<Dgl> dgl;
    std::shared_ptr<LInfStructure> linf;
    std::shared_ptr<SullivanAlgebraPresentation> cdga;
};

PresentationDocument parse_presentation(const std::string& text);

// canonical form: fixed statement order, sorted options, one space between
// fields, expressions rendered canonically; parse then serialize is the
// identity on its own output
std::string serialize(const PresentationDocument& doc);

// Expression entry points for command flags. Lie expressions are sums of
// rational multiples of generators and nested brackets [e1,e2]; word
// polynomials are sums of rational monomials with * and ^; linear expressions
// drop both. (line, column) locate the text inside a larger source.
LieSum<Rational> parse_lie_expr(FreeLie& fl, const std::string& text, int line = 1,
                                int column = 1);
GAElt parse_word_expr(const SullivanAlgebraPresentation& P, const std::string& text,
                      int line = 1, int column = 1);
LInfStructure::Elt parse_linear_expr(const std::vector<BasisElt>& basis,
                                     const std::string& text, int line = 1, int column = 1);

std::string lie_expr_str(const FreeLie& fl, const LieSum<Rational>& v);
std::string word_expr_str(const SullivanAlgebraPresentation& P, const GAElt& v);
std::string linear_expr_str(const std::vector<BasisElt>& basis, const LInfStructure::Elt& v);

}  // namespace lieq
