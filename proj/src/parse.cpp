#include "lieq/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace lieq {

namespace {

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// single-line scanner with located failures
struct Scanner {
    const std::string& s;
    std::size_t pos = 0;
    int line;
    int col0;

    Scanner(const std::string& text, int line, int column) : s(text), line(line), col0(column) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line, col0 + static_cast<int>(pos), msg);
    }
    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    bool eat(char c) {
        skip_ws();
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    void expect(char c, const std::string& what) {
        if (!eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
    }

    std::string name() {
        skip_ws();
        if (!name_start(peek())) fail("expected a name");
        std::size_t start = pos;
        while (pos < s.size() && name_char(s[pos])) ++pos;
        return s.substr(start, pos - start);
    }

    unsigned long uinteger() {
        skip_ws();
        if (!digit(peek())) fail("expected a number");
        std::size_t start = pos;
        while (pos < s.size() && digit(s[pos])) ++pos;
        std::string t = s.substr(start, pos - start);
        if (t.size() > 9) fail("number too large");
        return std::stoul(t);
    }

    Rational rational() {
        skip_ws();
        if (!digit(peek())) fail("expected a rational");
        std::size_t start = pos;
        while (pos < s.size() && digit(s[pos])) ++pos;
        mpz_class num(s.substr(start, pos - start));
        if (peek() != '/') return Rational(num);
        ++pos;
        if (!digit(peek())) fail("expected a denominator");
        start = pos;
        while (pos < s.size() && digit(s[pos])) ++pos;
        mpz_class den(s.substr(start, pos - start));
        if (den == 0) fail("zero denominator");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
};

// sums of rational multiples of generators and nested brackets [e1,e2]; the
// sub-sums inside a bracket stop at ',' or ']'
struct LieParser {
    FreeLie& fl;
    Scanner& in;

    LieSum<Rational> sum() {
        LieSum<Rational> out = signed_term();
        while (true) {
            in.skip_ws();
            if (in.peek() == '+' || in.peek() == '-') {
                bool minus = in.peek() == '-';
                ++in.pos;
                LieSum<Rational> t = signed_term();
                if (minus) t *= Rational(-1);
                out += t;
            } else {
                return out;
            }
        }
    }

    LieSum<Rational> signed_term() {
        in.skip_ws();
        int sign = 1;
        while (in.peek() == '+' || in.peek() == '-') {
            if (in.peek() == '-') sign = -sign;
            ++in.pos;
            in.skip_ws();
        }
        Rational c(sign);
        if (digit(in.peek())) {
            c *= in.rational();
            in.eat('*');
        }
        LieSum<Rational> a = atom();
        a *= c;
        return a;
    }

    LieSum<Rational> atom() {
        in.skip_ws();
        if (in.peek() == '[') {
            ++in.pos;
            LieSum<Rational> a = sum();
            in.expect(',', "between bracket arguments");
            LieSum<Rational> b = sum();
            in.expect(']', "after bracket arguments");
            return bracket(fl, a, b);
        }
        if (!name_start(in.peek())) in.fail("expected a generator or '['");
        std::string nm = in.name();
        int idx = fl.gens().index_of(nm);
        if (idx < 0) in.fail("unknown name '" + nm + "'");
        return LieSum<Rational>(fl.leaf(idx));
    }
};

int lookup(const std::vector<BasisElt>& basis, const std::string& nm, const Scanner& in) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i].name == nm) return static_cast<int>(i);
    in.fail("unknown name '" + nm + "'");
}

// sums of rational monomials with '*' and '^' over the presentation letters
GAElt word_sum(const SullivanAlgebraPresentation& P, Scanner& in) {
    GAElt out;
    bool start = true;
    while (true) {
        in.skip_ws();
        if (!start && in.peek() != '+' && in.peek() != '-') break;
        int sign = 1;
        while (in.peek() == '+' || in.peek() == '-') {
            if (in.peek() == '-') sign = -sign;
            ++in.pos;
            in.skip_ws();
        }
        start = false;
        Rational c(sign);
        GAMonomial letters;
        do {
            in.skip_ws();
            if (digit(in.peek())) {
                c *= in.rational();
            } else if (name_start(in.peek())) {
                int idx = lookup(P.generators(), in.name(), in);
                unsigned long e = 1;
                if (in.eat('^')) e = in.uinteger();
                if (e > 64) in.fail("exponent too large");
                for (unsigned long t = 0; t < e; ++t) letters.push_back(idx);
            } else {
                in.fail("expected a rational or a generator");
            }
        } while (in.eat('*'));
        auto [s, m] = P.normalize(std::move(letters));
        if (s != 0 && !is_zero(c)) out.add(m, Rational(s) * c);
    }
    return out;
}

// sums of rational multiples of plain generator names
LInfStructure::Elt linear_sum(const std::vector<BasisElt>& basis, Scanner& in) {
    LInfStructure::Elt out;
    bool start = true;
    while (true) {
        in.skip_ws();
        if (!start && in.peek() != '+' && in.peek() != '-') break;
        int sign = 1;
        while (in.peek() == '+' || in.peek() == '-') {
            if (in.peek() == '-') sign = -sign;
            ++in.pos;
            in.skip_ws();
        }
        start = false;
        Rational c(sign);
        if (digit(in.peek())) {
            c *= in.rational();
            in.eat('*');
        }
        out.add(lookup(basis, in.name(), in), c);
    }
    return out;
}

void require_end(Scanner& in) {
    if (!in.done()) in.fail("unexpected trailing input");
}

std::string coeff_prefix(const Rational& c) {
    if (c == Rational(1)) return "";
    if (c == Rational(-1)) return "-";
    return rat_to_string(c) + "*";
}

// joins pre-rendered (coefficient, atom) terms as "a + 2*b - c"
std::string join_terms(const std::vector<std::pair<Rational, std::string>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        Rational c = terms[t].first;
        if (t == 0) {
            out += coeff_prefix(c) + terms[t].second;
            continue;
        }
        out += c < 0 ? " - " : " + ";
        if (c < 0) c = -c;
        out += coeff_prefix(c) + terms[t].second;
    }
    return out;
}

struct Statement {
    int lineno = 0;
    std::string keyword;
    int kw_col = 1;
    std::vector<std::pair<std::string, int>> fields;  // plain fields with columns
    std::string rest;                                 // expression tail
    int rest_col = 1;
};

// splits one line into keyword, a fixed number of plain fields and the tail
Statement read_statement(const std::string& ln, int lineno, int nfields) {
    Statement st;
    st.lineno = lineno;
    std::size_t p = 0;
    auto skip = [&] {
        while (p < ln.size() && (ln[p] == ' ' || ln[p] == '\t')) ++p;
    };
    auto word = [&](int& col) {
        skip();
        col = static_cast<int>(p) + 1;
        std::size_t start = p;
        while (p < ln.size() && ln[p] != ' ' && ln[p] != '\t') ++p;
        return ln.substr(start, p - start);
    };
    st.keyword = word(st.kw_col);
    for (int f = 0; f < nfields; ++f) {
        int col = 1;
        std::string w = word(col);
        if (w.empty()) throw ParseError(lineno, col, "missing field after '" + st.keyword + "'");
        st.fields.push_back({w, col});
    }
    skip();
    st.rest_col = static_cast<int>(p) + 1;
    st.rest = ln.substr(std::min(p, ln.size()));
    return st;
}

long field_long(const Statement& st, int f) {
    const auto& [w, col] = st.fields[f];
    try {
        std::size_t used = 0;
        long v = std::stol(w, &used);
        if (used != w.size()) throw std::invalid_argument(w);
        return v;
    } catch (const std::exception&) {
        throw ParseError(st.lineno, col, "expected an integer, got '" + w + "'");
    }
}

}  // namespace

LieSum<Rational> parse_lie_expr(FreeLie& fl, const std::string& text, int line, int column) {
    Scanner in(text, line, column);
    LieParser p{fl, in};
    LieSum<Rational> out = p.sum();
    require_end(in);
    return out;
}

GAElt parse_word_expr(const SullivanAlgebraPresentation& P, const std::string& text, int line,
                      int column) {
    Scanner in(text, line, column);
    GAElt out = word_sum(P, in);
    require_end(in);
    return out;
}

LInfStructure::Elt parse_linear_expr(const std::vector<BasisElt>& basis, const std::string& text,
                                     int line, int column) {
    Scanner in(text, line, column);
    LInfStructure::Elt out = linear_sum(basis, in);
    require_end(in);
    return out;
}

std::string lie_expr_str(const FreeLie& fl, const LieSum<Rational>& v) {
    std::vector<std::pair<Rational, std::string>> terms;
    for (auto& [e, c] : v.terms()) terms.push_back({c, fl.to_string(e)});
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return join_terms(terms);
}

std::string word_expr_str(const SullivanAlgebraPresentation& P, const GAElt& v) {
    std::vector<std::pair<Rational, std::string>> terms;
    for (auto& [m, c] : v.terms()) {
        std::string atom;
        for (std::size_t t = 0; t < m.size();) {
            std::size_t run = t;
            while (run < m.size() && m[run] == m[t]) ++run;
            if (!atom.empty()) atom += "*";
            atom += P.generators()[m[t]].name;
            if (run - t > 1) atom += "^" + std::to_string(run - t);
            t = run;
        }
        if (atom.empty()) atom = "1";
        terms.push_back({c, atom});
    }
    return join_terms(terms);
}

std::string linear_expr_str(const std::vector<BasisElt>& basis, const LInfStructure::Elt& v) {
    std::vector<std::pair<Rational, std::string>> terms;
    for (auto& [i, c] : v.terms()) terms.push_back({c, basis[i].name});
    return join_terms(terms);
}

PresentationDocument parse_presentation(const std::string& text) {
    // line split with comment stripping
    std::vector<std::pair<int, std::string>> lines;
    {
        std::istringstream in(text);
        std::string ln;
        int no = 0;
        while (std::getline(in, ln)) {
            ++no;
            std::size_t hash = ln.find('#');
            if (hash != std::string::npos) ln.erase(hash);
            if (ln.find_first_not_of(" \t\r") == std::string::npos) continue;
            while (!ln.empty() && (ln.back() == '\r' || ln.back() == ' ' || ln.back() == '\t'))
                ln.pop_back();
            lines.push_back({no, ln});
        }
    }
    if (lines.empty()) throw ParseError(1, 1, "empty document");

    PresentationDocument doc;
    {
        Statement st = read_statement(lines[0].second, lines[0].first, 0);
        if (st.keyword != "kind")
            throw ParseError(st.lineno, st.kw_col, "the first statement must be 'kind'");
        Statement kd = read_statement(lines[0].second, lines[0].first, 1);
        const std::string& k = kd.fields[0].first;
        if (k == "dgl") doc.kind = PresentationDocument::Kind::Dgl;
        else if (k == "linf") doc.kind = PresentationDocument::Kind::Linf;
        else if (k == "cdga") doc.kind = PresentationDocument::Kind::Cdga;
        else
            throw ParseError(kd.lineno, kd.fields[0].second,
                             "kind must be dgl, linf or cdga, got '" + k + "'");
    }
    const bool is_dgl = doc.kind == PresentationDocument::Kind::Dgl;
    const bool is_linf = doc.kind == PresentationDocument::Kind::Linf;
    const bool is_cdga = doc.kind == PresentationDocument::Kind::Cdga;

    // first pass: header fields and generators
    std::vector<BasisElt> gens;
    std::vector<int> gen_lines;
    for (std::size_t s = 1; s < lines.size(); ++s) {
        const auto& [no, ln] = lines[s];
        Statement st = read_statement(ln, no, 0);
        if (st.keyword == "truncation") {
            if (!is_dgl)
                throw ParseError(no, st.kw_col, "truncation only applies to dgl documents");
            doc.truncation = field_long(read_statement(ln, no, 1), 0);
        } else if (st.keyword == "arity") {
            if (!is_linf) throw ParseError(no, st.kw_col, "arity only applies to linf documents");
            doc.arity = static_cast<int>(field_long(read_statement(ln, no, 1), 0));
        } else if (st.keyword == "ks") {
            if (!is_cdga) throw ParseError(no, st.kw_col, "ks only applies to cdga documents");
            doc.ks = true;
        } else if (st.keyword == "option") {
            Statement op = read_statement(ln, no, 2);
            doc.options.push_back({op.fields[0].first, op.fields[1].first});
        } else if (st.keyword == "gen") {
            Statement g = read_statement(ln, no, 2);
            for (const BasisElt& b : gens)
                if (b.name == g.fields[0].first)
                    throw ParseError(no, g.fields[0].second,
                                     "duplicate generator '" + b.name + "'");
            gens.push_back({g.fields[0].first, field_long(g, 1)});
            gen_lines.push_back(no);
        } else if (st.keyword == "d" || st.keyword == "bracket") {
            continue;  // second pass
        } else {
            throw ParseError(no, st.kw_col, "unknown statement '" + st.keyword + "'");
        }
    }

    // kind-specific construction with per-generator degree checks
    if (is_dgl) {
        if (doc.truncation < 1)
            throw ParseError(lines[0].first, 1, "dgl documents need 'truncation N' with N >= 1");
        GeneratorSet gs(doc.truncation);
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (gens[i].degree < 1 || gens[i].degree > doc.truncation)
                throw ParseError(gen_lines[i], 1,
                                 "generator degree out of range for '" + gens[i].name + "'");
            gs.add(gens[i].name, gens[i].degree);
        }
        doc.dgl = std::make_shared<Dgl>(std::move(gs));
    } else if (is_cdga) {
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (gens[i].degree < 1)
                throw ParseError(gen_lines[i], 1,
                                 "generator degree must be positive for '" + gens[i].name + "'");
        doc.cdga = std::make_shared<SullivanAlgebraPresentation>(gens, doc.ks);
    }
    // linf construction waits for the arity scan below

    // second pass: differentials and bracket tables
    std::vector<Statement> brackets;
    std::vector<std::string> seen_d;
    for (std::size_t s = 1; s < lines.size(); ++s) {
        const auto& [no, ln] = lines[s];
        Statement st = read_statement(ln, no, 0);
        if (st.keyword == "d") {
            if (is_linf)
                throw ParseError(no, st.kw_col,
                                 "linf documents carry brackets, not a differential");
            Statement dv = read_statement(ln, no, 1);
            const std::string& nm = dv.fields[0].first;
            if (std::find(seen_d.begin(), seen_d.end(), nm) != seen_d.end())
                throw ParseError(no, dv.fields[0].second, "duplicate differential for '" + nm + "'");
            seen_d.push_back(nm);
            if (is_dgl) {
                int idx = doc.dgl->gens().index_of(nm);
                if (idx < 0)
                    throw ParseError(no, dv.fields[0].second, "unknown name '" + nm + "'");
                LieSum<Rational> v = parse_lie_expr(doc.dgl->lie(), dv.rest, no, dv.rest_col);
                try {
                    doc.dgl->set_d(idx, std::move(v));
                } catch (const std::invalid_argument& e) {
                    throw ParseError(no, dv.rest_col, e.what());
                }
            } else {
                int idx = -1;
                for (std::size_t i = 0; i < gens.size(); ++i)
                    if (gens[i].name == nm) idx = static_cast<int>(i);
                if (idx < 0)
                    throw ParseError(no, dv.fields[0].second, "unknown name '" + nm + "'");
                GAElt v = parse_word_expr(*doc.cdga, dv.rest, no, dv.rest_col);
                try {
                    doc.cdga->set_d(idx, v);
                } catch (const std::invalid_argument& e) {
                    throw ParseError(no, dv.rest_col, e.what());
                }
            }
        } else if (st.keyword == "bracket") {
            if (!is_linf)
                throw ParseError(no, st.kw_col, "bracket tables only apply to linf documents");
            brackets.push_back(read_statement(ln, no, 1));
        }
    }

    if (is_linf) {
        // argument tuples determine the default arity bound
        std::vector<std::pair<std::vector<int>, const Statement*>> parsed;
        int max_arity = 2;
        for (const Statement& st : brackets) {
            Scanner in(st.fields[0].first, st.lineno, st.fields[0].second);
            in.expect('(', "before bracket arguments");
            std::vector<int> args;
            if (!in.eat(')')) {
                do {
                    args.push_back(lookup(gens, in.name(), in));
                } while (in.eat(','));
                in.expect(')', "after bracket arguments");
            }
            require_end(in);
            if (args.empty()) throw ParseError(st.lineno, st.fields[0].second, "empty bracket");
            if (doc.arity >= 0 && static_cast<int>(args.size()) > doc.arity)
                throw ParseError(st.lineno, st.fields[0].second,
                                 "bracket exceeds the declared arity bound");
            max_arity = std::max(max_arity, static_cast<int>(args.size()));
            parsed.push_back({std::move(args), &st});
        }
        if (doc.arity < 0) doc.arity = max_arity;
        try {
            doc.linf = std::make_shared<LInfStructure>(gens, doc.arity);
        } catch (const std::invalid_argument& e) {
            throw ParseError(lines[0].first, 1, e.what());
        }
        for (auto& [args, st] : parsed) {
            LInfStructure::Elt v = parse_linear_expr(gens, st->rest, st->lineno, st->rest_col);
            try {
                doc.linf->set_bracket(args, v);
            } catch (const std::invalid_argument& e) {
                throw ParseError(st->lineno, st->rest_col, e.what());
            }
        }
    }

    std::sort(doc.options.begin(), doc.options.end());
    return doc;
}

std::string serialize(const PresentationDocument& doc) {
    std::ostringstream out;
    std::vector<std::pair<std::string, std::string>> options = doc.options;
    std::sort(options.begin(), options.end());

    if (doc.kind == PresentationDocument::Kind::Dgl) {
        out << "kind dgl\n";
        out << "truncation " << doc.truncation << "\n";
        for (auto& [k, v] : options) out << "option " << k << " " << v << "\n";
        const GeneratorSet& gs = doc.dgl->gens();
        for (int i = 0; i < gs.size(); ++i)
            out << "gen " << gs.gen(i).name << " " << gs.gen(i).degree << "\n";
        for (int i = 0; i < gs.size(); ++i) {
            LieSum<Rational> v = doc.dgl->d_gen(i);
            if (!v.is_zero())
                out << "d " << gs.gen(i).name << " " << lie_expr_str(doc.dgl->lie(), v) << "\n";
        }
    } else if (doc.kind == PresentationDocument::Kind::Linf) {
        out << "kind linf\n";
        out << "arity " << doc.linf->arity_bound() << "\n";
        for (auto& [k, v] : options) out << "option " << k << " " << v << "\n";
        for (const BasisElt& g : doc.linf->basis())
            out << "gen " << g.name << " " << g.degree << "\n";
        for (auto& [w, v] : doc.linf->table()) {
            out << "bracket (";
            for (std::size_t t = 0; t < w.size(); ++t)
                out << (t ? "," : "") << doc.linf->basis()[w[t]].name;
            out << ") " << linear_expr_str(doc.linf->basis(), v) << "\n";
        }
    } else {
        out << "kind cdga\n";
        if (doc.cdga->ks()) out << "ks\n";
        for (auto& [k, v] : options) out << "option " << k << " " << v << "\n";
        for (const BasisElt& g : doc.cdga->generators())
            out << "gen " << g.name << " " << g.degree << "\n";
        for (int i = 0; i < doc.cdga->dim(); ++i)
            if (!doc.cdga->d(i).is_zero())
                out << "d " << doc.cdga->generators()[i].name << " "
                    << word_expr_str(*doc.cdga, doc.cdga->d(i)) << "\n";
    }
    return out.str();
}

}  // namespace lieq
