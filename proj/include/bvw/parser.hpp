#ifndef BVW_PARSER_HPP
#define BVW_PARSER_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "models.hpp"

namespace bvw {

struct ParseError : error {
    int line, col;
    ParseError(int l, int c, const std::string& msg)
        : error("line " + std::to_string(l) + ", column " + std::to_string(c) +
                ": " + msg),
          line(l), col(c)
    {
    }
};

/* parse result: the model plus its canonical text form, which is what gets
   hashed and what print_model returns (parse of it is a fixed point) */
struct ParsedModel {
    Model model;
    std::string canonical;
};

namespace dsl {

enum class Tok { end, newline, ident, integer, dd, punct };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    long long value = 0;
    int line = 1, col = 1;
};

inline bool ident_start(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c)
{
    return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s)
    {
        cur_ = lex();
        nxt_ = lex();
    }
    const Token& tok() const { return cur_; }
    const Token& peek() const { return nxt_; }
    void next()
    {
        cur_ = nxt_;
        nxt_ = lex();
    }

private:
    std::string s_;
    size_t i_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_, nxt_;

    char at(size_t k) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }
    void adv()
    {
        if (s_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else
            ++col_;
        ++i_;
    }

    Token lex()
    {
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (c == ' ' || c == '\t' || c == '\r') {
                adv();
                continue;
            }
            if (c == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') adv();
                continue;
            }
            break;
        }
        Token t;
        t.line = line_;
        t.col = col_;
        if (i_ >= s_.size()) return t;
        char c = s_[i_];
        if (c == '\n') {
            adv();
            t.kind = Tok::newline;
            return t;
        }
        // "d/d<name>" is one token so '/' stays free for rationals
        if (c == 'd' && at(1) == '/' && at(2) == 'd' && ident_start(at(3))) {
            adv();
            adv();
            adv();
            std::string name;
            while (i_ < s_.size() && ident_char(s_[i_])) {
                name += s_[i_];
                adv();
            }
            t.kind = Tok::dd;
            t.text = name;
            return t;
        }
        if (ident_start(c)) {
            std::string name;
            while (i_ < s_.size() && ident_char(s_[i_])) {
                name += s_[i_];
                adv();
            }
            t.kind = Tok::ident;
            t.text = name;
            return t;
        }
        if (c >= '0' && c <= '9') {
            long long v = 0;
            while (i_ < s_.size() && s_[i_] >= '0' && s_[i_] <= '9') {
                v = v * 10 + (s_[i_] - '0');
                adv();
            }
            t.kind = Tok::integer;
            t.value = v;
            return t;
        }
        if (c == '-' && at(1) == '>') {
            adv();
            adv();
            t.kind = Tok::punct;
            t.text = "->";
            return t;
        }
        if (c == '.' && at(1) == '.') {
            adv();
            adv();
            t.kind = Tok::punct;
            t.text = "..";
            return t;
        }
        if (std::string("()[]=,:;+-*^/").find(c) != std::string::npos) {
            adv();
            t.kind = Tok::punct;
            t.text = std::string(1, c);
            return t;
        }
        throw ParseError(t.line, t.col,
                         "unexpected character '" + std::string(1, c) + "'");
    }
};

/* recursive-descent expression parser over a fixed algebra; loop variables
   come from prod(), named rationals from [params] */
class ExprParser {
public:
    ExprParser(Lexer& lx, AlgebraPtr alg, const std::map<std::string, Rat>& params)
        : lx_(lx), alg_(std::move(alg)), params_(params)
    {
    }

    Poly expr()
    {
        bool neg = accept("-");
        Poly p = term();
        if (neg) p = -p;
        while (is("+") || is("-")) {
            bool minus = lx_.tok().text == "-";
            lx_.next();
            Poly q = term();
            p = minus ? p - q : p + q;
        }
        return p;
    }

    /* one multiplicative factor; used where '*' chains end in d/d<field> */
    Poly factor()
    {
        int hshift = 0;
        Poly p = power(hshift);
        if (hshift) p = p.shifted(hshift, 0, GRat(1));
        return p;
    }

private:
    Lexer& lx_;
    AlgebraPtr alg_;
    const std::map<std::string, Rat>& params_;
    std::vector<std::pair<std::string, long long>> env_;

    bool is(const std::string& s) const
    {
        return lx_.tok().kind == Tok::punct && lx_.tok().text == s;
    }
    bool accept(const std::string& s)
    {
        if (!is(s)) return false;
        lx_.next();
        return true;
    }
    void expect(const std::string& s, const std::string& what)
    {
        if (!accept(s))
            throw ParseError(lx_.tok().line, lx_.tok().col, "expected " + what);
    }
    long long integer(const std::string& what)
    {
        bool neg = accept("-");
        if (lx_.tok().kind != Tok::integer)
            throw ParseError(lx_.tok().line, lx_.tok().col, "expected " + what);
        long long v = lx_.tok().value;
        lx_.next();
        return neg ? -v : v;
    }

    Poly term()
    {
        // negative hbar powers are deferred and applied to the whole term so
        // that h^-1*l^1*x parses no matter where the lambda factor sits
        int hshift = 0;
        Poly p = power(hshift);
        while (is("*")) {
            lx_.next();
            if (accept("-")) p = -p;
            p = p * power(hshift);
        }
        if (hshift) p = p.shifted(hshift, 0, GRat(1));
        return p;
    }

    Poly power(int& hshift)
    {
        bool was_h = false;
        Poly p = primary(was_h);
        if (is("^")) {
            lx_.next();
            long long e = integer("exponent");
            if (e < 0) {
                if (!was_h)
                    throw ParseError(lx_.tok().line, lx_.tok().col,
                                     "negative exponent is only allowed on h");
                hshift += (int)e;
                return Poly::one(alg_);
            }
            Poly q = Poly::one(alg_);
            for (long long k = 0; k < e; ++k) q = q * p;
            return q;
        }
        return p;
    }

    Poly primary(bool& was_h)
    {
        was_h = false;
        const Token t = lx_.tok();
        if (t.kind == Tok::integer) {
            lx_.next();
            if (is("/")) {
                lx_.next();
                if (lx_.tok().kind != Tok::integer)
                    throw ParseError(lx_.tok().line, lx_.tok().col,
                                     "expected denominator");
                long long d = lx_.tok().value;
                lx_.next();
                if (d == 0) throw ParseError(t.line, t.col, "division by zero");
                return Poly::constant(alg_, GRat(Rat(t.value) / Rat(d)));
            }
            return Poly::constant(alg_, GRat(Rat(t.value)));
        }
        if (t.kind == Tok::punct && t.text == "(") {
            lx_.next();
            Poly p = expr();
            expect(")", "')'");
            return p;
        }
        if (t.kind == Tok::ident) {
            if (t.text == "prod") return product();
            lx_.next();
            return resolve(t, was_h);
        }
        throw ParseError(t.line, t.col, "expected expression");
    }

    Poly product()
    {
        lx_.next(); // prod
        expect("(", "'(' after prod");
        if (lx_.tok().kind != Tok::ident)
            throw ParseError(lx_.tok().line, lx_.tok().col,
                             "expected loop variable");
        std::string var = lx_.tok().text;
        lx_.next();
        expect("=", "'='");
        long long a = integer("range start");
        expect("..", "'..'");
        long long b = integer("range end");
        expect(",", "','");

        // re-lex the body once per index by replaying the token stream is
        // not possible with a one-pass lexer, so evaluate eagerly: collect
        // the body text span via bracketed re-parse is avoided by expanding
        // through the environment instead
        Poly out = Poly::one(alg_);
        if (a > b) {
            skip_body();
            expect(")", "')'");
            return out;
        }
        // parse the body once per iteration from a saved lexer state
        LexSave save = save_lexer();
        for (long long k = a; k <= b; ++k) {
            restore_lexer(save);
            env_.emplace_back(var, k);
            Poly f = expr();
            env_.pop_back();
            out = out * f;
        }
        expect(")", "')'");
        return out;
    }

    /* the lexer is a value type over an immutable string, so a copy is a
       complete state snapshot */
    struct LexSave {
        Lexer lx;
    };
    LexSave save_lexer() { return LexSave{lx_}; }
    void restore_lexer(const LexSave& s) { lx_ = s.lx; }

    void skip_body()
    {
        int depth = 0;
        while (true) {
            const Token& t = lx_.tok();
            if (t.kind == Tok::end)
                throw ParseError(t.line, t.col, "unterminated prod");
            if (t.kind == Tok::punct && t.text == "(") ++depth;
            if (t.kind == Tok::punct && t.text == ")") {
                if (depth == 0) return;
                --depth;
            }
            lx_.next();
        }
    }

    Poly resolve(const Token& t, bool& was_h)
    {
        std::string name = t.text;
        // loop variables act as integer constants
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (it->first == name)
                return Poly::constant(alg_, GRat(Rat(it->second)));
        // identifier interpolation: x_k inside prod(k=..) means x_<value>
        bool changed = true;
        while (changed) {
            changed = false;
            auto us = name.rfind('_');
            if (us == std::string::npos || us + 1 >= name.size()) break;
            std::string suf = name.substr(us + 1);
            for (auto it = env_.rbegin(); it != env_.rend(); ++it)
                if (it->first == suf) {
                    name = name.substr(0, us + 1) + std::to_string(it->second);
                    changed = true;
                    break;
                }
        }
        if (name == "i") return Poly::constant(alg_, GRat::i_unit());
        if (name == "h") {
            was_h = true;
            return Poly::one(alg_).shifted(1, 0, GRat(1));
        }
        if (name == "l") return Poly::one(alg_).shifted(0, 1, GRat(1));
        auto pit = params_.find(name);
        if (pit != params_.end())
            return Poly::constant(alg_, GRat(pit->second));
        // site generators read as name(t,x)
        if (is("(")) {
            lx_.next();
            long long a = integer("site index");
            expect(",", "','");
            long long b = integer("site index");
            expect(")", "')'");
            name += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
        }
        if (!alg_ || !alg_->has(name))
            throw ParseError(t.line, t.col, "undeclared identifier: " + name);
        return Poly::generator(alg_, alg_->index(name));
    }
};

} // namespace dsl

inline Poly parse_expression(const std::string& text, const Model& m)
{
    std::map<std::string, Rat> params(m.params.begin(), m.params.end());
    dsl::Lexer lx(text);
    while (lx.tok().kind == dsl::Tok::newline) lx.next();
    dsl::ExprParser ep(lx, m.alg, params);
    Poly p = ep.expr();
    while (lx.tok().kind == dsl::Tok::newline) lx.next();
    if (lx.tok().kind != dsl::Tok::end)
        throw ParseError(lx.tok().line, lx.tok().col,
                         "unexpected trailing input");
    return p;
}

namespace dsl {

inline const char* const sections_[] = {
    "params",     "generators",    "action",  "symmetries", "structure",
    "nonminimal", "gauge_fermion", "lattice", "interaction"};

class ModelParser {
public:
    ModelParser(const std::string& text, Trunc tr) : lx_(text), tr_(tr) {}

    ParsedModel run()
    {
        while (lx_.tok().kind != Tok::end) {
            if (separator()) continue;
            statement();
        }
        finish();
        return ParsedModel{m_, canonical()};
    }

private:
    Lexer lx_;
    Trunc tr_;
    std::shared_ptr<Algebra> alg_;
    Model m_;
    std::map<std::string, Rat> params_;
    std::string use_line_;
    bool action_set_ = false;
    bool lattice_set_ = false;
    bool interaction_stmt_ = false;

    bool separator()
    {
        const Token& t = lx_.tok();
        if (t.kind == Tok::newline ||
            (t.kind == Tok::punct && t.text == ";")) {
            lx_.next();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg)
    {
        throw ParseError(t.line, t.col, msg);
    }

    void expect_punct(const std::string& s, const std::string& what)
    {
        const Token& t = lx_.tok();
        if (t.kind != Tok::punct || t.text != s) fail(t, "expected " + what);
        lx_.next();
    }

    std::string ident(const std::string& what)
    {
        const Token& t = lx_.tok();
        if (t.kind != Tok::ident) fail(t, "expected " + what);
        std::string s = t.text;
        lx_.next();
        return s;
    }

    Rat rational()
    {
        bool neg = false;
        while (lx_.tok().kind == Tok::punct && lx_.tok().text == "-") {
            neg = !neg;
            lx_.next();
        }
        const Token& t = lx_.tok();
        if (t.kind != Tok::integer) fail(t, "expected number");
        Rat v(t.value);
        lx_.next();
        if (lx_.tok().kind == Tok::punct && lx_.tok().text == "/") {
            lx_.next();
            const Token& d = lx_.tok();
            if (d.kind != Tok::integer || d.value == 0)
                fail(d, "expected nonzero denominator");
            v /= Rat(d.value);
            lx_.next();
        }
        return neg ? -v : v;
    }

    long long integer(const std::string& what)
    {
        bool neg = false;
        if (lx_.tok().kind == Tok::punct && lx_.tok().text == "-") {
            neg = true;
            lx_.next();
        }
        const Token& t = lx_.tok();
        if (t.kind != Tok::integer) fail(t, "expected " + what);
        long long v = t.value;
        lx_.next();
        return neg ? -v : v;
    }

    std::shared_ptr<Algebra> alg(const Token& at)
    {
        if (use_line_.size())
            fail(at, "use cannot be combined with other declarations");
        if (lattice_set_)
            fail(at, "lattice models take interaction statements only");
        if (!alg_) {
            alg_ = std::make_shared<Algebra>();
            alg_->trunc = tr_;
            m_.alg = alg_;
        }
        return alg_;
    }

    Poly expression()
    {
        AlgebraPtr a = m_.alg;
        if (!a) fail(lx_.tok(), "no generators declared yet");
        ExprParser ep(lx_, a, params_);
        return ep.expr();
    }

    void end_of_statement()
    {
        const Token& t = lx_.tok();
        if (t.kind == Tok::end || separator()) return;
        fail(t, "expected end of statement");
    }

    void statement()
    {
        const Token t = lx_.tok();
        if (t.kind == Tok::punct && t.text == "[") {
            section();
            return;
        }
        if (t.kind != Tok::ident) fail(t, "expected statement");
        const std::string& k = t.text;
        if (k == "use") stmt_use();
        else if (k == "param") stmt_param();
        else if (k == "even") stmt_generator(false);
        else if (k == "ghost") stmt_generator(true);
        else if (k == "action") stmt_action();
        else if (k == "symmetry") stmt_symmetry();
        else if (k == "structure") stmt_structure();
        else if (k == "nonminimal") stmt_nonminimal();
        else if (k == "gauge_fermion") stmt_gauge_fermion();
        else if (k == "lattice") stmt_lattice();
        else if (k == "interaction") stmt_interaction();
        else fail(t, "unknown statement '" + k + "'");
        end_of_statement();
    }

    void section()
    {
        const Token t = lx_.tok();
        lx_.next();
        std::string name = ident("section name");
        for (const char* s : sections_)
            if (name == s) {
                expect_punct("]", "']'");
                return;
            }
        fail(t, "unknown section [" + name + "]");
    }

    /* ---- use ------------------------------------------------------- */

    struct UseArg {
        std::string key;  // empty for positional
        std::string word; // identifier argument
        Rat value;
        bool is_word = false;
        Token at;
    };

    void stmt_use()
    {
        const Token at = lx_.tok();
        if (alg_ || lattice_set_ || action_set_)
            fail(at, "use cannot be combined with other declarations");
        if (use_line_.size()) fail(at, "only one use statement is allowed");
        lx_.next();
        std::string name = ident("builtin model name");
        std::vector<UseArg> args;
        expect_punct("(", "'('");
        if (!(lx_.tok().kind == Tok::punct && lx_.tok().text == ")")) {
            while (true) {
                args.push_back(use_arg());
                if (lx_.tok().kind == Tok::punct && lx_.tok().text == ",") {
                    lx_.next();
                    continue;
                }
                break;
            }
        }
        expect_punct(")", "')'");
        try {
            build_use(at, name, args);
        } catch (const ParseError&) {
            throw;
        } catch (const error& e) {
            fail(at, e.what());
        }
    }

    UseArg use_arg()
    {
        UseArg a;
        a.at = lx_.tok();
        if (lx_.tok().kind == Tok::ident) {
            std::string w = lx_.tok().text;
            if (lx_.peek().kind == Tok::punct && lx_.peek().text == "=") {
                lx_.next();
                lx_.next();
                a.key = w;
                if (lx_.tok().kind == Tok::ident) {
                    a.word = ident("value");
                    a.is_word = true;
                } else
                    a.value = rational();
                return a;
            }
            lx_.next();
            a.word = w;
            a.is_word = true;
            return a;
        }
        a.value = rational();
        return a;
    }

    Rat num_arg(const std::vector<UseArg>& args, size_t pos,
                const std::string& key, const Token& at)
    {
        for (auto& a : args)
            if (a.key == key && !key.empty()) {
                if (a.is_word) fail(a.at, key + " must be a number");
                return a.value;
            }
        size_t seen = 0;
        for (auto& a : args) {
            if (!a.key.empty() || a.is_word) continue;
            if (seen++ == pos) return a.value;
        }
        fail(at, "missing argument " + key);
    }

    void build_use(const Token& at, const std::string& name,
                   const std::vector<UseArg>& args)
    {
        auto word = [&](const std::string& w) {
            for (auto& a : args)
                if (a.is_word && a.word == w) return true;
            return false;
        };
        if (name == "toy_circles") {
            Rat n = num_arg(args, 0, "N", at);
            if (denominator(n) != 1 || n < 1) fail(at, "N must be a positive integer");
            int N = (int)(long long)numerator(n);
            m_ = toy_circles(N, tr_);
            use_line_ = "use toy_circles(N=" + std::to_string(N) + ")";
        } else if (name == "lie_gauge") {
            if (!word("su2")) fail(at, "only the su2 structure is built in");
            bool adj = word("adjoint");
            m_ = lie_gauge(adj, tr_);
            use_line_ = adj ? "use lie_gauge(su2, adjoint)" : "use lie_gauge(su2)";
        } else if (name == "ym_matrix") {
            if (!word("su2")) fail(at, "only the su2 structure is built in");
            Rat d = num_arg(args, 0, "d", at);
            if (denominator(d) != 1 || d < 0) fail(at, "d must be a nonnegative integer");
            int D = (int)(long long)numerator(d);
            m_ = ym_matrix(D, tr_);
            use_line_ = "use ym_matrix(d=" + std::to_string(D) + ", su2)";
        } else if (name == "free_scalar") {
            Rat nt = num_arg(args, 0, "Nt", at), nx = num_arg(args, 1, "Nx", at);
            Rat a_t = num_arg(args, 2, "a_t", at), a_x = num_arg(args, 3, "a_x", at);
            Rat m2 = num_arg(args, 4, "m2", at);
            if (denominator(nt) != 1 || denominator(nx) != 1)
                fail(at, "lattice extents must be integers");
            m_ = free_scalar((int)(long long)numerator(nt),
                             (int)(long long)numerator(nx), a_t, a_x, m2, tr_);
            use_line_ = "use free_scalar(" + rat_str(nt) + ", " + rat_str(nx) +
                        ", " + rat_str(a_t) + ", " + rat_str(a_x) + ", " +
                        rat_str(m2) + ")";
        } else if (name == "phi4") {
            Rat c = num_arg(args, 0, "coupling", at);
            m_ = phi4(c, tr_);
            use_line_ = "use phi4(" + rat_str(c) + ")";
        } else
            fail(at, "unknown builtin model '" + name + "'");
    }

    /* ---- declarations ---------------------------------------------- */

    void reserved_check(const Token& at, const std::string& name)
    {
        if (name == "i" || name == "h" || name == "l" || name == "prod")
            fail(at, "reserved identifier: " + name);
    }

    void stmt_param()
    {
        if (use_line_.size())
            fail(lx_.tok(), "use cannot be combined with other declarations");
        lx_.next();
        const Token at = lx_.tok();
        std::string name = ident("parameter name");
        reserved_check(at, name);
        if (params_.count(name)) fail(at, "duplicate parameter " + name);
        expect_punct("=", "'='");
        Rat v = rational();
        params_[name] = v;
        m_.params.emplace_back(name, v);
    }

    void stmt_generator(bool ghost)
    {
        const Token at = lx_.tok();
        lx_.next();
        std::string name = ident("generator name");
        reserved_check(at, name);
        auto a = alg(at);
        try {
            int g = ghost ? a->add_pair(name, 1, 1, 0) : a->add_pair(name, 0, 0, 0);
            (ghost ? m_.ghosts : m_.matter).push_back(g);
        } catch (const error& e) {
            fail(at, e.what());
        }
    }

    void stmt_nonminimal()
    {
        const Token at = lx_.tok();
        lx_.next();
        std::string cb = ident("antighost name");
        std::string b = ident("auxiliary field name");
        reserved_check(at, cb);
        reserved_check(at, b);
        auto a = alg(at);
        try {
            NonminimalPair p;
            p.cbar = a->add_pair(cb, -1, 0, 0, Rat(1), true);
            p.b = a->add_pair(b, 0, 0, 0);
            m_.nonminimal.push_back(p);
        } catch (const error& e) {
            fail(at, e.what());
        }
    }

    /* ---- body statements ------------------------------------------- */

    void stmt_action()
    {
        const Token at = lx_.tok();
        lx_.next();
        if (action_set_) fail(at, "duplicate action");
        if (use_line_.size())
            fail(at, "use cannot be combined with other declarations");
        // optional "NAME =" prefix, recognized by one-token lookahead
        if (lx_.tok().kind == Tok::ident && lx_.peek().kind == Tok::punct &&
            lx_.peek().text == "=") {
            m_.action_name = lx_.tok().text;
            lx_.next();
            lx_.next();
        }
        Poly p = expression();
        Grading g = grading(p);
        if (!p.is_zero() && (!g.hom_gh || g.gh != 0 || !g.hom_af || g.af != 0))
            fail(at, "grading violation: the action must be an antifield-free "
                     "polynomial of ghost number zero");
        m_.action = p;
        action_set_ = true;
    }

    void stmt_symmetry()
    {
        const Token at = lx_.tok();
        if (use_line_.size())
            fail(at, "use cannot be combined with other declarations");
        lx_.next();
        Symmetry sym;
        sym.name = ident("symmetry name");
        expect_punct(":", "':'");
        const Token gt = lx_.tok();
        std::string gname = ident("ghost name");
        if (!m_.alg || !m_.alg->has(gname))
            fail(gt, "undeclared identifier: " + gname);
        sym.ghost = m_.alg->index(gname);
        bool is_ghost = false;
        for (int g : m_.ghosts) is_ghost |= (g == sym.ghost);
        if (!is_ghost)
            fail(gt, "grading violation: " + gname + " is not a ghost");
        expect_punct("->", "'->'");
        vf_sum(sym);
        m_.symmetries.push_back(std::move(sym));
    }

    void vf_sum(Symmetry& sym)
    {
        bool neg = false;
        if (lx_.tok().kind == Tok::punct && lx_.tok().text == "-") {
            neg = true;
            lx_.next();
        }
        vf_term(sym, neg);
        while (lx_.tok().kind == Tok::punct &&
               (lx_.tok().text == "+" || lx_.tok().text == "-")) {
            bool minus = lx_.tok().text == "-";
            lx_.next();
            vf_term(sym, minus);
        }
    }

    void vf_term(Symmetry& sym, bool neg)
    {
        const Token at = lx_.tok();
        Poly coef = Poly::one(m_.alg);
        ExprParser ep(lx_, m_.alg, params_);
        while (lx_.tok().kind != Tok::dd) {
            coef = coef * ep.factor();
            if (lx_.tok().kind == Tok::punct && lx_.tok().text == "*") {
                lx_.next();
                continue;
            }
            if (lx_.tok().kind != Tok::dd)
                fail(lx_.tok(), "expected d/d<field> to close the term");
        }
        const Token dt = lx_.tok();
        std::string field = dt.text;
        lx_.next();
        if (!m_.alg->has(field))
            fail(dt, "undeclared identifier: " + field);
        int fi = m_.alg->index(field);
        bool is_matter = false;
        for (int f : m_.matter) is_matter |= (f == fi);
        if (!is_matter)
            fail(dt, "grading violation: symmetries act on even matter fields");
        Grading g = grading(coef);
        if (!coef.is_zero() &&
            (!g.hom_gh || g.gh != 0 || !g.hom_af || g.af != 0 || !g.hom_pg || g.pg != 0))
            fail(at, "grading violation: symmetry coefficients must be matter "
                     "polynomials");
        sym.rho.emplace_back(fi, neg ? -coef : coef);
    }

    void stmt_structure()
    {
        const Token at = lx_.tok();
        if (use_line_.size())
            fail(at, "use cannot be combined with other declarations");
        lx_.next();
        expect_punct("[", "'['");
        long long c = integer("ghost index");
        expect_punct(",", "','");
        long long a = integer("ghost index");
        expect_punct(",", "','");
        long long b = integer("ghost index");
        expect_punct("]", "']'");
        expect_punct("=", "'='");
        Rat v = rational();
        long long n = (long long)m_.symmetries.size();
        if (c < 1 || a < 1 || b < 1 || c > n || a > n || b > n)
            fail(at, "structure index out of range (1-based symmetry index)");
        try {
            set_structure(m_, (int)c - 1, (int)a - 1, (int)b - 1, v);
        } catch (const error& e) {
            fail(at, e.what());
        }
    }

    void stmt_gauge_fermion()
    {
        const Token at = lx_.tok();
        if (use_line_.size())
            fail(at, "use cannot be combined with other declarations");
        lx_.next();
        Poly p = expression();
        Grading g = grading(p);
        if (!p.is_zero() && (!g.hom_gh || g.gh != -1 || !g.hom_af || g.af != 0))
            fail(at, "grading violation: gauge fermion must have ghost number "
                     "-1 and no antifields");
        m_.gauge_fermion = p;
        m_.has_gauge_fermion = true;
    }

    void stmt_lattice()
    {
        const Token at = lx_.tok();
        if (alg_ || use_line_.size())
            fail(at, "lattice cannot be combined with generator declarations");
        if (lattice_set_) fail(at, "duplicate lattice");
        lx_.next();
        long long nt = integer("time extent");
        long long nx = integer("space extent");
        Rat a_t = rational(), a_x = rational(), m2 = rational();
        std::vector<std::pair<std::string, Rat>> keep = m_.params;
        try {
            m_ = free_scalar((int)nt, (int)nx, a_t, a_x, m2, tr_);
        } catch (const error& e) {
            fail(at, e.what());
        }
        m_.params = std::move(keep);
        lattice_set_ = true;
    }

    void stmt_interaction()
    {
        const Token at = lx_.tok();
        lx_.next();
        if (!m_.alg || !m_.lattice.active())
            fail(at, "interaction requires a lattice model");
        interaction_stmt_ = true;
        Poly p = expression();
        // every interaction carries at least one power of the coupling
        bool has_l0 = false;
        for (auto& [mono, s] : p.terms())
            for (auto& [k, cc] : s.terms())
                if (k.l == 0) has_l0 = true;
        if (!p.is_zero() && has_l0) p = p.shifted(0, 1, GRat(1));
        m_.interaction = p;
        m_.has_interaction = true;
    }

    /* ---- assembly and canonical printing --------------------------- */

    void finish()
    {
        if (use_line_.size() || lattice_set_) return;
        if (!alg_) throw ParseError(1, 1, "model declares no generators");
        if (!action_set_) m_.action = Poly::zero(m_.alg);
    }

    static bool multi_term(const Poly& p)
    {
        if (p.terms().size() > 1) return true;
        if (p.terms().size() == 1) {
            auto& s = p.terms().begin()->second;
            if (s.terms().size() > 1) return true;
        }
        return false;
    }

    std::string canonical() const
    {
        if (use_line_.size()) {
            std::string out = use_line_ + "\n";
            if (interaction_stmt_)
                out += "\n[interaction]\ninteraction " + m_.interaction.str() +
                       "\n";
            return out;
        }
        std::string out;
        auto sect = [&](const char* n) {
            if (!out.empty()) out += "\n";
            out += std::string("[") + n + "]\n";
        };
        if (!m_.params.empty()) {
            sect("params");
            for (auto& [k, v] : m_.params)
                out += "param " + k + " = " + rat_str(v) + "\n";
        }
        if (lattice_set_) {
            sect("lattice");
            out += "lattice " + std::to_string(m_.lattice.nt) + " " +
                   std::to_string(m_.lattice.nx) + " " + rat_str(m_.lattice.at) +
                   " " + rat_str(m_.lattice.ax) + " " + rat_str(m_.lattice.m2) +
                   "\n";
            if (m_.has_interaction) {
                sect("interaction");
                out += "interaction " + m_.interaction.str() + "\n";
            }
            return out;
        }
        sect("generators");
        std::vector<bool> nm((size_t)m_.alg->size(), false);
        for (auto& p : m_.nonminimal) {
            nm[(size_t)p.cbar] = true;
            nm[(size_t)p.b] = true;
        }
        for (int g = 0; g < m_.alg->size(); ++g) {
            if (m_.alg->gen(g).anti || nm[(size_t)g]) continue;
            bool ghost = false;
            for (int c : m_.ghosts) ghost |= (c == g);
            out += (ghost ? "ghost " : "even ") + m_.alg->gen(g).id + "\n";
        }
        if (action_set_) {
            sect("action");
            out += "action " + m_.action_name + " = " + m_.action.str() + "\n";
        }
        if (!m_.symmetries.empty()) {
            sect("symmetries");
            for (auto& s : m_.symmetries) {
                out += "symmetry " + s.name + " : " + m_.alg->gen(s.ghost).id +
                       " ->";
                bool first = true;
                for (auto& [f, coef] : s.rho) {
                    std::string cs = coef.str();
                    bool neg = false;
                    if (multi_term(coef)) {
                        cs = "(" + cs + ")";
                    } else if (!cs.empty() && cs[0] == '-') {
                        neg = true;
                        cs = cs.substr(1);
                    }
                    out += first ? (neg ? " -" : " ") : (neg ? " - " : " + ");
                    out += cs + "*d/d" + m_.alg->gen(f).id;
                    first = false;
                }
                out += "\n";
            }
        }
        bool have_structure = false;
        for (auto& [k, v] : m_.structure)
            if (k[1] < k[2] && v != 0) have_structure = true;
        if (have_structure) {
            sect("structure");
            for (auto& [k, v] : m_.structure) {
                if (k[1] >= k[2] || v == 0) continue;
                out += "structure [" + std::to_string(k[0] + 1) + "," +
                       std::to_string(k[1] + 1) + "," + std::to_string(k[2] + 1) +
                       "] = " + rat_str(v) + "\n";
            }
        }
        if (!m_.nonminimal.empty()) {
            sect("nonminimal");
            for (auto& p : m_.nonminimal)
                out += "nonminimal " + m_.alg->gen(p.cbar).id + " " +
                       m_.alg->gen(p.b).id + "\n";
        }
        if (m_.has_gauge_fermion) {
            sect("gauge_fermion");
            out += "gauge_fermion " + m_.gauge_fermion.str() + "\n";
        }
        return out;
    }
};

} // namespace dsl

inline ParsedModel parse_model(const std::string& text, Trunc tr = Trunc{})
{
    dsl::ModelParser p(text, tr);
    return p.run();
}

inline std::string print_model(const ParsedModel& pm) { return pm.canonical; }

} // namespace bvw

#endif
