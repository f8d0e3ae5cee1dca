#include "cevarep/mapdsl.hpp"

#include "cevarep/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

namespace cevarep {

namespace {

enum class Tok {
    end,
    number,
    ident,
    plus,
    minus,
    star,
    slash,
    caret,
    lparen,
    rparen,
    lbracket,
    rbracket,
    comma,
    equals,
    define,  // :=
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    double number = 0.0;
    int line = 1;
    int column = 1;
};

std::string describe(const Token& t) {
    return t.kind == Tok::end ? std::string("end of input") : "'" + t.text + "'";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = column_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                lex_number(t);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const auto start = pos_;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                              src_[pos_] == '_')) {
                    advance();
                }
                t.kind = Tok::ident;
                t.text = std::string(src_.substr(start, pos_ - start));
            } else if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                advance();
                advance();
                t.kind = Tok::define;
                t.text = ":=";
            } else {
                static const std::map<char, Tok> singles{
                    {'+', Tok::plus},     {'-', Tok::minus},    {'*', Tok::star},
                    {'/', Tok::slash},    {'^', Tok::caret},    {'(', Tok::lparen},
                    {')', Tok::rparen},   {'[', Tok::lbracket}, {']', Tok::rbracket},
                    {',', Tok::comma},    {'=', Tok::equals},
                };
                const auto it = singles.find(c);
                if (it == singles.end()) {
                    throw ParseError(ErrorKind::SyntaxError,
                                     std::string("unexpected character '") + c + "'", line_,
                                     column_);
                }
                advance();
                t.kind = it->second;
                t.text = std::string(1, c);
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
    }

    void lex_number(Token& t) {
        const auto start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            // Only an exponent when digits follow; otherwise leave 'e' to the next token.
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                while (pos_ < look) advance();
                digits();
            }
        }
        t.kind = Tok::number;
        t.text = std::string(src_.substr(start, pos_ - start));
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size() ||
            !std::isfinite(t.number)) {
            throw ParseError(ErrorKind::SyntaxError, "malformed number '" + t.text + "'", t.line,
                             t.column);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

std::optional<int> indexed_name(const std::string& text, char prefix) {
    if (text.size() < 2 || text[0] != prefix) return std::nullopt;
    int v = 0;
    const auto res = std::from_chars(text.data() + 1, text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

bool is_function(const std::string& name) {
    return name == "exp" || name == "log" || name == "sqrt" || name == "abs";
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

    MapSpec spec() {
        std::optional<Eigen::Index> n, m;
        std::vector<std::pair<double, double>> intervals;
        bool have_region = false;
        const Token* region_tok = nullptr;
        std::map<int, Expr> comps;

        while (peek().kind == Tok::ident && peek(1).kind == Tok::equals) {
            const Token& key = next();
            next();  // '='
            if (key.text == "n" || key.text == "m") {
                const Token& v = expect(Tok::number, "an integer");
                const int value = as_positive_int(v);
                (key.text == "n" ? n : m) = value;
            } else if (key.text == "region") {
                region_tok = &key;
                have_region = true;
                intervals.push_back(interval());
                while (peek().kind == Tok::ident && peek().text == "x") {
                    next();
                    intervals.push_back(interval());
                }
            } else {
                throw ParseError(ErrorKind::UnknownIdentifier, "unknown header '" + key.text + "'",
                                 key.line, key.column);
            }
        }
        if (n) max_var_ = static_cast<int>(*n);

        while (peek().kind != Tok::end) {
            const Token& name = peek();
            const auto idx = name.kind == Tok::ident ? indexed_name(name.text, 'f') : std::nullopt;
            if (!idx || peek(1).kind != Tok::define) {
                throw ParseError(ErrorKind::SyntaxError,
                                 "expected a component definition 'f<k> :=' but found " +
                                     describe(name),
                                 name.line, name.column);
            }
            if (*idx < 1) {
                throw ParseError(ErrorKind::SyntaxError, "component indices start at 1",
                                 name.line, name.column);
            }
            if (comps.count(*idx)) {
                throw ParseError(ErrorKind::SyntaxError, "duplicate component " + name.text,
                                 name.line, name.column);
            }
            next();
            next();  // ':='
            comps.emplace(*idx, expr(0));
        }
        if (comps.empty()) {
            const Token& t = peek();
            throw ParseError(ErrorKind::SyntaxError, "expected at least one component", t.line,
                             t.column);
        }

        MapSpec out;
        const int count = static_cast<int>(comps.size());
        if (comps.rbegin()->first != count) {
            throw ParseError(ErrorKind::SyntaxError,
                             "components must be numbered f1..f" + std::to_string(count), 1, 1);
        }
        if (m && *m != count) {
            throw ParseError(ErrorKind::SyntaxError,
                             "m=" + std::to_string(*m) + " but " + std::to_string(count) +
                                 " components were defined",
                             1, 1);
        }
        out.in_dim = n ? *n : std::max(1, seen_var_);
        out.out_dim = count;
        for (auto& [k, e] : comps) out.components.push_back(std::move(e));
        if (have_region) {
            if (static_cast<Eigen::Index>(intervals.size()) != out.in_dim) {
                throw ParseError(ErrorKind::SyntaxError,
                                 "region has " + std::to_string(intervals.size()) +
                                     " intervals for n=" + std::to_string(out.in_dim),
                                 region_tok->line, region_tok->column);
            }
            out.region = {Vec(out.in_dim), Vec(out.in_dim)};
            for (Eigen::Index i = 0; i < out.in_dim; ++i) {
                out.region.lo[i] = intervals[static_cast<std::size_t>(i)].first;
                out.region.hi[i] = intervals[static_cast<std::size_t>(i)].second;
            }
        } else {
            out.region = Box::cube(out.in_dim, -1.0, 1.0);
        }
        return out;
    }

    Expr single() {
        Expr e = expr(0);
        if (peek().kind != Tok::end) {
            throw ParseError(ErrorKind::SyntaxError, "unexpected " + describe(peek()), peek().line,
                             peek().column);
        }
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    const Token& expect(Tok kind, const std::string& what) {
        if (peek().kind != kind) {
            throw ParseError(ErrorKind::SyntaxError,
                             "expected " + what + " but found " + describe(peek()), peek().line,
                             peek().column);
        }
        return next();
    }

    static int as_positive_int(const Token& t) {
        int v = 0;
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size() || v < 1) {
            throw ParseError(ErrorKind::SyntaxError, "expected a positive integer", t.line,
                             t.column);
        }
        return v;
    }

    double signed_number() {
        double sign = 1.0;
        if (peek().kind == Tok::minus) {
            next();
            sign = -1.0;
        }
        return sign * expect(Tok::number, "a number").number;
    }

    std::pair<double, double> interval() {
        const Token& open = expect(Tok::lbracket, "'['");
        const double lo = signed_number();
        expect(Tok::comma, "','");
        const double hi = signed_number();
        expect(Tok::rbracket, "']'");
        if (!(lo <= hi)) {
            throw ParseError(ErrorKind::SyntaxError, "empty region interval", open.line,
                             open.column);
        }
        return {lo, hi};
    }

    // Subtree plus its height, so that both long operator chains and deep
    // bracket nesting are bounded without walking the tree again.
    struct Node {
        Expr e;
        int height = 1;
    };

    static Node make(Expr::Kind kind, std::vector<Node> children, const Token& at) {
        Node n;
        n.e.kind = kind;
        int h = 0;
        for (auto& c : children) {
            h = std::max(h, c.height);
            n.e.args.push_back(std::move(c.e));
        }
        n.height = h + 1;
        if (n.height > kMaxExprDepth) {
            throw ParseError(ErrorKind::SyntaxError, "expression nested too deeply", at.line,
                             at.column);
        }
        return n;
    }

    static void enter(int nesting, const Token& at) {
        if (nesting > kMaxExprDepth) {
            throw ParseError(ErrorKind::SyntaxError, "expression nested too deeply", at.line,
                             at.column);
        }
    }

    static bool starts_factor(const Token& t) {
        return t.kind == Tok::number || t.kind == Tok::ident || t.kind == Tok::lparen ||
               t.kind == Tok::minus;
    }

    void operand_after(const Token& op) const {
        if (!starts_factor(peek())) {
            throw ParseError(ErrorKind::SyntaxError,
                             "missing operand after '" + op.text + "'", op.line, op.column);
        }
    }

    Expr expr(int nesting) { return sum(nesting).e; }

    Node sum(int nesting) {
        Node lhs = term(nesting);
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Token& op = next();
            operand_after(op);
            const auto kind = op.kind == Tok::plus ? Expr::Kind::add : Expr::Kind::sub;
            std::vector<Node> children;
            children.push_back(std::move(lhs));
            children.push_back(term(nesting));
            lhs = make(kind, std::move(children), op);
        }
        return lhs;
    }

    Node term(int nesting) {
        Node lhs = factor(nesting);
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const Token& op = next();
            operand_after(op);
            const auto kind = op.kind == Tok::star ? Expr::Kind::mul : Expr::Kind::div;
            std::vector<Node> children;
            children.push_back(std::move(lhs));
            children.push_back(factor(nesting));
            lhs = make(kind, std::move(children), op);
        }
        return lhs;
    }

    Node factor(int nesting) {
        const Token* minus = nullptr;
        if (peek().kind == Tok::minus) {
            minus = &next();
            operand_after(*minus);
            if (peek().kind == Tok::minus) {
                throw ParseError(ErrorKind::SyntaxError, "repeated unary '-'", peek().line,
                                 peek().column);
            }
        }
        Node base = atom(nesting);
        if (peek().kind == Tok::caret) {
            const Token& op = next();
            int sign = 1;
            if (peek().kind == Tok::minus) {
                next();
                sign = -1;
            }
            if (peek().kind != Tok::number) {
                throw ParseError(ErrorKind::SyntaxError, "'^' needs an integer literal exponent",
                                 op.line, op.column);
            }
            const Token& lit = next();
            int k = 0;
            const auto res = std::from_chars(lit.text.data(), lit.text.data() + lit.text.size(), k);
            if (res.ec != std::errc() || res.ptr != lit.text.data() + lit.text.size()) {
                throw ParseError(ErrorKind::SyntaxError, "exponent must be an integer", lit.line,
                                 lit.column);
            }
            std::vector<Node> children;
            children.push_back(std::move(base));
            base = make(Expr::Kind::pow, std::move(children), op);
            base.e.index = sign * k;
        }
        if (!minus) return base;
        std::vector<Node> children;
        children.push_back(std::move(base));
        return make(Expr::Kind::neg, std::move(children), *minus);
    }

    Node atom(int nesting) {
        const Token& t = peek();
        if (t.kind == Tok::number) {
            next();
            Node n;
            n.e.kind = Expr::Kind::constant;
            n.e.value = t.number;
            return n;
        }
        if (t.kind == Tok::lparen) {
            next();
            enter(nesting + 1, t);
            Node inner = sum(nesting + 1);
            expect(Tok::rparen, "')'");
            return inner;
        }
        if (t.kind == Tok::ident) {
            next();
            if (peek().kind == Tok::lparen) return call(t, nesting);
            if (const auto idx = indexed_name(t.text, 'x'); idx && *idx >= 1) {
                if (max_var_ > 0 && *idx > max_var_) {
                    throw ParseError(ErrorKind::UnknownIdentifier,
                                     "variable " + t.text + " exceeds n=" + std::to_string(max_var_),
                                     t.line, t.column);
                }
                seen_var_ = std::max(seen_var_, *idx);
                Node n;
                n.e.kind = Expr::Kind::variable;
                n.e.index = *idx;
                return n;
            }
            throw ParseError(ErrorKind::UnknownIdentifier, "unknown identifier '" + t.text + "'",
                             t.line, t.column);
        }
        throw ParseError(ErrorKind::SyntaxError, "expected an operand but found " + describe(t),
                         t.line, t.column);
    }

    Node call(const Token& name, int nesting) {
        if (!is_function(name.text)) {
            throw ParseError(ErrorKind::UnknownIdentifier,
                             "unknown identifier '" + name.text + "'", name.line, name.column);
        }
        next();  // '('
        enter(nesting + 1, name);
        std::vector<Node> args;
        if (peek().kind != Tok::rparen) {
            args.push_back(sum(nesting + 1));
            while (peek().kind == Tok::comma) {
                next();
                args.push_back(sum(nesting + 1));
            }
        }
        expect(Tok::rparen, "')'");
        if (args.size() != 1) {
            throw ParseError(ErrorKind::ArityError,
                             name.text + " takes 1 argument, got " + std::to_string(args.size()),
                             name.line, name.column);
        }
        Node n = make(Expr::Kind::call, std::move(args), name);
        n.e.name = name.text;
        return n;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int max_var_ = 0;
    int seen_var_ = 0;
};

std::string number_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void out_of_domain(const std::string& what) { fail(ErrorKind::OutOfDomain, what); }

double checked_div(double num, double den) {
    if (!(std::abs(den) > 1e-300)) out_of_domain("division by a value within 1e-300 of zero");
    return num / den;
}

double int_power(double base, int k) {
    double result = 1.0;
    double b = base;
    for (unsigned e = static_cast<unsigned>(k < 0 ? -static_cast<long>(k) : k); e; e >>= 1) {
        if (e & 1u) result *= b;
        b *= b;
    }
    return k < 0 ? checked_div(1.0, result) : result;
}

}  // namespace

MapSpec parse_map_spec(std::string_view src) {
    return Parser(src).spec();
}

Expr parse_expr(std::string_view src) {
    return Parser(src).single();
}

std::string to_source(const Expr& e) {
    using K = Expr::Kind;
    auto wrap = [](const Expr& c) {
        const bool atomic = c.kind == K::constant || c.kind == K::variable || c.kind == K::call;
        return atomic ? to_source(c) : "(" + to_source(c) + ")";
    };
    switch (e.kind) {
        case K::constant: return number_text(e.value);
        case K::variable: return "x" + std::to_string(e.index);
        case K::add: return wrap(e.args[0]) + " + " + wrap(e.args[1]);
        case K::sub: return wrap(e.args[0]) + " - " + wrap(e.args[1]);
        case K::mul: return wrap(e.args[0]) + " * " + wrap(e.args[1]);
        case K::div: return wrap(e.args[0]) + " / " + wrap(e.args[1]);
        case K::neg: return "-" + wrap(e.args[0]);
        case K::pow: return wrap(e.args[0]) + "^" + std::to_string(e.index);
        case K::call: return e.name + "(" + to_source(e.args[0]) + ")";
    }
    return {};
}

std::string to_source(const MapSpec& spec) {
    std::string out = "n=" + std::to_string(spec.in_dim) + " m=" + std::to_string(spec.out_dim) +
                      " region=";
    for (Eigen::Index i = 0; i < spec.region.dim(); ++i) {
        if (i) out += "x";
        out += "[" + number_text(spec.region.lo[i]) + "," + number_text(spec.region.hi[i]) + "]";
    }
    for (std::size_t k = 0; k < spec.components.size(); ++k) {
        out += "\nf" + std::to_string(k + 1) + " := " + to_source(spec.components[k]);
    }
    return out;
}

double evaluate(const Expr& e, const Vec& x) {
    using K = Expr::Kind;
    double v = 0.0;
    switch (e.kind) {
        case K::constant: v = e.value; break;
        case K::variable:
            if (e.index < 1 || e.index > x.size()) {
                fail(ErrorKind::DimensionMismatch, "variable x" + std::to_string(e.index) +
                                                       " outside input of size " +
                                                       std::to_string(x.size()));
            }
            v = x[e.index - 1];
            break;
        case K::add: v = evaluate(e.args[0], x) + evaluate(e.args[1], x); break;
        case K::sub: v = evaluate(e.args[0], x) - evaluate(e.args[1], x); break;
        case K::mul: v = evaluate(e.args[0], x) * evaluate(e.args[1], x); break;
        case K::div: v = checked_div(evaluate(e.args[0], x), evaluate(e.args[1], x)); break;
        case K::neg: v = -evaluate(e.args[0], x); break;
        case K::pow: v = int_power(evaluate(e.args[0], x), e.index); break;
        case K::call: {
            const double a = evaluate(e.args[0], x);
            if (e.name == "exp") {
                v = std::exp(a);
            } else if (e.name == "log") {
                if (!(a > 0.0)) out_of_domain("log of a non-positive value");
                v = std::log(a);
            } else if (e.name == "sqrt") {
                if (!(a > 0.0)) out_of_domain("sqrt of a non-positive value");
                v = std::sqrt(a);
            } else {
                v = std::abs(a);
            }
            break;
        }
    }
    if (!std::isfinite(v)) out_of_domain("non-finite intermediate value");
    return v;
}

Oracle compile(const MapSpec& spec) {
    spec.region.validate();
    if (spec.region.dim() != spec.in_dim ||
        static_cast<Eigen::Index>(spec.components.size()) != spec.out_dim) {
        fail(ErrorKind::DimensionMismatch, "map spec dimensions are inconsistent");
    }
    Oracle o;
    o.name = "dsl";
    o.in_dim = spec.in_dim;
    o.out_dim = spec.out_dim;
    o.region = spec.region;
    o.eval = [comps = spec.components, n = spec.in_dim](const Vec& x) {
        if (x.size() != n) fail(ErrorKind::DimensionMismatch, "dsl map expects dimension " + std::to_string(n));
        Vec out(static_cast<Eigen::Index>(comps.size()));
        for (std::size_t k = 0; k < comps.size(); ++k) {
            out[static_cast<Eigen::Index>(k)] = evaluate(comps[k], x);
        }
        return out;
    };
    o.in_domain = [eval = o.eval](const Vec& x) {
        try {
            eval(x);
            return true;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::OutOfDomain) return false;
            throw;
        }
    };
    return o;
}

}  // namespace cevarep
