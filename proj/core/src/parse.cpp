#include <cctype>
#include <sstream>

#include "expr_node.hpp"

namespace liefield {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;
};

const char* describe(Tok t) {
    switch (t) {
        case Tok::Number: return "NUMBER";
        case Tok::Ident: return "IDENT";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Caret: return "'^'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::End: return "end of input";
    }
    return "?";
}

[[noreturn]] void fail(std::size_t offset, const std::vector<Tok>& expected, const std::string& detail = {}) {
    std::vector<std::string> names;
    std::ostringstream msg;
    msg << "parse error at offset " << offset;
    if (!detail.empty()) msg << ": " << detail;
    if (!expected.empty()) {
        msg << (detail.empty() ? ": expected " : "; expected ");
        for (std::size_t i = 0; i < expected.size(); ++i) {
            names.emplace_back(describe(expected[i]));
            msg << (i ? ", " : "") << names.back();
        }
    }
    throw ParseError(offset, std::move(names), msg.str());
}

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    const auto digit = [&](std::size_t k) { return k < s.size() && std::isdigit(static_cast<unsigned char>(s[k])); };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (digit(i) || (c == '.' && digit(i + 1))) {
            while (digit(i)) ++i;
            if (i < s.size() && s[i] == '.') {
                ++i;
                while (digit(i)) ++i;
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t k = i + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
                if (digit(k)) {
                    i = k;
                    while (digit(i)) ++i;
                }
            }
            out.push_back({Tok::Number, start, s.substr(start, i - start)});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tok::Ident, start, s.substr(start, i - start)});
            continue;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            default: fail(i, {}, std::string("unexpected character '") + c + "'");
        }
        out.push_back({kind, start, std::string(1, c)});
        ++i;
    }
    out.push_back({Tok::End, s.size(), {}});
    return out;
}

bool lookup_func(const std::string& name, Func& f) {
    static const std::pair<const char*, Func> table[] = {
        {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp}, {"ln", Func::Ln}, {"sqrt", Func::Sqrt}};
    for (const auto& [n, fn] : table) {
        if (name == n) {
            f = fn;
            return true;
        }
    }
    return false;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Expr parse_all() {
        Expr e = expr();
        if (peek().kind != Tok::End) {
            fail(peek().offset, {Tok::Plus, Tok::Minus, Tok::Star, Tok::Slash, Tok::Caret, Tok::End});
        }
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_++]; }

    Expr expr() {
        Expr lhs = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool plus = next().kind == Tok::Plus;
            Expr rhs = term();
            lhs = plus ? Expr::raw_add(lhs, rhs) : Expr::raw_sub(lhs, rhs);
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const bool mul = next().kind == Tok::Star;
            Expr rhs = unary();
            lhs = mul ? Expr::raw_mul(lhs, rhs) : Expr::raw_div(lhs, rhs);
        }
        return lhs;
    }

    Expr unary() {
        if (peek().kind == Tok::Minus) {
            next();
            // A minus directly on a literal is a negative constant, unless the
            // literal is the base of a power (-2^2 is -(2^2)).
            if (peek().kind == Tok::Number && peek(1).kind != Tok::Caret) {
                return Expr(-Number::from_literal(next().text));
            }
            return Expr::raw_neg(unary());
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (peek().kind == Tok::Caret) {
            next();
            return Expr::raw_pow(base, unary());
        }
        return base;
    }

    Expr atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number: next(); return Expr(Number::from_literal(t.text));
            case Tok::Ident: {
                next();
                if (peek().kind == Tok::LParen) {
                    Func f;
                    if (!lookup_func(t.text, f)) fail(t.offset, {}, "unknown function '" + t.text + "'");
                    next();
                    Expr arg = expr();
                    expect(Tok::RParen);
                    return Expr::raw_call(f, arg);
                }
                Func f;
                if (lookup_func(t.text, f)) fail(peek().offset, {Tok::LParen}, "function '" + t.text + "' needs an argument");
                if (t.text == "pi") return Expr::pi();
                return Expr::var(t.text);
            }
            case Tok::LParen: {
                next();
                Expr inner = expr();
                expect(Tok::RParen);
                return inner;
            }
            default: fail(t.offset, {Tok::Number, Tok::Ident, Tok::LParen, Tok::Minus});
        }
    }

    void expect(Tok kind) {
        if (peek().kind != kind) {
            if (kind == Tok::RParen) {
                fail(peek().offset, {Tok::Plus, Tok::Minus, Tok::Star, Tok::Slash, Tok::Caret, Tok::RParen});
            }
            fail(peek().offset, {kind});
        }
        next();
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text) { return Parser(tokenize(text)).parse_all(); }

}  // namespace liefield
