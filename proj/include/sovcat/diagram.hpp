#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sovcat/repcat.hpp"

namespace sovcat {

/// Positioned diagnostic for the diagram language. Positions are 0-based
/// byte offsets into the source text.
struct DiagramError : std::runtime_error {
    enum class Kind { Syntax, Type, Unbound };
    Kind kind;
    size_t pos;

    DiagramError(Kind k, size_t p, const std::string& msg)
        : std::runtime_error(msg + " (at offset " + std::to_string(p) + ")"), kind(k), pos(p) {}
};

struct DiagramExpr;
using ExprPtr = std::shared_ptr<const DiagramExpr>;

/// AST of a morphism expression. Composition is circle-style: the left
/// operand of 'o' is applied after the right one.
struct DiagramExpr {
    enum class Kind { Id, Coev, Ev, CoevL, EvL, Flip, Named, Tensor, Compose, Dual, DualL };

    Kind kind;
    size_t pos = 0;
    ObjectWord word;     // Id
    SimpleLabel a, b;    // Coev/Ev/CoevL/EvL use a; Flip uses a and b
    std::string name;    // Named
    ExprPtr lhs, rhs;    // Tensor(left,right); Compose(upper,lower)
    ExprPtr inner;       // Dual, DualL
};

struct Environment {
    std::map<std::string, Morphism> bindings;

    void bind(const std::string& name, Morphism m) {
        if (!bindings.emplace(name, std::move(m)).second)
            throw TypeError("environment: duplicate binding '" + name + "'");
    }
    const Morphism* find(const std::string& name) const {
        auto it = bindings.find(name);
        return it == bindings.end() ? nullptr : &it->second;
    }
};

namespace detail {

enum class Tok { Compose, Tensor, LParen, RParen, LBrack, RBrack, Comma, Caret, Ident, End };

struct Token {
    Tok kind;
    size_t pos;
    std::string text;
};

inline bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        size_t start = i;
        if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < src.size()) {
            unsigned char b1 = src[i + 1], b2 = src[i + 2];
            if (b1 == 0x88 && b2 == 0x98) {  // U+2218 ring operator
                out.push_back({Tok::Compose, start, "∘"});
                i += 3;
                continue;
            }
            if (b1 == 0x8A && b2 == 0x97) {  // U+2297 circled times
                out.push_back({Tok::Tensor, start, "⊗"});
                i += 3;
                continue;
            }
            throw DiagramError(DiagramError::Kind::Syntax, start, "unexpected character");
        }
        switch (c) {
            case '*': out.push_back({Tok::Tensor, start, "*"}); ++i; continue;
            case '(': out.push_back({Tok::LParen, start, "("}); ++i; continue;
            case ')': out.push_back({Tok::RParen, start, ")"}); ++i; continue;
            case '[': out.push_back({Tok::LBrack, start, "["}); ++i; continue;
            case ']': out.push_back({Tok::RBrack, start, "]"}); ++i; continue;
            case ',': out.push_back({Tok::Comma, start, ","}); ++i; continue;
            case '^': out.push_back({Tok::Caret, start, "^"}); ++i; continue;
            default: break;
        }
        if (ident_char(c)) {
            size_t j = i;
            while (j < src.size() && ident_char(src[j]))
                ++j;
            std::string text = src.substr(i, j - i);
            i = j;
            if (text == "o")  // reserved as the ASCII composition operator
                out.push_back({Tok::Compose, start, "o"});
            else
                out.push_back({Tok::Ident, start, std::move(text)});
            continue;
        }
        throw DiagramError(DiagramError::Kind::Syntax, start,
                           std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, src.size(), ""});
    return out;
}

class Parser {
  public:
    explicit Parser(const std::string& src) : toks_(lex(src)) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        if (peek().kind != Tok::End)
            throw DiagramError(DiagramError::Kind::Syntax, peek().pos,
                               "unexpected trailing input '" + peek().text + "'");
        return e;
    }

  private:
    const Token& peek() const { return toks_[at_]; }
    Token next() { return toks_[at_++]; }
    Token expect(Tok k, const char* what) {
        if (peek().kind != k)
            throw DiagramError(DiagramError::Kind::Syntax, peek().pos,
                               std::string("expected ") + what);
        return next();
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (peek().kind == Tok::Compose) {
            size_t opos = next().pos;
            ExprPtr r = term();
            auto n = std::make_shared<DiagramExpr>();
            n->kind = DiagramExpr::Kind::Compose;
            n->pos = opos;
            n->lhs = e;  // upper, applied second
            n->rhs = r;  // lower, applied first
            e = n;
        }
        return e;
    }

    ExprPtr term() {
        ExprPtr e = atom();
        while (peek().kind == Tok::Tensor) {
            size_t opos = next().pos;
            ExprPtr r = atom();
            auto n = std::make_shared<DiagramExpr>();
            n->kind = DiagramExpr::Kind::Tensor;
            n->pos = opos;
            n->lhs = e;
            n->rhs = r;
            e = n;
        }
        return e;
    }

    SimpleLabel label() {
        Token t = expect(Tok::Ident, "object label");
        SimpleLabel l{t.text, false};
        if (peek().kind == Tok::Caret) {
            next();
            l.dualized = true;
        }
        return l;
    }

    ObjectWord word() {
        ObjectWord w;
        if (peek().kind == Tok::RBrack)
            return w;
        w.factors.push_back(label());
        while (peek().kind == Tok::Comma) {
            next();
            w.factors.push_back(label());
        }
        return w;
    }

    ExprPtr atom() {
        const Token& t = peek();
        if (t.kind == Tok::LParen) {
            next();
            ExprPtr e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (t.kind != Tok::Ident)
            throw DiagramError(DiagramError::Kind::Syntax, t.pos, "expected expression");
        Token id = next();
        auto n = std::make_shared<DiagramExpr>();
        n->pos = id.pos;
        if (peek().kind == Tok::LBrack &&
            (id.text == "id" || id.text == "b" || id.text == "d" || id.text == "bl" ||
             id.text == "dl" || id.text == "c")) {
            next();
            if (id.text == "id") {
                n->kind = DiagramExpr::Kind::Id;
                n->word = word();
            } else if (id.text == "c") {
                n->kind = DiagramExpr::Kind::Flip;
                n->a = label();
                expect(Tok::Comma, "','");
                n->b = label();
            } else {
                n->kind = id.text == "b"    ? DiagramExpr::Kind::Coev
                          : id.text == "d"  ? DiagramExpr::Kind::Ev
                          : id.text == "bl" ? DiagramExpr::Kind::CoevL
                                            : DiagramExpr::Kind::EvL;
                n->a = label();
            }
            expect(Tok::RBrack, "']'");
            return n;
        }
        if (peek().kind == Tok::LParen && (id.text == "dual" || id.text == "duall")) {
            next();
            n->kind = id.text == "dual" ? DiagramExpr::Kind::Dual : DiagramExpr::Kind::DualL;
            n->inner = expr();
            expect(Tok::RParen, "')'");
            return n;
        }
        n->kind = DiagramExpr::Kind::Named;
        n->name = id.text;
        return n;
    }

    std::vector<Token> toks_;
    size_t at_ = 0;
};

}  // namespace detail

inline ExprPtr parse(const std::string& src) { return detail::Parser(src).parse(); }

/// Word-level typecheck. Returns (dom, cod); throws positioned errors for
/// unknown labels, unbound names and composition mismatches.
inline std::pair<ObjectWord, ObjectWord> typecheck(const ExprPtr& e, const Environment& env,
                                                   const RepCategory& cat) {
    using K = DiagramExpr::Kind;
    auto check_label = [&](const SimpleLabel& l, size_t pos) {
        if (!cat.zoo().find_irrep(l.irrep))
            throw DiagramError(DiagramError::Kind::Type, pos,
                               "unknown object label '" + l.irrep + "'");
    };
    switch (e->kind) {
        case K::Id:
            for (const auto& l : e->word.factors)
                check_label(l, e->pos);
            return {e->word, e->word};
        case K::Coev: {
            check_label(e->a, e->pos);
            return {ObjectWord{}, ObjectWord{{e->a, dual(e->a)}}};
        }
        case K::Ev: {
            check_label(e->a, e->pos);
            return {ObjectWord{{dual(e->a), e->a}}, ObjectWord{}};
        }
        case K::CoevL: {
            check_label(e->a, e->pos);
            return {ObjectWord{}, ObjectWord{{dual(e->a), e->a}}};
        }
        case K::EvL: {
            check_label(e->a, e->pos);
            return {ObjectWord{{e->a, dual(e->a)}}, ObjectWord{}};
        }
        case K::Flip: {
            check_label(e->a, e->pos);
            check_label(e->b, e->pos);
            return {ObjectWord{{e->a, e->b}}, ObjectWord{{e->b, e->a}}};
        }
        case K::Named: {
            const Morphism* m = env.find(e->name);
            if (!m)
                throw DiagramError(DiagramError::Kind::Unbound, e->pos,
                                   "unbound name '" + e->name + "'");
            return {m->dom, m->cod};
        }
        case K::Tensor: {
            auto [ld, lc] = typecheck(e->lhs, env, cat);
            auto [rd, rc] = typecheck(e->rhs, env, cat);
            ld.factors.insert(ld.factors.end(), rd.factors.begin(), rd.factors.end());
            lc.factors.insert(lc.factors.end(), rc.factors.begin(), rc.factors.end());
            return {ld, lc};
        }
        case K::Compose: {
            auto [ud, uc] = typecheck(e->lhs, env, cat);
            auto [ldom, lcod] = typecheck(e->rhs, env, cat);
            if (!(ud == lcod))
                throw DiagramError(DiagramError::Kind::Type, e->pos,
                                   "composition mismatch: upper expects " + to_string(ud) +
                                       " but lower produces " + to_string(lcod));
            return {ldom, uc};
        }
        case K::Dual:
        case K::DualL: {
            auto [d, c] = typecheck(e->inner, env, cat);
            return {dual(c), dual(d)};
        }
    }
    throw DiagramError(DiagramError::Kind::Syntax, e->pos, "corrupt AST");
}

/// Bottom-up evaluation to a concrete morphism. Callers wanting positioned
/// diagnostics should typecheck first.
inline Morphism evaluate(const ExprPtr& e, const Environment& env, const RepCategory& cat) {
    using K = DiagramExpr::Kind;
    switch (e->kind) {
        case K::Id: return cat.identity(e->word);
        case K::Coev: return cat.coevaluation(e->a);
        case K::Ev: return cat.evaluation(e->a);
        case K::CoevL: return cat.coevaluation_left(e->a);
        case K::EvL: return cat.evaluation_left(e->a);
        case K::Flip: return cat.braiding_flip(e->a, e->b);
        case K::Named: {
            const Morphism* m = env.find(e->name);
            if (!m)
                throw DiagramError(DiagramError::Kind::Unbound, e->pos,
                                   "unbound name '" + e->name + "'");
            return *m;
        }
        case K::Tensor: return tensor(evaluate(e->lhs, env, cat), evaluate(e->rhs, env, cat));
        case K::Compose: return compose(evaluate(e->lhs, env, cat), evaluate(e->rhs, env, cat));
        case K::Dual: return cat.dual_morphism(evaluate(e->inner, env, cat));
        case K::DualL: return cat.left_dual_morphism(evaluate(e->inner, env, cat));
    }
    throw DiagramError(DiagramError::Kind::Syntax, e->pos, "corrupt AST");
}

namespace detail {

inline std::string word_source(const ObjectWord& w) {
    std::string s;
    for (size_t i = 0; i < w.factors.size(); ++i) {
        if (i)
            s += ",";
        s += w.factors[i].irrep;
        if (w.factors[i].dualized)
            s += "^";
    }
    return s;
}

// precedence: compose 1, tensor 2, atoms 3
inline void print_rec(const ExprPtr& e, int min_prec, std::string& out) {
    using K = DiagramExpr::Kind;
    auto wrap = [&](int prec, auto&& body) {
        if (prec < min_prec) {
            out += "(";
            body();
            out += ")";
        } else {
            body();
        }
    };
    switch (e->kind) {
        case K::Id: out += "id[" + word_source(e->word) + "]"; return;
        case K::Coev: out += "b[" + word_source(ObjectWord{{e->a}}) + "]"; return;
        case K::Ev: out += "d[" + word_source(ObjectWord{{e->a}}) + "]"; return;
        case K::CoevL: out += "bl[" + word_source(ObjectWord{{e->a}}) + "]"; return;
        case K::EvL: out += "dl[" + word_source(ObjectWord{{e->a}}) + "]"; return;
        case K::Flip:
            out += "c[" + word_source(ObjectWord{{e->a}}) + "," + word_source(ObjectWord{{e->b}}) + "]";
            return;
        case K::Named: out += e->name; return;
        case K::Dual:
        case K::DualL:
            out += e->kind == K::Dual ? "dual(" : "duall(";
            print_rec(e->inner, 1, out);
            out += ")";
            return;
        case K::Tensor:
            wrap(2, [&] {
                print_rec(e->lhs, 2, out);
                out += " * ";
                print_rec(e->rhs, 3, out);
            });
            return;
        case K::Compose:
            wrap(1, [&] {
                print_rec(e->lhs, 1, out);
                out += " o ";
                print_rec(e->rhs, 2, out);
            });
            return;
    }
}

}  // namespace detail

/// Render an AST back to ASCII source; parse(print(e)) rebuilds e.
inline std::string print(const ExprPtr& e) {
    std::string out;
    detail::print_rec(e, 1, out);
    return out;
}

inline bool ast_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind)
        return false;
    using K = DiagramExpr::Kind;
    switch (a->kind) {
        case K::Id: return a->word == b->word;
        case K::Coev:
        case K::Ev:
        case K::CoevL:
        case K::EvL: return a->a == b->a;
        case K::Flip: return a->a == b->a && a->b == b->b;
        case K::Named: return a->name == b->name;
        case K::Tensor:
        case K::Compose: return ast_equal(a->lhs, b->lhs) && ast_equal(a->rhs, b->rhs);
        case K::Dual:
        case K::DualL: return ast_equal(a->inner, b->inner);
    }
    return false;
}

}  // namespace sovcat
