#pragma once

// Expression trees for Toeplitz symbols.
//
// A symbol is a real-valued expression in the atoms s = |z|, s^2 = |z|^2,
// re = re z and im = im z. Symbols without re/im atoms are radial. Trees are
// immutable and shared; copying an Expr is cheap.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qha/error.hpp"

namespace qha {

enum class NodeKind { number, s, s2, re, im, exp, sin, cos, ind, add, sub, mul, neg };

class Expr {
public:
    struct Node {
        NodeKind kind;
        double value = 0.0;  // number
        double lo = 0.0;     // ind
        double hi = 0.0;     // ind
        std::vector<Expr> args;
    };

    Expr() : Expr(number(0.0)) {}

    static Expr number(double v) { return Expr(Node{NodeKind::number, v, 0.0, 0.0, {}}); }
    static Expr atom(NodeKind k) { return Expr(Node{k, 0.0, 0.0, 0.0, {}}); }
    static Expr s() { return atom(NodeKind::s); }
    static Expr s2() { return atom(NodeKind::s2); }
    static Expr re() { return atom(NodeKind::re); }
    static Expr im() { return atom(NodeKind::im); }
    static Expr unary(NodeKind k, Expr a) { return Expr(Node{k, 0.0, 0.0, 0.0, {std::move(a)}}); }
    static Expr binary(NodeKind k, Expr a, Expr b) {
        return Expr(Node{k, 0.0, 0.0, 0.0, {std::move(a), std::move(b)}});
    }
    static Expr ind(double lo, double hi) { return Expr(Node{NodeKind::ind, 0.0, lo, hi, {}}); }

    NodeKind kind() const { return node_->kind; }
    double value() const { return node_->value; }
    double lo() const { return node_->lo; }
    double hi() const { return node_->hi; }
    const Expr& arg(std::size_t i) const { return node_->args.at(i); }
    std::size_t arity() const { return node_->args.size(); }

    bool is_number(double v) const { return kind() == NodeKind::number && value() == v; }

    friend bool operator==(const Expr& a, const Expr& b) {
        if (a.node_ == b.node_) return true;
        if (a.kind() != b.kind() || a.value() != b.value() || a.lo() != b.lo() || a.hi() != b.hi() ||
            a.arity() != b.arity())
            return false;
        for (std::size_t i = 0; i < a.arity(); ++i)
            if (!(a.arg(i) == b.arg(i))) return false;
        return true;
    }

private:
    explicit Expr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
    std::shared_ptr<const Node> node_;
};

inline Expr operator+(Expr a, Expr b) { return Expr::binary(NodeKind::add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(NodeKind::sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(NodeKind::mul, std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::unary(NodeKind::neg, std::move(a)); }
inline Expr exp(Expr a) { return Expr::unary(NodeKind::exp, std::move(a)); }
inline Expr sin(Expr a) { return Expr::unary(NodeKind::sin, std::move(a)); }
inline Expr cos(Expr a) { return Expr::unary(NodeKind::cos, std::move(a)); }

// --- evaluation -----------------------------------------------------------

inline double evaluate(const Expr& e, std::complex<double> z) {
    switch (e.kind()) {
        case NodeKind::number: return e.value();
        case NodeKind::s: return std::abs(z);
        case NodeKind::s2: return std::norm(z);
        case NodeKind::re: return z.real();
        case NodeKind::im: return z.imag();
        case NodeKind::exp: return std::exp(evaluate(e.arg(0), z));
        case NodeKind::sin: return std::sin(evaluate(e.arg(0), z));
        case NodeKind::cos: return std::cos(evaluate(e.arg(0), z));
        case NodeKind::ind: {
            const double r = std::abs(z);
            return (r >= e.lo() && r < e.hi()) ? 1.0 : 0.0;
        }
        case NodeKind::add: return evaluate(e.arg(0), z) + evaluate(e.arg(1), z);
        case NodeKind::sub: return evaluate(e.arg(0), z) - evaluate(e.arg(1), z);
        case NodeKind::mul: return evaluate(e.arg(0), z) * evaluate(e.arg(1), z);
        case NodeKind::neg: return -evaluate(e.arg(0), z);
    }
    return 0.0;
}

/// Evaluate a radial expression at s >= 0.
inline double evaluate_radial(const Expr& e, double s) { return evaluate(e, {s, 0.0}); }

inline bool is_radial(const Expr& e) {
    if (e.kind() == NodeKind::re || e.kind() == NodeKind::im) return false;
    for (std::size_t i = 0; i < e.arity(); ++i)
        if (!is_radial(e.arg(i))) return false;
    return true;
}

inline bool contains_indicator(const Expr& e) {
    if (e.kind() == NodeKind::ind) return true;
    for (std::size_t i = 0; i < e.arity(); ++i)
        if (contains_indicator(e.arg(i))) return true;
    return false;
}

/// Radii at which the expression jumps (indicator endpoints), sorted, unique.
inline std::vector<double> indicator_breaks(const Expr& e) {
    std::vector<double> out;
    auto walk = [&](auto&& self, const Expr& x) -> void {
        if (x.kind() == NodeKind::ind) {
            for (double b : {x.lo(), x.hi()})
                if (b > 0.0 && std::isfinite(b)) out.push_back(b);
        }
        for (std::size_t i = 0; i < x.arity(); ++i) self(self, x.arg(i));
    };
    walk(walk, e);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --- structural growth classification ---------------------------------------

/// Growth of |expr| as |z| -> infinity, decided structurally.
///   decaying    : integrable (Gaussian factor or compact support)
///   bounded     : bounded, not known to be integrable
///   polynomial  : at most polynomial growth
///   exponential : anything else
enum class Growth { decaying = 0, bounded = 1, polynomial = 2, exponential = 3 };

namespace detail {

struct AffineInS2 {
    double slope = 0.0;  // coefficient of s^2; remainder is bounded
};

// Write the expression as slope * s^2 + (bounded remainder), if possible.
inline std::optional<AffineInS2> affine_in_s2(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::number: return AffineInS2{0.0};
        case NodeKind::s2: return AffineInS2{1.0};
        case NodeKind::sin:
        case NodeKind::cos:
        case NodeKind::ind: return AffineInS2{0.0};
        case NodeKind::neg: {
            auto a = affine_in_s2(e.arg(0));
            if (!a) return std::nullopt;
            return AffineInS2{-a->slope};
        }
        case NodeKind::add:
        case NodeKind::sub: {
            auto a = affine_in_s2(e.arg(0));
            auto b = affine_in_s2(e.arg(1));
            if (!a || !b) return std::nullopt;
            return AffineInS2{e.kind() == NodeKind::add ? a->slope + b->slope : a->slope - b->slope};
        }
        case NodeKind::mul: {
            // Only constant * affine keeps the form.
            for (int side = 0; side < 2; ++side) {
                const Expr& c = e.arg(side);
                if (c.kind() != NodeKind::number) continue;
                auto a = affine_in_s2(e.arg(1 - side));
                if (!a) return std::nullopt;
                return AffineInS2{c.value() * a->slope};
            }
            auto a = affine_in_s2(e.arg(0));
            auto b = affine_in_s2(e.arg(1));
            if (a && b && a->slope == 0.0 && b->slope == 0.0) return AffineInS2{0.0};
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

}  // namespace detail

inline Growth classify_growth(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::number: return Growth::bounded;
        case NodeKind::s:
        case NodeKind::s2:
        case NodeKind::re:
        case NodeKind::im: return Growth::polynomial;
        case NodeKind::sin:
        case NodeKind::cos: return Growth::bounded;
        case NodeKind::ind: return std::isfinite(e.hi()) ? Growth::decaying : Growth::bounded;
        case NodeKind::exp: {
            const Growth inner = classify_growth(e.arg(0));
            if (inner <= Growth::bounded) return Growth::bounded;
            auto aff = detail::affine_in_s2(e.arg(0));
            if (!aff) return Growth::exponential;
            if (aff->slope < 0.0) return Growth::decaying;
            if (aff->slope == 0.0) return Growth::bounded;
            return Growth::exponential;
        }
        case NodeKind::neg: return classify_growth(e.arg(0));
        case NodeKind::add:
        case NodeKind::sub: return std::max(classify_growth(e.arg(0)), classify_growth(e.arg(1)));
        case NodeKind::mul: {
            const Growth a = classify_growth(e.arg(0));
            const Growth b = classify_growth(e.arg(1));
            if (a == Growth::exponential || b == Growth::exponential) return Growth::exponential;
            if (a == Growth::decaying || b == Growth::decaying) return Growth::decaying;
            return std::max(a, b);
        }
    }
    return Growth::exponential;
}

inline bool is_bounded(const Expr& e) { return classify_growth(e) <= Growth::bounded; }
inline bool is_integrable(const Expr& e) { return classify_growth(e) == Growth::decaying; }

// --- printing -------------------------------------------------------------

inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline int precedence(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::add:
        case NodeKind::sub: return 1;
        case NodeKind::mul: return 2;
        default: return 3;
    }
}

inline std::string print(const Expr& e);

inline std::string print_at(const Expr& e, int min_prec) {
    std::string s = print(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

inline std::string print(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::number: return format_number(e.value());
        case NodeKind::s: return "s";
        case NodeKind::s2: return "s^2";
        case NodeKind::re: return "re";
        case NodeKind::im: return "im";
        case NodeKind::exp: return "exp(" + print(e.arg(0)) + ")";
        case NodeKind::sin: return "sin(" + print(e.arg(0)) + ")";
        case NodeKind::cos: return "cos(" + print(e.arg(0)) + ")";
        case NodeKind::ind: return "ind(" + format_number(e.lo()) + ", " + format_number(e.hi()) + ")";
        case NodeKind::add: return print_at(e.arg(0), 1) + " + " + print_at(e.arg(1), 2);
        case NodeKind::sub: return print_at(e.arg(0), 1) + " - " + print_at(e.arg(1), 2);
        case NodeKind::mul: return print_at(e.arg(0), 2) + " * " + print_at(e.arg(1), 3);
        case NodeKind::neg: {
            // A bare number would re-parse as a negative literal, so wrap it.
            if (e.arg(0).kind() == NodeKind::number) return "-(" + print(e.arg(0)) + ")";
            return "-" + print_at(e.arg(0), 3);
        }
    }
    return {};
}

}  // namespace detail

inline std::string to_string(const Expr& e) { return detail::print(e); }

// --- parsing --------------------------------------------------------------
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := number | 's' | 's^2' | 're' | 'im'
//           | 'exp(' expr ')' | 'sin(' expr ')' | 'cos(' expr ')'
//           | 'ind(' number ',' number ')' | '(' expr ')' | '-' factor

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool accept_word(std::string_view w) {
        skip_ws();
        if (text_.substr(pos_, w.size()) != w) return false;
        const std::size_t end = pos_ + w.size();
        if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
            return false;
        pos_ = end;
        return true;
    }

    bool at_number() {
        skip_ws();
        return pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
    }

    double parse_number_literal() {
        skip_ws();
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double v = 0.0;
        auto res = std::from_chars(begin, end, v);
        if (res.ec != std::errc() || res.ptr == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        return v;
    }

    double parse_signed_number() {
        const bool negative = accept('-');
        if (!at_number()) fail("expected a number");
        const double v = parse_number_literal();
        return negative ? -v : v;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = lhs + parse_term();
            else if (accept('-'))
                lhs = lhs - parse_term();
            else
                return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        while (accept('*')) lhs = lhs * parse_factor();
        return lhs;
    }

    Expr parse_call(NodeKind k) {
        expect('(');
        Expr inner = parse_expr();
        expect(')');
        return Expr::unary(k, std::move(inner));
    }

    Expr parse_factor() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (accept('-')) {
            if (at_number()) return Expr::number(-parse_number_literal());
            return -parse_factor();
        }
        if (at_number()) return Expr::number(parse_number_literal());
        if (accept('(')) {
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (accept_word("exp")) return parse_call(NodeKind::exp);
        if (accept_word("sin")) return parse_call(NodeKind::sin);
        if (accept_word("cos")) return parse_call(NodeKind::cos);
        if (accept_word("ind")) {
            expect('(');
            const double lo = parse_signed_number();
            expect(',');
            const double hi = parse_signed_number();
            expect(')');
            if (!(lo <= hi)) fail("ind(a, b) needs a <= b");
            return Expr::ind(lo, hi);
        }
        if (accept_word("re")) return Expr::re();
        if (accept_word("im")) return Expr::im();
        if (accept_word("s")) {
            if (accept('^')) {
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == '2') {
                    ++pos_;
                    return Expr::s2();
                }
                fail("only s^2 is supported");
            }
            return Expr::s();
        }
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
};

}  // namespace detail

/// Parse without the boundedness check.
inline Expr parse_expression(std::string_view text) { return detail::Parser(text).parse(); }

/// Parse a symbol and apply the structural boundedness check. Polynomially
/// growing symbols are accepted only with allow_unbounded.
inline Expr parse_symbol(std::string_view text, bool allow_unbounded = false) {
    Expr e = parse_expression(text);
    const Growth g = classify_growth(e);
    if (g == Growth::exponential || (g == Growth::polynomial && !allow_unbounded)) {
        // Report the smallest subtree that grows as fast as the whole.
        Expr culprit = e;
        for (bool descended = true; descended;) {
            descended = false;
            for (std::size_t i = 0; i < culprit.arity(); ++i) {
                if (classify_growth(culprit.arg(i)) == g) {
                    culprit = culprit.arg(i);
                    descended = true;
                    break;
                }
            }
        }
        throw UnboundedSymbol("symbol is not structurally bounded; offending subtree: " + to_string(culprit));
    }
    return e;
}

// --- symbolic differentiation -----------------------------------------------

namespace detail {

inline Expr add(Expr a, Expr b) {
    if (a.is_number(0.0)) return b;
    if (b.is_number(0.0)) return a;
    if (a.kind() == NodeKind::number && b.kind() == NodeKind::number) return Expr::number(a.value() + b.value());
    return a + b;
}

inline Expr sub(Expr a, Expr b) {
    if (b.is_number(0.0)) return a;
    if (a.kind() == NodeKind::number && b.kind() == NodeKind::number) return Expr::number(a.value() - b.value());
    if (a.is_number(0.0)) return b.kind() == NodeKind::number ? Expr::number(-b.value()) : -b;
    return a - b;
}

inline Expr mul(Expr a, Expr b) {
    if (a.is_number(0.0) || b.is_number(0.0)) return Expr::number(0.0);
    if (a.is_number(1.0)) return b;
    if (b.is_number(1.0)) return a;
    if (a.kind() == NodeKind::number && b.kind() == NodeKind::number) return Expr::number(a.value() * b.value());
    return a * b;
}

inline Expr neg(Expr a) {
    if (a.kind() == NodeKind::number) return Expr::number(-a.value());
    return -a;
}

enum class Variable { s2, x, y };

inline Expr derivative(const Expr& e, Variable v) {
    switch (e.kind()) {
        case NodeKind::number: return Expr::number(0.0);
        case NodeKind::s2:
            if (v == Variable::s2) return Expr::number(1.0);
            return mul(Expr::number(2.0), v == Variable::x ? Expr::re() : Expr::im());
        case NodeKind::re:
            if (v == Variable::s2) throw NotDifferentiable("re(z) is not a function of s^2");
            return Expr::number(v == Variable::x ? 1.0 : 0.0);
        case NodeKind::im:
            if (v == Variable::s2) throw NotDifferentiable("im(z) is not a function of s^2");
            return Expr::number(v == Variable::y ? 1.0 : 0.0);
        case NodeKind::s: throw NotDifferentiable("s = |z| is not smooth at the origin");
        case NodeKind::ind: throw NotDifferentiable("indicator symbols have no classical Laplacian");
        case NodeKind::exp: return mul(e, derivative(e.arg(0), v));
        case NodeKind::sin: return mul(cos(e.arg(0)), derivative(e.arg(0), v));
        case NodeKind::cos: return neg(mul(sin(e.arg(0)), derivative(e.arg(0), v)));
        case NodeKind::add: return add(derivative(e.arg(0), v), derivative(e.arg(1), v));
        case NodeKind::sub: return sub(derivative(e.arg(0), v), derivative(e.arg(1), v));
        case NodeKind::mul:
            return add(mul(derivative(e.arg(0), v), e.arg(1)), mul(e.arg(0), derivative(e.arg(1), v)));
        case NodeKind::neg: return neg(derivative(e.arg(0), v));
    }
    return Expr::number(0.0);
}

}  // namespace detail

/// Symbolic Laplacian in the convention Delta = d dbar = (1/4)(d_xx + d_yy).
/// Radial symbols are differentiated in u = s^2, where Delta g(u) = g' + u g'',
/// so the result stays radial.
inline Expr symbolic_laplacian(const Expr& e) {
    using detail::Variable;
    if (is_radial(e)) {
        const Expr d1 = detail::derivative(e, Variable::s2);
        const Expr d2 = detail::derivative(d1, Variable::s2);
        return detail::add(d1, detail::mul(Expr::s2(), d2));
    }
    const Expr dxx = detail::derivative(detail::derivative(e, Variable::x), Variable::x);
    const Expr dyy = detail::derivative(detail::derivative(e, Variable::y), Variable::y);
    return detail::mul(Expr::number(0.25), detail::add(dxx, dyy));
}

/// A symbol a(z - shift): the expression translated by `shift`.
struct SymbolFunction {
    Expr expr;
    std::complex<double> shift{};

    double operator()(std::complex<double> z) const { return evaluate(expr, z - shift); }
    bool radial_about_origin() const { return shift == 0.0 && is_radial(expr); }
};

}  // namespace qha
