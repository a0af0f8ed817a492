#include "frontlab/holo.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>

namespace frontlab::holo {

namespace {

NodePtr make_const(Complex c) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = c;
    return n;
}

NodePtr make_var(std::ptrdiff_t offset = -1) {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->offset = offset;
    return n;
}

bool is_const(const NodePtr& n) { return n->op == Op::Const; }
bool is_value(const NodePtr& n, Complex c) { return is_const(n) && n->value == c; }

Complex int_pow(Complex base, int n) {
    Complex result{1.0, 0.0};
    unsigned k = static_cast<unsigned>(n < 0 ? -static_cast<long>(n) : n);
    while (k) {
        if (k & 1U) result *= base;
        base *= base;
        k >>= 1U;
    }
    return n < 0 ? Complex{1.0, 0.0} / result : result;
}

// Smart constructors fold constants and trivial identities so that derived
// expressions stay readable ("3*z^2" rather than "3*z^2*1 + 0").
NodePtr node(Op op, NodePtr lhs, NodePtr rhs = nullptr, int exponent = 0,
             std::ptrdiff_t offset = -1) {
    switch (op) {
        case Op::Add:
            if (is_const(lhs) && is_const(rhs)) return make_const(lhs->value + rhs->value);
            if (is_value(lhs, 0.0)) return rhs;
            if (is_value(rhs, 0.0)) return lhs;
            break;
        case Op::Sub:
            if (is_const(lhs) && is_const(rhs)) return make_const(lhs->value - rhs->value);
            if (is_value(rhs, 0.0)) return lhs;
            if (is_value(lhs, 0.0)) return node(Op::Neg, rhs);
            break;
        case Op::Mul:
            if (is_const(lhs) && is_const(rhs)) return make_const(lhs->value * rhs->value);
            if (is_value(lhs, 0.0) || is_value(rhs, 0.0)) return make_const(0.0);
            if (is_value(lhs, 1.0)) return rhs;
            if (is_value(rhs, 1.0)) return lhs;
            if (is_const(rhs) && !is_const(lhs)) std::swap(lhs, rhs);
            break;
        case Op::Div:
            if (is_value(rhs, 1.0)) return lhs;
            if (is_value(lhs, 0.0) && !is_value(rhs, 0.0)) return make_const(0.0);
            if (is_const(lhs) && is_const(rhs) && std::abs(rhs->value) > kPoleTolerance)
                return make_const(lhs->value / rhs->value);
            break;
        case Op::Neg:
            if (is_const(lhs)) return make_const(-lhs->value);
            if (lhs->op == Op::Neg) return lhs->lhs;
            break;
        case Op::Pow:
            if (exponent == 0) return make_const(1.0);
            if (exponent == 1) return lhs;
            if (is_const(lhs) && (exponent > 0 || std::abs(lhs->value) > kPoleTolerance))
                return make_const(int_pow(lhs->value, exponent));
            break;
        case Op::Exp:
            if (is_const(lhs)) return make_const(std::exp(lhs->value));
            break;
        case Op::Log:
            if (is_const(lhs) && std::abs(lhs->value) > kPoleTolerance)
                return make_const(std::log(lhs->value));
            break;
        default:
            break;
    }
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->exponent = exponent;
    n->offset = offset;
    return n;
}

NodePtr derive(const NodePtr& n) {
    switch (n->op) {
        case Op::Var:
            return make_const(1.0);
        case Op::Const:
            return make_const(0.0);
        case Op::Add:
            return node(Op::Add, derive(n->lhs), derive(n->rhs));
        case Op::Sub:
            return node(Op::Sub, derive(n->lhs), derive(n->rhs));
        case Op::Mul:
            return node(Op::Add, node(Op::Mul, derive(n->lhs), n->rhs),
                        node(Op::Mul, n->lhs, derive(n->rhs)));
        case Op::Div: {
            auto num = node(Op::Sub, node(Op::Mul, derive(n->lhs), n->rhs),
                            node(Op::Mul, n->lhs, derive(n->rhs)));
            return node(Op::Div, num, node(Op::Pow, n->rhs, nullptr, 2));
        }
        case Op::Neg:
            return node(Op::Neg, derive(n->lhs));
        case Op::Pow: {
            auto outer = node(Op::Mul, make_const(static_cast<double>(n->exponent)),
                              node(Op::Pow, n->lhs, nullptr, n->exponent - 1));
            return node(Op::Mul, outer, derive(n->lhs));
        }
        case Op::Exp:
            return node(Op::Mul, n, derive(n->lhs));
        case Op::Log:
            return node(Op::Div, derive(n->lhs), n->lhs);
    }
    return make_const(0.0);
}

// ---------------------------------------------------------------- printing

std::string format_real(double x) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    (void)ec;
    return std::string(buf.data(), end);
}

int precedence(const NodePtr& n) {
    switch (n->op) {
        case Op::Add:
        case Op::Sub:
            return 1;
        case Op::Mul:
        case Op::Div:
            return 2;
        case Op::Neg:
            return 3;
        case Op::Pow:
            return 4;
        case Op::Const: {
            const Complex c = n->value;
            if (c.imag() == 0.0) return c.real() < 0 ? 3 : 5;
            if (c.real() == 0.0) return c.imag() == 1.0 ? 5 : 2;
            return 5;  // printed parenthesised
        }
        default:
            return 5;
    }
}

std::string print(const NodePtr& n);

std::string wrap(const NodePtr& child, int min_prec) {
    std::string s = print(child);
    return precedence(child) < min_prec ? "(" + s + ")" : s;
}

std::string print(const NodePtr& n) {
    switch (n->op) {
        case Op::Var:
            return "z";
        case Op::Const: {
            const Complex c = n->value;
            if (c.imag() == 0.0) return format_real(c.real());
            std::string im = c.imag() == 1.0    ? "i"
                             : c.imag() == -1.0 ? "-i"
                                                : format_real(c.imag()) + "*i";
            if (c.real() == 0.0) return im;
            std::string re = format_real(c.real());
            return "(" + re + (c.imag() < 0 ? "" : "+") + im + ")";
        }
        case Op::Add:
            return wrap(n->lhs, 1) + " + " + wrap(n->rhs, 2);
        case Op::Sub:
            return wrap(n->lhs, 1) + " - " + wrap(n->rhs, 2);
        case Op::Mul:
            return wrap(n->lhs, 2) + "*" + wrap(n->rhs, 3);
        case Op::Div:
            return wrap(n->lhs, 2) + "/" + wrap(n->rhs, 3);
        case Op::Neg:
            return "-" + wrap(n->lhs, 3);
        case Op::Pow: {
            std::string e = std::to_string(n->exponent);
            return wrap(n->lhs, 5) + "^" + (n->exponent < 0 ? "(" + e + ")" : e);
        }
        case Op::Exp:
            return "exp(" + print(n->lhs) + ")";
        case Op::Log:
            return "log(" + print(n->lhs) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------- evaluation

[[noreturn]] void pole(const NodePtr& n) {
    std::string where = "'" + print(n) + "'";
    if (n->offset >= 0) where += " (offset " + std::to_string(n->offset) + ")";
    throw PoleSignal(where);
}

Complex evaluate(const NodePtr& n, Complex z) {
    switch (n->op) {
        case Op::Var:
            return z;
        case Op::Const:
            return n->value;
        case Op::Add:
            return evaluate(n->lhs, z) + evaluate(n->rhs, z);
        case Op::Sub:
            return evaluate(n->lhs, z) - evaluate(n->rhs, z);
        case Op::Mul:
            return evaluate(n->lhs, z) * evaluate(n->rhs, z);
        case Op::Div: {
            const Complex den = evaluate(n->rhs, z);
            if (std::abs(den) <= kPoleTolerance) pole(n);
            return evaluate(n->lhs, z) / den;
        }
        case Op::Neg:
            return -evaluate(n->lhs, z);
        case Op::Pow: {
            const Complex base = evaluate(n->lhs, z);
            if (n->exponent < 0 && std::abs(base) <= kPoleTolerance) pole(n);
            return int_pow(base, n->exponent);
        }
        case Op::Exp:
            return std::exp(evaluate(n->lhs, z));
        case Op::Log: {
            const Complex arg = evaluate(n->lhs, z);
            if (std::abs(arg) <= kPoleTolerance) pole(n);
            return std::log(arg);
        }
    }
    return {};
}

// ---------------------------------------------------------------- parsing

class Parser {
public:
    Parser(std::string_view src, std::string_view var) : src_(src), var_(var) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip_ws();
            const auto at = static_cast<std::ptrdiff_t>(pos_);
            if (accept('+'))
                lhs = node(Op::Add, lhs, term(), 0, at);
            else if (accept('-'))
                lhs = node(Op::Sub, lhs, term(), 0, at);
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            skip_ws();
            const auto at = static_cast<std::ptrdiff_t>(pos_);
            if (accept('*'))
                lhs = node(Op::Mul, lhs, unary(), 0, at);
            else if (accept('/'))
                lhs = node(Op::Div, lhs, unary(), 0, at);
            else
                return lhs;
        }
    }

    NodePtr unary() {
        skip_ws();
        const auto at = static_cast<std::ptrdiff_t>(pos_);
        if (accept('-')) return node(Op::Neg, unary(), nullptr, 0, at);
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        skip_ws();
        const auto at = static_cast<std::ptrdiff_t>(pos_);
        if (!accept('^')) return base;
        const bool paren = accept('(');
        const bool negative = accept('-');
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (start == pos_) fail("integer exponent expected");
        int k = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, k);
        if (ec != std::errc{} || ptr != src_.data() + pos_) {
            pos_ = start;
            fail("exponent out of range");
        }
        if (paren) expect(')');
        return node(Op::Pow, base, nullptr, negative ? -k : k, at);
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        const auto at = static_cast<std::ptrdiff_t>(pos_);
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (accept('(')) {
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                          src_[pos_] == '_'))
                ++pos_;
            const std::string_view id = src_.substr(start, pos_ - start);
            if (id == var_) return make_var(at);
            if (id == "i") return make_const({0.0, 1.0});
            if (id == "pi") return make_const(std::numbers::pi);
            if (id == "exp" || id == "log") {
                expect('(');
                NodePtr arg = expr();
                expect(')');
                return node(id == "exp" ? Op::Exp : Op::Log, arg, nullptr, 0, at);
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(id) + "'");
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), x);
        if (ec != std::errc{}) fail("malformed number");
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        // "2i" is an imaginary literal when the 'i' is not the start of a longer identifier.
        if (pos_ < src_.size() && src_[pos_] == 'i' &&
            (pos_ + 1 == src_.size() || !std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])))) {
            ++pos_;
            return make_const({0.0, x});
        }
        (void)start;
        return make_const(x);
    }

    std::string_view src_;
    std::string_view var_;
    std::size_t pos_ = 0;
};

}  // namespace

struct MeroExpr::Cache {
    std::once_flag once;
    std::unique_ptr<MeroExpr> derivative;
};

MeroExpr::MeroExpr() : MeroExpr(make_const(0.0)) {}

MeroExpr::MeroExpr(NodePtr root) : root_(std::move(root)), cache_(std::make_shared<Cache>()) {}

MeroExpr MeroExpr::constant(Complex c) { return MeroExpr(make_const(c)); }

MeroExpr MeroExpr::variable() { return MeroExpr(make_var()); }

Complex MeroExpr::operator()(Complex z) const { return evaluate(root_, z); }

const MeroExpr& MeroExpr::derivative() const {
    std::call_once(cache_->once,
                   [this] { cache_->derivative = std::make_unique<MeroExpr>(derive(root_)); });
    return *cache_->derivative;
}

bool MeroExpr::is_constant() const noexcept { return root_->op == Op::Const; }

std::string MeroExpr::to_string() const { return print(root_); }

MeroExpr operator+(const MeroExpr& a, const MeroExpr& b) { return MeroExpr(node(Op::Add, a.root(), b.root())); }
MeroExpr operator-(const MeroExpr& a, const MeroExpr& b) { return MeroExpr(node(Op::Sub, a.root(), b.root())); }
MeroExpr operator*(const MeroExpr& a, const MeroExpr& b) { return MeroExpr(node(Op::Mul, a.root(), b.root())); }
MeroExpr operator/(const MeroExpr& a, const MeroExpr& b) { return MeroExpr(node(Op::Div, a.root(), b.root())); }
MeroExpr operator-(const MeroExpr& a) { return MeroExpr(node(Op::Neg, a.root())); }
MeroExpr pow(const MeroExpr& a, int n) { return MeroExpr(node(Op::Pow, a.root(), nullptr, n)); }
MeroExpr exp(const MeroExpr& a) { return MeroExpr(node(Op::Exp, a.root())); }
MeroExpr log(const MeroExpr& a) { return MeroExpr(node(Op::Log, a.root())); }

MeroExpr parse_expr(std::string_view src, std::string_view var) {
    return MeroExpr(Parser(src, var).parse());
}

MeroExpr schwarzian(const MeroExpr& e) {
    const MeroExpr& d1 = e.derivative();
    const MeroExpr& d2 = d1.derivative();
    const MeroExpr& d3 = d2.derivative();
    const MeroExpr ratio = d2 / d1;
    return d3 / d1 - MeroExpr::constant(1.5) * pow(ratio, 2);
}

MeroExpr deriv_wrt(const MeroExpr& f, const MeroExpr& g) {
    return f.derivative() / g.derivative();
}

}  // namespace frontlab::holo
