#pragma once

// Expressions of one complex variable: parsing, evaluation and exact
// symbolic differentiation.
//
// Grammar (usual precedence, `^` binds tighter than unary minus):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' int)?          int may be signed or parenthesised
//   atom   := number | number 'i' | 'i' | 'pi' | var
//           | ('exp' | 'log') '(' expr ')' | '(' expr ')'

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "frontlab/errors.hpp"

namespace frontlab::holo {

using Complex = std::complex<double>;

/// Denominators at or below this magnitude raise PoleSignal.
inline constexpr double kPoleTolerance = 1e-14;

enum class Op { Var, Const, Add, Sub, Mul, Div, Neg, Pow, Exp, Log };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::Const;
    Complex value{};   // Const
    int exponent = 0;  // Pow
    NodePtr lhs;       // unary operand or left operand
    NodePtr rhs;
    std::ptrdiff_t offset = -1;  // byte offset in source, -1 if synthesized
};

/// Immutable expression handle. Copies share the tree and the derivative
/// cache, so repeated differentiation of the same expression is free.
class MeroExpr {
public:
    MeroExpr();  // the constant 0
    explicit MeroExpr(NodePtr root);

    static MeroExpr constant(Complex c);
    static MeroExpr variable();

    const NodePtr& root() const noexcept { return root_; }

    /// Value at z. Throws PoleSignal on division by zero, negative powers of
    /// zero, or log(0).
    Complex operator()(Complex z) const;

    /// Cached exact derivative d/dz.
    const MeroExpr& derivative() const;

    /// True when the tree is a literal (after folding).
    bool is_constant() const noexcept;

    std::string to_string() const;

private:
    struct Cache;
    NodePtr root_;
    std::shared_ptr<Cache> cache_;
};

MeroExpr operator+(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator-(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator*(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator/(const MeroExpr& a, const MeroExpr& b);
MeroExpr operator-(const MeroExpr& a);
MeroExpr pow(const MeroExpr& a, int n);
MeroExpr exp(const MeroExpr& a);
MeroExpr log(const MeroExpr& a);

/// Parses `src` in the variable `var` (default "z").
/// Throws ParseError carrying the byte offset of the failure.
MeroExpr parse_expr(std::string_view src, std::string_view var = "z");

inline Complex eval(const MeroExpr& e, Complex z) { return e(z); }

inline MeroExpr differentiate(const MeroExpr& e) { return e.derivative(); }

/// Schwarzian derivative {e : z} = e'''/e' - (3/2)(e''/e')^2.
MeroExpr schwarzian(const MeroExpr& e);

/// df/dg, realised as f_z / g_z.
MeroExpr deriv_wrt(const MeroExpr& f, const MeroExpr& g);

}  // namespace frontlab::holo
