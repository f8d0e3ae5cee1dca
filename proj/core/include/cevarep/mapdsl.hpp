#pragma once

// A small language for componentwise map definitions:
//
//   n=2 m=2 region=[-1,1]x[-1,1]
//   f1 := (2*x1 + 1) / (x1 + 2)
//   f2 := x2 / (x1 + 2)
//
// Grammar (whitespace-insensitive):
//   spec   := header* comp+
//   header := "n" "=" INT | "m" "=" INT | "region" "=" interval ("x" interval)*
//   comp   := "f" INT ":=" expr
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := "-"? atom ("^" "-"? INT)?
//   atom   := NUMBER | "x" INT | IDENT "(" expr ")" | "(" expr ")"
// Headers are optional: n defaults to the largest variable index, m to the
// number of components and the region to [-1,1]^n.

#include "cevarep/oracle.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cevarep {

/// Maximum tree height, and maximum bracket nesting, accepted by the parser.
inline constexpr int kMaxExprDepth = 256;

struct Expr {
    enum class Kind { constant, variable, add, sub, mul, div, neg, pow, call };

    Kind kind = Kind::constant;
    double value = 0.0;  // constant
    int index = 0;       // variable: 1-based input index; pow: integer exponent
    std::string name;    // call: exp, log, sqrt or abs
    std::vector<Expr> args;

    bool operator==(const Expr&) const = default;
};

struct MapSpec {
    Eigen::Index in_dim = 0;
    Eigen::Index out_dim = 0;
    std::vector<Expr> components;
    Box region;
};

/// Throws ParseError (SyntaxError, UnknownIdentifier or ArityError) with the
/// offending line and column.
MapSpec parse_map_spec(std::string_view src);

/// Single expression, variables unrestricted.
Expr parse_expr(std::string_view src);

/// Text that parses back to a structurally identical tree.
std::string to_source(const Expr& e);
std::string to_source(const MapSpec& spec);

/// Evaluates an expression. Division by |d| <= 1e-300, log or sqrt of a
/// non-positive argument and non-finite results throw OutOfDomain.
double evaluate(const Expr& e, const Vec& x);

/// Oracle over spec.region; in_domain reports whether evaluation succeeds.
Oracle compile(const MapSpec& spec);

}  // namespace cevarep
