#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace minerr {

// Arithmetic expression language for scenario signals.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' unary)?          (right associative)
//   primary:= number | var | fn '(' args ')' | '(' expr ')'
//
// Variables are t, y1..yp, u1..uq (1-indexed). Functions: sin, cos,
// exp, abs, min, max. Unary minus binds looser than '^', so -2^2 = -4.

struct ParseError : std::runtime_error {
    ParseError(std::size_t offset, const std::string& msg)
        : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + msg),
          offset(offset) {}
    std::size_t offset;
};

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EvalContext {
    double t = 0.0;
    const Vector* y = nullptr;  // dim p, may be null when p = 0 uses
    const Vector* u = nullptr;  // dim q
};

class Expr {
public:
    double eval(const EvalContext& ctx) const;
    std::string print() const;

    struct Node;
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    const Node& root() const { return *root_; }

private:
    std::shared_ptr<const Node> root_;
};

// p and q bound the admissible y/u indices; out-of-range or unknown
// identifiers are parse errors.
Expr parse_expr(const std::string& src, std::size_t p, std::size_t q);

}  // namespace minerr
