#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace minerr {

enum class NodeKind { Literal, VarT, VarY, VarU, Neg, Add, Sub, Mul, Div, Pow, Fn1, Fn2 };

enum class Fn { Sin, Cos, Exp, Abs, Min, Max };

struct Expr::Node {
    NodeKind kind;
    double literal = 0.0;
    std::size_t index = 0;  // 0-based y/u index
    Fn fn = Fn::Sin;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Node n) { return std::make_shared<const Expr::Node>(std::move(n)); }

double checked(double v) {
    if (!std::isfinite(v)) throw EvalError("expression evaluated to a non-finite value");
    return v;
}

double eval_node(const Expr::Node& n, const EvalContext& ctx) {
    switch (n.kind) {
        case NodeKind::Literal: return n.literal;
        case NodeKind::VarT: return ctx.t;
        case NodeKind::VarY:
            if (!ctx.y || n.index >= ctx.y->dim()) throw EvalError("y variable out of context");
            return (*ctx.y)[n.index];
        case NodeKind::VarU:
            if (!ctx.u || n.index >= ctx.u->dim()) throw EvalError("u variable out of context");
            return (*ctx.u)[n.index];
        case NodeKind::Neg: return -eval_node(*n.a, ctx);
        case NodeKind::Add: return checked(eval_node(*n.a, ctx) + eval_node(*n.b, ctx));
        case NodeKind::Sub: return checked(eval_node(*n.a, ctx) - eval_node(*n.b, ctx));
        case NodeKind::Mul: return checked(eval_node(*n.a, ctx) * eval_node(*n.b, ctx));
        case NodeKind::Div: {
            const double den = eval_node(*n.b, ctx);
            if (den == 0.0) throw EvalError("division by zero");
            return checked(eval_node(*n.a, ctx) / den);
        }
        case NodeKind::Pow: {
            const double base = eval_node(*n.a, ctx);
            const double ex = eval_node(*n.b, ctx);
            // integer fast path keeps small powers like y2^3 exact-ish
            if (ex == std::floor(ex) && std::abs(ex) <= 16.0) {
                double r = 1.0;
                for (int i = 0; i < static_cast<int>(std::abs(ex)); ++i) r *= base;
                if (ex < 0.0) {
                    if (r == 0.0) throw EvalError("division by zero in power");
                    r = 1.0 / r;
                }
                return checked(r);
            }
            return checked(std::pow(base, ex));
        }
        case NodeKind::Fn1: {
            const double a = eval_node(*n.a, ctx);
            switch (n.fn) {
                case Fn::Sin: return checked(std::sin(a));
                case Fn::Cos: return checked(std::cos(a));
                case Fn::Exp: return checked(std::exp(a));
                case Fn::Abs: return checked(std::abs(a));
                default: throw EvalError("bad unary function");
            }
        }
        case NodeKind::Fn2: {
            const double a = eval_node(*n.a, ctx);
            const double b = eval_node(*n.b, ctx);
            return n.fn == Fn::Min ? std::fmin(a, b) : std::fmax(a, b);
        }
    }
    throw EvalError("corrupt expression node");
}

void print_node(const Expr::Node& n, std::ostream& os) {
    switch (n.kind) {
        case NodeKind::Literal: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << n.literal;
            os << tmp.str();
            break;
        }
        case NodeKind::VarT: os << "t"; break;
        case NodeKind::VarY: os << "y" << (n.index + 1); break;
        case NodeKind::VarU: os << "u" << (n.index + 1); break;
        case NodeKind::Neg:
            os << "(-";
            print_node(*n.a, os);
            os << ")";
            break;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Pow: {
            const char* op = n.kind == NodeKind::Add   ? "+"
                             : n.kind == NodeKind::Sub ? "-"
                             : n.kind == NodeKind::Mul ? "*"
                             : n.kind == NodeKind::Div ? "/"
                                                       : "^";
            os << "(";
            print_node(*n.a, os);
            os << op;
            print_node(*n.b, os);
            os << ")";
            break;
        }
        case NodeKind::Fn1:
        case NodeKind::Fn2: {
            const char* name = n.fn == Fn::Sin   ? "sin"
                               : n.fn == Fn::Cos ? "cos"
                               : n.fn == Fn::Exp ? "exp"
                               : n.fn == Fn::Abs ? "abs"
                               : n.fn == Fn::Min ? "min"
                                                 : "max";
            os << name << "(";
            print_node(*n.a, os);
            if (n.b) {
                os << ",";
                print_node(*n.b, os);
            }
            os << ")";
            break;
        }
    }
}

class Parser {
public:
    Parser(const std::string& src, std::size_t p, std::size_t q) : src_(src), p_(p), q_(q) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError(pos_, "unexpected trailing input");
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(pos_, std::string("expected ") + what);
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (accept('+')) {
                lhs = make({.kind = NodeKind::Add, .a = lhs, .b = term()});
            } else if (accept('-')) {
                lhs = make({.kind = NodeKind::Sub, .a = lhs, .b = term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (true) {
            if (accept('*')) {
                lhs = make({.kind = NodeKind::Mul, .a = lhs, .b = unary()});
            } else if (accept('/')) {
                lhs = make({.kind = NodeKind::Div, .a = lhs, .b = unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make({.kind = NodeKind::Neg, .a = unary()});
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) {
            // exponent may carry its own leading minus, as in 2^-3
            return make({.kind = NodeKind::Pow, .a = base, .b = unary()});
        }
        return base;
    }

    NodePtr primary() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(pos_, "expected a number, variable, function, or '('");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        const char* begin = src_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || !std::isfinite(v)) throw ParseError(start, "malformed number");
        // reject strtod's hex/inf/nan extensions
        for (const char* s = begin; s != end; ++s) {
            const char ch = *s;
            if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == 'e' ||
                  ch == 'E' || ch == '+' || ch == '-')) {
                throw ParseError(start, "malformed number");
            }
        }
        pos_ += static_cast<std::size_t>(end - begin);
        return make({.kind = NodeKind::Literal, .literal = v});
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        std::string name;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            name += src_[pos_++];
        }
        if (name == "t") return make({.kind = NodeKind::VarT});
        if ((name[0] == 'y' || name[0] == 'u') && name.size() > 1) {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i) {
                digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
            }
            if (digits) {
                const std::size_t idx = std::strtoul(name.c_str() + 1, nullptr, 10);
                const std::size_t bound = name[0] == 'y' ? p_ : q_;
                if (idx == 0 || idx > bound) {
                    throw ParseError(start, "variable " + name + " outside declared dims");
                }
                return make({.kind = name[0] == 'y' ? NodeKind::VarY : NodeKind::VarU,
                             .index = idx - 1});
            }
        }
        Fn fn;
        bool binary = false;
        if (name == "sin") fn = Fn::Sin;
        else if (name == "cos") fn = Fn::Cos;
        else if (name == "exp") fn = Fn::Exp;
        else if (name == "abs") fn = Fn::Abs;
        else if (name == "min") { fn = Fn::Min; binary = true; }
        else if (name == "max") { fn = Fn::Max; binary = true; }
        else throw ParseError(start, "unknown identifier '" + name + "'");

        expect('(', "'(' after function name");
        NodePtr a = expr();
        NodePtr b;
        if (binary) {
            expect(',', "',' between function arguments");
            b = expr();
        }
        expect(')', "')'");
        return make({.kind = binary ? NodeKind::Fn2 : NodeKind::Fn1, .fn = fn, .a = a, .b = b});
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    std::size_t p_;
    std::size_t q_;
};

}  // namespace

double Expr::eval(const EvalContext& ctx) const { return checked(eval_node(*root_, ctx)); }

std::string Expr::print() const {
    std::ostringstream os;
    print_node(*root_, os);
    return os.str();
}

Expr parse_expr(const std::string& src, std::size_t p, std::size_t q) {
    return Expr(Parser(src, p, q).parse());
}

}  // namespace minerr
