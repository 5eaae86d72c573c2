#include "geoweb/expr.hpp"

#include "geoweb/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace geoweb {

namespace {

ExprPtr make(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

struct FunctionName {
    const char* name;
    UnaryFn fn;
};

constexpr FunctionName kFunctions[] = {
    {"exp", UnaryFn::exp}, {"log", UnaryFn::log}, {"sin", UnaryFn::sin},
    {"cos", UnaryFn::cos}, {"sqrt", UnaryFn::sqrt}, {"atan", UnaryFn::atan},
};

class Parser {
public:
    Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

    ExprPtr parse()
    {
        skip_space();
        if (pos_ == src_.size()) throw SyntaxError("empty expression", pos_);
        ExprPtr e = sum();
        skip_space();
        if (pos_ != src_.size()) throw SyntaxError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_space()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek()
    {
        skip_space();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr sum()
    {
        ExprPtr lhs = product();
        for (;;) {
            if (accept('+')) lhs = make({Binary{BinaryOp::add, lhs, product()}});
            else if (accept('-')) lhs = make({Binary{BinaryOp::sub, lhs, product()}});
            else return lhs;
        }
    }

    ExprPtr product()
    {
        ExprPtr lhs = signed_term();
        for (;;) {
            if (accept('*')) lhs = make({Binary{BinaryOp::mul, lhs, signed_term()}});
            else if (accept('/')) lhs = make({Binary{BinaryOp::div, lhs, signed_term()}});
            else return lhs;
        }
    }

    ExprPtr signed_term()
    {
        if (accept('-')) return make({Unary{UnaryFn::neg, signed_term()}});
        if (accept('+')) return signed_term();
        return power();
    }

    ExprPtr power()
    {
        ExprPtr base = primary();
        if (accept('^')) return make({Binary{BinaryOp::pow, base, signed_term()}});
        return base;
    }

    ExprPtr primary()
    {
        const char c = peek();
        const std::size_t start = pos_;
        if (c == '(') {
            ++pos_;
            ExprPtr inner = sum();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            return identifier(src_.substr(start, pos_ - start), start);
        }
        if (c == '\0') throw SyntaxError("unexpected end of expression", pos_);
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    ExprPtr number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) throw SyntaxError("malformed number", start);
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) throw SyntaxError("malformed exponent", start);
        }
        const std::string text(src_.substr(start, pos_ - start));
        const double value = std::strtod(text.c_str(), nullptr);
        if (!std::isfinite(value)) throw SyntaxError("literal out of range", start);
        return make({Constant{value}});
    }

    ExprPtr identifier(std::string_view name, std::size_t start)
    {
        if (name.size() >= 2 && name[0] == 'x' &&
            name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
            const long k = std::strtol(std::string(name.substr(1)).c_str(), nullptr, 10);
            if (k < 1 || k > dim_)
                throw VariableOutOfRange("variable " + std::string(name) + " outside x1..x" + std::to_string(dim_), start);
            return make({Variable{static_cast<int>(k - 1)}});
        }
        for (const auto& f : kFunctions) {
            if (name != f.name) continue;
            if (!accept('(')) throw SyntaxError("expected '(' after " + std::string(name), pos_);
            if (peek() == ')') throw ArityError(std::string(name) + " takes exactly one argument", pos_);
            ExprPtr arg = sum();
            if (peek() == ',') throw ArityError(std::string(name) + " takes exactly one argument", pos_);
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return make({Unary{f.fn, arg}});
        }
        throw UnknownIdentifier("unknown identifier '" + std::string(name) + "'", start);
    }

    std::string_view src_;
    int dim_;
    std::size_t pos_ = 0;
};

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* fn_name(UnaryFn fn)
{
    switch (fn) {
    case UnaryFn::neg: return "-";
    case UnaryFn::exp: return "exp";
    case UnaryFn::log: return "log";
    case UnaryFn::sin: return "sin";
    case UnaryFn::cos: return "cos";
    case UnaryFn::sqrt: return "sqrt";
    case UnaryFn::atan: return "atan";
    }
    return "?";
}

const char* op_symbol(BinaryOp op)
{
    switch (op) {
    case BinaryOp::add: return " + ";
    case BinaryOp::sub: return " - ";
    case BinaryOp::mul: return " * ";
    case BinaryOp::div: return " / ";
    case BinaryOp::pow: return " ^ ";
    }
    return "?";
}

const char* op_name(BinaryOp op)
{
    switch (op) {
    case BinaryOp::add: return "Add";
    case BinaryOp::sub: return "Sub";
    case BinaryOp::mul: return "Mul";
    case BinaryOp::div: return "Div";
    case BinaryOp::pow: return "Pow";
    }
    return "?";
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string print(const ExprNode& n)
{
    return std::visit(Overloaded{
                          [](const Constant& c) {
                              return c.value < 0 ? "-(" + format_number(-c.value) + ")" : format_number(c.value);
                          },
                          [](const Variable& v) { return "x" + std::to_string(v.index + 1); },
                          [](const Unary& u) { return std::string(fn_name(u.fn)) + "(" + print(*u.arg) + ")"; },
                          [](const Binary& b) { return "(" + print(*b.lhs) + op_symbol(b.op) + print(*b.rhs) + ")"; },
                      },
                      n.node);
}

std::string describe_node(const ExprNode& n)
{
    return std::visit(Overloaded{
                          [](const Constant& c) { return format_number(c.value); },
                          [](const Variable& v) { return "x" + std::to_string(v.index + 1); },
                          [](const Unary& u) {
                              std::string name = u.fn == UnaryFn::neg ? "Neg" : fn_name(u.fn);
                              name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
                              return name + "(" + describe_node(*u.arg) + ")";
                          },
                          [](const Binary& b) {
                              return std::string(op_name(b.op)) + "(" + describe_node(*b.lhs) + ", " + describe_node(*b.rhs) + ")";
                          },
                      },
                      n.node);
}

Jet eval_node(const ExprNode& n, std::span<const double> point, int order)
{
    const int dim = static_cast<int>(point.size());
    return std::visit(Overloaded{
                          [&](const Constant& c) { return Jet::constant(dim, order, c.value); },
                          [&](const Variable& v) {
                              return Jet::variable(dim, order, v.index, point[static_cast<std::size_t>(v.index)]);
                          },
                          [&](const Unary& u) {
                              Jet a = eval_node(*u.arg, point, order);
                              switch (u.fn) {
                              case UnaryFn::neg: return -a;
                              case UnaryFn::exp: return exp(a);
                              case UnaryFn::log: return log(a);
                              case UnaryFn::sin: return sin(a);
                              case UnaryFn::cos: return cos(a);
                              case UnaryFn::sqrt: return sqrt(a);
                              case UnaryFn::atan: return atan(a);
                              }
                              return a;
                          },
                          [&](const Binary& b) {
                              Jet l = eval_node(*b.lhs, point, order);
                              Jet r = eval_node(*b.rhs, point, order);
                              switch (b.op) {
                              case BinaryOp::add: return l + r;
                              case BinaryOp::sub: return l - r;
                              case BinaryOp::mul: return l * r;
                              case BinaryOp::div: return l / r;
                              case BinaryOp::pow: return pow(l, r);
                              }
                              return l;
                          },
                      },
                      n.node);
}

} // namespace

std::string Expression::to_string() const { return print(*root_); }

std::string Expression::describe() const { return describe_node(*root_); }

Expression parse_expression(std::string_view source, int dim)
{
    Parser parser(source, dim);
    return Expression(parser.parse(), dim, std::string(source));
}

Jet eval_field(const Expression& expr, std::span<const double> point, int order)
{
    if (static_cast<int>(point.size()) != expr.dim())
        throw MixedContext("point has " + std::to_string(point.size()) + " coordinates, expression expects " +
                           std::to_string(expr.dim()));
    return eval_node(expr.root(), point, order);
}

} // namespace geoweb
