#include "gfix/realdsl.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace gfix::realdsl {

bool structurally_equal(const Node& a, const Node& b)
{
    if (a.op != b.op || a.args.size() != b.args.size())
        return false;
    if (a.op == Op::Number && a.value != b.value)
        return false;
    if (a.op == Op::Pow && a.exponent != b.exponent)
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(*a.args[i], *b.args[i]))
            return false;
    return true;
}

namespace {

std::string_view op_name(Op op)
{
    switch (op) {
    case Op::Number: return "Num";
    case Op::Var: return "Var";
    case Op::Neg: return "Neg";
    case Op::Add: return "Add";
    case Op::Sub: return "Sub";
    case Op::Mul: return "Mul";
    case Op::Div: return "Div";
    case Op::Pow: return "Pow";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    case Op::Min: return "min";
    case Op::Max: return "max";
    }
    return "?";
}

std::string_view infix(Op op)
{
    switch (op) {
    case Op::Add: return " + ";
    case Op::Sub: return " - ";
    case Op::Mul: return " * ";
    case Op::Div: return " / ";
    default: return "";
    }
}

std::string number_text(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_source(const Node& n, std::string& out)
{
    switch (n.op) {
    case Op::Number: out += number_text(n.value); return;
    case Op::Var: out += 'x'; return;
    case Op::Neg:
        out += "-(";
        write_source(*n.args[0], out);
        out += ')';
        return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
        out += '(';
        write_source(*n.args[0], out);
        out += infix(n.op);
        write_source(*n.args[1], out);
        out += ')';
        return;
    case Op::Pow:
        out += '(';
        write_source(*n.args[0], out);
        out += ")^" + std::to_string(n.exponent);
        return;
    case Op::Abs:
    case Op::Sqrt:
    case Op::Min:
    case Op::Max:
        out += op_name(n.op);
        out += '(';
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i)
                out += ", ";
            write_source(*n.args[i], out);
        }
        out += ')';
        return;
    }
}

void write_tree(const Node& n, std::string& out)
{
    if (n.op == Op::Number) {
        out += number_text(n.value);
        return;
    }
    out += op_name(n.op);
    if (n.op == Op::Var)
        return;
    out += '(';
    for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i)
            out += ", ";
        write_tree(*n.args[i], out);
    }
    if (n.op == Op::Pow)
        out += ", " + std::to_string(n.exponent);
    out += ')';
}

double eval_node(const Node& n, double x)
{
    switch (n.op) {
    case Op::Number: return n.value;
    case Op::Var: return x;
    case Op::Neg: return -eval_node(*n.args[0], x);
    case Op::Add: return eval_node(*n.args[0], x) + eval_node(*n.args[1], x);
    case Op::Sub: return eval_node(*n.args[0], x) - eval_node(*n.args[1], x);
    case Op::Mul: return eval_node(*n.args[0], x) * eval_node(*n.args[1], x);
    case Op::Div: {
        const double num = eval_node(*n.args[0], x);
        const double den = eval_node(*n.args[1], x);
        if (den == 0.0) {
            std::string src;
            write_source(n, src);
            throw EvalError("division by zero at x = " + number_text(x), src);
        }
        return num / den;
    }
    case Op::Pow: {
        const double base = eval_node(*n.args[0], x);
        double result = 1.0;
        for (unsigned i = 0; i < n.exponent; ++i)
            result *= base;
        return result;
    }
    case Op::Abs: return std::fabs(eval_node(*n.args[0], x));
    case Op::Sqrt: {
        const double v = eval_node(*n.args[0], x);
        if (v < 0.0) {
            std::string src;
            write_source(n, src);
            throw EvalError("sqrt of negative value at x = " + number_text(x), src);
        }
        return std::sqrt(v);
    }
    case Op::Min: return std::fmin(eval_node(*n.args[0], x), eval_node(*n.args[1], x));
    case Op::Max: return std::fmax(eval_node(*n.args[0], x), eval_node(*n.args[1], x));
    }
    return 0.0;
}

NodePtr make(Op op, std::vector<NodePtr> args = {})
{
    return std::make_shared<const Node>(Node{op, 0.0, 0, std::move(args)});
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse()
    {
        NodePtr root = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'", {"+", "-", "*", "/", "^", "end of input"});
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const
    {
        throw ParseError(what + " at offset " + std::to_string(pos_), pos_, std::move(expected));
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n'))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, std::vector<std::string> expected)
    {
        if (!accept(c))
            fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end of input",
                 std::move(expected));
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        while (true) {
            if (accept('+'))
                lhs = make(Op::Add, {lhs, term()});
            else if (accept('-'))
                lhs = make(Op::Sub, {lhs, term()});
            else
                return lhs;
        }
    }

    NodePtr term()
    {
        NodePtr lhs = factor();
        while (true) {
            if (accept('*'))
                lhs = make(Op::Mul, {lhs, factor()});
            else if (accept('/'))
                lhs = make(Op::Div, {lhs, factor()});
            else
                return lhs;
        }
    }

    NodePtr factor()
    {
        if (accept('-'))
            return make(Op::Neg, {power()});
        return power();
    }

    NodePtr power()
    {
        NodePtr base = atom();
        if (!accept('^'))
            return base;
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
            ++pos_;
        if (start == pos_) {
            fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end of input",
                 {"nonnegative integer literal"});
        }
        unsigned exponent = 0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
        if (res.ec != std::errc{}) {
            pos_ = start;
            fail("exponent out of range", {"nonnegative integer literal"});
        }
        return std::make_shared<const Node>(Node{Op::Pow, 0.0, exponent, {base}});
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

    NodePtr atom()
    {
        skip_ws();
        static const std::vector<std::string> atom_start{"number", "x", "(", "abs", "sqrt", "min", "max"};
        if (pos_ == text_.size())
            fail("unexpected end of input", atom_start);
        const char c = text_[pos_];
        if (is_digit(c) || c == '.')
            return number();
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            expect(')', {")", "+", "-", "*", "/", "^"});
            return inner;
        }
        if (is_alpha(c)) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && (is_alpha(text_[pos_]) || is_digit(text_[pos_])))
                ++pos_;
            const std::string_view ident = text_.substr(start, pos_ - start);
            if (ident == "x")
                return make(Op::Var);
            Op op;
            std::size_t arity;
            if (ident == "abs") {
                op = Op::Abs;
                arity = 1;
            } else if (ident == "sqrt") {
                op = Op::Sqrt;
                arity = 1;
            } else if (ident == "min") {
                op = Op::Min;
                arity = 2;
            } else if (ident == "max") {
                op = Op::Max;
                arity = 2;
            } else {
                pos_ = start;
                fail("unknown identifier '" + std::string(ident) + "'", {"x", "abs", "sqrt", "min", "max"});
            }
            expect('(', {"("});
            std::vector<NodePtr> args{expr()};
            if (accept(','))
                args.push_back(expr());
            if (args.size() != arity) {
                pos_ = start;
                fail(std::string(ident) + " expects " + std::to_string(arity) + " argument(s), got " +
                         std::to_string(args.size()),
                     {arity == 1 ? ")" : ","});
            }
            expect(')', {")"});
            return make(op, std::move(args));
        }
        fail("unexpected '" + std::string(1, c) + "'", atom_start);
    }

    NodePtr number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_]))
            ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && is_digit(text_[pos_]))
                ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t probe = pos_ + 1;
            if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-'))
                ++probe;
            if (probe < text_.size() && is_digit(text_[probe])) {
                pos_ = probe;
                while (pos_ < text_.size() && is_digit(text_[pos_]))
                    ++pos_;
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc{} || res.ptr != text_.data() + pos_ || !std::isfinite(value)) {
            pos_ = start;
            fail("malformed number", {"number"});
        }
        return std::make_shared<const Node>(Node{Op::Number, value, 0, {}});
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

MapExpr::MapExpr(NodePtr root) : root_(std::move(root))
{
    if (!root_)
        throw std::invalid_argument("MapExpr requires a root node");
}

double MapExpr::eval(double x) const { return eval_node(*root_, x); }

std::string MapExpr::to_source() const
{
    std::string out;
    write_source(*root_, out);
    return out;
}

std::string MapExpr::to_tree() const
{
    std::string out;
    write_tree(*root_, out);
    return out;
}

ParseError::ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected)
    : std::runtime_error(message), offset_(offset), expected_(std::move(expected))
{
}

EvalError::EvalError(const std::string& message, std::string subexpression)
    : std::runtime_error(message + " in " + subexpression), subexpression_(std::move(subexpression))
{
}

MapExpr parse_map_expr(std::string_view text) { return MapExpr(Parser(text).parse()); }

SelfMapVerdict check_self_map(const MapExpr& e, double lo, double hi, std::size_t grid)
{
    if (!(lo < hi))
        throw std::invalid_argument("check_self_map requires lo < hi");
    if (grid < 2)
        throw std::invalid_argument("check_self_map requires at least two grid points");

    SelfMapVerdict verdict;
    bool first = true;
    for (std::size_t i = 0; i < grid; ++i) {
        const double x = i == 0 ? lo
                       : i + 1 == grid ? hi
                                       : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
        const double y = e.eval(x);
        const double excursion = y < lo ? lo - y : (y > hi ? y - hi : 0.0);
        ++verdict.points_checked;
        if (first || excursion > verdict.worst_excursion) {
            verdict.worst_x = x;
            verdict.worst_value = y;
            verdict.worst_excursion = excursion;
            first = false;
        }
        if (std::isnan(y) || excursion > 0.0)
            verdict.in_range = false;
    }
    return verdict;
}

}  // namespace gfix::realdsl
