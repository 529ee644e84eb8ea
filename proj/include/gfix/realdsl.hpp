#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gfix::realdsl {

enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Abs, Sqrt, Min, Max };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    double value = 0.0;      // Number
    unsigned exponent = 0;   // Pow
    std::vector<NodePtr> args;
};

bool structurally_equal(const Node& a, const Node& b);

/// Immutable expression tree in the single variable x.
class MapExpr {
public:
    explicit MapExpr(NodePtr root);

    const Node& root() const { return *root_; }

    /// binary64 evaluation; throws EvalError on division by zero or sqrt of a negative.
    double eval(double x) const;

    /// Fully parenthesized source text; parses back to an identical tree.
    std::string to_source() const;
    /// Constructor-style dump, e.g. "Div(Var, Add(1, Var))".
    std::string to_tree() const;

    friend bool operator==(const MapExpr& a, const MapExpr& b) { return structurally_equal(*a.root_, *b.root_); }

private:
    NodePtr root_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected);
    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& message, std::string subexpression);
    const std::string& subexpression() const { return subexpression_; }

private:
    std::string subexpression_;
};

/// expr   := term (('+'|'-') term)*
/// term   := factor (('*'|'/') factor)*
/// factor := '-'? power
/// power  := atom ('^' intLiteral)?
/// atom   := number | 'x' | '(' expr ')' | ident '(' expr (',' expr)? ')'
/// with ident one of abs, sqrt (one argument), min, max (two arguments).
MapExpr parse_map_expr(std::string_view text);

inline constexpr std::size_t kDefaultCheckGrid = 1025;

struct SelfMapVerdict {
    bool in_range = true;
    std::size_t points_checked = 0;
    double worst_x = 0.0;
    double worst_value = 0.0;
    /// Distance of worst_value outside [lo, hi]; 0 when in range.
    double worst_excursion = 0.0;
    /// Always "grid-checked": this is evidence, not a proof of invariance.
    static constexpr std::string_view label = "grid-checked";
};

/// Evaluates e at `grid` equally spaced points of [lo, hi], endpoints included.
SelfMapVerdict check_self_map(const MapExpr& e, double lo, double hi, std::size_t grid = kDefaultCheckGrid);

}  // namespace gfix::realdsl
