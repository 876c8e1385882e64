#pragma once
// Rate expressions over the state variable x: arithmetic, integer powers,
// floor/ceil/min/max, comparisons and piecewise selection.  Expressions are
// parsed once and evaluated under any numeric backend; a static analysis
// decides whether exact-rational evaluation is possible.
#include <memory>
#include <string>
#include <vector>

#include "srn/errors.hpp"
#include "srn/scalar.hpp"

namespace srn {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Op {
        Const, Var,
        Add, Sub, Mul, Div, Neg, Pow,
        Floor, Ceil, Min, Max, Piecewise,
        Lt, Le, Gt, Ge, Eq, Ne
    };
    Op op;
    Rational value;  // Const only
    std::vector<ExprPtr> kids;
};

// Parse an expression; `offset` shifts reported column positions so errors
// point into the enclosing document.
ExprPtr parse_expression(const std::string& text, int line = -1, int col_offset = 0);

// Canonical rendering (reparses to an equal tree).
std::string render_expression(const ExprPtr& e);

// True when evaluation stays in Q for every integer x: all literals are
// rational (always true for parsed text) and every pow() exponent is
// integer-valued.  Division is exact in Q and therefore allowed.
bool rational_capable(const ExprPtr& e);

// Conservative "this subtree yields an integer at every integer x >= 0".
bool integer_valued(const ExprPtr& e);

template <class T>
T eval_expr(const ExprPtr& e, const T& x) {
    using Op = ExprNode::Op;
    switch (e->op) {
        case Op::Const: return from_rational<T>(e->value);
        case Op::Var: return x;
        case Op::Add: return eval_expr(e->kids[0], x) + eval_expr(e->kids[1], x);
        case Op::Sub: return eval_expr(e->kids[0], x) - eval_expr(e->kids[1], x);
        case Op::Mul: return eval_expr(e->kids[0], x) * eval_expr(e->kids[1], x);
        case Op::Div: {
            T d = eval_expr(e->kids[1], x);
            if (!(d != T(0))) throw NumericalError("division by zero in rate expression");
            return eval_expr(e->kids[0], x) / d;
        }
        case Op::Neg: return -eval_expr(e->kids[0], x);
        case Op::Pow: return scalar_pow(eval_expr(e->kids[0], x), eval_expr(e->kids[1], x));
        case Op::Floor: return scalar_floor(eval_expr(e->kids[0], x));
        case Op::Ceil: return scalar_ceil(eval_expr(e->kids[0], x));
        case Op::Min: {
            T best = eval_expr(e->kids[0], x);
            for (size_t i = 1; i < e->kids.size(); ++i) {
                T v = eval_expr(e->kids[i], x);
                if (v < best) best = v;
            }
            return best;
        }
        case Op::Max: {
            T best = eval_expr(e->kids[0], x);
            for (size_t i = 1; i < e->kids.size(); ++i) {
                T v = eval_expr(e->kids[i], x);
                if (v > best) best = v;
            }
            return best;
        }
        case Op::Piecewise: {
            // (cond, value)* , default
            size_t i = 0;
            for (; i + 1 < e->kids.size(); i += 2)
                if (eval_expr(e->kids[i], x) != T(0)) return eval_expr(e->kids[i + 1], x);
            return eval_expr(e->kids.back(), x);
        }
        case Op::Lt: return T(eval_expr(e->kids[0], x) < eval_expr(e->kids[1], x) ? 1 : 0);
        case Op::Le: return T(eval_expr(e->kids[0], x) <= eval_expr(e->kids[1], x) ? 1 : 0);
        case Op::Gt: return T(eval_expr(e->kids[0], x) > eval_expr(e->kids[1], x) ? 1 : 0);
        case Op::Ge: return T(eval_expr(e->kids[0], x) >= eval_expr(e->kids[1], x) ? 1 : 0);
        case Op::Eq: return T(eval_expr(e->kids[0], x) == eval_expr(e->kids[1], x) ? 1 : 0);
        case Op::Ne: return T(eval_expr(e->kids[0], x) != eval_expr(e->kids[1], x) ? 1 : 0);
    }
    throw InternalError("unhandled expression node");
}

}  // namespace srn
