#include "srn/expr.hpp"

#include <cctype>
#include <map>

namespace srn {
namespace {

struct Token {
    enum class Kind { Num, Ident, Op, End } kind;
    std::string text;
    int col;
};

struct Lexer {
    const std::string& s;
    int line, offset;
    size_t pos = 0;
    explicit Lexer(const std::string& str, int ln, int off) : s(str), line(ln), offset(off) {}

    Token next() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        int col = offset + static_cast<int>(pos) + 1;
        if (pos >= s.size()) return {Token::Kind::End, "", col};
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
                ++pos;
            if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
                size_t save = pos++;
                if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
                if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                } else {
                    pos = save;  // 'e' was not an exponent
                }
            }
            return {Token::Kind::Num, s.substr(start, pos - start), col};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            return {Token::Kind::Ident, s.substr(start, pos - start), col};
        }
        // multi-char operators first
        static const char* two[] = {"<=", ">=", "==", "!="};
        for (const char* t : two)
            if (s.compare(pos, 2, t) == 0) {
                pos += 2;
                return {Token::Kind::Op, t, col};
            }
        if (std::string("+-*/^(),<>").find(c) != std::string::npos) {
            ++pos;
            return {Token::Kind::Op, std::string(1, c), col};
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "' in expression",
                         line, col);
    }
};

struct Parser {
    std::vector<Token> toks;
    size_t idx = 0;
    int line;

    const Token& peek() const { return toks[idx]; }
    Token take() { return toks[idx++]; }
    bool accept_op(const std::string& t) {
        if (peek().kind == Token::Kind::Op && peek().text == t) {
            ++idx;
            return true;
        }
        return false;
    }
    void expect_op(const std::string& t) {
        if (!accept_op(t))
            throw ParseError("expected '" + t + "', found '" + peek().text + "'", line,
                             peek().col);
    }

    static ExprPtr node(ExprNode::Op op, std::vector<ExprPtr> kids) {
        auto n = std::make_shared<ExprNode>();
        n->op = op;
        n->kids = std::move(kids);
        return n;
    }

    ExprPtr parse() {
        ExprPtr e = cmp();
        if (peek().kind != Token::Kind::End)
            throw ParseError("trailing input '" + peek().text + "' in expression", line,
                             peek().col);
        return e;
    }

    ExprPtr cmp() {
        ExprPtr lhs = add();
        static const std::map<std::string, ExprNode::Op> ops = {
            {"<", ExprNode::Op::Lt},  {"<=", ExprNode::Op::Le}, {">", ExprNode::Op::Gt},
            {">=", ExprNode::Op::Ge}, {"==", ExprNode::Op::Eq}, {"!=", ExprNode::Op::Ne}};
        while (peek().kind == Token::Kind::Op && ops.count(peek().text)) {
            auto op = ops.at(take().text);
            lhs = node(op, {lhs, add()});
        }
        return lhs;
    }

    ExprPtr add() {
        ExprPtr lhs = mul();
        for (;;) {
            if (accept_op("+"))
                lhs = node(ExprNode::Op::Add, {lhs, mul()});
            else if (accept_op("-"))
                lhs = node(ExprNode::Op::Sub, {lhs, mul()});
            else
                return lhs;
        }
    }

    ExprPtr mul() {
        ExprPtr lhs = unary();
        for (;;) {
            if (accept_op("*"))
                lhs = node(ExprNode::Op::Mul, {lhs, unary()});
            else if (accept_op("/"))
                lhs = node(ExprNode::Op::Div, {lhs, unary()});
            else
                return lhs;
        }
    }

    ExprPtr unary() {
        if (accept_op("-")) return node(ExprNode::Op::Neg, {unary()});
        if (accept_op("+")) return unary();
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (accept_op("^")) return node(ExprNode::Op::Pow, {base, unary()});
        return base;
    }

    std::vector<ExprPtr> args() {
        expect_op("(");
        std::vector<ExprPtr> out;
        out.push_back(cmp());
        while (accept_op(",")) out.push_back(cmp());
        expect_op(")");
        return out;
    }

    ExprPtr atom() {
        const Token t = peek();
        if (t.kind == Token::Kind::Num) {
            take();
            auto n = std::make_shared<ExprNode>();
            n->op = ExprNode::Op::Const;
            n->value = rational_from_decimal(t.text);
            return n;
        }
        if (t.kind == Token::Kind::Ident) {
            take();
            if (t.text == "x") return node(ExprNode::Op::Var, {});
            auto check_arity = [&](size_t got, size_t want) {
                if (got != want)
                    throw ParseError(t.text + "() takes " + std::to_string(want) +
                                         " arguments, got " + std::to_string(got),
                                     line, t.col);
            };
            if (t.text == "pow") {
                auto a = args();
                check_arity(a.size(), 2);
                return node(ExprNode::Op::Pow, std::move(a));
            }
            if (t.text == "floor") {
                auto a = args();
                check_arity(a.size(), 1);
                return node(ExprNode::Op::Floor, std::move(a));
            }
            if (t.text == "ceil") {
                auto a = args();
                check_arity(a.size(), 1);
                return node(ExprNode::Op::Ceil, std::move(a));
            }
            if (t.text == "min" || t.text == "max") {
                auto a = args();
                if (a.size() < 2)
                    throw ParseError(t.text + "() needs at least 2 arguments", line, t.col);
                return node(t.text == "min" ? ExprNode::Op::Min : ExprNode::Op::Max,
                            std::move(a));
            }
            if (t.text == "piecewise") {
                auto a = args();
                if (a.size() < 3 || a.size() % 2 == 0)
                    throw ParseError(
                        "piecewise() needs (cond, value)... pairs plus a default", line, t.col);
                return node(ExprNode::Op::Piecewise, std::move(a));
            }
            throw ParseError("unknown function '" + t.text + "'", line, t.col);
        }
        if (accept_op("(")) {
            ExprPtr e = cmp();
            expect_op(")");
            return e;
        }
        throw ParseError("expected a value, found '" + t.text + "'", line, t.col);
    }
};

int precedence(ExprNode::Op op) {
    using Op = ExprNode::Op;
    switch (op) {
        case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge: case Op::Eq: case Op::Ne:
            return 0;
        case Op::Add: case Op::Sub:
            return 1;
        case Op::Mul: case Op::Div:
            return 2;
        case Op::Neg:
            return 3;
        default:
            return 4;
    }
}

void render(const ExprPtr& e, std::string& out, int parent_prec) {
    using Op = ExprNode::Op;
    auto binary = [&](const char* sym, Op op) {
        int p = precedence(op);
        if (p < parent_prec) out += '(';
        render(e->kids[0], out, p);
        out += sym;
        render(e->kids[1], out, p + 1);  // left-assoc
        if (p < parent_prec) out += ')';
    };
    auto call = [&](const char* name) {
        out += name;
        out += '(';
        for (size_t i = 0; i < e->kids.size(); ++i) {
            if (i) out += ',';
            render(e->kids[i], out, 0);
        }
        out += ')';
    };
    switch (e->op) {
        case Op::Const: out += scalar_to_string(e->value); return;
        case Op::Var: out += 'x'; return;
        case Op::Add: binary("+", Op::Add); return;
        case Op::Sub: binary("-", Op::Sub); return;
        case Op::Mul: binary("*", Op::Mul); return;
        case Op::Div: binary("/", Op::Div); return;
        case Op::Neg: {
            out += '-';
            if (precedence(e->kids[0]->op) < precedence(Op::Neg)) {
                out += '(';
                render(e->kids[0], out, 0);
                out += ')';
            } else {
                render(e->kids[0], out, precedence(Op::Neg));
            }
            return;
        }
        case Op::Pow: call("pow"); return;
        case Op::Floor: call("floor"); return;
        case Op::Ceil: call("ceil"); return;
        case Op::Min: call("min"); return;
        case Op::Max: call("max"); return;
        case Op::Piecewise: call("piecewise"); return;
        case Op::Lt: binary("<", Op::Lt); return;
        case Op::Le: binary("<=", Op::Le); return;
        case Op::Gt: binary(">", Op::Gt); return;
        case Op::Ge: binary(">=", Op::Ge); return;
        case Op::Eq: binary("==", Op::Eq); return;
        case Op::Ne: binary("!=", Op::Ne); return;
    }
}

}  // namespace

ExprPtr parse_expression(const std::string& text, int line, int col_offset) {
    Lexer lex(text, line, col_offset);
    Parser p;
    p.line = line;
    for (;;) {
        Token t = lex.next();
        bool end = t.kind == Token::Kind::End;
        p.toks.push_back(std::move(t));
        if (end) break;
    }
    return p.parse();
}

std::string render_expression(const ExprPtr& e) {
    std::string out;
    render(e, out, 0);
    return out;
}

bool integer_valued(const ExprPtr& e) {
    using Op = ExprNode::Op;
    switch (e->op) {
        case Op::Const: return denominator(e->value) == 1;
        case Op::Var: return true;
        case Op::Floor: case Op::Ceil: return true;
        case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge: case Op::Eq: case Op::Ne:
            return true;
        case Op::Neg: return integer_valued(e->kids[0]);
        case Op::Add: case Op::Sub: case Op::Mul: case Op::Min: case Op::Max:
            for (const auto& k : e->kids)
                if (!integer_valued(k)) return false;
            return true;
        case Op::Piecewise:
            for (size_t i = 1; i < e->kids.size(); i += 2)
                if (!integer_valued(e->kids[i])) return false;
            return integer_valued(e->kids.back());
        case Op::Div: case Op::Pow:
            return false;  // conservative
    }
    return false;
}

bool rational_capable(const ExprPtr& e) {
    using Op = ExprNode::Op;
    if (e->op == Op::Pow && !integer_valued(e->kids[1])) return false;
    for (const auto& k : e->kids)
        if (!rational_capable(k)) return false;
    return true;
}

}  // namespace srn
