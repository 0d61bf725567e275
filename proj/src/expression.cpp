#include "ffinv/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

namespace ffinv {

struct Expression::Node {
    enum class Op { Number, X, Y, R, Add, Sub, Mul, Div, Pow, Neg, Call };
    Op op = Op::Number;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs, rhs;

    [[nodiscard]] double eval(Vec2 p) const {
        switch (op) {
            case Op::Number: return value;
            case Op::X: return p.x;
            case Op::Y: return p.y;
            case Op::R: return norm(p);
            case Op::Add: return lhs->eval(p) + rhs->eval(p);
            case Op::Sub: return lhs->eval(p) - rhs->eval(p);
            case Op::Mul: return lhs->eval(p) * rhs->eval(p);
            case Op::Div: return lhs->eval(p) / rhs->eval(p);
            case Op::Pow: return std::pow(lhs->eval(p), rhs->eval(p));
            case Op::Neg: return -lhs->eval(p);
            case Op::Call: return fn(lhs->eval(p));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
}

const std::map<std::string, double (*)(double)>& functions() {
    static const std::map<std::string, double (*)(double)> table{
        {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
        {"tan", [](double v) { return std::tan(v); }},   {"exp", [](double v) { return std::exp(v); }},
        {"log", [](double v) { return std::log(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
        {"abs", [](double v) { return std::abs(v); }},   {"tanh", [](double v) { return std::tanh(v); }},
    };
    return table;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        auto n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("expression \"" + s_ + "\": " + msg + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        auto n = term();
        for (;;) {
            if (accept('+'))
                n = make(Op::Add, n, term());
            else if (accept('-'))
                n = make(Op::Sub, n, term());
            else
                return n;
        }
    }

    NodePtr term() {
        auto n = unary();
        for (;;) {
            if (accept('*'))
                n = make(Op::Mul, n, unary());
            else if (accept('/'))
                n = make(Op::Div, n, unary());
            else
                return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        auto base = primary();
        if (accept('^')) return make(Op::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (accept('(')) {
            auto n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return number(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x") return make(Op::X);
            if (name == "y") return make(Op::Y);
            if (name == "r") return make(Op::R);
            if (name == "pi") return number(std::numbers::pi);
            if (name == "e") return number(std::numbers::e);
            const auto it = functions().find(name);
            if (it == functions().end()) fail("unknown identifier '" + name + "'");
            if (!accept('(')) fail("expected '(' after " + name);
            auto arg = expr();
            if (!accept(')')) fail("expected ')'");
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Call;
            n->fn = it->second;
            n->lhs = std::move(arg);
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string text) : text_(std::move(text)), root_(Parser(text_).parse()) {}

double Expression::operator()(Vec2 p) const { return root_->eval(p); }

}  // namespace ffinv
