// Test-only reference implementations. Nothing here calls into the engine's
// execution or graph code; they exist to cross-check it.
#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cgpclf/engine.hpp"

namespace oracle {

/// Parsed form of the engine's infix expression text.
struct Expr {
    enum Kind { Input, Binary } kind = Input;
    std::size_t index = 0;
    char op = '+';
    std::unique_ptr<Expr> lhs, rhs;
};

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    std::unique_ptr<Expr> parse() {
        auto e = expr();
        if (pos_ != s_.size()) throw std::runtime_error("trailing text in expression");
        return e;
    }

private:
    std::unique_ptr<Expr> expr() {
        auto e = std::make_unique<Expr>();
        if (peek() == 'x') {
            ++pos_;
            e->kind = Expr::Input;
            e->index = number();
            return e;
        }
        expect('(');
        e->kind = Expr::Binary;
        e->lhs = expr();
        expect(' ');
        e->op = s_.at(pos_++);
        expect(' ');
        e->rhs = expr();
        expect(')');
        return e;
    }

    std::size_t number() {
        std::size_t v = 0, digits = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<std::size_t>(s_[pos_++] - '0');
            ++digits;
        }
        if (!digits) throw std::runtime_error("expected digits");
        return v;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void expect(char c) {
        if (peek() != c) throw std::runtime_error(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline double eval(const Expr& e, const std::vector<double>& x) {
    if (e.kind == Expr::Input) return x.at(e.index);
    const double a = eval(*e.lhs, x), b = eval(*e.rhs, x);
    switch (e.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return std::fabs(b) <= 1e-10 ? 1.0 : a / b;
    }
    throw std::runtime_error("unknown operator");
}

/// Relative comparison that treats matching infinities and NaNs as equal.
inline bool close(double a, double b, double rel = 1e-12) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Reachable addresses by fixpoint iteration over every node, rather than a
/// search from the outputs.
inline std::set<std::size_t> reachable(const cgpclf::Genome& g) {
    std::set<std::size_t> live(g.outputs.begin(), g.outputs.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            if (!live.count(g.config.n_inputs + i)) continue;
            for (auto a : g.nodes[i].inputs) changed |= live.insert(a).second;
        }
    }
    return live;
}

}  // namespace oracle
