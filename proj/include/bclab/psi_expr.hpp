#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "contfrac.hpp"
#include "rational.hpp"

namespace bclab {

/// Parser for the small psi/radius expression language used on the command
/// line: rational constants, the index variable (q or n), + - * / ^ with
/// implicit multiplication, `indicator(primes)`, `restrict(q = s mod u)`,
/// and parameter bindings after a colon, e.g. "c/q^s : c=1, s=2".
class PsiExpr {
   public:
    static PsiExpr parse(const std::string& text) {
        PsiExpr e;
        auto colon = text.find(':');
        std::string body = text.substr(0, colon);
        if (colon != std::string::npos) e.parse_bindings(text.substr(colon + 1));
        Parser p(body, e.params_);
        e.root_ = p.parse_expr();
        p.expect_end();
        return e;
    }

    Rat operator()(u64 q) const { return eval(*root_, q); }

    std::function<Rat(u64)> fn() const {
        auto root = root_;
        return [root](u64 q) { return eval(*root, q); };
    }

   private:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    enum class Op { constant, index, add, sub, mul, div, neg, pow, prime_indicator, restrict_mod };

    struct Node {
        Op op;
        Rat value;       // constant
        long exponent;   // pow
        i64 s;           // restrict
        u64 u;           // restrict
        NodePtr a, b;
    };

    NodePtr root_;
    std::map<std::string, Rat> params_;

    static Rat eval(const Node& n, u64 q) {
        switch (n.op) {
            case Op::constant:
                return n.value;
            case Op::index:
                return rat(Int(static_cast<unsigned long>(q)), Int(1));
            case Op::add:
                return eval(*n.a, q) + eval(*n.b, q);
            case Op::sub:
                return eval(*n.a, q) - eval(*n.b, q);
            case Op::mul:
                return eval(*n.a, q) * eval(*n.b, q);
            case Op::div: {
                Rat d = eval(*n.b, q);
                if (d == 0) throw std::domain_error("psi expression: division by zero");
                return eval(*n.a, q) / d;
            }
            case Op::neg:
                return -eval(*n.a, q);
            case Op::pow: {
                Rat base = eval(*n.a, q);
                bool inv = n.exponent < 0;
                unsigned long e =
                    static_cast<unsigned long>(inv ? -n.exponent : n.exponent);
                Rat r = rat(pow_int(Int(base.get_num()), e), pow_int(Int(base.get_den()), e));
                if (inv) {
                    if (r == 0) throw std::domain_error("psi expression: 0^negative");
                    r = Rat(1) / r;
                }
                return r;
            }
            case Op::prime_indicator:
                return is_prime(Int(static_cast<unsigned long>(q))) ? Rat(1) : Rat(0);
            case Op::restrict_mod: {
                u64 target = static_cast<u64>(
                    ((n.s % static_cast<i64>(n.u)) + static_cast<i64>(n.u)) %
                    static_cast<i64>(n.u));
                return (q % n.u) == target ? Rat(1) : Rat(0);
            }
        }
        throw std::logic_error("psi expression: bad node");
    }

    void parse_bindings(const std::string& text) {
        size_t pos = 0;
        while (pos < text.size()) {
            size_t comma = text.find(',', pos);
            std::string piece =
                text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            size_t eq = piece.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("psi expression: binding must be name=value");
            auto trim = [](std::string s) {
                size_t b = s.find_first_not_of(" \t");
                size_t e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            std::string name = trim(piece.substr(0, eq));
            std::string value = trim(piece.substr(eq + 1));
            if (name.empty() || name == "q" || name == "n")
                throw std::invalid_argument("psi expression: bad parameter name '" + name + "'");
            params_[name] = parse_rat(value);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }

    class Parser {
       public:
        Parser(const std::string& s, const std::map<std::string, Rat>& params)
            : s_(s), params_(params) {}

        NodePtr parse_expr() {
            NodePtr left = parse_term();
            for (;;) {
                skip_ws();
                if (peek() == '+') {
                    ++pos_;
                    left = binary(Op::add, left, parse_term());
                } else if (peek() == '-') {
                    ++pos_;
                    left = binary(Op::sub, left, parse_term());
                } else {
                    return left;
                }
            }
        }

        void expect_end() {
            skip_ws();
            if (pos_ != s_.size())
                throw std::invalid_argument("psi expression: trailing input at '" +
                                            s_.substr(pos_) + "'");
        }

       private:
        const std::string& s_;
        const std::map<std::string, Rat>& params_;
        size_t pos_ = 0;

        char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
        void skip_ws() {
            while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }

        static NodePtr binary(Op op, NodePtr a, NodePtr b) {
            auto n = std::make_shared<Node>();
            n->op = op;
            n->a = std::move(a);
            n->b = std::move(b);
            return n;
        }

        NodePtr parse_term() {
            NodePtr left = parse_factor();
            for (;;) {
                skip_ws();
                char c = peek();
                if (c == '*') {
                    ++pos_;
                    left = binary(Op::mul, left, parse_factor());
                } else if (c == '/') {
                    ++pos_;
                    left = binary(Op::div, left, parse_factor());
                } else if (c == '(' || std::isalpha(static_cast<unsigned char>(c)) ||
                           std::isdigit(static_cast<unsigned char>(c))) {
                    // implicit multiplication, e.g. "1/(4n)" or "2q"
                    left = binary(Op::mul, left, parse_factor());
                } else {
                    return left;
                }
            }
        }

        NodePtr parse_factor() {
            NodePtr base = parse_unary();
            skip_ws();
            if (peek() == '^') {
                ++pos_;
                skip_ws();
                bool neg = false;
                if (peek() == '-') {
                    neg = true;
                    ++pos_;
                }
                long e;
                if (std::isalpha(static_cast<unsigned char>(peek()))) {
                    // a bound parameter may serve as the exponent if integral
                    std::string name = parse_ident();
                    auto it = params_.find(name);
                    if (it == params_.end())
                        throw std::invalid_argument("psi expression: unbound exponent '" +
                                                    name + "'");
                    if (it->second.get_den() != 1 || !it->second.get_num().fits_slong_p())
                        throw std::invalid_argument("psi expression: exponent '" + name +
                                                    "' must be a small integer");
                    e = it->second.get_num().get_si();
                    if (e < 0) {
                        if (neg) throw std::invalid_argument(
                            "psi expression: doubly negated exponent");
                        neg = true;
                        e = -e;
                    }
                } else {
                    e = parse_integer();
                }
                auto n = std::make_shared<Node>();
                n->op = Op::pow;
                n->a = std::move(base);
                n->exponent = neg ? -e : e;
                return n;
            }
            return base;
        }

        NodePtr parse_unary() {
            skip_ws();
            if (peek() == '-') {
                ++pos_;
                auto n = std::make_shared<Node>();
                n->op = Op::neg;
                n->a = parse_unary();
                return n;
            }
            return parse_primary();
        }

        NodePtr parse_primary() {
            skip_ws();
            char c = peek();
            if (c == '(') {
                ++pos_;
                NodePtr inner = parse_expr();
                skip_ws();
                if (peek() != ')') throw std::invalid_argument("psi expression: expected ')'");
                ++pos_;
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                auto n = std::make_shared<Node>();
                n->op = Op::constant;
                n->value = rat(parse_integer(), 1);
                return n;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::string name = parse_ident();
                if (name == "q" || name == "n") {
                    auto n = std::make_shared<Node>();
                    n->op = Op::index;
                    return n;
                }
                if (name == "indicator") return parse_indicator();
                if (name == "restrict") return parse_restrict();
                auto it = params_.find(name);
                if (it == params_.end())
                    throw std::invalid_argument("psi expression: unbound parameter '" + name +
                                                "'");
                auto n = std::make_shared<Node>();
                n->op = Op::constant;
                n->value = it->second;
                return n;
            }
            throw std::invalid_argument("psi expression: unexpected input at '" +
                                        s_.substr(pos_) + "'");
        }

        NodePtr parse_indicator() {
            skip_ws();
            if (peek() != '(') throw std::invalid_argument("indicator: expected '('");
            ++pos_;
            std::string what = parse_ident();
            if (what != "primes")
                throw std::invalid_argument("indicator: only 'primes' is supported");
            skip_ws();
            if (peek() != ')') throw std::invalid_argument("indicator: expected ')'");
            ++pos_;
            auto n = std::make_shared<Node>();
            n->op = Op::prime_indicator;
            return n;
        }

        // restrict(q = s mod u), also accepting the congruence sign
        NodePtr parse_restrict() {
            skip_ws();
            if (peek() != '(') throw std::invalid_argument("restrict: expected '('");
            ++pos_;
            std::string var = parse_ident();
            if (var != "q" && var != "n")
                throw std::invalid_argument("restrict: expected the index variable");
            skip_ws();
            if (peek() == '=') {
                ++pos_;
                if (peek() == '=') ++pos_;
            } else if (static_cast<unsigned char>(peek()) == 0xE2 && pos_ + 2 < s_.size()) {
                pos_ += 3;  // UTF-8 congruence sign
            } else {
                throw std::invalid_argument("restrict: expected '=' or the congruence sign");
            }
            skip_ws();
            bool neg = false;
            if (peek() == '-') {
                neg = true;
                ++pos_;
            }
            long s = parse_integer();
            std::string kw = parse_ident();
            if (kw != "mod") throw std::invalid_argument("restrict: expected 'mod'");
            long u = parse_integer();
            if (u <= 0) throw std::invalid_argument("restrict: modulus must be positive");
            skip_ws();
            if (peek() != ')') throw std::invalid_argument("restrict: expected ')'");
            ++pos_;
            auto n = std::make_shared<Node>();
            n->op = Op::restrict_mod;
            n->s = neg ? -s : s;
            n->u = static_cast<u64>(u);
            return n;
        }

        long parse_integer() {
            skip_ws();
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw std::invalid_argument("psi expression: expected an integer");
            long v = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                v = v * 10 + (s_[pos_] - '0');
                ++pos_;
            }
            return v;
        }

        std::string parse_ident() {
            skip_ws();
            std::string out;
            while (std::isalpha(static_cast<unsigned char>(peek()))) {
                out.push_back(s_[pos_]);
                ++pos_;
            }
            if (out.empty()) throw std::invalid_argument("psi expression: expected a name");
            return out;
        }
    };
};

inline std::function<Rat(u64)> parse_psi_expr(const std::string& text) {
    return PsiExpr::parse(text).fn();
}

}  // namespace bclab
