#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "colombeau/distributions.hpp"
#include "colombeau/errors.hpp"
#include "colombeau/genfunc.hpp"
#include "colombeau/smooth.hpp"

namespace colombeau::dsl {

// Expressions:
//   iota(D) | sigma(S) | <number> | sum(E, E, ...) | sub(E, E) | prod(E, E)
//   | scaled(<number>, E) | partial(<int>, E)
// Distributions D:
//   delta@a | heaviside@a | dderiv:k:D | abs-x | abs-x-bump | zero | <smooth name>
//   | scaled(<number>, D) | sum(D, D, ...) | times(S, D)
// Smooth functions S:
//   sin | cos | exp | x | x2 | bump | x2-bump2 | <number>

inline const std::vector<std::string>& smooth_names() {
    static const std::vector<std::string> names{"sin", "cos", "exp", "x", "x2", "bump", "x2-bump2"};
    return names;
}

inline const std::vector<std::string>& distribution_names() {
    static const std::vector<std::string> names{"delta@<a>", "heaviside@<a>", "dderiv:<k>:<dist>", "abs-x",
                                                "abs-x-bump", "zero"};
    return names;
}

namespace detail {

inline bool parse_number(std::string_view s, double& out) {
    if (s.empty()) return false;
    std::string buf(s);
    char* end = nullptr;
    out = std::strtod(buf.c_str(), &end);
    return end == buf.c_str() + buf.size();
}

inline std::optional<SmoothFunction<1>> smooth_by_name(std::string_view name) {
    if (name == "sin") return smooth::sine();
    if (name == "cos") return smooth::cosine();
    if (name == "exp") return smooth::exponential();
    if (name == "x") return smooth::identity();
    if (name == "x2") return smooth::polynomial({0.0, 0.0, 1.0}, "x2");
    if (name == "bump") return smooth::bump();
    if (name == "x2-bump2") return regular::x2_bump2();
    double c = 0.0;
    if (parse_number(name, c)) return smooth::constant<1>(c);
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    GenFuncExpr<1> expression_only() {
        auto e = expression();
        finish();
        return e;
    }

    Distribution<1> distribution_only() {
        auto d = distribution();
        finish();
        return d;
    }

    SmoothFunction<1> smooth_only() {
        auto f = smooth();
        finish();
        return f;
    }

private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void finish() {
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    /// Maximal run of name characters: letters, digits and . - + @ : _
    std::string_view word() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' || c == '@' ||
                c == ':' || c == '_')
                ++pos_;
            else
                break;
        }
        if (pos_ == start) fail("expected a name or number");
        return text_.substr(start, pos_ - start);
    }

    bool peek(char c) {
        skip();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    double number() {
        const std::size_t at = (skip(), pos_);
        const auto w = word();
        double v = 0.0;
        if (!parse_number(w, v)) {
            pos_ = at;
            fail("expected a number");
        }
        return v;
    }

    int integer() {
        const std::size_t at = (skip(), pos_);
        const double v = number();
        if (v != static_cast<int>(v)) {
            pos_ = at;
            fail("expected an integer");
        }
        return static_cast<int>(v);
    }

    GenFuncExpr<1> expression() {
        const std::size_t at = (skip(), pos_);
        const auto head = word();
        double c = 0.0;
        if (!peek('(')) {
            if (parse_number(head, c)) return gf::constant<1>(c);
            pos_ = at;
            fail("unknown expression '" + std::string(head) + "'");
        }
        expect('(');
        GenFuncExpr<1> out;
        if (head == "iota") {
            out = gf::iota(distribution());
        } else if (head == "sigma") {
            out = gf::sigma(smooth());
        } else if (head == "sum") {
            std::vector<GenFuncExpr<1>> terms{expression()};
            while (peek(',')) {
                ++pos_;
                terms.push_back(expression());
            }
            out = gf::sum(std::move(terms));
        } else if (head == "sub" || head == "prod") {
            auto a = expression();
            expect(',');
            auto b = expression();
            out = head == "sub" ? gf::sub(std::move(a), std::move(b)) : gf::product(std::move(a), std::move(b));
        } else if (head == "scaled") {
            const double w = number();
            expect(',');
            out = gf::scaled(w, expression());
        } else if (head == "partial") {
            const std::size_t kat = (skip(), pos_);
            const int k = integer();
            if (k < 0 || k > kMaxDerivativeOrder) {
                pos_ = kat;
                fail("derivative order out of range");
            }
            expect(',');
            out = gf::partial(k, expression());
        } else {
            pos_ = at;
            fail("unknown expression head '" + std::string(head) + "'");
        }
        expect(')');
        return out;
    }

    Distribution<1> distribution() {
        const std::size_t at = (skip(), pos_);
        const auto head = word();
        if (peek('(')) {
            expect('(');
            Distribution<1> out;
            if (head == "scaled") {
                const double w = number();
                expect(',');
                out = dist::scaled(w, distribution());
            } else if (head == "sum") {
                out = distribution();
                while (peek(',')) {
                    ++pos_;
                    out = dist::sum(out, distribution());
                }
            } else if (head == "times") {
                auto f = smooth();
                expect(',');
                out = dist::multiplied(std::move(f), distribution());
            } else {
                pos_ = at;
                fail("unknown distribution head '" + std::string(head) + "'");
            }
            expect(')');
            return out;
        }
        return named_distribution(head, at);
    }

    Distribution<1> named_distribution(std::string_view name, std::size_t at) {
        auto located = [&](std::string_view prefix) -> std::optional<double> {
            if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
            double a = 0.0;
            if (!parse_number(name.substr(prefix.size()), a)) {
                pos_ = at + prefix.size();
                fail("expected a location after '" + std::string(prefix) + "'");
            }
            return a;
        };
        if (auto a = located("delta@")) return dist::delta(*a);
        if (auto a = located("heaviside@")) return dist::heaviside(*a);
        if (name.substr(0, 7) == "dderiv:") {
            const auto rest = name.substr(7);
            const auto colon = rest.find(':');
            double k = 0.0;
            if (colon == std::string_view::npos || !parse_number(rest.substr(0, colon), k) || k != static_cast<int>(k) ||
                k < 0 || k > kMaxDerivativeOrder) {
                pos_ = at + 7;
                fail("expected dderiv:<k>:<dist> with 0 <= k <= " + std::to_string(kMaxDerivativeOrder));
            }
            Parser inner(rest.substr(colon + 1));
            try {
                return dist::derivative(static_cast<int>(k), inner.distribution_only());
            } catch (const ParseError& e) {
                throw ParseError("in derivative operand: " + std::string(e.what()), at + 8 + colon + e.position());
            }
        }
        if (name == "abs-x") return dist::regular(regular::abs_x());
        if (name == "abs-x-bump") return dist::regular(regular::abs_x_bump());
        if (name == "zero") return dist::zero<1>();
        if (auto f = smooth_by_name(name)) return dist::regular(*f);
        pos_ = at;
        fail("unknown distribution '" + std::string(name) + "'");
    }

    SmoothFunction<1> smooth() {
        const std::size_t at = (skip(), pos_);
        const auto name = word();
        if (auto f = smooth_by_name(name)) return *f;
        pos_ = at;
        fail("unknown smooth function '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline GenFuncExpr<1> parse_expression(std::string_view text) { return detail::Parser(text).expression_only(); }

inline Distribution<1> parse_distribution(std::string_view text) { return detail::Parser(text).distribution_only(); }

inline SmoothFunction<1> parse_smooth(std::string_view text) { return detail::Parser(text).smooth_only(); }

}  // namespace colombeau::dsl
