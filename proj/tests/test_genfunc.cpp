#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "colombeau/colombeau.hpp"

using namespace colombeau;

namespace {

double tanh_sinh(const std::function<double(double)>& f, double a, double b) {
    static boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b);
}

EvalContext<1> ctx(int q, double eps) { return EvalContext<1>(strict_mollifier<1>(q), eps); }

}  // namespace

TEST_CASE("embedding of a smooth function is a convolution") {
    const auto phi = strict_mollifier<1>(2);
    const double eps = 0.05;
    for (double x : {-0.4, 0.0, 0.37}) {
        const double oracle = tanh_sinh(
            [&](double y) { return std::exp(y) * phi->factor(0).value((y - x) / eps) / eps; }, x - eps, x + eps);
        CHECK(evaluate(gf::iota(dist::regular(smooth::exponential())), ctx(2, eps), x) ==
              doctest::Approx(oracle).epsilon(1e-11));
    }
}

TEST_CASE("embedded point mass is the scaled mollifier") {
    const auto phi = strict_mollifier<1>(3);
    const double eps = 0.1;
    for (double x : {-0.05, 0.0, 0.02, 0.2}) {
        CHECK(evaluate(gf::iota(dist::delta(0.0)), ctx(3, eps), x) ==
              doctest::Approx(phi->factor(0).value(-x / eps) / eps).scale(1.0));
    }
}

TEST_CASE("partial derivatives commute with the embedding") {
    const double eps = 0.03;
    const auto c = ctx(2, eps);
    const std::vector<Distribution<1>> ts{dist::heaviside(0.0), dist::regular(regular::abs_x()), dist::delta(0.1)};
    for (const auto& t : ts)
        for (double x : {-0.2, 0.0, 0.01, 0.15}) {
            const double lhs = evaluate(gf::partial(1, gf::iota(t)), c, x);
            const double rhs = evaluate(gf::iota(dist::derivative(1, t)), c, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0));
            const double h = 1e-6;
            const double fd = (evaluate(gf::iota(t), c, x + h) - evaluate(gf::iota(t), c, x - h)) / (2 * h);
            CHECK(lhs == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
        }
}

TEST_CASE("sigma is an algebra homomorphism") {
    const auto c = ctx(0, 0.1);
    const auto f = smooth::sine();
    const auto g = smooth::exponential();
    for (double x : {-0.3, 0.4}) {
        CHECK(evaluate(gf::product(gf::sigma(f), gf::sigma(g)), c, x) == doctest::Approx(std::sin(x) * std::exp(x)));
        CHECK(evaluate(gf::partial(1, gf::sigma(f)), c, x) == doctest::Approx(std::cos(x)));
        CHECK(evaluate(gf::constant<1>(2.5), c, x) == 2.5);
    }
}

TEST_CASE("Leibniz rule on products") {
    const auto c = ctx(2, 0.05);
    const auto a = gf::iota(dist::heaviside(0.0));
    const auto b = gf::iota(dist::regular(smooth::cosine()));
    for (double x : {-0.02, 0.0, 0.03}) {
        const double lhs = evaluate(gf::product(a, b), c, x, 1);
        const double rhs = evaluate(a, c, x, 1) * evaluate(b, c, x) + evaluate(a, c, x) * evaluate(b, c, x, 1);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("embedding is linear") {
    const auto c = ctx(2, 0.05);
    const auto t = dist::heaviside(0.0);
    const auto s = dist::delta(0.02);
    for (double x : {-0.03, 0.01}) {
        const double lhs = evaluate(gf::iota(dist::sum(dist::scaled(2.0, t), s)), c, x);
        const double rhs = 2.0 * evaluate(gf::iota(t), c, x) + evaluate(gf::iota(s), c, x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("iota minus sigma resolves the leading Taylor term") {
    // iota(f) - f = f^(q+1)(x) (-eps)^(q+1) m_(q+1) / (q+1)! + O(eps^(q+2))
    const auto f = gf::sub(gf::iota(dist::regular(smooth::sine())), gf::sigma(smooth::sine()));
    const double x = 0.3;
    for (int q : {0, 2, 4}) {
        const double eps = 1e-3;
        const double d = evaluate(f, ctx(q, eps), x);
        const double deriv = q == 0 ? std::cos(x) : (q == 2 ? std::sin(x) : std::cos(x));
        const double lead = deriv * std::pow(eps, q + 1) * kStrictMoment / std::tgamma(q + 2);
        CAPTURE(q);
        CHECK(std::abs(d) == doctest::Approx(std::abs(lead)).epsilon(1e-2));
    }
}

TEST_CASE("singular support of an expression") {
    const auto f = gf::product(gf::iota(dist::heaviside(0.2)), gf::iota(dist::delta(-0.1)));
    const auto s = singular_support(f)[0];
    CHECK(s.size() == 2);
}

TEST_CASE("expression language") {
    CHECK(dsl::parse_expression("prod(iota(heaviside@0), iota(delta@0))").str() ==
          gf::product(gf::iota(dist::heaviside(0.0)), gf::iota(dist::delta(0.0))).str());
    CHECK(dsl::parse_expression("sub(iota(sin), sigma(sin))").str() ==
          gf::sub(gf::iota(dist::regular(smooth::sine())), gf::sigma(smooth::sine())).str());
    const auto c = ctx(2, 0.05);
    CHECK(evaluate(dsl::parse_expression("partial(1, iota(delta@0))"), c, 0.01) ==
          doctest::Approx(evaluate(gf::iota(dist::derivative(1, dist::delta(0.0))), c, 0.01)));
    CHECK(evaluate(dsl::parse_expression("scaled(2, sigma(1))"), c, 0.0) == 2.0);
    CHECK(evaluate(dsl::parse_expression("sum(sigma(x), 1, iota(zero))"), c, 0.5) == doctest::Approx(1.5));
    const auto psi = testfn::tilted_bump();
    CHECK(pair(dsl::parse_distribution("dderiv:1:delta@0"), psi) ==
          doctest::Approx(-psi.derivative(MultiIndex<1>({1}), Point<1>{0.0})));
    CHECK(pair(dsl::parse_distribution("times(cos, delta@0.5)"), psi) == doctest::Approx(std::cos(0.5) * psi(0.5)));
    CHECK(pair(dsl::parse_distribution("scaled(0.5, sum(delta@0, delta@1))"), psi) ==
          doctest::Approx(0.5 * (psi(0.0) + psi(1.0))));
}

TEST_CASE("parse errors report positions") {
    auto position = [](const std::string& s) -> std::size_t {
        try {
            dsl::parse_expression(s);
        } catch (const ParseError& e) {
            return e.position();
        }
        return std::string::npos;
    };
    CHECK(position("prod(iota(delta@0), foo)") == 20);
    CHECK(position("iota(delta@)") == 11);
    CHECK(position("iota(delta@0") == 12);
    CHECK(position("iota(delta@0))") == 13);
    CHECK(position("partial(x, iota(delta@0))") == 8);
    CHECK(position("iota(dderiv:1:bogus)") == 14);
    CHECK_THROWS_AS(dsl::parse_smooth("sinh"), ParseError);
}
