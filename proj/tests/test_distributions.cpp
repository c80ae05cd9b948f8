#include <doctest.h>

#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "colombeau/colombeau.hpp"

using namespace colombeau;

namespace {

double tanh_sinh(const std::function<double(double)>& f, double a, double b) {
    static boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b);
}

double d1(const TestFunction<1>& psi, double x) { return psi.derivative(MultiIndex<1>({1}), Point<1>{x}); }

}  // namespace

TEST_CASE("point masses and their derivatives") {
    const auto psi = testfn::tilted_bump();
    CHECK(pair(dist::delta(0.25), psi) == doctest::Approx(psi(0.25)));
    CHECK(pair(dist::derivative(1, dist::delta(0.25)), psi) == doctest::Approx(-d1(psi, 0.25)));
    CHECK(pair(dist::derivative(2, dist::delta(0.0)), psi) ==
          doctest::Approx(psi.derivative(MultiIndex<1>({2}), Point<1>{0.0})));
    CHECK(pair(dist::zero<1>(), psi) == 0.0);
}

TEST_CASE("regular distributions against tanh-sinh") {
    const auto psi = testfn::tilted_bump();
    CHECK(pair(dist::heaviside(0.0), psi) == doctest::Approx(tanh_sinh([&](double y) { return psi(y); }, 0.0, 2.0)).epsilon(1e-10));
    CHECK(pair(dist::regular(regular::abs_x()), psi) ==
          doctest::Approx(tanh_sinh([&](double y) { return std::abs(y) * psi(y); }, -2.0, 0.0) +
                          tanh_sinh([&](double y) { return std::abs(y) * psi(y); }, 0.0, 2.0))
              .epsilon(1e-10));
    const auto cosb = testfn::cos_bump();
    CHECK(pair(dist::regular(smooth::sine()), cosb) ==
          doctest::Approx(tanh_sinh([&](double y) { return std::sin(y) * cosb(y); }, -1.5, 1.5)).scale(1.0).epsilon(1e-10));
}

TEST_CASE("derivative of the Heaviside function is the point mass") {
    for (const auto& psi : {testfn::tilted_bump(), testfn::cos_bump(), testfn::sine_bump(2.0, 0.3)}) {
        CHECK(pair(dist::derivative(1, dist::heaviside(0.0)), psi) == doctest::Approx(psi(0.0)).epsilon(1e-10));
    }
    // |x|'' = 2 delta
    const auto psi = testfn::tilted_bump();
    CHECK(pair(dist::derivative(2, dist::regular(regular::abs_x())), psi) == doctest::Approx(2.0 * psi(0.0)).epsilon(1e-9));
}

TEST_CASE("smooth multipliers and Lie derivatives") {
    const auto psi = testfn::tilted_bump();
    const auto g = smooth::cosine();
    CHECK(pair(dist::multiplied(g, dist::delta(0.4)), psi) == doctest::Approx(std::cos(0.4) * psi(0.4)));
    // <a d delta_p, psi> = -(a psi)'(p)
    const auto x = fields::sin_theta();
    const double p = 0.3;
    const double expected = -(std::cos(p) * psi(p) + std::sin(p) * d1(psi, p));
    CHECK(pair(lie_derivative_dist(dist::delta(p), x), psi) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("pairing is bilinear") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> w(-2.0, 2.0);
    const std::vector<Distribution<1>> ts{dist::delta(0.1), dist::heaviside(-0.2), dist::regular(regular::abs_x()),
                                          dist::derivative(1, dist::delta(0.0))};
    const std::vector<TestFunction<1>> psis{testfn::tilted_bump(), testfn::cos_bump(), testfn::sine_bump()};
    for (int trial = 0; trial < 20; ++trial) {
        const auto& a = ts[rng() % ts.size()];
        const auto& b = ts[rng() % ts.size()];
        const auto& psi = psis[rng() % psis.size()];
        const double s = w(rng), t = w(rng);
        const double lhs = pair(dist::sum(dist::scaled(s, a), dist::scaled(t, b)), psi);
        CHECK(lhs == doctest::Approx(s * pair(a, psi) + t * pair(b, psi)).epsilon(1e-10).scale(1.0));
        const double u = w(rng);
        CHECK(pair(a, psi.scaled(u)) == doctest::Approx(u * pair(a, psi)).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("singular support and names") {
    const auto t = dist::sum(dist::heaviside(0.5), dist::delta(-0.25));
    const auto s = singular_support(t)[0];
    CHECK(std::find(s.begin(), s.end(), 0.5) != s.end());
    CHECK(std::find(s.begin(), s.end(), -0.25) != s.end());
    CHECK(singular_support(dist::regular(smooth::sine()))[0].empty());
    CHECK(dist::delta(0.0).str() == "delta@0");
}

TEST_CASE("derivative order cap") {
    const auto psi = testfn::tilted_bump();
    CHECK_THROWS(pair(dist::derivative(kMaxDerivativeOrder + 1, dist::delta(0.0)), psi));
}
