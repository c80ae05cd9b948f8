#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "colombeau/colombeau.hpp"

using namespace colombeau;

namespace {

double tanh_sinh(const std::function<double(double)>& f, double a = -1.0, double b = 1.0) {
    static boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b);
}

}  // namespace

TEST_CASE("bump profile constants") {
    // frozen from tanh-sinh quadrature
    CHECK(tanh_sinh(BumpProfile::value) == doctest::Approx(0.443993816168079).epsilon(1e-13));
    CHECK(tanh_sinh([](double t) { return BumpProfile::value(t) * BumpProfile::value(t); }) ==
          doctest::Approx(0.133086120844994).epsilon(1e-13));
    // b' peaks where b'' vanishes on (0, 1)
    double lo = 0.1, hi = 0.9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (BumpProfile::derivative(2, mid) < 0.0 ? lo : hi) = mid;
    }
    const double sup = std::abs(BumpProfile::derivative(1, lo));
    CHECK(sup == doctest::Approx(0.798429751833600).epsilon(1e-12));
}

TEST_CASE("bump derivatives match central differences") {
    const double h = 1e-5;
    for (int k = 0; k < 6; ++k)
        for (double t : {-0.7, -0.2, 0.0, 0.33, 0.81}) {
            const double fd = (BumpProfile::derivative(k, t + h) - BumpProfile::derivative(k, t - h)) / (2 * h);
            CHECK(BumpProfile::derivative(k + 1, t) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
    CHECK(BumpProfile::value(1.0) == 0.0);
    CHECK(BumpProfile::derivative(3, -1.5) == 0.0);
    CHECK_THROWS_AS(BumpProfile::derivative(BumpProfile::kMaxOrder + 1, 0.0), UnsupportedOrder);
}

TEST_CASE("moment conditions for every supported order") {
    for (int q = 0; q <= kMaxMollifierOrder; ++q)
        for (bool strict : {false, true}) {
            CAPTURE(q);
            CAPTURE(strict);
            const auto phi = build_mollifier(q, strict);
            auto moment = [&](int i) { return tanh_sinh([&](double t) { return std::pow(t, i) * phi->value(t); }); };
            CHECK(std::abs(moment(0) - 1.0) <= 1e-11);
            for (int i = 1; i <= q; ++i) CHECK(std::abs(moment(i)) <= 1e-9);
            if (strict) CHECK(moment(q + 1) == doctest::Approx(kStrictMoment).epsilon(1e-9));
            const auto table = moments(*phi, q + 1);
            CHECK(table[0] == doctest::Approx(moment(0)).epsilon(1e-12));
        }
}

TEST_CASE("order q = 6 strict") {
    const auto phi = build_mollifier(6, true);
    const auto m = moments(*phi, 7);
    CHECK(std::abs(m[0] - 1.0) <= 1e-11);
    for (int i = 1; i <= 6; ++i) CHECK(std::abs(m[static_cast<std::size_t>(i)]) <= 1e-9);
    CHECK(std::abs(m[7]) >= 1e-3);
}

TEST_CASE("variants are distinct mollifiers of the same order") {
    const auto a = build_mollifier(2, true, 0);
    const auto b = build_mollifier(2, true, 1);
    CHECK(a->label() != b->label());
    CHECK(std::abs(a->value(0.3) - b->value(0.3)) > 1e-6);
    const auto mb = moments(*b, 3);
    CHECK(std::abs(mb[0] - 1.0) <= 1e-11);
    CHECK(std::abs(mb[1]) <= 1e-9);
    CHECK(std::abs(mb[2]) <= 1e-9);
}

TEST_CASE("support and derivatives of a mollifier") {
    const auto phi = build_mollifier(4, true);
    CHECK(phi->value(1.0) == 0.0);
    CHECK(phi->value(-1.2) == 0.0);
    const double h = 1e-5;
    for (double t : {-0.5, 0.1, 0.6}) {
        const double fd = (phi->value(t + h) - phi->value(t - h)) / (2 * h);
        CHECK(phi->derivative(1, t) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("scaled mollifier keeps unit mass") {
    const auto phi = build_mollifier(2, true);
    for (double eps : {0.5, 0.1, 0.01}) {
        const double mass = tanh_sinh([&](double x) { return phi->value(x / eps) / eps; }, -eps, eps);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(build_mollifier(kMaxMollifierOrder + 1), UnsupportedOrder);
    CHECK_THROWS_AS(build_mollifier(-1), InvalidArgument);
}

TEST_CASE("tensor mollifier in two dimensions") {
    const auto phi = make_tensor_mollifier<2>(build_mollifier(2, true));
    CHECK(phi->moment(MultiIndex<2>{}) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(std::abs(phi->moment(MultiIndex<2>({1, 1}))) <= 1e-9);
    CHECK(std::abs(phi->moment(MultiIndex<2>({2, 0}))) <= 1e-9);
    CHECK(phi->value(Point<2>{0.2, -0.3}) ==
          doctest::Approx(phi->factor(0).value(0.2) * phi->factor(1).value(-0.3)));
}
