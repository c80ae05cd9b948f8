#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "colombeau/colombeau.hpp"

using namespace colombeau;
using namespace colombeau::circle;

namespace {

double integrate(const std::function<double(double)>& f, double a, double b) {
    static boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b);
}

const double kHalfPi = kPi / 2;

KernelPtr omega(double eps, int q = 2) { return nets::fixed(q, true).at(eps); }

}  // namespace

TEST_CASE("Bell polynomials and the chain rule") {
    CHECK(bell_partial(3, 2, {2.0, 5.0}) == doctest::Approx(3.0 * 2.0 * 5.0));
    CHECK(bell_partial(4, 2, {1.0, 2.0, 3.0}) == doctest::Approx(4.0 * 1.0 * 3.0 + 3.0 * 2.0 * 2.0));
    // (exp o sin)'' at t
    const double t = 0.4;
    const std::vector<double> g{std::exp(std::sin(t)), std::exp(std::sin(t)), std::exp(std::sin(t))};
    const std::vector<double> h{std::sin(t), std::cos(t), -std::sin(t)};
    const double expected = std::exp(std::sin(t)) * (std::cos(t) * std::cos(t) - std::sin(t));
    CHECK(chain_rule(2, g, h) == doctest::Approx(expected));
}

TEST_CASE("circle diffeomorphisms") {
    const auto f = diffeo::sin_flow(0.3);
    for (double th : {0.1, 1.0, 2.5, 4.0, 6.0}) {
        CHECK(f.inverse(f(th)) == doctest::Approx(th).epsilon(1e-13));
        CHECK(f(th) == doctest::Approx(2.0 * std::atan2(std::exp(0.3) * std::sin(th / 2), std::cos(th / 2))).epsilon(1e-12));
        // group law of the flow
        CHECK(diffeo::sin_flow(0.1)(diffeo::sin_flow(0.2)(th)) == doctest::Approx(f(th)).epsilon(1e-12));
        const double h = 1e-6;
        CHECK(f.derivatives(th, 1)[1] == doctest::Approx((f(th + h) - f(th - h)) / (2 * h)).epsilon(1e-7));
    }
    CHECK(diffeo::rotation(0.5)(1.0) == doctest::Approx(1.5));
    CHECK_THROWS_AS(f.derivatives(0.0, CircleDiffeo::kJetOrder + 1), UnsupportedOrder);
    // generator of the flow is sin(theta) d/dtheta
    const double th = 1.2, t = 1e-5;
    CHECK((diffeo::sin_flow(t)(th) - diffeo::sin_flow(-t)(th)) / (2 * t) == doctest::Approx(std::sin(th)).epsilon(1e-8));
}

TEST_CASE("net kernels are normalized and localized") {
    const auto w = omega(0.1);
    for (double x : {0.05, 3.0, 6.2}) {
        const auto a = w->support(x);
        CHECK(a.hi - a.lo == doctest::Approx(0.2));
        const double mass = integrate([&](double y) { return w->density(0, 0, x, y); }, a.lo, a.hi);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w->density(0, 0, x, x + 0.15) == 0.0);
    }
    // d_x = -d_y on a translation-invariant kernel
    CHECK(w->density(1, 0, 1.0, 1.03) == doctest::Approx(-w->density(0, 1, 1.0, 1.03)));
}

TEST_CASE("kernel Lie derivatives") {
    const auto w = omega(0.2);
    const auto x = fields::sin_theta();
    const auto lx = lie_kernel_x(w, x);
    const auto ly = lie_kernel_y(w, x);
    const auto lsk = lie_kernel_sk(w, x);
    for (double p : {0.7, 2.0, 5.5})
        for (double dy : {-0.15, -0.03, 0.08}) {
            const double y = p + dy;
            // additivity
            CHECK(lsk->density(0, 0, p, y) == doctest::Approx(lx->density(0, 0, p, y) + ly->density(0, 0, p, y)).epsilon(1e-12));
            // X acts on the first slot
            const double h = 1e-6;
            const double fd = (w->density(0, 0, p + h, y) - w->density(0, 0, p - h, y)) / (2 * h);
            CHECK(lx->density(0, 0, p, y) == doctest::Approx(std::sin(p) * fd).epsilon(1e-6));
            // and as the divergence d_y(a k) on the second
            const double fdy = (std::sin(y + h) * w->density(0, 0, p, y + h) - std::sin(y - h) * w->density(0, 0, p, y - h)) / (2 * h);
            CHECK(ly->density(0, 0, p, y) == doctest::Approx(fdy).epsilon(1e-6));
        }
    // L^Y omega carries no mass
    for (double p : {0.3, 4.0}) {
        const auto a = ly->support(p);
        CHECK(std::abs(integrate([&](double y) { return ly->density(0, 0, p, y); }, a.lo, a.hi)) <= 1e-9);
    }
}

TEST_CASE("pairing through densities agrees with the algebraic path") {
    const auto w = omega(0.1);
    const auto x = fields::sin_theta();
    for (const auto& u : {dist::delta(1.0), dist::regular(smooth::cosine()), dist::derivative(1, dist::delta(2.0))})
        for (const auto& k : {w, lie_kernel_y(w, x), lie_kernel_sk(w, x)})
            for (double p : {0.95, 1.02, 2.05}) {
                const auto f = gm::iota(u);
                CHECK(evaluate_m(f, k, p, 0, {1e-12, true}) ==
                      doctest::Approx(evaluate_m(f, k, p, 0, {1e-12, false})).epsilon(1e-9).scale(1.0));
            }
}

TEST_CASE("ordinary Lie derivative is C-infinity linear in the field") {
    const auto w = omega(0.05);
    const auto f = gm::product(gm::iota(dist::delta(1.0)), gm::iota(dist::regular(smooth::cosine())));
    const auto g = smooth::exponential();
    const auto x = fields::sin_theta();
    for (double p : {0.97, 1.01, 3.0}) {
        const double lhs = evaluate_m(gm::ordinary_lie(f, fields::scaled_by(g, x)), w, p);
        CHECK(lhs == doctest::Approx(std::exp(p) * evaluate_m(gm::ordinary_lie(f, x), w, p)).epsilon(1e-12).scale(1.0));
    }
    CHECK_THROWS_AS(gm::ordinary_lie(f, fields::constant(1.0)), InvalidArgument);
}

TEST_CASE("ordinary minus generalized Lie derivative is the kernel term") {
    const auto w = omega(0.1);
    const auto x = fields::sin_theta();
    const auto f = gm::product(gm::iota(dist::delta(kHalfPi)), gm::iota(dist::regular(smooth::cosine())));
    for (double p : {1.5, 1.58, 1.64, 3.0}) {
        const double lhs = evaluate_m(gm::ordinary_lie(f, x), w, p) - evaluate_m(gm::generalized_lie(f, x), w, p);
        const double rhs = evaluate_diff(f, w, lie_kernel_sk(w, x), p);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("pullbacks") {
    const auto w = omega(0.1);
    const auto f = gm::product(gm::iota(dist::delta(1.0)), gm::sigma(smooth::cosine()));
    for (double p : {0.5, 0.95, 1.05}) {
        CHECK(evaluate_m(pullback_circle(f, diffeo::identity()), w, p) == doctest::Approx(evaluate_m(f, w, p)).scale(1.0));
        // rotation moves the point mass back by alpha; the kernel is translation invariant
        const double alpha = 0.4;
        const auto rotated = gm::product(gm::iota(dist::delta(1.0 - alpha)), gm::sigma(smooth::cosine(1.0, alpha)));
        CHECK(evaluate_m(pullback_circle(f, diffeo::rotation(alpha)), w, p) ==
              doctest::Approx(evaluate_m(rotated, w, p)).epsilon(1e-10).scale(1.0));
    }
    const auto s = singular_points(pullback_circle(gm::iota(dist::delta(1.0)), diffeo::rotation(0.4)));
    REQUIRE(s.size() == 1);
    CHECK(s[0] == doctest::Approx(0.6));
}

TEST_CASE("iota commutes with the generalized Lie derivative") {
    for (const auto& u : {dist::delta(kHalfPi), dist::regular(smooth::cosine()), dist::heaviside(1.0)})
        for (const auto& x : {fields::sin_theta(), fields::constant(1.0, Domain::Circle)}) {
            const auto r = commutation_deviation(u, x, nets::fixed(2, true), 1e-2);
            CAPTURE(r.u);
            CHECK(r.max_deviation <= 1e-7 * std::max(1.0, r.scale));
        }
}

TEST_CASE("flow derivative of the pullback") {
    const auto f = gm::product(gm::iota(dist::delta(kHalfPi)), gm::iota(dist::regular(smooth::cosine())));
    const auto r = flow_consistency(f, sin_field(), nets::fixed(2, true), 0.1, {1.5, 1.58, 1.62});
    CHECK(r.max_deviation <= 1e-5);
    const auto c = flow_consistency(gm::iota(dist::delta(1.0)), constant_field(), nets::fixed(2, true), 0.1, {0.95, 1.0});
    CHECK(c.max_deviation <= 1e-5);
}

TEST_CASE("second differentials are refused") {
    const auto f = gm::iota(dist::delta(1.0));
    CHECK_THROWS_AS(check_negligible_m(f, whole_circle(), nets::fixed(2), default_perturbations(2), 0, 1, 2),
                    UnsupportedDifferential);
    CHECK_THROWS_AS(check_moderate_m(f, whole_circle(), nets::fixed(2), {}, 0, 1), InvalidArgument);
}

TEST_CASE("perturbations have zero mass and vanishing moments") {
    for (const auto& pert : default_perturbations(2)) {
        const auto k = pert.at(0.1);
        const double x = 2.0;
        const auto a = k->support(x);
        for (int i = 0; i <= 2; ++i) {
            const double m = integrate([&](double y) { return std::pow(y - x, i) * k->density(0, 0, x, y); }, a.lo, a.hi);
            CHECK(std::abs(m) <= 1e-10);
        }
    }
}

TEST_CASE("test-object moderateness and stability under Lie derivatives") {
    ScanOptionsM opt;
    opt.grid = EpsGrid(1e-1, 1e-2, 8);
    opt.x_catalog = {fields::sin_theta()};
    const auto net = nets::fixed(2, true);
    const auto f = gm::iota(dist::delta(1.0));
    const auto base = check_moderate_m(f, whole_circle(), net, default_perturbations(2), 1, 1, opt);
    CHECK(base.moderate);
    CHECK(base.n(0) == 1);
    CHECK(base.n(1) == 2);
    for (const auto& g : {gm::generalized_lie(f, fields::sin_theta()), gm::ordinary_lie(f, fields::sin_theta())}) {
        const auto rep = check_moderate_m(g, whole_circle(), net, {}, 0, 0, opt);
        CAPTURE(g.str());
        CHECK(rep.moderate);
    }
}

TEST_CASE("test-object negligibility of iota minus sigma") {
    ScanOptionsM opt;
    opt.grid = EpsGrid(1e-1, 1e-2, 8);
    opt.x_catalog = {fields::sin_theta()};
    const auto f = gm::sub(gm::iota(dist::regular(smooth::sine())), gm::sigma(smooth::sine()));
    const auto rep = check_negligible_m(f, whole_circle(), nets::fixed(4, true), default_perturbations(4), 1, 5, 1, opt);
    CHECK(rep.negligible);
    CHECK(rep.certified_m() >= 5);
    const auto mod = check_moderate_m(f, whole_circle(), nets::fixed(4, true), {}, 1, 0, opt);
    CHECK(noderiv_shortcut_m(f, whole_circle(), nets::fixed(4, true), 5, &mod, opt).negligible);
    CHECK(noderiv_shortcut_m(f, whole_circle(), nets::fixed(4, true), 5, nullptr, opt).refused);
}

TEST_CASE("weak convergence and association on the circle") {
    const auto u = dist::delta(kHalfPi);
    const auto x = fields::sin_theta();
    AssociateOptions opt;
    opt.grid = EpsGrid(0.128, 1e-3, 8);
    const auto rep = associate_m(gm::covariant_scalar(gm::iota(u), x), {forms::exp_cos()}, default_nets(),
                                 lie_derivative_s1(u, x), opt);
    CHECK(rep.verdict.kind == AssociationKind::AssociatedTo);
    CHECK(rep.max_deviation() <= 1e-3);
    // <sin delta', exp(cos)> = -(sin exp(cos))'(pi/2) = -cos(pi/2) e^0 + sin^2(pi/2) e^0 = 1
    for (const auto& r : rep.rows) CHECK(*r.candidate_value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("escalating net orders grow along the grid") {
    const auto net = nets::escalating();
    CHECK(net.order(0.5) == 1);
    CHECK(net.order(1.0 / 64) == 6);
    CHECK(net.order(1e-6) == nets::kEscalationCap);
    const auto k = net.at(1.0 / 16);
    const auto a = k->support(1.0);
    CHECK(integrate([&](double y) { return k->density(0, 0, 1.0, y); }, a.lo, a.hi) == doctest::Approx(1.0).epsilon(1e-11));
}
