#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/differentiation/autodiff.hpp>

#include "colombeau/distributions.hpp"
#include "colombeau/errors.hpp"
#include "colombeau/multi_index.hpp"

namespace colombeau::circle {

inline constexpr double kPi = std::numbers::pi;

/// Angle with canonical representative in [0, 2 pi).
class CirclePoint {
public:
    CirclePoint() = default;
    explicit CirclePoint(double theta) : theta_(canonical(theta)) {}

    double theta() const { return theta_; }

    static double canonical(double theta) {
        double t = std::fmod(theta, kTwoPi);
        if (t < 0.0) t += kTwoPi;
        if (t >= kTwoPi) t = 0.0;
        return t;
    }

    CirclePoint operator+(double d) const { return CirclePoint(theta_ + d); }

    /// Geodesic distance for the round metric d theta^2, at most pi.
    friend double distance(const CirclePoint& a, const CirclePoint& b) {
        return std::abs(periodic_offset(a.theta_ - b.theta_, kTwoPi));
    }

private:
    double theta_ = 0.0;
};

/// Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}), x[i-1] = x_i.
inline double bell_partial(int n, int k, const std::vector<double>& x) {
    if (n == 0 && k == 0) return 1.0;
    if (n == 0 || k == 0) return 0.0;
    // table[m][j] = B_{m,j}
    std::vector<std::vector<double>> table(static_cast<std::size_t>(n) + 1,
                                           std::vector<double>(static_cast<std::size_t>(k) + 1, 0.0));
    table[0][0] = 1.0;
    for (int m = 1; m <= n; ++m)
        for (int j = 1; j <= std::min(m, k); ++j) {
            double s = 0.0;
            for (int i = 1; i <= m - j + 1; ++i)
                s += binomial(m - 1, i - 1) * x[static_cast<std::size_t>(i) - 1] *
                     table[static_cast<std::size_t>(m - i)][static_cast<std::size_t>(j) - 1];
            table[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = s;
        }
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

/// d^n/dx^n G(h(x)) from g[j] = G^(j)(h(x)) and h[i] = h^(i)(x), i >= 1 (Faa di Bruno).
inline double chain_rule(int n, const std::vector<double>& g, const std::vector<double>& h) {
    if (n == 0) return g[0];
    std::vector<double> x(h.begin() + 1, h.end());
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += g[static_cast<std::size_t>(k)] * bell_partial(n, k, x);
    return s;
}

/// Orientation-preserving diffeomorphism of the circle, given by a lift
/// R -> R with lift(t + 2 pi) = lift(t) + 2 pi and the lift of its inverse.
class CircleDiffeo {
public:
    static constexpr int kJetOrder = 10;
    using Jet = boost::math::differentiation::autodiff_fvar<double, kJetOrder>;
    using Lift = std::function<Jet(const Jet&)>;

    CircleDiffeo(std::string name, Lift lift, Lift inverse_lift)
        : name_(std::move(name)), lift_(std::make_shared<const Lift>(std::move(lift))),
          inverse_(std::make_shared<const Lift>(std::move(inverse_lift))) {
        validate();
    }

    const std::string& name() const { return name_; }

    double operator()(double theta) const { return jet(*lift_, theta, 0)[0]; }
    double inverse(double theta) const { return jet(*inverse_, theta, 0)[0]; }

    /// [psi(t), psi'(t), ..., psi^(n)(t)].
    std::vector<double> derivatives(double theta, int n) const { return jet(*lift_, theta, n); }
    std::vector<double> inverse_derivatives(double theta, int n) const { return jet(*inverse_, theta, n); }

    CircleDiffeo inverted() const {
        CircleDiffeo d = *this;
        std::swap(d.lift_, d.inverse_);
        d.name_ = "inv(" + name_ + ")";
        return d;
    }

private:
    static std::vector<double> jet(const Lift& f, double theta, int n) {
        if (n > kJetOrder) throw UnsupportedOrder("diffeomorphism jet order " + std::to_string(n) + " unavailable");
        const Jet y = f(boost::math::differentiation::make_fvar<double, kJetOrder>(theta));
        std::vector<double> out(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(y.derivative(static_cast<std::size_t>(i)));
        return out;
    }

    void validate() const {
        constexpr int kSamples = 64;
        for (int i = 0; i < kSamples; ++i) {
            const double t = kTwoPi * i / kSamples;
            const auto d = derivatives(t, 1);
            if (!(d[1] > 0.0)) throw InvalidArgument(name_ + " is not orientation preserving");
            if (std::abs((*this)(t + kTwoPi) - d[0] - kTwoPi) > 1e-9)
                throw InvalidArgument(name_ + " lift is not equivariant under 2 pi shifts");
            if (std::abs(inverse(d[0]) - t) > 1e-9) throw InvalidArgument(name_ + " inverse does not invert the map");
        }
    }

    std::string name_;
    std::shared_ptr<const Lift> lift_;
    std::shared_ptr<const Lift> inverse_;
};

namespace diffeo {

inline CircleDiffeo identity() {
    return CircleDiffeo("id", [](const CircleDiffeo::Jet& t) { return t; },
                        [](const CircleDiffeo::Jet& t) { return t; });
}

inline CircleDiffeo rotation(double alpha) {
    return CircleDiffeo("rot(" + format_real(alpha) + ")", [alpha](const CircleDiffeo::Jet& t) { return t + alpha; },
                        [alpha](const CircleDiffeo::Jet& t) { return t - alpha; });
}

namespace detail {

/// Lift of theta -> 2 atan2(e^t sin(theta/2), cos(theta/2)). The half angle
/// never leaves its quadrant, so the displacement is the wrapped difference.
inline CircleDiffeo::Jet sin_flow_lift(const CircleDiffeo::Jet& theta, double t) {
    using std::atan2;
    using std::cos;
    using std::sin;
    const auto half = theta * 0.5;
    const auto moved = atan2(std::exp(t) * sin(half), cos(half));
    const auto base = atan2(sin(half), cos(half));
    auto delta = moved - base;
    const double turns = std::round(static_cast<double>(delta.derivative(0)) / kTwoPi);
    delta -= turns * kTwoPi;
    return theta + 2.0 * delta;
}

}  // namespace detail

/// Time-t flow of sin(theta) d_theta.
inline CircleDiffeo sin_flow(double t) {
    return CircleDiffeo("Fl[sin](" + format_real(t) + ")",
                        [t](const CircleDiffeo::Jet& th) { return detail::sin_flow_lift(th, t); },
                        [t](const CircleDiffeo::Jet& th) { return detail::sin_flow_lift(th, -t); });
}

/// Time-t flow of c d_theta.
inline CircleDiffeo constant_flow(double c, double t) { return rotation(c * t); }

}  // namespace diffeo

/// Vector field with a known flow, as needed by the pullback tests.
struct FlowField {
    VectorField<1> field;
    std::function<CircleDiffeo(double)> flow;
};

inline FlowField sin_field() { return {fields::sin_theta(), diffeo::sin_flow}; }

inline FlowField constant_field(double c = 1.0) {
    return {fields::constant(c, Domain::Circle), [c](double t) { return diffeo::constant_flow(c, t); }};
}

/// Smooth 2 pi periodic density mu(theta) d theta, used as a test form.
inline TestFunction<1> periodic_test_form(const SmoothFunction<1>& mu) {
    return TestFunction<1>::from_smooth(mu, quad::Box<1>{{0.0}, {kTwoPi}, {}}, kTwoPi);
}

namespace forms {

/// exp(cos theta): mu'(pi/2) = -1.
inline SmoothFunction<1> exp_cos() {
    return SmoothFunction<1>("exp(cos)", [](const MultiIndex<1>& k, const Point<1>& x) {
        // d^n exp(cos t) by Faa di Bruno with cos^(i)(t) = cos(t + i pi/2).
        const int n = k[0];
        const double e = std::exp(std::cos(x[0]));
        if (n == 0) return e;
        std::vector<double> g(static_cast<std::size_t>(n) + 1, e);
        std::vector<double> h(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) h[static_cast<std::size_t>(i)] = std::cos(x[0] + 0.5 * kPi * i);
        return chain_rule(n, g, h);
    }, kMaxDerivativeOrder + 8);
}

/// 1 + sin(theta)/2 + cos(2 theta)/4.
inline SmoothFunction<1> trig_mix() {
    return smooth::linear_combination(
        1.0, smooth::linear_combination(1.0, smooth::constant<1>(1.0), 0.5, smooth::sine()), 0.25,
        smooth::cosine(2.0));
}

}  // namespace forms

}  // namespace colombeau::circle
