#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "colombeau/bump.hpp"
#include "colombeau/errors.hpp"
#include "colombeau/multi_index.hpp"

namespace colombeau {

/// Smooth function with analytic derivatives, R^n -> R.
template <int Dim>
class SmoothFunction {
public:
    using Eval = std::function<double(const MultiIndex<Dim>&, const Point<Dim>&)>;
    static constexpr int kUnbounded = 64;

    SmoothFunction() = default;
    SmoothFunction(std::string name, Eval eval, int max_order = kUnbounded)
        : name_(std::move(name)), eval_(std::make_shared<const Eval>(std::move(eval))),
          max_order_(max_order) {}

    const std::string& name() const { return name_; }
    int max_order() const { return max_order_; }
    bool valid() const { return static_cast<bool>(eval_); }

    double operator()(const Point<Dim>& x) const { return (*eval_)(MultiIndex<Dim>{}, x); }

    double derivative(const MultiIndex<Dim>& k, const Point<Dim>& x) const {
        if (k.order() > max_order_)
            throw UnsupportedOrder("derivative of order " + format_real(k.order()) + " of " +
                                   name_ + " unavailable");
        return (*eval_)(k, x);
    }

    double operator()(double x) const
        requires(Dim == 1)
    {
        return (*this)(Point<1>{x});
    }

    double derivative(int k, double x) const
        requires(Dim == 1)
    {
        return derivative(MultiIndex<1>({k}), Point<1>{x});
    }

private:
    std::string name_;
    std::shared_ptr<const Eval> eval_;
    int max_order_ = kUnbounded;
};

namespace smooth {

template <int Dim = 1>
SmoothFunction<Dim> constant(double c) {
    return SmoothFunction<Dim>(format_real(c),
                               [c](const MultiIndex<Dim>& k, const Point<Dim>&) {
                                   return k.order() == 0 ? c : 0.0;
                               });
}

/// sum_i coeffs[i] x^i.
inline SmoothFunction<1> polynomial(std::vector<double> coeffs, std::string name = "poly") {
    return SmoothFunction<1>(std::move(name), [coeffs](const MultiIndex<1>& k, const Point<1>& x) {
        const int d = k[0];
        double s = 0.0;
        for (int i = static_cast<int>(coeffs.size()) - 1; i >= d; --i) {
            double c = coeffs[static_cast<std::size_t>(i)];
            for (int j = 0; j < d; ++j) c *= (i - j);
            s = s * x[0] + c;
        }
        return s;
    });
}

inline SmoothFunction<1> identity() { return polynomial({0.0, 1.0}, "x"); }

/// sin(freq x + phase).
inline SmoothFunction<1> sine(double freq = 1.0, double phase = 0.0, std::string name = "sin") {
    return SmoothFunction<1>(std::move(name), [freq, phase](const MultiIndex<1>& k, const Point<1>& x) {
        return std::pow(freq, k[0]) *
               std::sin(freq * x[0] + phase + 0.5 * std::numbers::pi * k[0]);
    });
}

inline SmoothFunction<1> cosine(double freq = 1.0, double phase = 0.0, std::string name = "cos") {
    return sine(freq, phase + 0.5 * std::numbers::pi, std::move(name));
}

inline SmoothFunction<1> exponential(double rate = 1.0, std::string name = "exp") {
    return SmoothFunction<1>(std::move(name), [rate](const MultiIndex<1>& k, const Point<1>& x) {
        return std::pow(rate, k[0]) * std::exp(rate * x[0]);
    });
}

/// b((x - center) / radius).
inline SmoothFunction<1> bump(double center = 0.0, double radius = 1.0) {
    return SmoothFunction<1>(
        "bump", [center, radius](const MultiIndex<1>& k, const Point<1>& x) {
            return std::pow(radius, -k[0]) * BumpProfile::derivative(k[0], (x[0] - center) / radius);
        },
        BumpProfile::kMaxOrder);
}

template <int Dim>
SmoothFunction<Dim> product(const SmoothFunction<Dim>& f, const SmoothFunction<Dim>& g) {
    return SmoothFunction<Dim>(
        f.name() + "*" + g.name(),
        [f, g](const MultiIndex<Dim>& k, const Point<Dim>& x) {
            double s = 0.0;
            for_each_sub_index(k, [&](const MultiIndex<Dim>& j) {
                s += binomial(k, j) * f.derivative(j, x) * g.derivative(k - j, x);
            });
            return s;
        },
        std::min(f.max_order(), g.max_order()));
}

template <int Dim>
SmoothFunction<Dim> linear_combination(double a, const SmoothFunction<Dim>& f, double b,
                                       const SmoothFunction<Dim>& g) {
    return SmoothFunction<Dim>(
        "(" + format_real(a) + "*" + f.name() + "+" + format_real(b) + "*" + g.name() + ")",
        [a, f, b, g](const MultiIndex<Dim>& k, const Point<Dim>& x) {
            return a * f.derivative(k, x) + b * g.derivative(k, x);
        },
        std::min(f.max_order(), g.max_order()));
}

template <int Dim>
SmoothFunction<Dim> scaled(double a, const SmoothFunction<Dim>& f) {
    return SmoothFunction<Dim>(
        format_real(a) + "*" + f.name(),
        [a, f](const MultiIndex<Dim>& k, const Point<Dim>& x) { return a * f.derivative(k, x); },
        f.max_order());
}

/// f shifted by `order` derivatives, used for derivative transfer.
template <int Dim>
SmoothFunction<Dim> differentiated(const SmoothFunction<Dim>& f, const MultiIndex<Dim>& by) {
    return SmoothFunction<Dim>(
        "d[" + by.str() + "]" + f.name(),
        [f, by](const MultiIndex<Dim>& k, const Point<Dim>& x) { return f.derivative(k + by, x); },
        f.max_order() - by.order());
}

/// f1(x1) * f2(x2).
inline SmoothFunction<2> separable(const SmoothFunction<1>& f1, const SmoothFunction<1>& f2) {
    return SmoothFunction<2>(f1.name() + "(x1)*" + f2.name() + "(x2)",
                             [f1, f2](const MultiIndex<2>& k, const Point<2>& x) {
                                 return f1.derivative(k[0], x[0]) * f2.derivative(k[1], x[1]);
                             },
                             std::min(f1.max_order(), f2.max_order()));
}

/// Function of a single coordinate of R^2.
inline SmoothFunction<2> along_axis(const SmoothFunction<1>& f, int axis) {
    return SmoothFunction<2>(f.name() + "(x" + format_real(axis + 1) + ")",
                             [f, axis](const MultiIndex<2>& k, const Point<2>& x) {
                                 const int other = 1 - axis;
                                 if (k[static_cast<std::size_t>(other)] != 0) return 0.0;
                                 return f.derivative(k[static_cast<std::size_t>(axis)],
                                                     x[static_cast<std::size_t>(axis)]);
                             },
                             f.max_order());
}

}  // namespace smooth

enum class Domain { Euclidean, Circle };

/// Smooth vector field X = X^a d_a. On the circle the single coefficient must be 2 pi periodic.
template <int Dim>
struct VectorField {
    std::array<SmoothFunction<Dim>, Dim> components;
    Domain domain = Domain::Euclidean;
    std::string name;

    const SmoothFunction<Dim>& coefficient(std::size_t a) const { return components[a]; }
};

namespace fields {

inline VectorField<1> along(SmoothFunction<1> a, Domain domain = Domain::Euclidean) {
    VectorField<1> x;
    x.name = "(" + a.name() + ")d";
    x.components = {std::move(a)};
    x.domain = domain;
    return x;
}

inline VectorField<1> constant(double c, Domain domain = Domain::Euclidean) {
    return along(smooth::constant<1>(c), domain);
}

/// sin(theta) d_theta on the circle.
inline VectorField<1> sin_theta() { return along(smooth::sine(), Domain::Circle); }

/// f X for a smooth prefactor f.
inline VectorField<1> scaled_by(const SmoothFunction<1>& f, const VectorField<1>& x) {
    return along(smooth::product(f, x.components[0]), x.domain);
}

}  // namespace fields

}  // namespace colombeau
