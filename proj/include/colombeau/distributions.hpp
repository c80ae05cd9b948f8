#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "colombeau/errors.hpp"
#include "colombeau/mollifier.hpp"
#include "colombeau/multi_index.hpp"
#include "colombeau/quadrature.hpp"
#include "colombeau/smooth.hpp"
#include "colombeau/split_value.hpp"

namespace colombeau {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// d reduced to [-period/2, period/2]; identity when period == 0.
inline double periodic_offset(double d, double period) {
    if (period <= 0.0) return d;
    return d - period * std::round(d / period);
}

/// Smooth compactly supported argument of a distribution.
///
/// A test function built by `kernel` remembers that it is
/// y -> sign * d_x^k [eps^{-n} phi((y - x)/eps)], so smooth pairings can be
/// evaluated by Taylor expansion instead of quadrature.
template <int Dim>
class TestFunction {
public:
    using Eval = std::function<double(const MultiIndex<Dim>&, const Point<Dim>&)>;

    struct Kernel {
        MollifierNDPtr<Dim> mollifier;
        double eps = 1.0;
        Point<Dim> center{};
        MultiIndex<Dim> x_order{};
        double sign = 1.0;
    };

    TestFunction() = default;

    static TestFunction from_smooth(const SmoothFunction<Dim>& f, quad::Box<Dim> support,
                                    double period = 0.0) {
        TestFunction t;
        t.name_ = f.name();
        t.eval_ = std::make_shared<const Eval>(
            [f, support, period](const MultiIndex<Dim>& l, const Point<Dim>& y) {
                if (period <= 0.0)
                    for (std::size_t a = 0; a < Dim; ++a)
                        if (y[a] < support.lo[a] || y[a] > support.hi[a]) return 0.0;
                return f.derivative(l, y);
            });
        t.support_ = std::move(support);
        t.period_ = period;
        return t;
    }

    /// Arbitrary smooth psi given by its derivatives; eval must vanish off the support.
    static TestFunction from_eval(std::string name, Eval eval, quad::Box<Dim> support, double period = 0.0) {
        TestFunction t;
        t.name_ = std::move(name);
        t.eval_ = std::make_shared<const Eval>(std::move(eval));
        t.support_ = std::move(support);
        t.period_ = period;
        return t;
    }

    /// y -> sign * d_x^k tau_x phi_eps(y) at x = center; on the circle the offset y - x is wrapped.
    static TestFunction kernel(MollifierNDPtr<Dim> mollifier, double eps, Point<Dim> center,
                               MultiIndex<Dim> x_order = {}, double period = 0.0, double sign = 1.0) {
        if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
        colombeau::require_order(x_order);
        TestFunction t;
        Kernel tag{std::move(mollifier), eps, center, x_order, sign};
        t.name_ = "kernel[" + tag.mollifier->label() + ",eps=" + format_real(eps) + "]";
        t.eval_ = std::make_shared<const Eval>([tag, period](const MultiIndex<Dim>& l, const Point<Dim>& y) {
            Point<Dim> s;
            for (std::size_t a = 0; a < Dim; ++a) {
                s[a] = periodic_offset(y[a] - tag.center[a], period) / tag.eps;
                if (!(std::abs(s[a]) < 1.0)) return 0.0;
            }
            const MultiIndex<Dim> total = tag.x_order + l;
            return tag.sign * sign_pow(tag.x_order.order()) *
                   std::pow(tag.eps, -(Dim + total.order())) * tag.mollifier->derivative(total, s);
        });
        for (std::size_t a = 0; a < Dim; ++a) {
            t.support_.lo[a] = center[a] - eps;
            t.support_.hi[a] = center[a] + eps;
        }
        t.period_ = period;
        t.kernel_ = std::move(tag);
        return t;
    }

    const std::string& name() const { return name_; }
    const quad::Box<Dim>& support() const { return support_; }
    double period() const { return period_; }
    const std::optional<Kernel>& kernel_tag() const { return kernel_; }

    double operator()(const Point<Dim>& y) const { return derivative(MultiIndex<Dim>{}, y); }

    double derivative(const MultiIndex<Dim>& l, const Point<Dim>& y) const {
        check_order(shift_ + l);
        return scale_ * (*eval_)(shift_ + l, y);
    }

    double operator()(double y) const
        requires(Dim == 1)
    {
        return (*this)(Point<1>{y});
    }

    /// d^l psi as a test function.
    TestFunction derivative(const MultiIndex<Dim>& l) const {
        check_order(shift_ + l);
        if (kernel_) {
            // d_y = -d_x on tau_x phi_eps.
            TestFunction t = kernel(kernel_->mollifier, kernel_->eps, kernel_->center,
                                    kernel_->x_order + l, period_, kernel_->sign * sign_pow(l.order()));
            t.transferred_ = transferred_ + l.order();
            t.name_ = "d[" + l.str() + "]" + name_;
            return t;
        }
        TestFunction t = *this;
        t.shift_ = shift_ + l;
        t.name_ = "d[" + l.str() + "]" + name_;
        return t;
    }

    TestFunction scaled(double s) const {
        TestFunction t = *this;
        if (kernel_) {
            t = kernel(kernel_->mollifier, kernel_->eps, kernel_->center, kernel_->x_order, period_,
                       kernel_->sign * s);
            t.transferred_ = transferred_;
            t.name_ = format_real(s) + "*" + name_;
            return t;
        }
        t.scale_ *= s;
        t.name_ = format_real(s) + "*" + name_;
        return t;
    }

    /// g * psi, differentiated by Leibniz.
    TestFunction times(const SmoothFunction<Dim>& g) const {
        TestFunction base = *this;
        TestFunction t;
        t.name_ = g.name() + "*" + name_;
        t.eval_ = std::make_shared<const Eval>([base, g](const MultiIndex<Dim>& l, const Point<Dim>& y) {
            double s = 0.0;
            for_each_sub_index(l, [&](const MultiIndex<Dim>& j) {
                const double v = base.unchecked_derivative(l - j, y);
                if (v != 0.0) s += binomial(l, j) * g.derivative(j, y) * v;
            });
            return s;
        });
        t.support_ = support_;
        t.period_ = period_;
        t.transferred_ = transferred_order();
        return t;
    }

    /// Derivative orders already transferred onto psi (capped jointly with new requests).
    int transferred_order() const { return transferred_ + shift_.order(); }

private:
    double unchecked_derivative(const MultiIndex<Dim>& l, const Point<Dim>& y) const {
        return scale_ * (*eval_)(shift_ + l, y);
    }

    void check_order(const MultiIndex<Dim>& l) const {
        colombeau::require_order(l, kMaxDerivativeOrder - transferred_);
    }

    std::string name_;
    std::shared_ptr<const Eval> eval_;
    quad::Box<Dim> support_{};
    double period_ = 0.0;
    double scale_ = 1.0;
    MultiIndex<Dim> shift_{};
    int transferred_ = 0;
    std::optional<Kernel> kernel_;
};

/// Piecewise-smooth locally integrable function with declared kinks.
template <int Dim>
class RegularFunction {
public:
    using Value = std::function<double(const Point<Dim>&)>;

    RegularFunction() = default;
    RegularFunction(std::string name, Value value, std::array<std::vector<double>, Dim> breakpoints,
                    quad::Box<Dim> support = unbounded())
        : name_(std::move(name)), value_(std::make_shared<const Value>(std::move(value))),
          breakpoints_(std::move(breakpoints)), support_(std::move(support)) {}

    explicit RegularFunction(SmoothFunction<Dim> f, quad::Box<Dim> support = unbounded())
        : name_(f.name()), breakpoints_{}, support_(std::move(support)), smooth_(f) {
        value_ = std::make_shared<const Value>([f](const Point<Dim>& x) { return f(x); });
    }

    static quad::Box<Dim> unbounded() {
        quad::Box<Dim> b;
        b.lo.fill(-kInfinity);
        b.hi.fill(kInfinity);
        return b;
    }

    const std::string& name() const { return name_; }
    double operator()(const Point<Dim>& x) const { return (*value_)(x); }
    const std::array<std::vector<double>, Dim>& breakpoints() const { return breakpoints_; }
    const quad::Box<Dim>& support() const { return support_; }

    /// Present when the function is smooth with analytic derivatives.
    const std::optional<SmoothFunction<Dim>>& smooth() const { return smooth_; }

private:
    std::string name_;
    std::shared_ptr<const Value> value_;
    std::array<std::vector<double>, Dim> breakpoints_{};
    quad::Box<Dim> support_ = unbounded();
    std::optional<SmoothFunction<Dim>> smooth_;
};

namespace regular {

inline RegularFunction<1> heaviside(double a = 0.0) {
    quad::Box<1> support{{a}, {kInfinity}, {}};
    return RegularFunction<1>("heaviside@" + format_real(a),
                              [a](const Point<1>& x) { return x[0] >= a ? 1.0 : 0.0; }, {{{a}}},
                              support);
}

inline RegularFunction<1> abs_x() {
    return RegularFunction<1>("abs-x", [](const Point<1>& x) { return std::abs(x[0]); }, {{{0.0}}});
}

/// |x| b(x/2), the compactly supported continuous factor of the product compatibility test.
inline RegularFunction<1> abs_x_bump() {
    quad::Box<1> support{{-2.0}, {2.0}, {}};
    return RegularFunction<1>(
        "abs-x-bump", [](const Point<1>& x) { return std::abs(x[0]) * BumpProfile::value(0.5 * x[0]); },
        {{{0.0}}}, support);
}

/// x^2 b(x/2)^2, the classical square of abs_x_bump.
inline SmoothFunction<1> x2_bump2() {
    return smooth::product(smooth::product(smooth::identity(), smooth::identity()),
                           smooth::product(smooth::bump(0.0, 2.0), smooth::bump(0.0, 2.0)));
}

inline RegularFunction<1> piecewise(std::string name, std::function<double(double)> f,
                                    std::vector<double> breakpoints) {
    return RegularFunction<1>(std::move(name), [f](const Point<1>& x) { return f(x[0]); },
                              {std::move(breakpoints)});
}

}  // namespace regular

template <int Dim>
class Distribution;

template <int Dim>
struct DeltaAt {
    Point<Dim> at{};
};

template <int Dim>
struct DerivativeOf {
    MultiIndex<Dim> order{};
    Distribution<Dim> inner;
};

template <int Dim>
struct RegularDist {
    RegularFunction<Dim> f;
};

template <int Dim>
struct LinearCombination {
    std::vector<std::pair<double, Distribution<Dim>>> terms;
};

/// g T for smooth g, paired as <T, g psi>.
template <int Dim>
struct MultipliedBy {
    SmoothFunction<Dim> g;
    Distribution<Dim> inner;
};

template <int Dim>
class Distribution {
public:
    using Node = std::variant<DeltaAt<Dim>, DerivativeOf<Dim>, RegularDist<Dim>, LinearCombination<Dim>,
                              MultipliedBy<Dim>>;

    Distribution() : Distribution(LinearCombination<Dim>{}) {}

    template <class N>
        requires is_one_of_v<N, DeltaAt<Dim>, DerivativeOf<Dim>, RegularDist<Dim>, LinearCombination<Dim>,
                             MultipliedBy<Dim>>
    Distribution(N node) : node_(std::make_shared<const Node>(std::move(node))) {}

    const Node& node() const { return *node_; }

    template <class N>
    const N* as() const {
        return std::get_if<N>(node_.get());
    }

    std::string str() const {
        return std::visit(
            [](const auto& n) -> std::string {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, DeltaAt<Dim>>) {
                    std::string s = "delta@";
                    for (std::size_t a = 0; a < Dim; ++a) s += (a ? "," : "") + format_real(n.at[a]);
                    return s;
                } else if constexpr (std::is_same_v<N, DerivativeOf<Dim>>) {
                    return "d[" + n.order.str() + "](" + n.inner.str() + ")";
                } else if constexpr (std::is_same_v<N, RegularDist<Dim>>) {
                    return n.f.name();
                } else if constexpr (std::is_same_v<N, LinearCombination<Dim>>) {
                    if (n.terms.empty()) return "0";
                    std::string s;
                    for (std::size_t i = 0; i < n.terms.size(); ++i) {
                        if (i) s += " + ";
                        if (n.terms[i].first != 1.0) s += format_real(n.terms[i].first) + "*";
                        s += n.terms[i].second.str();
                    }
                    return n.terms.size() == 1 ? s : "(" + s + ")";
                } else {
                    return n.g.name() + "*" + n.inner.str();
                }
            },
            *node_);
    }

private:
    std::shared_ptr<const Node> node_;
};

namespace dist {

template <int Dim = 1>
Distribution<Dim> zero() {
    return Distribution<Dim>(LinearCombination<Dim>{});
}

inline Distribution<1> delta(double a = 0.0) { return DeltaAt<1>{{a}}; }

template <int Dim>
Distribution<Dim> delta_at(Point<Dim> a) {
    return DeltaAt<Dim>{a};
}

inline Distribution<1> heaviside(double a = 0.0) { return RegularDist<1>{regular::heaviside(a)}; }

template <int Dim>
Distribution<Dim> regular(RegularFunction<Dim> f) {
    return RegularDist<Dim>{std::move(f)};
}

template <int Dim>
Distribution<Dim> regular(SmoothFunction<Dim> f) {
    return RegularDist<Dim>{RegularFunction<Dim>(std::move(f))};
}

template <int Dim>
Distribution<Dim> derivative(const MultiIndex<Dim>& l, Distribution<Dim> t) {
    require_order(l);
    return DerivativeOf<Dim>{l, std::move(t)};
}

inline Distribution<1> derivative(int k, Distribution<1> t) {
    return derivative(MultiIndex<1>({k}), std::move(t));
}

template <int Dim>
Distribution<Dim> combination(std::vector<std::pair<double, Distribution<Dim>>> terms) {
    return LinearCombination<Dim>{std::move(terms)};
}

template <int Dim>
Distribution<Dim> scaled(double w, Distribution<Dim> t) {
    return combination<Dim>({{w, std::move(t)}});
}

template <int Dim>
Distribution<Dim> sum(Distribution<Dim> a, Distribution<Dim> b) {
    return combination<Dim>({{1.0, std::move(a)}, {1.0, std::move(b)}});
}

template <int Dim>
Distribution<Dim> difference(Distribution<Dim> a, Distribution<Dim> b) {
    return combination<Dim>({{1.0, std::move(a)}, {-1.0, std::move(b)}});
}

template <int Dim>
Distribution<Dim> multiplied(SmoothFunction<Dim> g, Distribution<Dim> t) {
    return MultipliedBy<Dim>{std::move(g), std::move(t)};
}

}  // namespace dist

/// The smooth function represented by T, when T is built from smooth regular parts only.
template <int Dim>
std::optional<SmoothFunction<Dim>> smooth_part(const Distribution<Dim>& t) {
    if (const auto* r = t.template as<RegularDist<Dim>>()) {
        const auto& s = r->f.smooth();
        if (!s) return std::nullopt;
        const auto& box = r->f.support();
        for (std::size_t a = 0; a < Dim; ++a)
            if (std::isfinite(box.lo[a]) || std::isfinite(box.hi[a])) return std::nullopt;
        return s;
    }
    if (const auto* d = t.template as<DerivativeOf<Dim>>()) {
        auto inner = smooth_part(d->inner);
        if (!inner) return std::nullopt;
        return smooth::differentiated(*inner, d->order);
    }
    if (const auto* m = t.template as<MultipliedBy<Dim>>()) {
        auto inner = smooth_part(m->inner);
        if (!inner) return std::nullopt;
        return smooth::product(m->g, *inner);
    }
    if (const auto* c = t.template as<LinearCombination<Dim>>()) {
        if (c->terms.empty()) return smooth::constant<Dim>(0.0);
        std::optional<SmoothFunction<Dim>> acc;
        for (const auto& [w, term] : c->terms) {
            auto s = smooth_part(term);
            if (!s) return std::nullopt;
            acc = acc ? smooth::linear_combination(1.0, *acc, w, *s) : smooth::scaled(w, *s);
        }
        return acc;
    }
    return std::nullopt;
}

namespace detail {

inline const quad::Rule& remainder_rule() {
    static const quad::Rule rule = [] {
        quad::Rule r = quad::gauss_legendre(16);
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
            r.weights[i] *= 0.5;
        }
        return r;
    }();
    return rule;
}

/// sum over |alpha| = order of d^alpha g(x) (eps)^alpha m_alpha / alpha!, with the
/// nominal moments m_i = 0 for 1 <= i <= q. Returns nullopt past the cached table.
template <int Dim>
std::optional<double> series_term(const SmoothFunction<Dim>& g, const MultiIndex<Dim>& base,
                                  const MollifierND<Dim>& phi, double eps, const PointArg<Dim>& x,
                                  int order) {
    double term = 0.0;
    bool available = true;
    for_each_index_of_order<Dim>(order, [&](const MultiIndex<Dim>& alpha) {
        double m = 1.0;
        for (std::size_t a = 0; a < Dim; ++a) {
            const Mollifier1D& f = phi.factor(a);
            const int i = alpha[a];
            if (i >= 1 && i <= f.order()) {
                m = 0.0;
                return;
            }
            if (i >= static_cast<int>(f.series_moments().size())) {
                available = false;
                return;
            }
            m *= i == 0 ? 1.0 : f.series_moments()[static_cast<std::size_t>(i)] / factorial(i);
        }
        if (m == 0.0) return;
        term += g.derivative(base + alpha, x) * m;
    });
    if (!available) return std::nullopt;
    return term * std::pow(eps, order);
}

/// Integral form of the Taylor remainder past order q, used when the series is unavailable.
template <int Dim>
double taylor_remainder(const SmoothFunction<Dim>& g, const MultiIndex<Dim>& base,
                        const MollifierND<Dim>& phi, double eps, const PointArg<Dim>& x) {
    const int q = phi.order();
    const quad::Rule& srule = remainder_rule();
    auto integrand = [&](const Point<Dim>& t) {
        double r = 0.0;
        for (std::size_t si = 0; si < srule.nodes.size(); ++si) {
            const double s = srule.nodes[si];
            Point<Dim> y;
            for (std::size_t a = 0; a < Dim; ++a) y[a] = x[a] + s * eps * t[a];
            double h = 0.0;
            for_each_index_of_order<Dim>(q + 1, [&](const MultiIndex<Dim>& j) {
                double c = factorial(q + 1);
                double p = 1.0;
                for (std::size_t a = 0; a < Dim; ++a) {
                    c /= factorial(j[a]);
                    p *= std::pow(eps * t[a], j[a]);
                }
                h += c * p * g.derivative(base + j, y);
            });
            r += srule.weights[si] * std::pow(1.0 - s, q) * h;
        }
        return r / factorial(q);
    };
    if constexpr (Dim == 1) {
        const Mollifier1D& f = phi.factor(0);
        double sum = 0.0;
        for (std::size_t i = 0; i < f.rule_nodes().size(); ++i)
            sum += f.rule_weights()[i] * integrand(Point<1>{f.rule_nodes()[i]});
        return sum;
    } else {
        const Mollifier1D& f0 = phi.factor(0);
        const Mollifier1D& f1 = phi.factor(1);
        double sum = 0.0;
        for (std::size_t i = 0; i < f0.rule_nodes().size(); ++i)
            for (std::size_t j = 0; j < f1.rule_nodes().size(); ++j)
                sum += f0.rule_weights()[i] * f1.rule_weights()[j] *
                       integrand(Point<2>{f0.rule_nodes()[i], f1.rule_nodes()[j]});
        return sum;
    }
}

/// int g(x + eps t) phi(t) dt - g(x) by direct quadrature, for g with too few derivatives.
template <int Dim>
double direct_correction(const SmoothFunction<Dim>& g, const MultiIndex<Dim>& base,
                         const MollifierND<Dim>& phi, double eps, const PointArg<Dim>& x) {
    const double gx = g.derivative(base, x);
    auto at = [&](const Point<Dim>& t) {
        Point<Dim> y;
        for (std::size_t a = 0; a < Dim; ++a) y[a] = x[a] + eps * t[a];
        return g.derivative(base, y) - gx;
    };
    if constexpr (Dim == 1) {
        const Mollifier1D& f = phi.factor(0);
        double sum = 0.0;
        for (std::size_t i = 0; i < f.rule_nodes().size(); ++i)
            sum += f.rule_weights()[i] * at(Point<1>{f.rule_nodes()[i]});
        return sum;
    } else {
        double sum = 0.0;
        const Mollifier1D& f0 = phi.factor(0);
        const Mollifier1D& f1 = phi.factor(1);
        for (std::size_t i = 0; i < f0.rule_nodes().size(); ++i)
            for (std::size_t j = 0; j < f1.rule_nodes().size(); ++j)
                sum += f0.rule_weights()[i] * f1.rule_weights()[j] *
                       at(Point<2>{f0.rule_nodes()[i], f1.rule_nodes()[j]});
        return sum;
    }
}

/// <f, sign d_x^k tau_x phi_eps> = sign int f^(k)(x + eps t) phi(t) dt, split as
/// sign f^(k)(x) + sign * (Taylor tail). Moments 1..q are taken as exactly zero.
template <int Dim>
SplitValue smooth_kernel_pairing(const SmoothFunction<Dim>& f,
                                 const typename TestFunction<Dim>::Kernel& tag) {
    const MollifierND<Dim>& phi = *tag.mollifier;
    const MultiIndex<Dim>& k = tag.x_order;
    const int q = phi.order();
    const double classical = f.derivative(k, tag.center);
    const int available = f.max_order() - k.order();

    double tail = 0.0;
    bool converged = false;
    if (available >= q + 1) {
        constexpr int kQuiet = 4;
        int quiet = 0;
        const int last = std::min(available, q + kSeriesMomentExtra);
        for (int j = q + 1; j <= last; ++j) {
            auto term = series_term(f, k, phi, tag.eps, tag.center, j);
            if (!term) break;
            tail += *term;
            quiet = std::abs(*term) <= 1e-17 * std::abs(tail) ? quiet + 1 : 0;
            if (quiet >= kQuiet || (j == last && last == available && available < SmoothFunction<Dim>::kUnbounded)) {
                converged = quiet >= kQuiet;
                break;
            }
        }
        if (!converged) tail = taylor_remainder(f, k, phi, tag.eps, tag.center);
    } else {
        tail = direct_correction(f, k, phi, tag.eps, tag.center);
    }
    return {tag.sign * classical, tag.sign * tail};
}

template <int Dim>
quad::Box<Dim> intersect(const quad::Box<Dim>& a, const quad::Box<Dim>& b) {
    quad::Box<Dim> r;
    for (std::size_t i = 0; i < Dim; ++i) {
        r.lo[i] = std::max(a.lo[i], b.lo[i]);
        r.hi[i] = std::min(a.hi[i], b.hi[i]);
    }
    return r;
}

inline constexpr int kKernelPanels = 16;

/// Kernel test functions in one dimension: fixed composite rule on each smooth piece of the eps-interval.
inline double regular_kernel_pairing(const RegularFunction<1>& f, const TestFunction<1>& psi, const quad::Box<1>& box) {
    std::vector<double> cuts{box.lo[0]};
    for (double b : f.breakpoints()[0])
        if (b > box.lo[0] && b < box.hi[0]) cuts.push_back(b);
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(box.hi[0]);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        const quad::Rule r = quad::composite_rule(cuts[i], cuts[i + 1], kKernelPanels);
        for (std::size_t j = 0; j < r.nodes.size(); ++j) {
            const Point<1> y{r.nodes[j]};
            sum += r.weights[j] * f(y) * psi(y);
        }
    }
    return sum;
}

template <int Dim>
double regular_pairing(const RegularFunction<Dim>& f, const TestFunction<Dim>& psi, double tol) {
    quad::Box<Dim> box = intersect(psi.support(), f.support());
    if constexpr (Dim == 1) {
        if (psi.kernel_tag() && psi.period() == 0.0 && box.hi[0] > box.lo[0] && std::isfinite(box.lo[0]) &&
            std::isfinite(box.hi[0]))
            return regular_kernel_pairing(f, psi, box);
    }
    for (std::size_t a = 0; a < Dim; ++a) {
        if (!(box.hi[a] > box.lo[a])) return 0.0;
        if (!std::isfinite(box.lo[a]) || !std::isfinite(box.hi[a]))
            throw InvalidArgument("test function " + psi.name() + " has unbounded support");
        for (double b : f.breakpoints()[a]) {
            if (psi.period() > 0.0) {
                const double p = psi.period();
                const double first = b + p * std::ceil((box.lo[a] - b) / p);
                for (double c = first; c <= box.hi[a]; c += p) box.breakpoints[a].push_back(c);
            } else {
                box.breakpoints[a].push_back(b);
            }
        }
    }
    return quad::integrate<Dim>([&](const Point<Dim>& y) { return f(y) * psi(y); }, box, tol).value;
}

}  // namespace detail

/// <T, psi>, split into classical and correction parts for kernel-tagged psi.
template <int Dim>
SplitValue pair_split(const Distribution<Dim>& t, const TestFunction<Dim>& psi,
                      double tol = quad::kDefaultTolerance) {
    if (const auto& tag = psi.kernel_tag()) {
        if (auto s = smooth_part(t)) return detail::smooth_kernel_pairing(*s, *tag);
    }
    return std::visit(
        [&](const auto& n) -> SplitValue {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, DeltaAt<Dim>>) {
                return SplitValue::from_classical(psi(n.at));
            } else if constexpr (std::is_same_v<N, DerivativeOf<Dim>>) {
                return sign_pow(n.order.order()) * pair_split(n.inner, psi.derivative(n.order), tol);
            } else if constexpr (std::is_same_v<N, RegularDist<Dim>>) {
                return SplitValue::from_classical(detail::regular_pairing(n.f, psi, tol));
            } else if constexpr (std::is_same_v<N, LinearCombination<Dim>>) {
                SplitValue s;
                for (const auto& [w, term] : n.terms) s += w * pair_split(term, psi, tol);
                return s;
            } else {
                return pair_split(n.inner, psi.times(n.g), tol);
            }
        },
        t.node());
}

template <int Dim>
double pair(const Distribution<Dim>& t, const TestFunction<Dim>& psi,
            double tol = quad::kDefaultTolerance) {
    return pair_split(t, psi, tol).value();
}

/// X^a d_a T, paired through <X^a d_a T, psi> = -<T, d_a(X^a psi)>.
template <int Dim>
Distribution<Dim> lie_derivative_dist(const Distribution<Dim>& t, const VectorField<Dim>& x) {
    std::vector<std::pair<double, Distribution<Dim>>> terms;
    for (std::size_t a = 0; a < Dim; ++a)
        terms.emplace_back(1.0, dist::multiplied(x.components[a],
                                                 dist::derivative(MultiIndex<Dim>::unit(static_cast<int>(a)), t)));
    return dist::combination(std::move(terms));
}

/// Points where T fails to be smooth, per axis: delta locations and regular breakpoints.
template <int Dim>
std::array<std::vector<double>, Dim> singular_support(const Distribution<Dim>& t) {
    std::array<std::vector<double>, Dim> out;
    auto merge = [&](const std::array<std::vector<double>, Dim>& more) {
        for (std::size_t a = 0; a < Dim; ++a) out[a].insert(out[a].end(), more[a].begin(), more[a].end());
    };
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, DeltaAt<Dim>>) {
                for (std::size_t a = 0; a < Dim; ++a) out[a].push_back(n.at[a]);
            } else if constexpr (std::is_same_v<N, RegularDist<Dim>>) {
                merge(n.f.breakpoints());
                for (std::size_t a = 0; a < Dim; ++a) {
                    if (std::isfinite(n.f.support().lo[a])) out[a].push_back(n.f.support().lo[a]);
                    if (std::isfinite(n.f.support().hi[a])) out[a].push_back(n.f.support().hi[a]);
                }
            } else if constexpr (std::is_same_v<N, LinearCombination<Dim>>) {
                for (const auto& term : n.terms) merge(singular_support(term.second));
            } else {
                merge(singular_support(n.inner));
            }
        },
        t.node());
    for (auto& v : out) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
}

namespace testfn {

/// b(x/2)(1 + x/2): nonzero at the origin, not even.
inline TestFunction<1> tilted_bump() {
    auto f = smooth::product(smooth::bump(0.0, 2.0), smooth::polynomial({1.0, 0.5}, "(1+x/2)"));
    return TestFunction<1>::from_smooth(f, quad::Box<1>{{-2.0}, {2.0}, {}});
}

/// cos(x) b(x/1.5).
inline TestFunction<1> cos_bump() {
    auto f = smooth::product(smooth::cosine(), smooth::bump(0.0, 1.5));
    return TestFunction<1>::from_smooth(f, quad::Box<1>{{-1.5}, {1.5}, {}});
}

inline TestFunction<1> bump(double center = 0.0, double radius = 1.0) {
    return TestFunction<1>::from_smooth(smooth::bump(center, radius),
                                        quad::Box<1>{{center - radius}, {center + radius}, {}});
}

/// sum_i c_i x^i times b((x - center)/radius).
inline TestFunction<1> polynomial_bump(std::vector<double> coeffs, double center = 0.0,
                                       double radius = 1.0) {
    auto f = smooth::product(smooth::polynomial(std::move(coeffs)), smooth::bump(center, radius));
    return TestFunction<1>::from_smooth(f, quad::Box<1>{{center - radius}, {center + radius}, {}});
}

/// sin(freq x + phase) b((x - center)/radius).
inline TestFunction<1> sine_bump(double freq = 1.0, double phase = 0.0, double center = 0.0,
                                 double radius = 1.0) {
    auto f = smooth::product(smooth::sine(freq, phase), smooth::bump(center, radius));
    return TestFunction<1>::from_smooth(f, quad::Box<1>{{center - radius}, {center + radius}, {}});
}

inline TestFunction<2> separable_bump(double radius = 1.0) {
    auto f = smooth::separable(smooth::bump(0.0, radius), smooth::bump(0.0, radius));
    return TestFunction<2>::from_smooth(f, quad::Box<2>{{-radius, -radius}, {radius, radius}, {}});
}

}  // namespace testfn

}  // namespace colombeau
