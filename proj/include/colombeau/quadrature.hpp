#pragma once

/// Composite Gauss-Legendre quadrature with adaptive dyadic panel refinement.
///
/// Every integrand in this library is piecewise smooth with known kinks, so
/// callers declare breakpoints and the integrator never places a panel across
/// one. Within a panel the 32-point rule converges spectrally; the error of a
/// panel is estimated by comparing it with the sum over its two halves.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include "colombeau/errors.hpp"
#include "colombeau/multi_index.hpp"

namespace colombeau::quad {

inline constexpr int kPanelNodes = 32;
inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr int kDefaultMaxPanels = 4096;

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
    Rule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        r.nodes[lo] = -x;
        r.nodes[hi] = x;
        r.weights[lo] = w;
        r.weights[hi] = w;
    }
    if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return r;
}

inline const Rule& panel_rule() {
    static const Rule rule = gauss_legendre(kPanelNodes);
    return rule;
}

/// Fixed composite rule on [a, b] with `panels` equal panels of the 32-point rule.
inline Rule composite_rule(double a, double b, int panels) {
    const Rule& base = panel_rule();
    Rule r;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            r.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
            r.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return r;
}

struct Result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

namespace detail {

struct PanelSum {
    double value;
    double abs_value;
};

template <class F>
PanelSum apply_rule(F& f, double a, double b) {
    const Rule& rule = panel_rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0, sa = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = static_cast<double>(f(mid + half * rule.nodes[i]));
        s += rule.weights[i] * v;
        sa += rule.weights[i] * std::abs(v);
    }
    return {s * half, sa * half};
}

struct Panel {
    double a, b;
    double coarse;
    double left, right;
    double abs_fine;
    double error() const { return std::abs(coarse - (left + right)); }
    bool operator<(const Panel& o) const { return error() < o.error(); }
};

template <class F>
Panel make_panel(F& f, double a, double b, double coarse) {
    const double m = 0.5 * (a + b);
    const PanelSum l = apply_rule(f, a, m);
    const PanelSum r = apply_rule(f, m, b);
    return {a, b, coarse, l.value, r.value, l.abs_value + r.abs_value};
}

}  // namespace detail

/// Adaptive integral of f over [a, b], never straddling a declared breakpoint.
///
/// The accepted error is max(tol, 64 * eps * integral of |f|): below that
/// the half-panel comparison measures rounding rather than truncation.
template <class F>
Result integrate_1d(F&& f, double a, double b, std::span<const double> breakpoints = {},
                    double tol = kDefaultTolerance, int max_panels = kDefaultMaxPanels) {
    Result out;
    if (!(b > a)) return out;

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Panel> heap;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (!(hi > lo)) continue;
        const double coarse = detail::apply_rule(f, lo, hi).value;
        heap.push(detail::make_panel(f, lo, hi, coarse));
    }

    double value = 0.0, err = 0.0, abs_total = 0.0;
    auto recount = [&] {
        value = err = abs_total = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            const auto& p = copy.top();
            value += p.left + p.right;
            err += p.error();
            abs_total += p.abs_fine;
            copy.pop();
        }
    };
    recount();

    const double eps = std::numeric_limits<double>::epsilon();
    while (err > std::max(tol, 64.0 * eps * abs_total)) {
        if (static_cast<int>(heap.size()) >= max_panels) {
            throw QuadratureError("quadrature did not converge on [" + std::to_string(a) + ", " +
                                      std::to_string(b) + "]",
                                  value, err);
        }
        const detail::Panel worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        const detail::Panel l = detail::make_panel(f, worst.a, m, worst.left);
        const detail::Panel r = detail::make_panel(f, m, worst.b, worst.right);
        value += (l.left + l.right + r.left + r.right) - (worst.left + worst.right);
        err += l.error() + r.error() - worst.error();
        abs_total += l.abs_fine + r.abs_fine - worst.abs_fine;
        heap.push(l);
        heap.push(r);
        if (err <= std::max(tol, 64.0 * eps * abs_total)) recount();
    }
    out.value = value;
    out.error = err;
    out.panels = static_cast<int>(heap.size());
    return out;
}

/// Axis-aligned box with per-axis breakpoints.
template <int Dim>
struct Box {
    Point<Dim> lo{};
    Point<Dim> hi{};
    std::array<std::vector<double>, Dim> breakpoints{};
};

/// Integral over a box; in 2D the inner axis is integrated adaptively per outer node.
template <int Dim, class F>
Result integrate(F&& f, const Box<Dim>& box, double tol = kDefaultTolerance) {
    if constexpr (Dim == 1) {
        return integrate_1d([&](double x) { return f(Point<1>{x}); }, box.lo[0], box.hi[0],
                            box.breakpoints[0], tol);
    } else {
        const double width = std::max(box.hi[0] - box.lo[0], 1e-300);
        const double inner_tol = 0.1 * tol / width;
        double inner_err = 0.0;
        auto outer = [&](double x0) {
            Result r = integrate_1d([&](double x1) { return f(Point<2>{x0, x1}); }, box.lo[1],
                                    box.hi[1], box.breakpoints[1], inner_tol);
            inner_err = std::max(inner_err, r.error);
            return r.value;
        };
        Result r = integrate_1d(outer, box.lo[0], box.hi[0], box.breakpoints[0], 0.9 * tol);
        r.error += inner_err * width;
        return r;
    }
}

/// Convenience: value only.
template <class F>
double integrate_value(F&& f, double a, double b, std::span<const double> breakpoints = {},
                       double tol = kDefaultTolerance) {
    return integrate_1d(std::forward<F>(f), a, b, breakpoints, tol).value;
}

}  // namespace colombeau::quad
