#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "colombeau/errors.hpp"

namespace colombeau {

/// Canonical profile b(t) = exp(-1/(1 - t^2)) on (-1, 1), zero elsewhere.
///
/// Derivatives use b^(k)(t) = r_k(t) b(t) with r_k = P_k(t) / (1 - t^2)^(2k) and
///   P_{k+1} = P_k' s^2 + 4 k t s P_k - 2 t P_k,   s = 1 - t^2,   P_0 = 1.
/// The prefactor is folded into the exponent so the product never overflows
/// near |t| = 1, where b itself underflows to 0.
class BumpProfile {
public:
    static constexpr int kMaxOrder = 16;

    static double value(double t) {
        const double s = 1.0 - t * t;
        if (!(s > 0.0)) return 0.0;
        return std::exp(-1.0 / s);
    }

    static double derivative(int k, double t) {
        if (k == 0) return value(t);
        if (k < 0 || k > kMaxOrder) throw UnsupportedOrder("bump derivative order out of range");
        const double s = 1.0 - t * t;
        if (!(s > 0.0)) return 0.0;
        const auto& p = table()[static_cast<std::size_t>(k)];
        double poly = 0.0;
        for (auto it = p.rbegin(); it != p.rend(); ++it) poly = poly * t + *it;
        if (poly == 0.0) return 0.0;
        return poly * std::exp(-1.0 / s - 2.0 * k * std::log(s));
    }

    /// Coefficients of P_k in increasing powers of t.
    static const std::vector<double>& prefactor_polynomial(int k) {
        return table().at(static_cast<std::size_t>(k));
    }

private:
    using Table = std::array<std::vector<double>, kMaxOrder + 1>;

    static const Table& table() {
        static const Table t = build();
        return t;
    }

    static std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> r(a.size() + b.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        return r;
    }

    static void add_into(std::vector<double>& acc, const std::vector<double>& v) {
        if (acc.size() < v.size()) acc.resize(v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
    }

    static Table build() {
        Table t;
        t[0] = {1.0};
        const std::vector<double> s{1.0, 0.0, -1.0};
        const std::vector<double> s2 = mul(s, s);
        for (int k = 0; k < kMaxOrder; ++k) {
            const auto& p = t[static_cast<std::size_t>(k)];
            std::vector<double> dp(p.size() > 1 ? p.size() - 1 : 1, 0.0);
            for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = static_cast<double>(i) * p[i];
            std::vector<double> next = mul(dp, s2);
            add_into(next, mul(mul(p, {0.0, 4.0 * k}), s));
            add_into(next, mul(p, {0.0, -2.0}));
            t[static_cast<std::size_t>(k + 1)] = next;
        }
        return t;
    }
};

}  // namespace colombeau
