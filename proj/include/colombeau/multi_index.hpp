#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <type_traits>

#include "colombeau/errors.hpp"

namespace colombeau {

/// Highest total derivative order accepted from callers.
inline constexpr int kMaxDerivativeOrder = 8;

template <int Dim>
using Point = std::array<double, Dim>;

/// Point parameter of a function template that deduces Dim elsewhere
/// (std::array's size_t extent cannot deduce an int parameter).
template <int Dim>
using PointArg = std::type_identity_t<Point<Dim>>;

template <class T, class... Ts>
inline constexpr bool is_one_of_v = (std::is_same_v<T, Ts> || ...);

template <int Dim>
struct MultiIndex {
    static_assert(Dim == 1 || Dim == 2, "only n = 1, 2 are supported");

    std::array<int, Dim> index{};

    constexpr MultiIndex() = default;
    constexpr explicit MultiIndex(std::array<int, Dim> idx) : index(idx) {}

    static constexpr MultiIndex zero() { return MultiIndex{}; }

    static constexpr MultiIndex unit(int axis) {
        MultiIndex m;
        m.index[static_cast<std::size_t>(axis)] = 1;
        return m;
    }

    constexpr int order() const {
        int s = 0;
        for (int v : index) s += v;
        return s;
    }

    constexpr int operator[](std::size_t i) const { return index[i]; }
    constexpr int& operator[](std::size_t i) { return index[i]; }

    constexpr MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex r;
        for (std::size_t i = 0; i < Dim; ++i) r.index[i] = index[i] + o.index[i];
        return r;
    }

    constexpr MultiIndex operator-(const MultiIndex& o) const {
        MultiIndex r;
        for (std::size_t i = 0; i < Dim; ++i) r.index[i] = index[i] - o.index[i];
        return r;
    }

    constexpr bool operator==(const MultiIndex&) const = default;

    /// Componentwise j <= *this.
    constexpr bool dominates(const MultiIndex& j) const {
        for (std::size_t i = 0; i < Dim; ++i)
            if (j.index[i] > index[i]) return false;
        return true;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < Dim; ++i) {
            if (i) s += ",";
            s += std::to_string(index[i]);
        }
        return s;
    }
};

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

template <int Dim>
double binomial(const MultiIndex<Dim>& n, const MultiIndex<Dim>& k) {
    double r = 1.0;
    for (std::size_t i = 0; i < Dim; ++i) r *= binomial(n[i], k[i]);
    return r;
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Calls fn(j) for every multi-index j <= k (componentwise), as used by Leibniz expansions.
template <int Dim, class Fn>
void for_each_sub_index(const MultiIndex<Dim>& k, Fn&& fn) {
    if constexpr (Dim == 1) {
        for (int a = 0; a <= k[0]; ++a) fn(MultiIndex<1>({a}));
    } else {
        for (int a = 0; a <= k[0]; ++a)
            for (int b = 0; b <= k[1]; ++b) fn(MultiIndex<2>({a, b}));
    }
}

/// Calls fn(j) for every multi-index with |j| == order.
template <int Dim, class Fn>
void for_each_index_of_order(int order, Fn&& fn) {
    if constexpr (Dim == 1) {
        fn(MultiIndex<1>({order}));
    } else {
        for (int a = order; a >= 0; --a) fn(MultiIndex<2>({a, order - a}));
    }
}

template <int Dim>
void require_order(const MultiIndex<Dim>& k, int cap = kMaxDerivativeOrder) {
    for (int v : k.index)
        if (v < 0) throw InvalidArgument("negative derivative index");
    if (k.order() > cap)
        throw UnsupportedOrder("derivative order " + std::to_string(k.order()) +
                               " exceeds supported maximum " + std::to_string(cap));
}

/// Shortest round-trippable-looking decimal, for names and reports.
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline double sign_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace colombeau
