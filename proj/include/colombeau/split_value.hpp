#pragma once

namespace colombeau {

/// Value of a generalized-function expression held in two parts: the
/// classical point value (what sigma would give) and the mollification
/// correction on top of it.
///
/// Subtracting an embedded smooth function from its classical counterpart
/// cancels the classical parts exactly, so corrections of size eps^{q+1}
/// stay resolvable long after they drop below double precision relative
/// to the function value itself.
struct SplitValue {
    double classical = 0.0;
    double correction = 0.0;

    static constexpr SplitValue from_classical(double v) { return {v, 0.0}; }
    static constexpr SplitValue from_correction(double v) { return {0.0, v}; }

    constexpr double value() const { return classical + correction; }

    constexpr SplitValue& operator+=(const SplitValue& o) {
        classical += o.classical;
        correction += o.correction;
        return *this;
    }
    constexpr SplitValue& operator-=(const SplitValue& o) {
        classical -= o.classical;
        correction -= o.correction;
        return *this;
    }
    constexpr SplitValue& operator*=(double s) {
        classical *= s;
        correction *= s;
        return *this;
    }

    friend constexpr SplitValue operator+(SplitValue a, const SplitValue& b) { return a += b; }
    friend constexpr SplitValue operator-(SplitValue a, const SplitValue& b) { return a -= b; }
    friend constexpr SplitValue operator*(double s, SplitValue a) { return a *= s; }
    friend constexpr SplitValue operator*(SplitValue a, double s) { return a *= s; }

    /// (c1 + r1)(c2 + r2): the product of classical parts stays classical.
    friend constexpr SplitValue operator*(const SplitValue& a, const SplitValue& b) {
        return {a.classical * b.classical,
                a.classical * b.correction + a.correction * b.classical + a.correction * b.correction};
    }
};

}  // namespace colombeau
