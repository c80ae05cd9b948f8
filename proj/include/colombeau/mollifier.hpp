#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "colombeau/bump.hpp"
#include "colombeau/errors.hpp"
#include "colombeau/multi_index.hpp"
#include "colombeau/quadrature.hpp"

namespace colombeau {

inline constexpr int kMaxMollifierOrder = 12;
/// Target value of the first non-vanishing moment for strict-order mollifiers.
inline constexpr double kStrictMoment = 0.1;

inline constexpr double kNormalizationTolerance = 1e-11;
inline constexpr double kVanishingMomentTolerance = 1e-9;
inline constexpr double kStrictMomentFloor = 1e-3;
inline constexpr double kMomentQuadTolerance = 1e-12;
/// Moments beyond q+1 kept for Taylor series of smooth pairings.
inline constexpr int kSeriesMomentExtra = 28;

/// One-dimensional mollifier phi = p * b, with p expanded in the polynomials
/// orthonormal for the weight b on [-1, 1].
///
/// In that basis the moment conditions int t^i phi = delta_{i0} (i <= q) form a
/// lower-triangular system whose solution is the reproducing kernel K_q(t, 0);
/// monomial ansatzes give Hankel systems that lose digits quickly past q ~ 6.
/// A strict mollifier adds one basis function and pins int t^{q+1} phi.
class Mollifier1D {
public:
    /// Recurrence sqrt(beta_{j+1}) pi_{j+1} = t pi_j - sqrt(beta_j) pi_{j-1} (the weight is even, so alpha_j = 0).
    struct Basis {
        double pi0 = 0.0;
        std::vector<double> sqrt_beta;  // sqrt_beta[j] couples pi_{j-1} and pi_j; sqrt_beta[0] unused
    };

    Mollifier1D(std::vector<double> coeffs, Basis basis, int order, bool strict, int variant)
        : coeffs_(std::move(coeffs)), basis_(std::move(basis)), order_(order), strict_(strict),
          variant_(variant) {
        const quad::Rule base = quad::composite_rule(-1.0, 1.0, 8);
        rule_nodes_ = base.nodes;
        rule_weights_.resize(base.nodes.size());
        for (std::size_t i = 0; i < base.nodes.size(); ++i)
            rule_weights_[i] = base.weights[i] * value(base.nodes[i]);
        series_moments_.resize(static_cast<std::size_t>(order_ + kSeriesMomentExtra) + 1);
        for (std::size_t j = 0; j < series_moments_.size(); ++j) {
            double m = 0.0;
            for (std::size_t i = 0; i < rule_nodes_.size(); ++i)
                m += rule_weights_[i] * std::pow(rule_nodes_[i], static_cast<double>(j));
            series_moments_[j] = m;
        }
    }

    /// Moments 0..q+kSeriesMomentExtra from the cached rule, for Taylor series of smooth pairings.
    const std::vector<double>& series_moments() const { return series_moments_; }

    int order() const { return order_; }
    bool strict() const { return strict_; }
    int variant() const { return variant_; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    double support_radius() const { return 1.0; }

    std::string label() const {
        std::string s = "q" + std::to_string(order_) + (strict_ ? "-strict" : "");
        if (variant_ > 0) s += "-v" + std::to_string(variant_);
        return s;
    }

    double value(double t) const { return derivative(0, t); }

    double derivative(int k, double t) const {
        if (k < 0 || k > BumpProfile::kMaxOrder)
            throw UnsupportedOrder("mollifier derivative order " + std::to_string(k));
        if (!(std::abs(t) < 1.0)) return 0.0;
        std::array<double, BumpProfile::kMaxOrder + 1> pd{};
        polynomial_derivatives(t, k, pd);
        double s = 0.0;
        for (int i = 0; i <= k; ++i) {
            if (pd[static_cast<std::size_t>(i)] == 0.0) continue;
            s += binomial(k, i) * pd[static_cast<std::size_t>(i)] * BumpProfile::derivative(k - i, t);
        }
        return s;
    }

    /// Cached moments int t^i phi, i = 0 .. order + 2.
    const std::vector<double>& moment_table() const { return moments_; }

    /// Fixed composite rule on [-1, 1] with phi folded into the weights.
    std::span<const double> rule_nodes() const { return rule_nodes_; }
    std::span<const double> rule_weights() const { return rule_weights_; }

    /// int g(t) phi(t) dt with the cached rule; g must be smooth on [-1, 1].
    template <class G>
    double integrate_against(G&& g) const {
        double s = 0.0;
        for (std::size_t i = 0; i < rule_nodes_.size(); ++i) s += rule_weights_[i] * g(rule_nodes_[i]);
        return s;
    }

    void set_moment_table(std::vector<double> m) { moments_ = std::move(m); }

private:
    void polynomial_derivatives(double t, int k,
                                std::array<double, BumpProfile::kMaxOrder + 1>& out) const {
        // pis[i] holds d^i/dt^i of pi_{j-1} (prev) and pi_j (cur).
        std::array<double, BumpProfile::kMaxOrder + 1> prev{}, cur{}, next{};
        cur[0] = basis_.pi0;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            const double c = coeffs_[j];
            if (c != 0.0)
                for (int i = 0; i <= k; ++i) out[static_cast<std::size_t>(i)] += c * cur[static_cast<std::size_t>(i)];
            if (j + 1 == coeffs_.size()) break;
            const double sb_next = basis_.sqrt_beta[j + 1];
            const double sb_cur = j > 0 ? basis_.sqrt_beta[j] : 0.0;
            for (int i = 0; i <= k; ++i) {
                const auto ii = static_cast<std::size_t>(i);
                double v = t * cur[ii] - sb_cur * prev[ii];
                if (i > 0) v += i * cur[ii - 1];
                next[ii] = v / sb_next;
            }
            prev = cur;
            cur = next;
        }
    }

    std::vector<double> coeffs_;
    Basis basis_;
    int order_;
    bool strict_;
    int variant_;
    std::vector<double> moments_;
    std::vector<double> rule_nodes_;
    std::vector<double> rule_weights_;
    std::vector<double> series_moments_;
};

using MollifierPtr = std::shared_ptr<const Mollifier1D>;

namespace detail {

inline const quad::Rule& construction_rule() {
    static const quad::Rule r = quad::composite_rule(-1.0, 1.0, 16);
    return r;
}

/// Discretized Stieltjes procedure for the orthonormal basis of weight b.
inline Mollifier1D::Basis orthonormal_basis(int degree) {
    const quad::Rule& r = construction_rule();
    const std::size_t n = r.nodes.size();
    std::vector<double> w(n);
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = r.weights[i] * BumpProfile::value(r.nodes[i]);
        mass += w[i];
    }
    Mollifier1D::Basis basis;
    basis.pi0 = 1.0 / std::sqrt(mass);
    basis.sqrt_beta.assign(static_cast<std::size_t>(degree) + 1, 0.0);

    std::vector<double> prev(n, 0.0), cur(n, basis.pi0), next(n);
    for (int j = 0; j < degree; ++j) {
        const double sb = j > 0 ? basis.sqrt_beta[static_cast<std::size_t>(j)] : 0.0;
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = r.nodes[i] * cur[i] - sb * prev[i];
            norm2 += w[i] * next[i] * next[i];
        }
        const double nb = std::sqrt(norm2);
        basis.sqrt_beta[static_cast<std::size_t>(j) + 1] = nb;
        for (std::size_t i = 0; i < n; ++i) next[i] /= nb;
        prev = cur;
        cur = next;
    }
    return basis;
}

inline std::vector<double> basis_values(const Mollifier1D::Basis& basis, int degree, double t) {
    std::vector<double> v(static_cast<std::size_t>(degree) + 1);
    double prev = 0.0, cur = basis.pi0;
    v[0] = cur;
    for (int j = 0; j < degree; ++j) {
        const double sb = j > 0 ? basis.sqrt_beta[static_cast<std::size_t>(j)] : 0.0;
        const double next = (t * cur - sb * prev) / basis.sqrt_beta[static_cast<std::size_t>(j) + 1];
        prev = cur;
        cur = next;
        v[static_cast<std::size_t>(j) + 1] = cur;
    }
    return v;
}

}  // namespace detail

/// [int t^0 phi, ..., int t^max_order phi] by adaptive quadrature at 1e-12.
inline std::vector<double> moments(const Mollifier1D& m, int max_order,
                                   double tol = kMomentQuadTolerance) {
    if (max_order < 0) throw InvalidArgument("max_order must be non-negative");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(max_order) + 1);
    for (int i = 0; i <= max_order; ++i) {
        out.push_back(quad::integrate_value(
            [&](double t) { return std::pow(t, i) * m.value(t); }, -1.0, 1.0, {}, tol));
    }
    return out;
}

/// Builds phi in A_q. `variant` > 0 adds a component orthogonal to every
/// constrained moment, giving distinct mollifiers of identical order.
inline MollifierPtr build_mollifier(int q, bool strict = false, int variant = 0) {
    if (q < 0) throw InvalidArgument("mollifier order must be non-negative");
    if (q > kMaxMollifierOrder)
        throw UnsupportedOrder("unsupported mollifier order " + std::to_string(q) + " (maximum " +
                               std::to_string(kMaxMollifierOrder) + ")");
    const int degree = q + (strict ? 1 : 0);
    const int basis_degree = degree + 1;
    const auto basis = detail::orthonormal_basis(basis_degree);

    const quad::Rule& r = detail::construction_rule();
    const int dim = degree + 1;
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t n = 0; n < r.nodes.size(); ++n) {
        const double t = r.nodes[n];
        const double wb = r.weights[n] * BumpProfile::value(t);
        const auto pis = detail::basis_values(basis, degree, t);
        double ti = 1.0;
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j)
                if ((i + j) % 2 == 0) system(i, j) += ti * pis[static_cast<std::size_t>(j)] * wb;
            ti *= t;
        }
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    rhs(0) = 1.0;
    if (strict) rhs(q + 1) = kStrictMoment;

    const Eigen::VectorXd c = system.colPivHouseholderQr().solve(rhs);
    const double residual = (system * c - rhs).cwiseAbs().maxCoeff();
    if (!(residual <= kVanishingMomentTolerance))
        throw ConstructionError("moment system residual " + std::to_string(residual) +
                                " exceeds 1e-9 for q = " + std::to_string(q));

    std::vector<double> coeffs(static_cast<std::size_t>(dim), 0.0);
    for (int j = 0; j < dim; ++j) coeffs[static_cast<std::size_t>(j)] = c(j);
    if (variant > 0) coeffs.push_back(0.25 * variant * coeffs[0]);

    auto mol = std::make_shared<Mollifier1D>(std::move(coeffs), basis, q, strict, variant);
    auto table = moments(*mol, q + 2);
    if (!(std::abs(table[0] - 1.0) <= kNormalizationTolerance))
        throw ConstructionError("normalization failed: int phi = " + std::to_string(table[0]));
    for (int i = 1; i <= q; ++i)
        if (!(std::abs(table[static_cast<std::size_t>(i)]) <= kVanishingMomentTolerance))
            throw ConstructionError("moment " + std::to_string(i) + " not certified: " +
                                    std::to_string(table[static_cast<std::size_t>(i)]));
    if (strict && !(std::abs(table[static_cast<std::size_t>(q) + 1]) >= kStrictMomentFloor))
        throw ConstructionError("strict moment below floor");
    mol->set_moment_table(std::move(table));
    return mol;
}

/// Tensor-product mollifier on R^n.
template <int Dim>
class MollifierND {
public:
    explicit MollifierND(std::array<MollifierPtr, Dim> factors) : factors_(std::move(factors)) {}

    /// All axes use the same one-dimensional factor.
    explicit MollifierND(MollifierPtr factor) {
        for (auto& f : factors_) f = factor;
    }

    const std::array<MollifierPtr, Dim>& factors() const { return factors_; }
    const Mollifier1D& factor(std::size_t axis) const { return *factors_[axis]; }

    /// Total order q such that all moments with 1 <= |i| <= q vanish.
    int order() const {
        int q = factors_[0]->order();
        for (const auto& f : factors_) q = std::min(q, f->order());
        return q;
    }

    /// Radius of the smallest centered ball containing the support box [-1, 1]^n.
    double support_radius() const { return std::sqrt(static_cast<double>(Dim)); }

    double value(const Point<Dim>& t) const { return derivative(MultiIndex<Dim>{}, t); }

    double derivative(const MultiIndex<Dim>& k, const Point<Dim>& t) const {
        double v = 1.0;
        for (std::size_t a = 0; a < Dim; ++a) {
            v *= factors_[a]->derivative(k[a], t[a]);
            if (v == 0.0) return 0.0;
        }
        return v;
    }

    double moment(const MultiIndex<Dim>& i) const {
        double v = 1.0;
        for (std::size_t a = 0; a < Dim; ++a) {
            const auto& table = factors_[a]->moment_table();
            const auto ia = static_cast<std::size_t>(i[a]);
            v *= ia < table.size() ? table[ia] : moments(*factors_[a], i[a]).back();
        }
        return v;
    }

    std::string label() const {
        std::string s = factors_[0]->label();
        for (std::size_t a = 1; a < Dim; ++a)
            if (factors_[a] != factors_[0]) s += "x" + factors_[a]->label();
        return s;
    }

private:
    std::array<MollifierPtr, Dim> factors_{};
};

template <int Dim>
using MollifierNDPtr = std::shared_ptr<const MollifierND<Dim>>;

template <int Dim>
MollifierNDPtr<Dim> make_tensor_mollifier(MollifierPtr factor) {
    return std::make_shared<const MollifierND<Dim>>(std::move(factor));
}

/// y -> eps^{-n} phi((y - center) / eps).
template <int Dim>
class ScaledTranslatedKernel {
public:
    ScaledTranslatedKernel(MollifierNDPtr<Dim> base, double eps, Point<Dim> center)
        : base_(std::move(base)), eps_(eps), center_(center) {
        if (!(eps_ > 0.0 && eps_ <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
    }

    const MollifierND<Dim>& base() const { return *base_; }
    double eps() const { return eps_; }
    const Point<Dim>& center() const { return center_; }

    double operator()(const Point<Dim>& y) const { return derivative(MultiIndex<Dim>{}, y); }

    /// d^k/dy^k of the kernel: eps^{-n-|k|} (d^k phi)((y - center)/eps).
    double derivative(const MultiIndex<Dim>& k, const Point<Dim>& y) const {
        Point<Dim> t;
        for (std::size_t a = 0; a < Dim; ++a) t[a] = (y[a] - center_[a]) / eps_;
        return std::pow(eps_, -(Dim + k.order())) * base_->derivative(k, t);
    }

    quad::Box<Dim> support_box() const {
        quad::Box<Dim> box;
        for (std::size_t a = 0; a < Dim; ++a) {
            box.lo[a] = center_[a] - eps_;
            box.hi[a] = center_[a] + eps_;
        }
        return box;
    }

    double support_radius() const { return eps_ * base_->support_radius(); }

private:
    MollifierNDPtr<Dim> base_;
    double eps_;
    Point<Dim> center_;
};

template <int Dim>
std::function<double(const Point<Dim>&)> kernel_derivative(const ScaledTranslatedKernel<Dim>& k,
                                                            const MultiIndex<Dim>& index) {
    require_order(index);
    return [k, index](const Point<Dim>& y) { return k.derivative(index, y); };
}

}  // namespace colombeau
