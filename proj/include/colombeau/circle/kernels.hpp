#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "colombeau/circle/circle.hpp"
#include "colombeau/distributions.hpp"
#include "colombeau/mollifier.hpp"
#include "colombeau/split_value.hpp"

namespace colombeau::circle {

/// Lifted interval [lo, hi] of length at most 2 pi.
struct Arc {
    double lo = 0.0;
    double hi = 0.0;
};

/// Smooth assignment x -> omega_x = k(x, y) dy of compactly supported 1-forms.
class SmoothingKernel {
public:
    virtual ~SmoothingKernel() = default;

    virtual std::string name() const = 0;

    /// d_x^kx d_y^jy k(x, y).
    virtual double density(int kx, int jy, double x, double y) const = 0;

    /// Arc containing supp omega_x.
    virtual Arc support(double x) const = 0;

    /// <u, d_x^kx omega_x>, split into classical and correction parts where possible.
    virtual SplitValue pair(const Distribution<1>& u, double x, int kx, double tol) const {
        return pair_split(u, as_test_function(x, kx), tol);
    }

    /// y -> d_x^kx k(x, y) as a periodic test function.
    TestFunction<1> as_test_function(double x, int kx) const {
        const Arc arc = support(x);
        auto self = this;
        return TestFunction<1>::from_eval(
            name() + "_x", [self, x, kx](const MultiIndex<1>& l, const Point<1>& y) { return self->density(kx, l[0], x, y[0]); },
            quad::Box<1>{{arc.lo}, {arc.hi}, {}}, kTwoPi);
    }
};

using KernelPtr = std::shared_ptr<const SmoothingKernel>;

/// omega_{x,eps} = eps^-1 phi(wrap(y - x)/eps) dy.
class NetKernel final : public SmoothingKernel {
public:
    NetKernel(MollifierPtr phi, double eps)
        : phi_(std::move(phi)), phi_nd_(make_tensor_mollifier<1>(phi_)), eps_(eps) {
        if (!(eps_ > 0.0 && eps_ <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
    }

    std::string name() const override { return "omega[" + phi_->label() + ",eps=" + format_real(eps_) + "]"; }
    double eps() const { return eps_; }
    const Mollifier1D& mollifier() const { return *phi_; }

    double density(int kx, int jy, double x, double y) const override {
        const double t = periodic_offset(y - x, kTwoPi) / eps_;
        if (!(std::abs(t) < 1.0)) return 0.0;
        return sign_pow(kx) * std::pow(eps_, -1 - kx - jy) * phi_->derivative(kx + jy, t);
    }

    Arc support(double x) const override { return {x - eps_, x + eps_}; }

    SplitValue pair(const Distribution<1>& u, double x, int kx, double tol) const override {
        return pair_split(u, TestFunction<1>::kernel(phi_nd_, eps_, Point<1>{x}, MultiIndex<1>({kx}), kTwoPi), tol);
    }

private:
    MollifierPtr phi_;
    MollifierNDPtr<1> phi_nd_;
    double eps_;
};

/// sum_i w_i omega_i; differences of delta nets are the kernel perturbations.
class CombinationKernel final : public SmoothingKernel {
public:
    explicit CombinationKernel(std::vector<std::pair<double, KernelPtr>> terms) : terms_(std::move(terms)) {
        if (terms_.empty()) throw InvalidArgument("empty kernel combination");
    }

    std::string name() const override {
        std::string s = "(";
        for (std::size_t i = 0; i < terms_.size(); ++i)
            s += (i ? " + " : "") + format_real(terms_[i].first) + "*" + terms_[i].second->name();
        return s + ")";
    }

    double density(int kx, int jy, double x, double y) const override {
        double s = 0.0;
        for (const auto& [w, k] : terms_) s += w * k->density(kx, jy, x, y);
        return s;
    }

    Arc support(double x) const override {
        Arc a = terms_.front().second->support(x);
        for (const auto& t : terms_) {
            const Arc b = t.second->support(x);
            a.lo = std::min(a.lo, b.lo);
            a.hi = std::max(a.hi, b.hi);
        }
        if (a.hi - a.lo > kTwoPi) a = {x - kPi, x + kPi};
        return a;
    }

    SplitValue pair(const Distribution<1>& u, double x, int kx, double tol) const override {
        SplitValue s;
        for (const auto& [w, k] : terms_) s += w * k->pair(u, x, kx, tol);
        return s;
    }

private:
    std::vector<std::pair<double, KernelPtr>> terms_;
};

/// L^{C infinity}_X on the parameter slot: a(x) d_x omega_x.
class LieXKernel final : public SmoothingKernel {
public:
    LieXKernel(KernelPtr base, VectorField<1> x) : base_(std::move(base)), x_(std::move(x)) {}

    std::string name() const override { return "LX[" + x_.name + "](" + base_->name() + ")"; }

    double density(int kx, int jy, double x, double y) const override {
        const auto& a = x_.components[0];
        double s = 0.0;
        for (int i = 0; i <= kx; ++i) s += binomial(kx, i) * a.derivative(i, x) * base_->density(kx - i + 1, jy, x, y);
        return s;
    }

    Arc support(double x) const override { return base_->support(x); }

    SplitValue pair(const Distribution<1>& u, double x, int kx, double tol) const override {
        const auto& a = x_.components[0];
        SplitValue s;
        for (int i = 0; i <= kx; ++i) s += (binomial(kx, i) * a.derivative(i, x)) * base_->pair(u, x, kx - i + 1, tol);
        return s;
    }

private:
    KernelPtr base_;
    VectorField<1> x_;
};

/// L^{Omega^n}_X on the form slot: g dy -> (a g)' dy.
class LieYKernel final : public SmoothingKernel {
public:
    LieYKernel(KernelPtr base, VectorField<1> x) : base_(std::move(base)), x_(std::move(x)) {}

    std::string name() const override { return "LY[" + x_.name + "](" + base_->name() + ")"; }

    double density(int kx, int jy, double x, double y) const override {
        const auto& a = x_.components[0];
        double s = 0.0;
        for (int i = 0; i <= jy + 1; ++i)
            s += binomial(jy + 1, i) * a.derivative(i, y) * base_->density(kx, jy + 1 - i, x, y);
        return s;
    }

    Arc support(double x) const override { return base_->support(x); }

    /// <u, (a k_x)'> = -<a u', k_x>.
    SplitValue pair(const Distribution<1>& u, double x, int kx, double tol) const override {
        return -1.0 * base_->pair(dist::multiplied(x_.components[0], dist::derivative(1, u)), x, kx, tol);
    }

private:
    KernelPtr base_;
    VectorField<1> x_;
};

inline KernelPtr lie_kernel_x(KernelPtr omega, const VectorField<1>& x) {
    return std::make_shared<const LieXKernel>(std::move(omega), x);
}

inline KernelPtr lie_kernel_y(KernelPtr omega, const VectorField<1>& x) {
    return std::make_shared<const LieYKernel>(std::move(omega), x);
}

/// L^SK_X = L^{C infinity}_X + L^{Omega^n}_X.
inline KernelPtr lie_kernel_sk(const KernelPtr& omega, const VectorField<1>& x) {
    return std::make_shared<const CombinationKernel>(
        std::vector<std::pair<double, KernelPtr>>{{1.0, lie_kernel_x(omega, x)}, {1.0, lie_kernel_y(omega, x)}});
}

/// ((psi^-1)*, (psi^-1)*) omega: p -> k(chi(p), chi(y)) chi'(y) dy with chi = psi^-1.
class PullbackKernel final : public SmoothingKernel {
public:
    PullbackKernel(KernelPtr base, CircleDiffeo psi) : base_(std::move(base)), psi_(std::move(psi)) {}

    std::string name() const override { return "pull[" + psi_.name() + "](" + base_->name() + ")"; }

    double density(int kx, int jy, double p, double y) const override {
        const auto cp = psi_.inverse_derivatives(p, std::max(kx, 1));
        const auto cy = psi_.inverse_derivatives(y, jy + 1);
        const double z = cp[0], w = cy[0];
        // g[s] = d_p^kx (second-slot derivative s of k)(chi(p), w)
        std::vector<double> g(static_cast<std::size_t>(jy) + 1);
        for (int s = 0; s <= jy; ++s) {
            if (kx == 0) {
                g[static_cast<std::size_t>(s)] = base_->density(0, s, z, w);
            } else {
                std::vector<double> first(static_cast<std::size_t>(kx) + 1);
                for (int i = 0; i <= kx; ++i) first[static_cast<std::size_t>(i)] = base_->density(i, s, z, w);
                g[static_cast<std::size_t>(s)] = chain_rule(kx, first, cp);
            }
        }
        double out = 0.0;
        for (int r = 0; r <= jy; ++r)
            out += binomial(jy, r) * chain_rule(r, g, cy) * cy[static_cast<std::size_t>(jy - r + 1)];
        return out;
    }

    Arc support(double p) const override {
        const Arc a = base_->support(psi_.inverse(p));
        return {psi_(a.lo), psi_(a.hi)};
    }

private:
    KernelPtr base_;
    CircleDiffeo psi_;
};

inline KernelPtr pullback_kernel(KernelPtr omega, const CircleDiffeo& psi) {
    return std::make_shared<const PullbackKernel>(std::move(omega), psi);
}

/// One-parameter family eps -> omega_eps of smoothing kernels.
struct KernelNet {
    std::string name;
    std::function<KernelPtr(double)> at;
    double radius = 1.0;                 // supp omega_{x,eps} within B_{eps R}(x)
    std::function<int(double)> order;    // moment order available at eps
};

namespace nets {

/// Fixed generator of order q.
inline KernelNet fixed(int q, bool strict = true, int variant = 0) {
    auto phi = build_mollifier(q, strict, variant);
    return {"net[" + phi->label() + "]",
            [phi](double eps) -> KernelPtr { return std::make_shared<const NetKernel>(phi, eps); }, 1.0,
            [q](double) { return q; }};
}

inline constexpr int kEscalationCap = 12;

/// Generator order q(eps_j) = j at eps_j = 2^-j (nearest level, capped), so orders grow without bound along the grid.
inline KernelNet escalating() {
    auto phis = std::make_shared<std::vector<MollifierPtr>>();
    for (int j = 0; j <= kEscalationCap; ++j) phis->push_back(build_mollifier(j, true));
    auto level = [](double eps) { return std::clamp(static_cast<int>(std::lround(-std::log2(eps))), 0, kEscalationCap); };
    return {"net[escalating]",
            [phis, level](double eps) -> KernelPtr {
                return std::make_shared<const NetKernel>((*phis)[static_cast<std::size_t>(level(eps))], eps);
            },
            1.0, level};
}

/// omega1 - omega2, an element of the perturbation space.
inline KernelNet difference(const KernelNet& a, const KernelNet& b) {
    return {"(" + a.name + " - " + b.name + ")",
            [a, b](double eps) -> KernelPtr {
                return std::make_shared<const CombinationKernel>(
                    std::vector<std::pair<double, KernelPtr>>{{1.0, a.at(eps)}, {-1.0, b.at(eps)}});
            },
            std::max(a.radius, b.radius), [a, b](double eps) { return std::min(a.order(eps), b.order(eps)); }};
}

/// omega + omega0 for a perturbation omega0.
inline KernelNet perturbed(const KernelNet& base, const KernelNet& perturbation) {
    return {base.name + " + " + perturbation.name,
            [base, perturbation](double eps) -> KernelPtr {
                return std::make_shared<const CombinationKernel>(
                    std::vector<std::pair<double, KernelPtr>>{{1.0, base.at(eps)}, {1.0, perturbation.at(eps)}});
            },
            std::max(base.radius, perturbation.radius),
            [base, perturbation](double eps) { return std::min(base.order(eps), perturbation.order(eps)); }};
}

}  // namespace nets

}  // namespace colombeau::circle
