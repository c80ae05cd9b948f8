#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "colombeau/circle/circle.hpp"
#include "colombeau/circle/kernels.hpp"
#include "colombeau/genfunc.hpp"

namespace colombeau::circle {

class GenFuncExprM;

struct IotaM {
    Distribution<1> u;
};

struct SigmaM {
    SmoothFunction<1> f;
};

struct SumM {
    std::vector<GenFuncExprM> terms;
};

struct ProductM {
    std::vector<GenFuncExprM> factors;  // exactly two
};

/// (L~_X F)(omega) = L_X(F(omega)); also the covariant derivative of scalars.
struct OrdinaryLieM {
    VectorField<1> x;
    std::vector<GenFuncExprM> child;
};

/// (L^_X F)(omega) = -dF(omega)(L^SK_X omega) + L_X(F(omega)).
struct GeneralizedLieM {
    VectorField<1> x;
    std::vector<GenFuncExprM> child;
};

/// (psi* F)(omega)(x) = F(((psi^-1)*, (psi^-1)*) omega)(psi(x)).
struct PullbackM {
    CircleDiffeo psi;
    std::vector<GenFuncExprM> child;
};

class GenFuncExprM {
public:
    using Node = std::variant<IotaM, SigmaM, Const, SumM, ProductM, OrdinaryLieM, GeneralizedLieM, PullbackM>;

    GenFuncExprM() : GenFuncExprM(Const{0.0}) {}

    template <class N>
        requires is_one_of_v<N, IotaM, SigmaM, Const, SumM, ProductM, OrdinaryLieM, GeneralizedLieM, PullbackM>
    GenFuncExprM(N node) : node_(std::make_shared<const Node>(std::move(node))) {}

    const Node& node() const { return *node_; }

    template <class N>
    const N* as() const {
        return std::get_if<N>(node_.get());
    }

    std::string str() const {
        return std::visit(
            [](const auto& n) -> std::string {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, IotaM>) {
                    return "iota(" + n.u.str() + ")";
                } else if constexpr (std::is_same_v<N, SigmaM>) {
                    return "sigma(" + n.f.name() + ")";
                } else if constexpr (std::is_same_v<N, Const>) {
                    return format_real(n.c);
                } else if constexpr (std::is_same_v<N, SumM>) {
                    std::string s = "sum(";
                    for (std::size_t i = 0; i < n.terms.size(); ++i) s += (i ? ", " : "") + n.terms[i].str();
                    return s + ")";
                } else if constexpr (std::is_same_v<N, ProductM>) {
                    return "prod(" + n.factors[0].str() + ", " + n.factors[1].str() + ")";
                } else if constexpr (std::is_same_v<N, OrdinaryLieM>) {
                    return "lie(" + n.x.name + ", " + n.child[0].str() + ")";
                } else if constexpr (std::is_same_v<N, GeneralizedLieM>) {
                    return "glie(" + n.x.name + ", " + n.child[0].str() + ")";
                } else {
                    return "pull(" + n.psi.name() + ", " + n.child[0].str() + ")";
                }
            },
            *node_);
    }

private:
    std::shared_ptr<const Node> node_;
};

namespace gm {

inline GenFuncExprM iota(Distribution<1> u) { return IotaM{std::move(u)}; }
inline GenFuncExprM sigma(SmoothFunction<1> f) { return SigmaM{std::move(f)}; }
inline GenFuncExprM constant(double c) { return Const{c}; }
inline GenFuncExprM sum(std::vector<GenFuncExprM> terms) { return SumM{std::move(terms)}; }
inline GenFuncExprM sum(GenFuncExprM a, GenFuncExprM b) { return SumM{{std::move(a), std::move(b)}}; }
inline GenFuncExprM product(GenFuncExprM a, GenFuncExprM b) { return ProductM{{std::move(a), std::move(b)}}; }
inline GenFuncExprM scaled(double w, GenFuncExprM f) { return product(constant(w), std::move(f)); }
inline GenFuncExprM sub(GenFuncExprM a, GenFuncExprM b) { return sum(std::move(a), scaled(-1.0, std::move(b))); }

inline GenFuncExprM ordinary_lie(GenFuncExprM f, VectorField<1> x) {
    if (x.domain != Domain::Circle) throw InvalidArgument("circle Lie derivative needs a periodic vector field");
    return OrdinaryLieM{std::move(x), {std::move(f)}};
}

inline GenFuncExprM covariant_scalar(GenFuncExprM f, VectorField<1> x) { return ordinary_lie(std::move(f), std::move(x)); }

inline GenFuncExprM generalized_lie(GenFuncExprM f, VectorField<1> x) {
    if (x.domain != Domain::Circle) throw InvalidArgument("circle Lie derivative needs a periodic vector field");
    return GeneralizedLieM{std::move(x), {std::move(f)}};
}

inline GenFuncExprM pullback(GenFuncExprM f, CircleDiffeo psi) { return PullbackM{std::move(psi), {std::move(f)}}; }

}  // namespace gm

inline GenFuncExprM pullback_circle(GenFuncExprM f, const CircleDiffeo& psi) { return gm::pullback(std::move(f), psi); }

struct EvalOptionsM {
    double tol = quad::kDefaultTolerance;
    /// Pair Iota leaves against the kernel density itself instead of the
    /// algebraic shortcuts (moment split, L^Omega integration by parts).
    bool by_density = false;
};

namespace detail {

inline SplitValue leaf_pair(const Distribution<1>& u, const SmoothingKernel& w, double x, int k, const EvalOptionsM& opt) {
    if (opt.by_density) return pair_split(u, w.as_test_function(x, k), opt.tol);
    return w.pair(u, x, k, opt.tol);
}

inline SplitValue chain_rule_split(int n, const std::vector<SplitValue>& g, const std::vector<double>& h) {
    if (n == 0) return g[0];
    std::vector<double> xs(h.begin() + 1, h.end());
    SplitValue s;
    for (int k = 1; k <= n; ++k) s += bell_partial(n, k, xs) * g[static_cast<std::size_t>(k)];
    return s;
}

inline SplitValue lie_term(const VectorField<1>& x, double at, int k, const std::function<SplitValue(int)>& child) {
    const auto& a = x.components[0];
    SplitValue s;
    for (int i = 0; i <= k; ++i) {
        const double c = binomial(k, i) * a.derivative(i, at);
        if (c != 0.0) s += c * child(k - i + 1);
    }
    return s;
}

}  // namespace detail

inline SplitValue evaluate_diff_split(const GenFuncExprM& f, const KernelPtr& omega, const KernelPtr& theta, double x, int k,
                               const EvalOptionsM& opt = {});

/// d_x^k F(omega)(x).
inline SplitValue evaluate_m_split(const GenFuncExprM& f, const KernelPtr& omega, double x, int k = 0,
                                   const EvalOptionsM& opt = {}) {
    return std::visit(
        [&](const auto& n) -> SplitValue {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, IotaM>) {
                return detail::leaf_pair(n.u, *omega, x, k, opt);
            } else if constexpr (std::is_same_v<N, SigmaM>) {
                return SplitValue::from_classical(n.f.derivative(k, x));
            } else if constexpr (std::is_same_v<N, Const>) {
                return SplitValue::from_classical(k == 0 ? n.c : 0.0);
            } else if constexpr (std::is_same_v<N, SumM>) {
                SplitValue s;
                for (const auto& t : n.terms) s += evaluate_m_split(t, omega, x, k, opt);
                return s;
            } else if constexpr (std::is_same_v<N, ProductM>) {
                SplitValue s;
                for (int j = 0; j <= k; ++j)
                    s += binomial(k, j) * (evaluate_m_split(n.factors[0], omega, x, j, opt) *
                                           evaluate_m_split(n.factors[1], omega, x, k - j, opt));
                return s;
            } else if constexpr (std::is_same_v<N, OrdinaryLieM>) {
                return detail::lie_term(n.x, x, k, [&](int j) { return evaluate_m_split(n.child[0], omega, x, j, opt); });
            } else if constexpr (std::is_same_v<N, GeneralizedLieM>) {
                const KernelPtr sk = lie_kernel_sk(omega, n.x);
                return detail::lie_term(n.x, x, k, [&](int j) { return evaluate_m_split(n.child[0], omega, x, j, opt); }) -
                       evaluate_diff_split(n.child[0], omega, sk, x, k, opt);
            } else {
                const KernelPtr moved = pullback_kernel(omega, n.psi);
                const auto h = n.psi.derivatives(x, k);
                std::vector<SplitValue> g;
                for (int j = 0; j <= k; ++j) g.push_back(evaluate_m_split(n.child[0], moved, h[0], j, opt));
                return detail::chain_rule_split(k, g, h);
            }
        },
        f.node());
}

/// d_x^k [dF(omega)(theta)](x), the Gateaux differential in the kernel slot.
inline SplitValue evaluate_diff_split(const GenFuncExprM& f, const KernelPtr& omega, const KernelPtr& theta, double x,
                                      int k, const EvalOptionsM& opt) {
    return std::visit(
        [&](const auto& n) -> SplitValue {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, IotaM>) {
                return detail::leaf_pair(n.u, *theta, x, k, opt);
            } else if constexpr (std::is_same_v<N, SigmaM> || std::is_same_v<N, Const>) {
                return SplitValue{};
            } else if constexpr (std::is_same_v<N, SumM>) {
                SplitValue s;
                for (const auto& t : n.terms) s += evaluate_diff_split(t, omega, theta, x, k, opt);
                return s;
            } else if constexpr (std::is_same_v<N, ProductM>) {
                SplitValue s;
                for (int j = 0; j <= k; ++j)
                    s += binomial(k, j) * (evaluate_diff_split(n.factors[0], omega, theta, x, j, opt) *
                                               evaluate_m_split(n.factors[1], omega, x, k - j, opt) +
                                           evaluate_m_split(n.factors[0], omega, x, j, opt) *
                                               evaluate_diff_split(n.factors[1], omega, theta, x, k - j, opt));
                return s;
            } else if constexpr (std::is_same_v<N, OrdinaryLieM>) {
                return detail::lie_term(n.x, x, k,
                                        [&](int j) { return evaluate_diff_split(n.child[0], omega, theta, x, j, opt); });
            } else if constexpr (std::is_same_v<N, GeneralizedLieM>) {
                throw UnsupportedDifferential("differential of a generalized Lie derivative has no closed form here");
            } else {
                const KernelPtr moved = pullback_kernel(omega, n.psi);
                const KernelPtr moved_theta = pullback_kernel(theta, n.psi);
                const auto h = n.psi.derivatives(x, k);
                std::vector<SplitValue> g;
                for (int j = 0; j <= k; ++j) g.push_back(evaluate_diff_split(n.child[0], moved, moved_theta, h[0], j, opt));
                return detail::chain_rule_split(k, g, h);
            }
        },
        f.node());
}

inline double evaluate_m(const GenFuncExprM& f, const KernelPtr& omega, double x, int k = 0, const EvalOptionsM& opt = {}) {
    return evaluate_m_split(f, omega, x, k, opt).value();
}

inline double evaluate_diff(const GenFuncExprM& f, const KernelPtr& omega, const KernelPtr& theta, double x, int k = 0,
                            const EvalOptionsM& opt = {}) {
    return evaluate_diff_split(f, omega, theta, x, k, opt).value();
}

/// L_X u = a u' for u acting on 1-forms: <L_X u, mu> = -<u, (a mu)'>.
inline Distribution<1> lie_derivative_s1(const Distribution<1>& u, const VectorField<1>& x) {
    return dist::multiplied(x.components[0], dist::derivative(1, u));
}

/// Points where F has eps-scale structure, for x-quadrature panel breaks.
inline std::vector<double> singular_points(const GenFuncExprM& f) {
    std::vector<double> out;
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, IotaM>) {
                const auto s = singular_support(n.u)[0];
                out.insert(out.end(), s.begin(), s.end());
            } else if constexpr (std::is_same_v<N, SumM>) {
                for (const auto& t : n.terms) {
                    const auto s = singular_points(t);
                    out.insert(out.end(), s.begin(), s.end());
                }
            } else if constexpr (std::is_same_v<N, ProductM>) {
                for (const auto& t : n.factors) {
                    const auto s = singular_points(t);
                    out.insert(out.end(), s.begin(), s.end());
                }
            } else if constexpr (std::is_same_v<N, OrdinaryLieM> || std::is_same_v<N, GeneralizedLieM>) {
                out = singular_points(n.child[0]);
            } else if constexpr (std::is_same_v<N, PullbackM>) {
                for (double p : singular_points(n.child[0])) out.push_back(n.psi.inverse(p));
            }
        },
        f.node());
    for (double& p : out) p = CirclePoint::canonical(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace colombeau::circle
