#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "colombeau/distributions.hpp"
#include "colombeau/mollifier.hpp"
#include "colombeau/smooth.hpp"
#include "colombeau/split_value.hpp"

namespace colombeau {

/// (phi, eps) at which elements of the basic space are evaluated.
template <int Dim>
struct EvalContext {
    MollifierNDPtr<Dim> mollifier;
    double eps = 0.1;
    double tol = quad::kDefaultTolerance;

    EvalContext(MollifierNDPtr<Dim> m, double e, double t = quad::kDefaultTolerance)
        : mollifier(std::move(m)), eps(e), tol(t) {
        if (!mollifier) throw InvalidArgument("evaluation context needs a mollifier");
        if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
    }

    EvalContext with_eps(double e) const { return EvalContext(mollifier, e, tol); }
};

template <int Dim>
class GenFuncExpr;

template <int Dim>
struct Iota {
    Distribution<Dim> t;
};

template <int Dim>
struct Sigma {
    SmoothFunction<Dim> f;
};

struct Const {
    double c = 0.0;
};

template <int Dim>
struct SumOf {
    std::vector<GenFuncExpr<Dim>> terms;
};

template <int Dim>
struct ProductOf {
    GenFuncExpr<Dim> left;
    GenFuncExpr<Dim> right;
};

template <int Dim>
struct PartialOf {
    MultiIndex<Dim> order{};
    GenFuncExpr<Dim> child;
};

/// Polynomial expression in embedded distributions and smooth functions.
template <int Dim>
class GenFuncExpr {
public:
    using Node = std::variant<Iota<Dim>, Sigma<Dim>, Const, SumOf<Dim>, ProductOf<Dim>, PartialOf<Dim>>;

    GenFuncExpr() : GenFuncExpr(Const{0.0}) {}

    template <class N>
        requires is_one_of_v<N, Iota<Dim>, Sigma<Dim>, Const, SumOf<Dim>, ProductOf<Dim>, PartialOf<Dim>>
    GenFuncExpr(N node) : node_(std::make_shared<const Node>(std::move(node))) {}

    const Node& node() const { return *node_; }

    template <class N>
    const N* as() const {
        return std::get_if<N>(node_.get());
    }

    std::string str() const {
        return std::visit(
            [](const auto& n) -> std::string {
                using N = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<N, Iota<Dim>>) {
                    return "iota(" + n.t.str() + ")";
                } else if constexpr (std::is_same_v<N, Sigma<Dim>>) {
                    return "sigma(" + n.f.name() + ")";
                } else if constexpr (std::is_same_v<N, Const>) {
                    return format_real(n.c);
                } else if constexpr (std::is_same_v<N, SumOf<Dim>>) {
                    std::string s = "sum(";
                    for (std::size_t i = 0; i < n.terms.size(); ++i) s += (i ? ", " : "") + n.terms[i].str();
                    return s + ")";
                } else if constexpr (std::is_same_v<N, ProductOf<Dim>>) {
                    return "prod(" + n.left.str() + ", " + n.right.str() + ")";
                } else {
                    return "partial(" + n.order.str() + ", " + n.child.str() + ")";
                }
            },
            *node_);
    }

private:
    std::shared_ptr<const Node> node_;
};

namespace gf {

template <int Dim>
GenFuncExpr<Dim> iota(Distribution<Dim> t) {
    return Iota<Dim>{std::move(t)};
}

template <int Dim>
GenFuncExpr<Dim> sigma(SmoothFunction<Dim> f) {
    return Sigma<Dim>{std::move(f)};
}

template <int Dim = 1>
GenFuncExpr<Dim> constant(double c) {
    return GenFuncExpr<Dim>(Const{c});
}

template <int Dim>
GenFuncExpr<Dim> sum(std::vector<GenFuncExpr<Dim>> terms) {
    return SumOf<Dim>{std::move(terms)};
}

template <int Dim>
GenFuncExpr<Dim> sum(GenFuncExpr<Dim> a, GenFuncExpr<Dim> b) {
    return SumOf<Dim>{{std::move(a), std::move(b)}};
}

template <int Dim>
GenFuncExpr<Dim> product(GenFuncExpr<Dim> a, GenFuncExpr<Dim> b) {
    return ProductOf<Dim>{std::move(a), std::move(b)};
}

template <int Dim>
GenFuncExpr<Dim> scaled(double w, GenFuncExpr<Dim> f) {
    return product(constant<Dim>(w), std::move(f));
}

template <int Dim>
GenFuncExpr<Dim> sub(GenFuncExpr<Dim> a, GenFuncExpr<Dim> b) {
    return sum(std::move(a), scaled(-1.0, std::move(b)));
}

template <int Dim>
GenFuncExpr<Dim> partial(const MultiIndex<Dim>& k, GenFuncExpr<Dim> f) {
    require_order(k);
    return PartialOf<Dim>{k, std::move(f)};
}

inline GenFuncExpr<1> partial(int k, GenFuncExpr<1> f) { return partial(MultiIndex<1>({k}), std::move(f)); }

}  // namespace gf

/// d^k F(phi_eps, x), split into classical and correction parts.
///
/// Partial derivatives are accumulated down the tree and land on the kernel of
/// each Iota leaf (d_x^k tau_x phi_eps), on sigma leaves analytically, and are
/// distributed over products by Leibniz.
template <int Dim>
SplitValue evaluate_split(const GenFuncExpr<Dim>& f, const EvalContext<Dim>& ctx, const PointArg<Dim>& x,
                          const MultiIndex<Dim>& k = {}) {
    require_order(k);
    return std::visit(
        [&](const auto& n) -> SplitValue {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Iota<Dim>>) {
                return pair_split(n.t, TestFunction<Dim>::kernel(ctx.mollifier, ctx.eps, x, k), ctx.tol);
            } else if constexpr (std::is_same_v<N, Sigma<Dim>>) {
                return SplitValue::from_classical(n.f.derivative(k, x));
            } else if constexpr (std::is_same_v<N, Const>) {
                return SplitValue::from_classical(k.order() == 0 ? n.c : 0.0);
            } else if constexpr (std::is_same_v<N, SumOf<Dim>>) {
                SplitValue s;
                for (const auto& t : n.terms) s += evaluate_split(t, ctx, x, k);
                return s;
            } else if constexpr (std::is_same_v<N, ProductOf<Dim>>) {
                SplitValue s;
                for_each_sub_index(k, [&](const MultiIndex<Dim>& j) {
                    s += binomial(k, j) *
                         (evaluate_split(n.left, ctx, x, j) * evaluate_split(n.right, ctx, x, k - j));
                });
                return s;
            } else {
                return evaluate_split(n.child, ctx, x, k + n.order);
            }
        },
        f.node());
}

template <int Dim>
double evaluate(const GenFuncExpr<Dim>& f, const EvalContext<Dim>& ctx, const PointArg<Dim>& x,
                const MultiIndex<Dim>& k = {}) {
    return evaluate_split(f, ctx, x, k).value();
}

inline double evaluate(const GenFuncExpr<1>& f, const EvalContext<1>& ctx, double x, int k = 0) {
    return evaluate(f, ctx, Point<1>{x}, MultiIndex<1>({k}));
}

/// Union of the singular supports of all embedded distributions in F.
template <int Dim>
std::array<std::vector<double>, Dim> singular_support(const GenFuncExpr<Dim>& f) {
    std::array<std::vector<double>, Dim> out;
    auto merge = [&](const std::array<std::vector<double>, Dim>& more) {
        for (std::size_t a = 0; a < Dim; ++a) out[a].insert(out[a].end(), more[a].begin(), more[a].end());
    };
    std::visit(
        [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Iota<Dim>>) {
                merge(singular_support(n.t));
            } else if constexpr (std::is_same_v<N, SumOf<Dim>>) {
                for (const auto& t : n.terms) merge(singular_support(t));
            } else if constexpr (std::is_same_v<N, ProductOf<Dim>>) {
                merge(singular_support(n.left));
                merge(singular_support(n.right));
            } else if constexpr (std::is_same_v<N, PartialOf<Dim>>) {
                merge(singular_support(n.child));
            }
        },
        f.node());
    for (auto& v : out) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
}

/// Panel breaks for x-integrals of F at scale eps: each singular point p and p +- eps.
template <int Dim>
std::array<std::vector<double>, Dim> eps_breakpoints(const GenFuncExpr<Dim>& f, double eps) {
    auto pts = singular_support(f);
    std::array<std::vector<double>, Dim> out;
    for (std::size_t a = 0; a < Dim; ++a)
        for (double p : pts[a])
            for (double d : {-eps, -0.5 * eps, 0.0, 0.5 * eps, eps}) out[a].push_back(p + d);
    return out;
}

}  // namespace colombeau
