#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "colombeau/asymptotics.hpp"
#include "colombeau/distributions.hpp"
#include "colombeau/genfunc.hpp"

namespace colombeau {

inline constexpr double kAssociationTolerance = 1e-3;
/// Candidate pairings this small count as the zero distribution.
inline constexpr double kZeroCandidate = 1e-12;

/// eps_j = eps_max 2^-j, the grid Richardson extrapolation expects.
inline EpsGrid dyadic_grid(double eps_max = 0.1, int count = 8) {
    return EpsGrid(eps_max, eps_max * std::pow(0.5, count - 1), count);
}

/// int F(phi_eps, x) Psi(x) dx over supp Psi, with panels broken at the eps-scale features of F.
template <int Dim>
double weak_pairing(const GenFuncExpr<Dim>& f, const EvalContext<Dim>& ctx, const TestFunction<Dim>& psi) {
    quad::Box<Dim> box = psi.support();
    box.breakpoints = eps_breakpoints(f, ctx.eps);
    return quad::integrate<Dim>(
               [&](const Point<Dim>& x) {
                   const double p = psi(x);
                   return p == 0.0 ? 0.0 : evaluate(f, ctx, x) * p;
               },
               box, ctx.tol)
        .value;
}

struct Richardson {
    double value = 0.0;
    double error = 0.0;
};

/// Two-level Richardson on a ratio-2 sequence: A = L + c1 eps + c2 eps^2 + ...
inline Richardson richardson(const std::vector<double>& a) {
    if (a.size() < 4) throw InvalidArgument("Richardson extrapolation needs at least 4 levels");
    std::vector<double> r1, r2;
    for (std::size_t j = 0; j + 1 < a.size(); ++j) r1.push_back(2.0 * a[j + 1] - a[j]);
    for (std::size_t j = 0; j + 1 < r1.size(); ++j) r2.push_back((4.0 * r1[j + 1] - r1[j]) / 3.0);
    return {r2.back(), std::abs(r2.back() - r2[r2.size() - 2])};
}

enum class AssociationKind { AssociatedTo, AssociatedToZero, Divergent, Inconclusive };

struct AssociationVerdict {
    AssociationKind kind = AssociationKind::Inconclusive;
    std::string candidate;
    int growth = 0;

    std::string str() const {
        switch (kind) {
            case AssociationKind::AssociatedTo: return "AssociatedTo(" + candidate + ")";
            case AssociationKind::AssociatedToZero: return "AssociatedToZero";
            case AssociationKind::Divergent: return "Divergent(" + std::to_string(growth) + ")";
            default: return "Inconclusive";
        }
    }
};

struct AssociationRow {
    std::string psi;
    std::string phi;
    int phi_order = 0;
    std::vector<double> eps;
    std::vector<double> pairings;
    OrderEstimate growth;
    Richardson extrapolated;      // of the pairing, or of eps^N pairing when divergent
    std::optional<double> candidate_value;
    std::optional<double> deviation;
    AssociationVerdict verdict;
};

struct AssociationReport {
    std::string case_name;
    std::vector<AssociationRow> rows;
    AssociationVerdict verdict;
    double tol = kAssociationTolerance;

    double max_deviation() const {
        double d = 0.0;
        for (const auto& r : rows)
            if (r.deviation) d = std::max(d, *r.deviation);
        return d;
    }
};

struct AssociateOptions {
    EpsGrid grid = dyadic_grid();
    double tol = kAssociationTolerance;
    double quad_tol = 1e-11;
};

namespace detail {

inline void require_dyadic(const EpsGrid& g) {
    if (std::abs(g.ratio() - 0.5) > 1e-9) throw InvalidArgument("association needs a ratio-2 eps grid");
    if (g.count < 4) throw InvalidArgument("association needs at least 4 eps levels");
}

/// Shared row logic for R^n and the circle: growth fit, extrapolation, comparison.
inline void classify_row(AssociationRow& row, double tol) {
    std::vector<Sample> samples;
    for (std::size_t j = 0; j < row.eps.size(); ++j) samples.push_back({row.eps[j], row.pairings[j]});
    row.growth = estimate_order(samples);
    const double g = -row.growth.slope;
    const bool fit_ok = row.growth.max_residual <= kResidualLimit && row.growth.clipped == 0;
    if (fit_ok && g >= 1.0 - kSlopeMargin && std::abs(row.pairings.back()) > tol) {
        // Growth order: the fitted exponent rounded toward zero, after the slope margin.
        const int n = static_cast<int>(g + kSlopeMargin);
        std::vector<double> scaled;
        for (std::size_t j = 0; j < row.eps.size(); ++j) scaled.push_back(std::pow(row.eps[j], n) * row.pairings[j]);
        row.extrapolated = richardson(scaled);
        row.verdict = {AssociationKind::Divergent, "", n};
        return;
    }
    row.extrapolated = richardson(row.pairings);
    if (row.candidate_value) {
        row.deviation = std::abs(row.extrapolated.value - *row.candidate_value);
        if (*row.deviation <= tol) {
            row.verdict.kind = std::abs(*row.candidate_value) <= kZeroCandidate ? AssociationKind::AssociatedToZero
                                                                              : AssociationKind::AssociatedTo;
        }
    } else if (std::abs(row.extrapolated.value) <= tol) {
        row.verdict.kind = AssociationKind::AssociatedToZero;
    }
}

/// Unanimity across rows.
inline AssociationVerdict combine(const std::vector<AssociationRow>& rows, const std::string& candidate) {
    AssociationVerdict v;
    if (rows.empty()) return v;
    const auto first = rows.front().verdict;
    bool all_div = true, all_match = true, all_zero = true;
    for (const auto& r : rows) {
        all_div = all_div && r.verdict.kind == AssociationKind::Divergent && r.verdict.growth == first.growth;
        all_zero = all_zero && r.verdict.kind == AssociationKind::AssociatedToZero;
        all_match = all_match && (r.verdict.kind == AssociationKind::AssociatedTo ||
                                  r.verdict.kind == AssociationKind::AssociatedToZero);
    }
    if (all_div) return {AssociationKind::Divergent, "", first.growth};
    if (all_zero) return {AssociationKind::AssociatedToZero, candidate, 0};
    if (all_match) return {AssociationKind::AssociatedTo, candidate, 0};
    return v;
}

}  // namespace detail

/// Weak limits of F per (Psi, phi); the verdict requires all of them to agree.
template <int Dim>
AssociationReport associate(const GenFuncExpr<Dim>& f, const std::vector<TestFunction<Dim>>& psis,
                            const std::vector<MollifierNDPtr<Dim>>& phis,
                            const std::optional<Distribution<Dim>>& candidate, const AssociateOptions& opt = {},
                            std::string case_name = {}) {
    if (psis.empty() || phis.empty()) throw InvalidArgument("associate needs test functions and mollifiers");
    detail::require_dyadic(opt.grid);
    AssociationReport rep;
    rep.case_name = case_name.empty() ? f.str() : std::move(case_name);
    rep.tol = opt.tol;
    const auto eps = opt.grid.values();
    for (const auto& psi : psis) {
        std::optional<double> cv;
        if (candidate) cv = pair(*candidate, psi, opt.quad_tol);
        for (const auto& phi : phis) {
            AssociationRow row;
            row.psi = psi.name();
            row.phi = phi->label();
            row.phi_order = phi->order();
            row.eps = eps;
            row.candidate_value = cv;
            for (double e : eps) row.pairings.push_back(weak_pairing(f, EvalContext<Dim>(phi, e, opt.quad_tol), psi));
            detail::classify_row(row, opt.tol);
            rep.rows.push_back(std::move(row));
        }
    }
    rep.verdict = detail::combine(rep.rows, candidate ? candidate->str() : "");
    return rep;
}

/// Default test functions: both are nonzero at the origin.
inline std::vector<TestFunction<1>> default_psis() { return {testfn::tilted_bump(), testfn::cos_bump()}; }

inline std::vector<MollifierNDPtr<1>> default_phis() {
    return {strict_mollifier<1>(0), strict_mollifier<1>(2), strict_mollifier<1>(4)};
}

/// iota(f) iota(T) against iota(f T), f smooth.
inline AssociationReport check_product_compat(const SmoothFunction<1>& f, const Distribution<1>& t,
                                              const AssociateOptions& opt = {},
                                              std::vector<TestFunction<1>> psis = default_psis(),
                                              std::vector<MollifierNDPtr<1>> phis = default_phis()) {
    auto product = gf::product(gf::iota(dist::regular(f)), gf::iota(t));
    return associate<1>(product, psis, phis, dist::multiplied(f, t), opt,
                        "iota(" + f.name() + ")*iota(" + t.str() + ")");
}

/// iota(f) iota(g) against iota(f g), f and g continuous; fg is supplied classically.
inline AssociationReport check_product_compat(const RegularFunction<1>& f, const RegularFunction<1>& g,
                                              const Distribution<1>& fg, const AssociateOptions& opt = {},
                                              std::vector<TestFunction<1>> psis = default_psis(),
                                              std::vector<MollifierNDPtr<1>> phis = default_phis()) {
    auto product = gf::product(gf::iota(dist::regular(f)), gf::iota(dist::regular(g)));
    return associate<1>(product, psis, phis, fg, opt, "iota(" + f.name() + ")*iota(" + g.name() + ")");
}

/// X^a d_a iota(T), built from sigma(X^a) partial_a iota(T).
template <int Dim>
GenFuncExpr<Dim> lie_of_embedding(const Distribution<Dim>& t, const VectorField<Dim>& x) {
    std::vector<GenFuncExpr<Dim>> terms;
    for (std::size_t a = 0; a < Dim; ++a)
        terms.push_back(gf::product(gf::sigma(x.components[a]),
                                    gf::partial(MultiIndex<Dim>::unit(static_cast<int>(a)), gf::iota(t))));
    return gf::sum(std::move(terms));
}

/// L_X iota(T) against iota(L_X T).
inline AssociationReport check_lie_assoc(const Distribution<1>& t, const VectorField<1>& x,
                                         const AssociateOptions& opt = {},
                                         std::vector<TestFunction<1>> psis = default_psis(),
                                         std::vector<MollifierNDPtr<1>> phis = default_phis()) {
    return associate<1>(lie_of_embedding(t, x), psis, phis, lie_derivative_dist(t, x), opt,
                        "L_{" + x.name + "} iota(" + t.str() + ")");
}

}  // namespace colombeau
