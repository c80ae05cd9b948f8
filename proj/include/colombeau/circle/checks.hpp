#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "colombeau/association.hpp"
#include "colombeau/asymptotics.hpp"
#include "colombeau/circle/genfunc_m.hpp"

namespace colombeau::circle {

/// The whole circle as a compact set.
inline CompactRegion<1> whole_circle() { return CompactRegion<1>::interval(0.0, kTwoPi); }

inline constexpr int kFocusPoints = 512;

/// max |g(x)| over K with step <= eps/4 (at least 64 intervals), plus a dense
/// eps-scaled grid across [p - eps R, p + eps R] for each focus point p in K.
inline SupResult sup_on_arc(const std::function<double(double)>& g, const CompactRegion<1>& k_region, double eps,
                            const std::vector<double>& focus = {}, double radius = 1.0) {
    const double required = eps / 4.0;
    if (k_region.step > required)
        throw InvalidArgument("grid step " + format_real(k_region.step) + " undersamples eps = " + format_real(eps));
    const double lo = k_region.lo[0], hi = k_region.hi[0];
    const double width = hi - lo;
    const double h = k_region.step > 0.0 ? k_region.step : required;
    const int n = std::max(kMinSupIntervals, static_cast<int>(std::ceil(width / h)));
    SupResult r;
    r.step = width / n;
    auto visit = [&](double x) {
        r.value = std::max(r.value, std::abs(g(x)));
        ++r.points;
    };
    for (int i = 0; i <= n; ++i) visit(lo + width * i / n);
    for (double p : focus)
        for (int i = 0; i <= kFocusPoints; ++i) {
            double x = p + eps * radius * (2.0 * i / kFocusPoints - 1.0);
            // fold into K through the period when K is the whole circle
            if (width >= kTwoPi) x = lo + CirclePoint::canonical(x - lo);
            if (x >= lo && x <= hi) visit(x);
        }
    return r;
}

/// All words X_1 ... X_k over the catalog.
inline std::vector<std::vector<VectorField<1>>> lie_chains(const std::vector<VectorField<1>>& catalog, int k) {
    std::vector<std::vector<VectorField<1>>> out{{}};
    for (int i = 0; i < k; ++i) {
        std::vector<std::vector<VectorField<1>>> next;
        for (const auto& w : out)
            for (const auto& x : catalog) {
                auto v = w;
                v.push_back(x);
                next.push_back(std::move(v));
            }
        out = std::move(next);
    }
    return out;
}

/// L~_{X_1} ... L~_{X_k} F, innermost X_k.
inline GenFuncExprM apply_chain(GenFuncExprM f, const std::vector<VectorField<1>>& chain) {
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) f = gm::ordinary_lie(std::move(f), *it);
    return f;
}

inline std::string chain_name(const std::vector<VectorField<1>>& chain) {
    if (chain.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < chain.size(); ++i) s += (i ? "," : "") + chain[i].name;
    return s;
}

// ---------------------------------------------------------------------------
// delta nets

struct SupportRow {
    double eps = 0.0;
    bool flagged = false;  // eps R >= pi: outside the verifiable range
    std::size_t points = 0;
    double max_outside = 0.0;
};

struct DecayRow {
    std::string f;
    std::string chain;
    int k = 0;
    int expected = 0;
    OrderEstimate estimate;
    bool passed = false;
};

struct GrowthRow {
    std::string u;
    std::string chain;
    int k = 0;
    std::optional<int> n;
};

struct WeakRow {
    std::string u;
    std::string mu;
    double eps = 0.0;
    double value = 0.0;
    double exact = 0.0;
    double deviation = 0.0;
    bool passed = false;
};

struct MassRow {
    double eps = 0.0;
    double mass = 0.0;      // int omega
    double abs_mass = 0.0;  // int |omega|
};

/// One window of an escalating net: a fixed generator of order q scanned near eps_j.
struct WindowRow {
    double eps = 0.0;
    int q = 0;
    OrderEstimate estimate;
};

struct DeltaNetReport {
    std::string net;
    std::vector<SupportRow> cond1;
    bool cond1_passed = false;
    std::vector<DecayRow> cond2;
    std::vector<WindowRow> cond2_windows;  // escalating nets only
    bool cond2_passed = false;
    std::vector<GrowthRow> cond3;
    bool cond3_passed = false;
    std::vector<WeakRow> cond4;
    bool cond4_passed = false;
    std::vector<MassRow> mass;
    bool unit_mass = false;
    bool l1_unit = false;
    std::vector<Sample> l1_derivative;  // sup_x int |d_x omega_x|
    OrderEstimate l1_derivative_fit;
    bool l1_derivative_passed = false;

    bool delta_net() const { return cond1_passed && cond2_passed && cond3_passed && cond4_passed && unit_mass; }
    bool passed() const { return delta_net() && l1_unit && l1_derivative_passed; }

    /// Largest certified m over the condition (2) rows (minimum across rows).
    std::optional<int> certified_m() const {
        std::optional<int> m;
        for (const auto& r : cond2) {
            if (r.estimate.verdict.kind != VerdictKind::DecaysAtLeast) return std::nullopt;
            m = std::min(m.value_or(r.estimate.verdict.order), r.estimate.verdict.order);
        }
        return m;
    }

    std::optional<int> certified_n(const std::string& u, int k) const {
        std::optional<int> n;
        for (const auto& r : cond3) {
            if (r.u != u || r.k != k) continue;
            if (!r.n) return std::nullopt;
            n = std::max(n.value_or(0), *r.n);
        }
        return n;
    }
};

struct VerifyNetOptions {
    EpsGrid grid{1e-1, 1e-3, 20};
    CompactRegion<1> region = whole_circle();
    int m_max = 5;
    int k_max = 2;
    std::vector<SmoothFunction<1>> f_catalog{smooth::sine(), forms::trig_mix()};
    std::vector<Distribution<1>> u_catalog{dist::delta(1.0)};
    std::vector<VectorField<1>> x_catalog{fields::constant(1.0, Domain::Circle), fields::sin_theta()};
    std::vector<SmoothFunction<1>> mu_catalog{forms::exp_cos()};
    double weak_tol = 1e-3;
    double mass_tol = 1e-10;
    int support_samples = 8;      // base points x per eps
    int escalation_windows = 6;   // windows eps_j = 2^-j, j = 1..
    double tol = 1e-12;
};

namespace detail {

/// Panel breaks for x-integrals over the circle: p + {0, +-eps/2, +-eps}, wrapped.
inline std::vector<double> circle_breakpoints(const std::vector<double>& singular, double eps) {
    std::vector<double> out;
    for (double p : singular)
        for (double d : {-eps, -0.5 * eps, 0.0, 0.5 * eps, eps}) out.push_back(CirclePoint::canonical(p + d));
    std::sort(out.begin(), out.end());
    return out;
}

/// int_0^{2 pi} g. Near eps-scale features the integrand is of size eps^-k and its
/// rounding noise scales with it, so the tolerance is floored relative to that size.
inline double circle_integral(const std::function<double(double)>& g, const std::vector<double>& breaks, double tol) {
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        for (int j = 0; j <= 16; ++j) {
            const double x = breaks[i] + (breaks[i + 1] - breaks[i]) * j / 16.0;
            scale = std::max(scale, std::abs(g(x)) * (breaks[i + 1] - breaks[i]));
        }
    return quad::integrate_1d(g, 0.0, kTwoPi, breaks, std::max(tol, 1e-13 * scale)).value;
}

/// int |g| over [a, b], with the sign changes of g located and used as panel breaks.
inline double abs_integral(const std::function<double(double)>& g, double a, double b, double rel_tol) {
    constexpr int kScan = 1024;
    std::vector<double> breaks;
    double scale = 0.0;
    double prev = g(a);
    for (int i = 1; i <= kScan; ++i) {
        const double lo = a + (b - a) * (i - 1) / kScan, hi = a + (b - a) * i / kScan;
        const double cur = g(hi);
        scale = std::max(scale, std::abs(cur));
        if ((prev < 0.0) != (cur < 0.0) && prev != 0.0 && cur != 0.0) {
            double l = lo, h = hi, gl = prev;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (l + h);
                const double gm = g(m);
                if ((gm < 0.0) == (gl < 0.0)) {
                    l = m;
                    gl = gm;
                } else {
                    h = m;
                }
            }
            breaks.push_back(0.5 * (l + h));
        }
        prev = cur;
    }
    const double tol = rel_tol * std::max(1.0, scale * (b - a));
    return quad::integrate_1d([&](double y) { return std::abs(g(y)); }, a, b, breaks, tol).value;
}

inline int expected_decay(const KernelNet& net, double eps, int m_max) { return std::min(m_max, net.order(eps) + 1); }

inline bool constant_order(const KernelNet& net, const EpsGrid& grid) {
    const auto e = grid.values();
    return net.order(e.front()) == net.order(e.back());
}

}  // namespace detail

/// Conditions (1)-(4) of a delta net plus the optional L1 conditions.
inline DeltaNetReport verify_delta_net(const KernelNet& net, const VerifyNetOptions& opt = {}) {
    if (opt.f_catalog.empty() || opt.u_catalog.empty() || opt.x_catalog.empty() || opt.mu_catalog.empty())
        throw InvalidArgument("verify_delta_net needs nonempty catalogs");
    DeltaNetReport rep;
    rep.net = net.name;
    const auto eps_values = opt.grid.values();

    // (1) support: density exactly zero outside the ball of radius eps R
    rep.cond1_passed = true;
    for (double eps : eps_values) {
        SupportRow row{eps, eps * net.radius >= kPi, 0, 0.0};
        if (!row.flagged) {
            const auto w = net.at(eps);
            const double r = eps * net.radius;
            for (int i = 0; i < opt.support_samples; ++i) {
                const double x = kTwoPi * (i + 0.37) / opt.support_samples;
                constexpr int kOutside = 128;
                for (int j = 0; j <= kOutside; ++j) {
                    // y runs over the complementary arc, endpoints just outside the ball
                    const double y = x + r * (1.0 + 1e-12) + (kTwoPi - 2.0 * r * (1.0 + 1e-12)) * j / kOutside;
                    row.max_outside = std::max(row.max_outside, std::abs(w->density(0, 0, x, y)));
                    ++row.points;
                }
            }
            rep.cond1_passed = rep.cond1_passed && row.max_outside == 0.0;
        }
        rep.cond1.push_back(row);
    }

    // (2) L~ chains of iota(f) - sigma(f) decay
    rep.cond2_passed = true;
    if (detail::constant_order(net, opt.grid)) {
        const int expected = detail::expected_decay(net, eps_values.back(), opt.m_max);
        for (const auto& f : opt.f_catalog) {
            const auto diff = gm::sub(gm::iota(dist::regular(f)), gm::sigma(f));
            for (int k = 0; k <= opt.k_max; ++k)
                for (const auto& chain : lie_chains(opt.x_catalog, k)) {
                    const auto g = apply_chain(diff, chain);
                    std::vector<Sample> samples;
                    for (double eps : eps_values) {
                        const auto w = net.at(eps);
                        samples.push_back({eps, sup_on_arc([&](double x) { return evaluate_m(g, w, x, 0, {opt.tol}); },
                                                           opt.region, eps, singular_points(g), net.radius)
                                                    .value});
                    }
                    DecayRow row{f.name(), chain_name(chain), k, expected, estimate_order(samples), false};
                    row.passed = row.estimate.verdict.decays_at_least(expected);
                    rep.cond2_passed = rep.cond2_passed && row.passed;
                    rep.cond2.push_back(std::move(row));
                }
        }
    } else {
        // escalating: each window certifies the order of its own generator; orders must keep growing
        const auto& f = opt.f_catalog.front();
        const auto diff = gm::sub(gm::iota(dist::regular(f)), gm::sigma(f));
        std::optional<int> last;
        for (int j = 1; j <= opt.escalation_windows; ++j) {
            const double ej = std::ldexp(1.0, -j);
            const int q = net.order(ej);
            const auto fixed = nets::fixed(q);
            std::vector<Sample> samples;
            for (double eps : EpsGrid(ej, ej / 8.0, kMinGridCount).values()) {
                const auto w = fixed.at(eps);
                samples.push_back(
                    {eps, sup_on_arc([&](double x) { return evaluate_m(diff, w, x, 0, {opt.tol}); }, opt.region, eps).value});
            }
            WindowRow row{ej, q, estimate_order(samples)};
            const bool ok = row.estimate.verdict.decays_at_least(q + 1);
            const int got = row.estimate.verdict.kind == VerdictKind::DecaysAtLeast ? row.estimate.verdict.order : 0;
            rep.cond2_passed = rep.cond2_passed && ok && (!last || got > *last);
            last = got;
            rep.cond2_windows.push_back(row);
        }
    }

    // (3) L~ chains of iota(u) grow at most polynomially
    rep.cond3_passed = true;
    for (const auto& u : opt.u_catalog)
        for (int k = 0; k <= opt.k_max; ++k)
            for (const auto& chain : lie_chains(opt.x_catalog, k)) {
                const auto g = apply_chain(gm::iota(u), chain);
                std::vector<Sample> samples;
                for (double eps : eps_values) {
                    const auto w = net.at(eps);
                    samples.push_back({eps, sup_on_arc([&](double x) { return evaluate_m(g, w, x, 0, {opt.tol}); },
                                                       opt.region, eps, singular_points(g), net.radius)
                                                .value});
                }
                GrowthRow row{u.str(), chain_name(chain), k, estimate_order(samples).verdict.growth()};
                rep.cond3_passed = rep.cond3_passed && row.n.has_value();
                rep.cond3.push_back(std::move(row));
            }

    // (4) int <u, omega_x> mu(x) dx -> <u, mu> at the smallest eps
    rep.cond4_passed = true;
    const double eps_min = eps_values.back();
    const auto w_min = net.at(eps_min);
    for (const auto& u : opt.u_catalog) {
        const auto iu = gm::iota(u);
        const auto breaks = detail::circle_breakpoints(singular_points(iu), eps_min);
        for (const auto& mu : opt.mu_catalog) {
            WeakRow row{u.str(), mu.name(), eps_min, 0.0, 0.0, 0.0, false};
            row.value = detail::circle_integral(
                [&](double x) { return evaluate_m(iu, w_min, x, 0, {opt.tol}) * mu.derivative(0, x); }, breaks, 1e-11);
            row.exact = pair(u, periodic_test_form(mu), 1e-12);
            row.deviation = std::abs(row.value - row.exact);
            row.passed = row.deviation <= opt.weak_tol;
            rep.cond4_passed = rep.cond4_passed && row.passed;
            rep.cond4.push_back(row);
        }
    }

    // unit mass and the L1 conditions
    rep.unit_mass = true;
    rep.l1_unit = true;
    for (double eps : eps_values) {
        const auto w = net.at(eps);
        const double x = 1.0;
        const Arc a = w->support(x);
        MassRow row{eps, 0.0, 0.0};
        row.mass = quad::integrate_1d([&](double y) { return w->density(0, 0, x, y); }, a.lo, a.hi, {}, 1e-13).value;
        row.abs_mass = detail::abs_integral([&](double y) { return w->density(0, 0, x, y); }, a.lo, a.hi, 1e-13);
        rep.unit_mass = rep.unit_mass && std::abs(row.mass - 1.0) <= opt.mass_tol;
        rep.l1_unit = rep.l1_unit && std::abs(row.abs_mass - 1.0) <= opt.mass_tol;
        rep.mass.push_back(row);

        double sup = 0.0;
        for (int i = 0; i < opt.support_samples; ++i) {
            const double xi = kTwoPi * (i + 0.37) / opt.support_samples;
            const Arc b = w->support(xi);
            sup = std::max(sup, detail::abs_integral([&](double y) { return w->density(1, 0, xi, y); }, b.lo, b.hi, 1e-10));
        }
        rep.l1_derivative.push_back({eps, sup});
    }
    rep.l1_derivative_fit = estimate_order(rep.l1_derivative);
    rep.l1_derivative_passed = std::abs(rep.l1_derivative_fit.slope + 1.0) <= 0.15;
    return rep;
}

// ---------------------------------------------------------------------------
// negligibility and moderateness with test objects (j = 0, 1)

struct ScanRowM {
    std::string chain;
    int k = 0;
    int j = 0;
    std::string perturbation;  // j = 1 only
    OrderEstimate estimate;
    std::vector<Sample> samples;
};

struct NegligibleReportM {
    std::string f;
    std::string net;
    int m_target = 0;
    std::vector<ScanRowM> rows;
    bool negligible = false;

    /// Smallest certified decay order over all rows.
    std::optional<int> certified_m() const {
        std::optional<int> m;
        for (const auto& r : rows) {
            if (r.estimate.verdict.kind != VerdictKind::DecaysAtLeast) return std::nullopt;
            m = std::min(m.value_or(r.estimate.verdict.order), r.estimate.verdict.order);
        }
        return m;
    }
};

struct ModerateReportM {
    std::string f;
    std::string net;
    std::vector<ScanRowM> rows;
    bool moderate = false;

    std::optional<int> n(int k, int j = 0) const {
        std::optional<int> out;
        for (const auto& r : rows) {
            if (r.k != k || r.j != j) continue;
            const auto g = r.estimate.verdict.growth();
            if (!g) return std::nullopt;
            out = std::max(out.value_or(0), *g);
        }
        return out;
    }
};

struct ScanOptionsM {
    EpsGrid grid{1e-1, 1e-3, 20};
    std::vector<VectorField<1>> x_catalog{fields::constant(1.0, Domain::Circle), fields::sin_theta()};
    double tol = 1e-12;
};

namespace detail {

inline void require_differential(int j_max) {
    if (j_max < 0) throw InvalidArgument("differential order must be nonnegative");
    if (j_max > 1) throw UnsupportedDifferential("differentials of order " + std::to_string(j_max) +
                                                 " are not supported; only j = 0 and j = 1 are scanned");
}

inline std::vector<ScanRowM> scan_m(const GenFuncExprM& f, const CompactRegion<1>& k_region, const KernelNet& net,
                                    const std::vector<KernelNet>& perturbations, int k_max, int j_max,
                                    const ScanOptionsM& opt) {
    require_differential(j_max);
    if (j_max == 1 && perturbations.empty()) throw InvalidArgument("j = 1 scans need at least one kernel perturbation");
    std::vector<ScanRowM> rows;
    for (int k = 0; k <= k_max; ++k)
        for (const auto& chain : lie_chains(opt.x_catalog, k)) {
            const auto g = apply_chain(f, chain);
            for (int j = 0; j <= j_max; ++j) {
                const std::size_t n_pert = j == 0 ? 1 : perturbations.size();
                for (std::size_t p = 0; p < n_pert; ++p) {
                    ScanRowM row{chain_name(chain), k, j, j == 0 ? "" : perturbations[p].name, {}, {}};
                    for (double eps : opt.grid.values()) {
                        const auto w = net.at(eps);
                        std::function<double(double)> value;
                        if (j == 0) {
                            value = [&](double x) { return evaluate_m(g, w, x, 0, {opt.tol}); };
                        } else {
                            const auto theta = perturbations[p].at(eps);
                            value = [&, theta](double x) { return evaluate_diff(g, w, theta, x, 0, {opt.tol}); };
                        }
                        row.samples.push_back({eps, sup_on_arc(value, k_region, eps, singular_points(g), net.radius).value});
                    }
                    row.estimate = estimate_order(row.samples);
                    rows.push_back(std::move(row));
                }
            }
        }
    return rows;
}

}  // namespace detail

/// Test-object negligibility: every scanned L~ chain of d^j F is O(eps^m_target).
inline NegligibleReportM check_negligible_m(const GenFuncExprM& f, const CompactRegion<1>& k_region, const KernelNet& net,
                                            const std::vector<KernelNet>& perturbations, int k_max, int m_target,
                                            int j_max = 1, const ScanOptionsM& opt = {}) {
    NegligibleReportM rep{f.str(), net.name, m_target, detail::scan_m(f, k_region, net, perturbations, k_max, j_max, opt),
                          false};
    rep.negligible = std::all_of(rep.rows.begin(), rep.rows.end(),
                                 [&](const ScanRowM& r) { return r.estimate.verdict.decays_at_least(m_target); });
    return rep;
}

/// Test-object moderateness: every scanned L~ chain of d^j F is O(eps^-N) for some N.
inline ModerateReportM check_moderate_m(const GenFuncExprM& f, const CompactRegion<1>& k_region, const KernelNet& net,
                                        const std::vector<KernelNet>& perturbations, int k_max, int j_max = 1,
                                        const ScanOptionsM& opt = {}) {
    ModerateReportM rep{f.str(), net.name, detail::scan_m(f, k_region, net, perturbations, k_max, j_max, opt), false};
    rep.moderate = std::all_of(rep.rows.begin(), rep.rows.end(),
                               [](const ScanRowM& r) { return r.estimate.verdict.growth().has_value(); });
    return rep;
}

struct ShortcutReportM {
    bool refused = false;
    std::string reason;
    NegligibleReportM k0;
    bool negligible = false;
};

/// Moderate F with a negligible k = 0, j = 0 scan is negligible.
inline ShortcutReportM noderiv_shortcut_m(const GenFuncExprM& f, const CompactRegion<1>& k_region, const KernelNet& net,
                                          int m_target, const ModerateReportM* moderate, const ScanOptionsM& opt = {}) {
    ShortcutReportM rep;
    if (moderate == nullptr || !moderate->moderate) {
        rep.refused = true;
        rep.reason = "no moderateness certificate for " + f.str();
        return rep;
    }
    rep.k0 = check_negligible_m(f, k_region, net, {}, 0, m_target, 0, opt);
    rep.negligible = rep.k0.negligible;
    return rep;
}

/// Two-net perturbations used by default: differences of same-order strict variants.
inline std::vector<KernelNet> default_perturbations(int q) {
    return {nets::difference(nets::fixed(q, true, 1), nets::fixed(q, true, 2)),
            nets::difference(nets::fixed(q, true, 0), nets::fixed(q, false, 0))};
}

// ---------------------------------------------------------------------------
// association on the circle

/// int_0^{2 pi} F(omega_eps)(x) mu(x) dx.
inline double weak_pairing_m(const GenFuncExprM& f, const KernelPtr& omega, double eps, const SmoothFunction<1>& mu,
                             double tol = 1e-11) {
    const auto breaks = detail::circle_breakpoints(singular_points(f), eps);
    return detail::circle_integral([&](double x) { return evaluate_m(f, omega, x, 0, {tol}) * mu.derivative(0, x); },
                                   breaks, tol);
}

inline std::vector<SmoothFunction<1>> default_forms() { return {forms::exp_cos(), forms::trig_mix()}; }

inline std::vector<KernelNet> default_nets() { return {nets::fixed(0), nets::fixed(2), nets::fixed(4)}; }

inline AssociationReport associate_m(const GenFuncExprM& f, const std::vector<SmoothFunction<1>>& mus,
                                     const std::vector<KernelNet>& nets_used,
                                     const std::optional<Distribution<1>>& candidate, const AssociateOptions& opt = {},
                                     std::string case_name = {}) {
    if (mus.empty() || nets_used.empty()) throw InvalidArgument("associate_m needs test forms and nets");
    colombeau::detail::require_dyadic(opt.grid);
    AssociationReport rep;
    rep.case_name = case_name.empty() ? f.str() : std::move(case_name);
    rep.tol = opt.tol;
    const auto eps = opt.grid.values();
    for (const auto& mu : mus) {
        std::optional<double> cv;
        if (candidate) cv = pair(*candidate, periodic_test_form(mu), opt.quad_tol);
        for (const auto& net : nets_used) {
            AssociationRow row;
            row.psi = mu.name();
            row.phi = net.name;
            row.phi_order = net.order(eps.back());
            row.eps = eps;
            row.candidate_value = cv;
            for (double e : eps) row.pairings.push_back(weak_pairing_m(f, net.at(e), e, mu, opt.quad_tol));
            colombeau::detail::classify_row(row, opt.tol);
            rep.rows.push_back(std::move(row));
        }
    }
    rep.verdict = colombeau::detail::combine(rep.rows, candidate ? candidate->str() : "");
    return rep;
}

// ---------------------------------------------------------------------------
// per-eps identities

struct CommutationReport {
    std::string u;
    std::string x;
    double eps = 0.0;
    std::size_t points = 0;
    double max_deviation = 0.0;
    double scale = 0.0;  // max |iota(L_X u)|
};

/// max_x |L^_X iota(u) - iota(L_X u)|, the left side paired through the kernel densities.
/// Points: 32 spread over the circle and 32 across eps-neighbourhoods of sing supp u.
inline CommutationReport commutation_deviation(const Distribution<1>& u, const VectorField<1>& x, const KernelNet& net,
                                               double eps, double tol = 1e-12) {
    CommutationReport rep{u.str(), x.name, eps, 0, 0.0, 0.0};
    const auto w = net.at(eps);
    const auto lhs = gm::generalized_lie(gm::iota(u), x);
    const auto rhs = gm::iota(lie_derivative_s1(u, x));
    std::vector<double> xs;
    constexpr int kSpread = 32;
    for (int i = 0; i < kSpread; ++i) xs.push_back(kTwoPi * (i + 0.5) / kSpread);
    const auto sing = singular_points(gm::iota(u));
    if (!sing.empty()) {
        const int per = kSpread / static_cast<int>(sing.size());
        for (double p : sing)
            for (int i = 0; i < per; ++i) xs.push_back(p - 1.1 * eps + 2.2 * eps * (i + 0.5) / per);
    } else {
        for (int i = 0; i < kSpread; ++i) xs.push_back(kTwoPi * (i + 0.25) / kSpread);
    }
    for (double p : xs) {
        const double a = evaluate_m(lhs, w, p, 0, {tol, true});
        const double b = evaluate_m(rhs, w, p, 0, {tol});
        rep.max_deviation = std::max(rep.max_deviation, std::abs(a - b));
        rep.scale = std::max(rep.scale, std::abs(b));
        ++rep.points;
    }
    return rep;
}

struct FlowRow {
    double x = 0.0;
    double fd_coarse = 0.0;  // central difference at t = 1e-3
    double fd_fine = 0.0;    // at t = 1e-4
    double extrapolated = 0.0;
    double generalized = 0.0;
    double deviation = 0.0;
};

struct FlowReport {
    std::string f;
    std::string x;
    double eps = 0.0;
    std::vector<FlowRow> rows;
    double max_deviation = 0.0;
};

/// d/dt (Fl_t)* F at t = 0 by central differences, against L^_X F.
inline FlowReport flow_consistency(const GenFuncExprM& f, const FlowField& field, const KernelNet& net, double eps,
                                   const std::vector<double>& xs, double tol = 1e-12) {
    FlowReport rep{f.str(), field.field.name, eps, {}, 0.0};
    const auto w = net.at(eps);
    const auto glie = gm::generalized_lie(f, field.field);
    auto central = [&](double t, double x) {
        const auto fwd = pullback_circle(f, field.flow(t));
        const auto bwd = pullback_circle(f, field.flow(-t));
        return (evaluate_m(fwd, w, x, 0, {tol}) - evaluate_m(bwd, w, x, 0, {tol})) / (2.0 * t);
    };
    for (double x : xs) {
        FlowRow row;
        row.x = x;
        row.fd_coarse = central(1e-3, x);
        row.fd_fine = central(1e-4, x);
        // error is c t^2 + O(t^4): eliminate the t^2 term
        row.extrapolated = (100.0 * row.fd_fine - row.fd_coarse) / 99.0;
        row.generalized = evaluate_m(glie, w, x, 0, {tol});
        row.deviation = std::abs(row.extrapolated - row.generalized);
        rep.max_deviation = std::max(rep.max_deviation, row.deviation);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace colombeau::circle
