#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "colombeau/errors.hpp"
#include "colombeau/genfunc.hpp"
#include "colombeau/mollifier.hpp"

namespace colombeau {

inline constexpr double kSlopeMargin = 0.2;
inline constexpr double kResidualLimit = 0.1;
inline constexpr double kClipFloor = 1e-300;
/// Order reported for samples that are identically zero.
inline constexpr int kExactZeroOrder = INT_MAX;
inline constexpr int kMinGridCount = 8;

/// Geometric grid eps_j = eps_max r^j, j = 0..count-1, ending at eps_min.
struct EpsGrid {
    double eps_max = 1e-1;
    double eps_min = 1e-3;
    int count = 20;

    EpsGrid() = default;
    EpsGrid(double max, double min, int n) : eps_max(max), eps_min(min), count(n) { validate(); }

    void validate() const {
        if (!(eps_min > 0.0 && eps_min < eps_max && eps_max <= 1.0))
            throw InvalidArgument("eps grid needs 0 < eps_min < eps_max <= 1");
        if (count < kMinGridCount)
            throw InvalidArgument("eps grid needs at least " + std::to_string(kMinGridCount) + " points");
    }

    double ratio() const { return std::pow(eps_min / eps_max, 1.0 / (count - 1)); }

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(count));
        const double r = ratio();
        for (int j = 0; j < count; ++j) v[static_cast<std::size_t>(j)] = eps_max * std::pow(r, j);
        v.back() = eps_min;
        return v;
    }
};

struct Sample {
    double eps = 0.0;
    double value = 0.0;
};

enum class VerdictKind { DecaysAtLeast, GrowsAtMost, Inconclusive };

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    int order = 0;

    std::string str() const {
        switch (kind) {
            case VerdictKind::DecaysAtLeast:
                return order == kExactZeroOrder ? "DecaysAtLeast(inf)" : "DecaysAtLeast(" + std::to_string(order) + ")";
            case VerdictKind::GrowsAtMost: return "GrowsAtMost(" + std::to_string(order) + ")";
            default: return "Inconclusive";
        }
    }

    /// The bound O(eps^m) is certified.
    bool decays_at_least(int m) const {
        if (kind == VerdictKind::DecaysAtLeast) return order >= m;
        return kind == VerdictKind::GrowsAtMost && m <= 0 && order <= -m;
    }

    /// The bound O(eps^-n) is certified.
    bool grows_at_most(int n) const {
        if (kind == VerdictKind::DecaysAtLeast) return true;
        return kind == VerdictKind::GrowsAtMost && order <= n;
    }

    /// Smallest certified N in O(eps^-N), if any.
    std::optional<int> growth() const {
        if (kind == VerdictKind::DecaysAtLeast) return 0;
        if (kind == VerdictKind::GrowsAtMost) return order;
        return std::nullopt;
    }
};

struct OrderEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::pair<int, int> window{0, 0};  // [j_lo, j_hi) in decreasing-eps order
    int clipped = 0;
    Verdict verdict;
};

/// Least-squares slope of log10|value| against log10 eps over the smallest-eps half.
inline OrderEstimate estimate_order(std::span<const Sample> samples) {
    if (static_cast<int>(samples.size()) < kMinGridCount)
        throw InvalidArgument("estimate_order needs at least " + std::to_string(kMinGridCount) + " samples");
    std::vector<Sample> s(samples.begin(), samples.end());
    std::stable_sort(s.begin(), s.end(), [](const Sample& a, const Sample& b) { return a.eps > b.eps; });
    for (const auto& p : s)
        if (!(p.eps > 0.0)) throw InvalidArgument("eps samples must be positive");

    const int n = static_cast<int>(s.size());
    OrderEstimate est;
    est.window = {n / 2, n};

    std::vector<double> lx, ly;
    for (int j = est.window.first; j < n; ++j) {
        double v = std::abs(s[static_cast<std::size_t>(j)].value);
        if (!std::isfinite(v)) {
            est.verdict = {VerdictKind::Inconclusive, 0};
            return est;
        }
        if (v < kClipFloor) {
            v = kClipFloor;
            ++est.clipped;
        }
        lx.push_back(std::log10(s[static_cast<std::size_t>(j)].eps));
        ly.push_back(std::log10(v));
    }
    const auto m = static_cast<double>(lx.size());
    if (est.clipped == static_cast<int>(lx.size())) {
        est.slope = 0.0;
        est.intercept = std::log10(kClipFloor);
        est.verdict = {VerdictKind::DecaysAtLeast, kExactZeroOrder};
        return est;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double den = m * sxx - sx * sx;
    est.slope = (m * sxy - sx * sy) / den;
    est.intercept = (sy - est.slope * sx) / m;
    for (std::size_t i = 0; i < lx.size(); ++i)
        est.max_residual = std::max(est.max_residual, std::abs(ly[i] - (est.intercept + est.slope * lx[i])));

    if (!(est.max_residual <= kResidualLimit) || est.clipped > 0) {
        est.verdict = {VerdictKind::Inconclusive, 0};
    } else if (const int mdec = static_cast<int>(std::floor(est.slope + kSlopeMargin)); mdec >= 1) {
        est.verdict = {VerdictKind::DecaysAtLeast, mdec};
    } else {
        const int grow = std::max(0, static_cast<int>(std::ceil(-est.slope - kSlopeMargin)));
        est.verdict = {VerdictKind::GrowsAtMost, grow};
    }
    return est;
}

inline OrderEstimate estimate_order(const std::vector<Sample>& samples) {
    return estimate_order(std::span<const Sample>(samples));
}

/// Closed interval or rectangle K, sampled with step <= eps/4.
template <int Dim>
struct CompactRegion {
    Point<Dim> lo{};
    Point<Dim> hi{};
    double step = 0.0;  // 0: choose eps/4 automatically

    CompactRegion() = default;
    CompactRegion(Point<Dim> l, Point<Dim> h, double s = 0.0) : lo(l), hi(h), step(s) {
        for (std::size_t a = 0; a < Dim; ++a)
            if (!(std::isfinite(lo[a]) && std::isfinite(hi[a]) && hi[a] >= lo[a]))
                throw InvalidArgument("compact region must be a bounded closed box");
    }

    static CompactRegion interval(double a, double b, double s = 0.0)
        requires(Dim == 1)
    {
        return CompactRegion(Point<1>{a}, Point<1>{b}, s);
    }

    std::string str() const {
        std::string s;
        for (std::size_t a = 0; a < Dim; ++a)
            s += (a ? "x" : "") + std::string("[") + format_real(lo[a]) + "," + format_real(hi[a]) + "]";
        return s;
    }
};

inline constexpr int kMinSupIntervals = 64;
inline constexpr int kSupFocusPoints = 512;

struct SupResult {
    double value = 0.0;
    double step = 0.0;
    std::size_t points = 0;
};

/// max |d^k F(phi_eps, x)| over a grid on K with step <= eps/4.
/// In one dimension the eps-neighbourhood of each singular point is sampled densely as well.
template <int Dim>
SupResult sup_on_compact(const GenFuncExpr<Dim>& f, const EvalContext<Dim>& ctx, const CompactRegion<Dim>& k_region,
                         const MultiIndex<Dim>& k = {}) {
    const double required = ctx.eps / 4.0;
    if (k_region.step > required)
        throw InvalidArgument("grid step " + format_real(k_region.step) + " undersamples eps = " +
                              format_real(ctx.eps) + "; required step <= " + format_real(required));
    std::array<int, Dim> n{};
    double step = 0.0;
    for (std::size_t a = 0; a < Dim; ++a) {
        const double width = k_region.hi[a] - k_region.lo[a];
        const double h = k_region.step > 0.0 ? k_region.step : required;
        n[a] = width > 0.0 ? std::max(kMinSupIntervals, static_cast<int>(std::ceil(width / h))) : 0;
        step = std::max(step, n[a] > 0 ? width / n[a] : 0.0);
    }
    SupResult r;
    r.step = step;
    auto coord = [&](std::size_t a, int i) {
        return n[a] == 0 ? k_region.lo[a] : k_region.lo[a] + (k_region.hi[a] - k_region.lo[a]) * i / n[a];
    };
    if constexpr (Dim == 1) {
        for (int i = 0; i <= n[0]; ++i) {
            r.value = std::max(r.value, std::abs(evaluate(f, ctx, Point<1>{coord(0, i)}, k)));
            ++r.points;
        }
        for (double p : singular_support(f)[0]) {
            const double a = std::max(k_region.lo[0], p - ctx.eps);
            const double b = std::min(k_region.hi[0], p + ctx.eps);
            if (a > b) continue;
            for (int i = 0; i <= kSupFocusPoints; ++i) {
                const double x = a + (b - a) * i / kSupFocusPoints;
                r.value = std::max(r.value, std::abs(evaluate(f, ctx, Point<1>{x}, k)));
                ++r.points;
            }
        }
    } else {
        for (int i = 0; i <= n[0]; ++i)
            for (int j = 0; j <= n[1]; ++j) {
                r.value = std::max(r.value, std::abs(evaluate(f, ctx, Point<2>{coord(0, i), coord(1, j)}, k)));
                ++r.points;
            }
    }
    return r;
}

/// sup |d^k F| on K for every eps of the grid.
template <int Dim>
std::vector<Sample> eps_scan(const GenFuncExpr<Dim>& f, const MollifierNDPtr<Dim>& phi, const EpsGrid& grid,
                             const CompactRegion<Dim>& k_region, const MultiIndex<Dim>& k = {},
                             double tol = quad::kDefaultTolerance) {
    std::vector<Sample> out;
    for (double eps : grid.values())
        out.push_back({eps, sup_on_compact(f, EvalContext<Dim>(phi, eps, tol), k_region, k).value});
    return out;
}

/// Strict mollifiers are reused across scans.
template <int Dim>
MollifierNDPtr<Dim> strict_mollifier(int q) {
    return make_tensor_mollifier<Dim>(build_mollifier(q, true));
}

template <int Dim>
std::vector<MultiIndex<Dim>> indices_up_to(int k_max) {
    std::vector<MultiIndex<Dim>> out;
    for (int o = 0; o <= k_max; ++o) for_each_index_of_order<Dim>(o, [&](const MultiIndex<Dim>& k) { out.push_back(k); });
    return out;
}

template <int Dim>
struct ScanRow {
    MultiIndex<Dim> k;
    std::string mollifier;
    int q = 0;
    OrderEstimate estimate;
    std::vector<Sample> samples;
};

template <int Dim>
struct WitnessRow {
    MultiIndex<Dim> k;
    int m = 0;
    std::optional<int> q;  // first q of the schedule certifying O(eps^m)
};

template <int Dim>
struct NegligibleReport {
    std::vector<ScanRow<Dim>> scans;
    std::vector<WitnessRow<Dim>> witnesses;
    bool negligible = false;

    std::optional<int> witness(const MultiIndex<Dim>& k, int m) const {
        for (const auto& w : witnesses)
            if (w.k == k && w.m == m) return w.q;
        return std::nullopt;
    }
};

struct NegligibleOptions {
    EpsGrid grid{1e-1, 1e-3, 20};
    double tol = quad::kDefaultTolerance;
};

/// For all m <= m_target and |k| <= k_max, the first strict order q of the schedule
/// with sup_K |d^k F| = O(eps^m). The witness q may depend on m.
template <int Dim>
NegligibleReport<Dim> check_negligible_rn(const GenFuncExpr<Dim>& f, const CompactRegion<Dim>& k_region, int k_max,
                                          int m_target, const std::vector<int>& q_schedule,
                                          const NegligibleOptions& opt = {}) {
    if (q_schedule.empty() || !std::is_sorted(q_schedule.begin(), q_schedule.end()) ||
        std::adjacent_find(q_schedule.begin(), q_schedule.end()) != q_schedule.end())
        throw InvalidArgument("q schedule must be strictly increasing");
    NegligibleReport<Dim> rep;
    rep.negligible = true;
    for (const auto& k : indices_up_to<Dim>(k_max)) {
        std::map<int, Verdict> by_q;
        for (int m = 1; m <= m_target; ++m) {
            WitnessRow<Dim> row{k, m, std::nullopt};
            for (int q : q_schedule) {
                auto it = by_q.find(q);
                if (it == by_q.end()) {
                    auto phi = strict_mollifier<Dim>(q);
                    ScanRow<Dim> scan{k, phi->label(), q, {}, eps_scan(f, phi, opt.grid, k_region, k, opt.tol)};
                    scan.estimate = estimate_order(scan.samples);
                    it = by_q.emplace(q, scan.estimate.verdict).first;
                    rep.scans.push_back(std::move(scan));
                }
                if (it->second.decays_at_least(m)) {
                    row.q = q;
                    break;
                }
            }
            if (!row.q) rep.negligible = false;
            rep.witnesses.push_back(row);
        }
    }
    return rep;
}

template <int Dim>
struct ModerateRow {
    MultiIndex<Dim> k;
    std::optional<int> n;           // certified N, common to all mollifiers
    bool mollifier_independent = true;
    std::vector<ScanRow<Dim>> scans;  // one per mollifier
};

template <int Dim>
struct ModerateReport {
    std::vector<ModerateRow<Dim>> rows;
    bool moderate = false;

    std::optional<int> n(const MultiIndex<Dim>& k) const {
        for (const auto& r : rows)
            if (r.k == k) return r.n;
        return std::nullopt;
    }

    /// max over k of the certified N.
    std::optional<int> max_n() const {
        std::optional<int> out;
        for (const auto& r : rows) {
            if (!r.n) return std::nullopt;
            out = std::max(out.value_or(0), *r.n);
        }
        return out;
    }
};

struct ModerateOptions {
    EpsGrid grid{1e-1, 1e-3, 20};
    int q = 2;           // order shared by the tested mollifiers
    int variants = 3;    // distinct mollifiers of that order
    double tol = quad::kDefaultTolerance;
};

/// Smallest certified N with sup_K |d^k F| = O(eps^-N) for each |k| <= k_max, checked
/// over several mollifiers of the same order; N must not depend on the mollifier.
template <int Dim>
ModerateReport<Dim> check_moderate_rn(const GenFuncExpr<Dim>& f, const CompactRegion<Dim>& k_region, int k_max,
                                      const ModerateOptions& opt = {}) {
    if (opt.variants < 1) throw InvalidArgument("need at least one mollifier");
    std::vector<MollifierNDPtr<Dim>> phis;
    for (int v = 0; v < opt.variants; ++v) phis.push_back(make_tensor_mollifier<Dim>(build_mollifier(opt.q, true, v)));
    ModerateReport<Dim> rep;
    rep.moderate = true;
    for (const auto& k : indices_up_to<Dim>(k_max)) {
        ModerateRow<Dim> row{k, std::nullopt, true, {}};
        bool ok = true;
        for (const auto& phi : phis) {
            ScanRow<Dim> scan{k, phi->label(), opt.q, {}, eps_scan(f, phi, opt.grid, k_region, k, opt.tol)};
            scan.estimate = estimate_order(scan.samples);
            const auto g = scan.estimate.verdict.growth();
            if (!g) {
                ok = false;
            } else if (!row.n) {
                row.n = g;
            } else if (*row.n != *g) {
                row.mollifier_independent = false;
                row.n = std::max(*row.n, *g);
            }
            row.scans.push_back(std::move(scan));
        }
        if (!ok) row.n.reset();
        if (!row.n) rep.moderate = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

template <int Dim>
struct ShortcutReport {
    bool refused = false;
    std::string reason;
    NegligibleReport<Dim> k0;
    bool negligible = false;
};

/// A moderate F whose k = 0 scan is negligible is negligible: derivatives need not be scanned.
template <int Dim>
ShortcutReport<Dim> noderiv_shortcut(const GenFuncExpr<Dim>& f, const CompactRegion<Dim>& k_region, int m_target,
                                     const std::vector<int>& q_schedule, const ModerateReport<Dim>* moderate,
                                     const NegligibleOptions& opt = {}) {
    ShortcutReport<Dim> rep;
    if (moderate == nullptr || !moderate->moderate) {
        rep.refused = true;
        rep.reason = "no moderateness certificate for " + f.str();
        return rep;
    }
    rep.k0 = check_negligible_rn(f, k_region, 0, m_target, q_schedule, opt);
    rep.negligible = rep.k0.negligible;
    return rep;
}

template <int Dim>
struct IdealRow {
    int m = 0;
    std::optional<int> shifted_q;  // q_F(m + N)
    OrderEstimate estimate;
    bool passed = false;
};

template <int Dim>
struct IdealReport {
    std::string f_name, g_name;
    std::optional<int> n;
    NegligibleReport<Dim> f_report;
    ModerateReport<Dim> g_report;
    std::vector<IdealRow<Dim>> rows;
    bool passed = false;
};

/// F negligible with witnesses q_F(m), G moderate with N: F G is O(eps^m) at q_F(m + N).
template <int Dim>
IdealReport<Dim> check_ideal(const GenFuncExpr<Dim>& f, const GenFuncExpr<Dim>& g, const CompactRegion<Dim>& k_region,
                             int m_target, const std::vector<int>& q_schedule, const NegligibleOptions& nopt = {},
                             const ModerateOptions& mopt = {}) {
    IdealReport<Dim> rep;
    rep.f_name = f.str();
    rep.g_name = g.str();
    rep.g_report = check_moderate_rn(g, k_region, 0, mopt);
    rep.n = rep.g_report.max_n();
    if (!rep.n) return rep;
    rep.f_report = check_negligible_rn(f, k_region, 0, m_target + *rep.n, q_schedule, nopt);
    const auto fg = gf::product(f, g);
    rep.passed = true;
    for (int m = 1; m <= m_target; ++m) {
        IdealRow<Dim> row;
        row.m = m;
        row.shifted_q = rep.f_report.witness(MultiIndex<Dim>{}, m + *rep.n);
        if (row.shifted_q) {
            auto samples = eps_scan(fg, strict_mollifier<Dim>(*row.shifted_q), nopt.grid, k_region, {}, nopt.tol);
            row.estimate = estimate_order(samples);
            row.passed = row.estimate.verdict.decays_at_least(m);
        }
        rep.passed = rep.passed && row.passed;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace colombeau
