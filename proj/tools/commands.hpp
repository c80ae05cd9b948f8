#pragma once

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "colombeau/colombeau.hpp"

namespace colombeau::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Exit codes.
enum Exit : int { kOk = 0, kUsage = 1, kConstruction = 2, kParse = 3, kUnknownScenario = 4, kQuadrature = 5 };

class UnknownScenario : public Error {
public:
    using Error::Error;
};

/// COLOMBEAU_QUAD_TOL, or the library default.
inline double quad_tolerance() {
    if (const char* env = std::getenv("COLOMBEAU_QUAD_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0 && v < 1.0))
            throw InvalidArgument("COLOMBEAU_QUAD_TOL must be a number in (0, 1)");
        return v;
    }
    return quad::kDefaultTolerance;
}

struct RunConfig {
    std::string command;
    int q = 4;
    bool strict = false;
    int variant = 0;
    double eps_min = 1e-3;
    double eps_max = 1e-1;
    int eps_count = 20;
    double k_lo = -1.0;
    double k_hi = 1.0;
    int k_max = 2;
    int m_max = 4;
    int samples = 201;
    bool escalating = false;
    std::string expr;
    std::string candidate;
    std::string scenario;
    std::string format = "json";
    std::string out;
    double tol = quad::kDefaultTolerance;

    void validate() const {
        if (format != "json" && format != "csv") throw InvalidArgument("format must be json or csv");
        if (!(eps_min > 0.0 && eps_max > eps_min && eps_max <= 1.0))
            throw InvalidArgument("need 0 < eps-min < eps-max <= 1");
        if (eps_count < kMinGridCount) throw InvalidArgument("eps-count must be at least " + std::to_string(kMinGridCount));
        if (!(k_hi > k_lo)) throw InvalidArgument("compact region needs lo < hi");
        if (k_max < 0 || k_max > 3) throw InvalidArgument("k-max must lie in [0, 3]");
        if (m_max < 1 || m_max > kMaxMollifierOrder + 1) throw InvalidArgument("m-max must lie in [1, 13]");
        if (samples < 2) throw InvalidArgument("samples must be at least 2");
        if (variant < 0) throw InvalidArgument("variant must be non-negative");
    }

    EpsGrid grid() const { return EpsGrid(eps_max, eps_min, eps_count); }

    Json echo() const {
        Json j;
        j["command"] = command;
        j["q"] = q;
        j["strict"] = strict;
        j["variant"] = variant;
        j["eps_min"] = eps_min;
        j["eps_max"] = eps_max;
        j["eps_count"] = eps_count;
        j["region"] = {k_lo, k_hi};
        j["k_max"] = k_max;
        j["m_max"] = m_max;
        if (!expr.empty()) j["expr"] = expr;
        if (!candidate.empty()) j["candidate"] = candidate;
        if (!scenario.empty()) j["scenario"] = scenario;
        j["quad_tol"] = tol;
        return j;
    }
};

/// Report body plus an optional plot-ready table.
struct Output {
    Json body;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;

    std::string csv() const {
        if (csv_header.empty()) throw InvalidArgument("csv output is not available for this command");
        std::ostringstream os;
        for (std::size_t i = 0; i < csv_header.size(); ++i) os << (i ? "," : "") << csv_header[i];
        os << "\n";
        for (const auto& r : csv_rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << "\n";
        }
        return os.str();
    }
};

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Json header(const RunConfig& cfg) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = cfg.echo();
    return j;
}

inline Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
inline Json optional_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json estimate_json(const OrderEstimate& e) {
    return {{"slope", e.slope}, {"max_residual", e.max_residual}, {"clipped", e.clipped}, {"verdict", e.verdict.str()}};
}

// ---------------------------------------------------------------------------
// mollifier

inline double phi_squared_integral(const Mollifier1D& phi) {
    return quad::integrate_1d([&](double t) { return phi.value(t) * phi.value(t); }, -1.0, 1.0, {}, 1e-13).value;
}

inline Output cmd_mollifier(const RunConfig& cfg) {
    const auto phi = build_mollifier(cfg.q, cfg.strict, cfg.variant);
    const auto table = moments(*phi, cfg.q + 2);
    Output out;
    out.body = header(cfg);
    out.body["label"] = phi->label();
    Json rows = Json::array();
    bool ok = true;
    for (int i = 0; i <= cfg.q + 2; ++i) {
        Json r;
        const double m = table[static_cast<std::size_t>(i)];
        r["i"] = i;
        r["moment"] = m;
        if (i == 0) {
            r["required"] = "1";
            r["ok"] = std::abs(m - 1.0) <= kNormalizationTolerance;
        } else if (i <= cfg.q) {
            r["required"] = "0";
            r["ok"] = std::abs(m) <= kVanishingMomentTolerance;
        } else if (i == cfg.q + 1 && cfg.strict) {
            r["required"] = "0.1";
            r["ok"] = std::abs(m) >= kStrictMomentFloor;
        } else {
            r["required"] = "free";
            r["ok"] = true;
        }
        ok = ok && r["ok"].get<bool>();
        rows.push_back(r);
    }
    out.body["moments"] = rows;
    out.body["integral_phi_squared"] = phi_squared_integral(*phi);
    out.body["verified"] = ok;
    out.csv_header = {"t", "phi", "dphi"};
    for (int i = 0; i < cfg.samples; ++i) {
        const double t = -1.0 + 2.0 * i / (cfg.samples - 1);
        out.csv_rows.push_back({num(t), num(phi->value(t)), num(phi->derivative(1, t))});
    }
    return out;
}

// ---------------------------------------------------------------------------
// classify

inline std::vector<int> schedule_up_to(int m_max) {
    std::vector<int> s;
    for (int q = 0; q <= std::min(m_max, kMaxMollifierOrder); ++q) s.push_back(q);
    return s;
}

struct Classification {
    ModerateReport<1> moderate;
    std::optional<ShortcutReport<1>> negligible;
};

inline Classification classify(const GenFuncExpr<1>& f, const RunConfig& cfg) {
    const auto region = CompactRegion<1>::interval(cfg.k_lo, cfg.k_hi);
    ModerateOptions mopt;
    mopt.grid = cfg.grid();
    mopt.tol = cfg.tol;
    Classification c;
    c.moderate = check_moderate_rn(f, region, cfg.k_max, mopt);
    if (c.moderate.moderate) {
        NegligibleOptions nopt;
        nopt.grid = cfg.grid();
        nopt.tol = cfg.tol;
        c.negligible = noderiv_shortcut(f, region, cfg.m_max, schedule_up_to(cfg.m_max), &c.moderate, nopt);
    }
    return c;
}

inline Output cmd_classify(const RunConfig& cfg) {
    const auto f = dsl::parse_expression(cfg.expr);
    const auto c = classify(f, cfg);
    Output out;
    out.body = header(cfg);
    out.body["expression"] = f.str();
    out.csv_header = {"eps", "k", "sup_value", "q"};

    Json mod;
    mod["moderate"] = c.moderate.moderate;
    mod["N"] = optional_json(c.moderate.n(MultiIndex<1>{}));
    Json rows = Json::array();
    for (const auto& r : c.moderate.rows) {
        Json jr;
        jr["k"] = r.k[0];
        jr["N"] = optional_json(r.n);
        jr["mollifier_independent"] = r.mollifier_independent;
        Json scans = Json::array();
        for (const auto& s : r.scans) {
            scans.push_back({{"mollifier", s.mollifier}, {"fit", estimate_json(s.estimate)}});
            for (const auto& p : s.samples) out.csv_rows.push_back({num(p.eps), std::to_string(r.k[0]), num(p.value), std::to_string(s.q)});
        }
        jr["scans"] = scans;
        rows.push_back(jr);
    }
    mod["rows"] = rows;
    mod["mollifiers_sampled"] = "3 strict variants of order 2; finite evidence only";
    out.body["moderateness"] = mod;

    Json neg;
    if (!c.negligible) {
        neg["negligible"] = false;
        neg["reason"] = "not certified moderate";
    } else {
        neg["negligible"] = c.negligible->negligible;
        neg["method"] = "k = 0 scan backed by the moderateness certificate";
        Json wit = Json::array();
        for (const auto& w : c.negligible->k0.witnesses) wit.push_back({{"m", w.m}, {"q", optional_json(w.q)}});
        neg["witnesses"] = wit;
        Json scans = Json::array();
        for (const auto& s : c.negligible->k0.scans) {
            scans.push_back({{"q", s.q}, {"mollifier", s.mollifier}, {"fit", estimate_json(s.estimate)}});
            for (const auto& p : s.samples) out.csv_rows.push_back({num(p.eps), "0", num(p.value), std::to_string(s.q)});
        }
        neg["scans"] = scans;
    }
    out.body["negligibility"] = neg;
    return out;
}

// ---------------------------------------------------------------------------
// association

inline Json association_json(const AssociationReport& rep) {
    Json j;
    j["case"] = rep.case_name;
    j["verdict"] = rep.verdict.str();
    j["tol"] = rep.tol;
    j["max_deviation"] = rep.max_deviation();
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        Json jr;
        jr["psi"] = r.psi;
        jr["phi"] = r.phi;
        jr["phi_order"] = r.phi_order;
        jr["eps_grid"] = r.eps;
        jr["pairings"] = r.pairings;
        jr["growth"] = estimate_json(r.growth);
        jr["extrapolated"] = r.extrapolated.value;
        jr["extrapolation_error"] = r.extrapolated.error;
        jr["candidate_value"] = optional_json(r.candidate_value);
        jr["oracle_source"] = r.candidate_value ? "candidate paired with psi" : "none";
        jr["deviation"] = optional_json(r.deviation);
        jr["verdict"] = r.verdict.str();
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j;
}

inline void association_csv(const AssociationReport& rep, Output& out) {
    out.csv_header = {"eps", "psi", "phi", "phi_order", "pairing"};
    for (const auto& r : rep.rows)
        for (std::size_t i = 0; i < r.eps.size(); ++i)
            out.csv_rows.push_back({num(r.eps[i]), r.psi, r.phi, std::to_string(r.phi_order), num(r.pairings[i])});
}

inline AssociateOptions associate_options(const RunConfig& cfg) {
    AssociateOptions opt;
    opt.quad_tol = std::min(cfg.tol, 1e-11);
    return opt;
}

inline Output cmd_associate(const RunConfig& cfg) {
    const auto f = dsl::parse_expression(cfg.expr);
    std::optional<Distribution<1>> cand;
    if (!cfg.candidate.empty()) cand = dsl::parse_distribution(cfg.candidate);
    const auto rep = associate<1>(f, default_psis(), default_phis(), cand, associate_options(cfg));
    Output out;
    out.body = header(cfg);
    out.body["association"] = association_json(rep);
    association_csv(rep, out);
    return out;
}

// ---------------------------------------------------------------------------
// delta nets

inline Json delta_net_json(const circle::DeltaNetReport& rep) {
    Json j;
    j["net"] = rep.net;
    {
        Json rows = Json::array();
        for (const auto& r : rep.cond1)
            rows.push_back({{"eps", r.eps}, {"flagged", r.flagged}, {"points", r.points}, {"max_outside", r.max_outside}});
        j["condition_1"] = {{"passed", rep.cond1_passed}, {"rows", rows}};
    }
    {
        Json rows = Json::array();
        for (const auto& r : rep.cond2)
            rows.push_back({{"f", r.f}, {"chain", r.chain}, {"k", r.k}, {"expected_m", r.expected},
                            {"fit", estimate_json(r.estimate)}, {"passed", r.passed}});
        Json windows = Json::array();
        for (const auto& w : rep.cond2_windows) windows.push_back({{"eps", w.eps}, {"q", w.q}, {"fit", estimate_json(w.estimate)}});
        j["condition_2"] = {{"passed", rep.cond2_passed}, {"certified_m", optional_json(rep.certified_m())},
                            {"rows", rows}, {"windows", windows}};
    }
    {
        Json rows = Json::array();
        for (const auto& r : rep.cond3) rows.push_back({{"u", r.u}, {"chain", r.chain}, {"k", r.k}, {"N", optional_json(r.n)}});
        j["condition_3"] = {{"passed", rep.cond3_passed}, {"rows", rows}};
    }
    {
        Json rows = Json::array();
        for (const auto& r : rep.cond4)
            rows.push_back({{"u", r.u}, {"mu", r.mu}, {"eps", r.eps}, {"value", r.value}, {"oracle", r.exact},
                            {"oracle_source", "<u, mu> by quadrature or point value"}, {"deviation", r.deviation},
                            {"passed", r.passed}});
        j["condition_4"] = {{"passed", rep.cond4_passed}, {"rows", rows}};
    }
    {
        Json rows = Json::array();
        for (const auto& r : rep.mass) rows.push_back({{"eps", r.eps}, {"mass", r.mass}, {"abs_mass", r.abs_mass}});
        Json d = Json::array();
        for (const auto& s : rep.l1_derivative) d.push_back({{"eps", s.eps}, {"sup_abs_dx_mass", s.value}});
        j["l1"] = {{"unit_mass", rep.unit_mass},
                   {"abs_mass_unity", rep.l1_unit},
                   {"mass_rows", rows},
                   {"dx_mass", d},
                   {"dx_mass_fit", estimate_json(rep.l1_derivative_fit)},
                   {"dx_mass_passed", rep.l1_derivative_passed}};
    }
    j["delta_net"] = rep.delta_net();
    j["all_passed"] = rep.passed();
    return j;
}

inline Output cmd_verify_net(const RunConfig& cfg) {
    const auto net = cfg.escalating ? circle::nets::escalating() : circle::nets::fixed(cfg.q, cfg.strict, cfg.variant);
    circle::VerifyNetOptions opt;
    opt.grid = cfg.grid();
    opt.m_max = cfg.m_max;
    opt.k_max = cfg.k_max;
    const auto rep = circle::verify_delta_net(net, opt);
    Output out;
    out.body = header(cfg);
    out.body["verify_net"] = delta_net_json(rep);
    out.csv_header = {"eps", "k", "sup_value", "q"};
    // condition (2) scans are recorded through their fits; the csv carries the L1 derivative curve
    for (const auto& s : rep.l1_derivative) out.csv_rows.push_back({num(s.eps), "1", num(s.value), std::to_string(cfg.q)});
    return out;
}

// ---------------------------------------------------------------------------
// demos

/// H delta: the constant 1/2 = int phi (1 - Phi) for each unit-mass phi, checked by quadrature.
inline double half_constant(const Mollifier1D& phi) {
    auto cdf = [&](double t) { return quad::integrate_1d([&](double s) { return phi.value(s); }, -1.0, t, {}, 1e-13).value; };
    return quad::integrate_1d([&](double t) { return phi.value(t) * (1.0 - cdf(t)); }, -1.0, 1.0, {}, 1e-12).value;
}

inline Json demo_heaviside_times_delta(const RunConfig& cfg) {
    const auto f = gf::product(gf::iota(dist::heaviside(0.0)), gf::iota(dist::delta(0.0)));
    const auto rep = associate<1>(f, default_psis(), default_phis(), dist::scaled(0.5, dist::delta(0.0)),
                                  associate_options(cfg), "iota(H) iota(delta)");
    Json j = association_json(rep);
    Json halves = Json::array();
    for (const auto& phi : default_phis()) halves.push_back({{"phi", phi->label()}, {"int_phi_1_minus_Phi", half_constant(phi->factor(0))}});
    j["half_constant_check"] = halves;
    return j;
}

inline Json demo_delta_squared(const RunConfig& cfg) {
    const auto f = gf::product(gf::iota(dist::delta(0.0)), gf::iota(dist::delta(0.0)));
    const auto psis = default_psis();
    const auto phis = default_phis();
    const auto rep = associate<1>(f, psis, phis, std::nullopt, associate_options(cfg), "iota(delta)^2");
    Json j = association_json(rep);
    Json checks = Json::array();
    double worst = 0.0;
    std::size_t i = 0;
    for (const auto& psi : psis)
        for (const auto& phi : phis) {
            const auto& row = rep.rows[i++];
            const double oracle = psi(Point<1>{0.0}) * phi_squared_integral(phi->factor(0));
            const double dev = std::abs(row.extrapolated.value - oracle);
            worst = std::max(worst, dev);
            checks.push_back({{"psi", psi.name()}, {"phi", phi->label()}, {"eps_times_pairing_limit", row.extrapolated.value},
                              {"oracle", oracle}, {"oracle_source", "psi(0) * int phi^2 by quadrature"}, {"deviation", dev}});
        }
    j["scaled_limit_checks"] = checks;
    j["scaled_limit_max_deviation"] = worst;
    return j;
}

inline Json demo_heaviside_squared(const RunConfig& cfg) {
    const auto f = gf::product(gf::iota(dist::heaviside(0.0)), gf::iota(dist::heaviside(0.0)));
    return association_json(
        associate<1>(f, default_psis(), default_phis(), dist::heaviside(0.0), associate_options(cfg), "iota(H)^2"));
}

inline Json demo_x_times_delta(const RunConfig& cfg) {
    return association_json(check_product_compat(smooth::identity(), dist::delta(0.0), associate_options(cfg)));
}

inline Json demo_abs_bump_product(const RunConfig& cfg) {
    return association_json(check_product_compat(regular::abs_x_bump(), regular::abs_x_bump(),
                                                 dist::regular(regular::x2_bump2()), associate_options(cfg)));
}

inline Json demo_lie_commutation(const RunConfig&) {
    const auto net = circle::nets::fixed(2, true);
    Json rows = Json::array();
    double worst = 0.0;
    for (const auto& u : {dist::delta(circle::kPi / 2), dist::regular(smooth::cosine())})
        for (const auto& x : {fields::constant(1.0, Domain::Circle), fields::sin_theta()})
            for (double eps : {1e-1, 1e-2}) {
                const auto r = circle::commutation_deviation(u, x, net, eps);
                worst = std::max(worst, r.max_deviation);
                rows.push_back({{"u", r.u}, {"X", r.x}, {"eps", r.eps}, {"points", r.points},
                                {"max_deviation", r.max_deviation}, {"scale", r.scale}});
            }
    const auto f = circle::gm::product(circle::gm::iota(dist::delta(circle::kPi / 2)),
                                       circle::gm::iota(dist::regular(smooth::cosine())));
    const auto flow = circle::flow_consistency(f, circle::sin_field(), net, 0.1, {1.5, 1.55, 1.6, 1.65});
    Json frows = Json::array();
    for (const auto& r : flow.rows)
        frows.push_back({{"x", r.x}, {"fd_t_1e-3", r.fd_coarse}, {"fd_t_1e-4", r.fd_fine}, {"extrapolated", r.extrapolated},
                         {"generalized_lie", r.generalized}, {"deviation", r.deviation}});
    return {{"net", net.name},
            {"commutation", rows},
            {"commutation_max_deviation", worst},
            {"commutation_passed", worst <= 1e-7},
            {"flow", {{"f", flow.f}, {"X", flow.x}, {"eps", flow.eps}, {"rows", frows}, {"max_deviation", flow.max_deviation},
                      {"passed", flow.max_deviation <= 1e-5}}}};
}

/// Dyadic grid 0.128 ... 1e-3 used by the circle association demos.
inline AssociateOptions circle_associate_options(const RunConfig& cfg) {
    AssociateOptions opt = associate_options(cfg);
    opt.grid = EpsGrid(0.128, 1e-3, 8);
    return opt;
}

inline AssociationReport covariant_association(const RunConfig& cfg) {
    const auto u = dist::delta(circle::kPi / 2);
    const auto x = fields::sin_theta();
    return circle::associate_m(circle::gm::covariant_scalar(circle::gm::iota(u), x), {circle::forms::exp_cos()},
                               circle::default_nets(), circle::lie_derivative_s1(u, x), circle_associate_options(cfg),
                               "L~_{sin d} iota(delta@pi/2)");
}

inline Json demo_covariant_association(const RunConfig& cfg) { return association_json(covariant_association(cfg)); }

inline Json demo_circle_product_compat(const RunConfig& cfg) {
    const auto u = dist::delta(1.0);
    const auto f = circle::gm::product(circle::gm::iota(dist::regular(smooth::cosine())), circle::gm::iota(u));
    return association_json(circle::associate_m(f, circle::default_forms(), circle::default_nets(),
                                                dist::multiplied(smooth::cosine(), u), circle_associate_options(cfg),
                                                "iota(cos) iota(delta@1)"));
}

using Demo = std::function<Json(const RunConfig&)>;

inline const std::map<std::string, Demo>& demos() {
    static const std::map<std::string, Demo> table{
        {"abs-bump-product", demo_abs_bump_product},
        {"circle-product-compat", demo_circle_product_compat},
        {"covariant-association", demo_covariant_association},
        {"delta-squared", demo_delta_squared},
        {"heaviside-squared", demo_heaviside_squared},
        {"heaviside-times-delta", demo_heaviside_times_delta},
        {"lie-commutation", demo_lie_commutation},
        {"x-times-delta", demo_x_times_delta},
    };
    return table;
}

inline std::string demo_names() {
    std::string s;
    for (const auto& [name, _] : demos()) s += (s.empty() ? "" : ", ") + name;
    return s;
}

inline Output cmd_demo(const RunConfig& cfg) {
    const auto it = demos().find(cfg.scenario);
    if (it == demos().end())
        throw UnknownScenario("unknown demo '" + cfg.scenario + "'; available: " + demo_names());
    Output out;
    out.body = header(cfg);
    out.body["demo"] = cfg.scenario;
    out.body["result"] = it->second(cfg);
    return out;
}

/// Maps library errors to exit codes.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return kParse;
    if (dynamic_cast<const UnknownScenario*>(&e)) return kUnknownScenario;
    if (dynamic_cast<const QuadratureError*>(&e)) return kQuadrature;
    if (dynamic_cast<const ConstructionError*>(&e) || dynamic_cast<const UnsupportedOrder*>(&e)) return kConstruction;
    return kUsage;
}

}  // namespace colombeau::cli
