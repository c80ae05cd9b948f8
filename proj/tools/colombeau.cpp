#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace colombeau;
using namespace colombeau::cli;

namespace {

void add_grid(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--eps-min", cfg.eps_min, "smallest epsilon");
    sub->add_option("--eps-max", cfg.eps_max, "largest epsilon");
    sub->add_option("--eps-count", cfg.eps_count, "geometric grid size");
}

void add_output(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "write the report to this path");
}

Output dispatch(const RunConfig& cfg) {
    if (cfg.command == "mollifier") return cmd_mollifier(cfg);
    if (cfg.command == "classify") return cmd_classify(cfg);
    if (cfg.command == "associate") return cmd_associate(cfg);
    if (cfg.command == "demo") return cmd_demo(cfg);
    return cmd_verify_net(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Colombeau generalized functions: mollifiers, classification, association, delta nets on the circle"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* moll = app.add_subcommand("mollifier", "build and verify a mollifier");
    moll->add_option("--q", cfg.q, "number of vanishing moments");
    moll->add_flag("--strict", cfg.strict, "pin the (q+1)-th moment");
    moll->add_option("--variant", cfg.variant, "polynomial family variant");
    moll->add_option("--samples", cfg.samples, "csv sample count");
    add_output(moll, cfg);

    auto* cls = app.add_subcommand("classify", "moderateness and negligibility scans on R");
    cls->add_option("expr", cfg.expr, "expression in the prefix DSL")->required();
    cls->add_option("--lo", cfg.k_lo, "compact region lower bound");
    cls->add_option("--hi", cfg.k_hi, "compact region upper bound");
    cls->add_option("--k-max", cfg.k_max, "highest derivative order scanned");
    cls->add_option("--m-max", cfg.m_max, "highest negligibility order tested");
    add_grid(cls, cfg);
    add_output(cls, cfg);

    auto* assoc = app.add_subcommand("associate", "weak limits against test functions");
    assoc->add_option("expr", cfg.expr, "expression in the prefix DSL")->required();
    assoc->add_option("--candidate", cfg.candidate, "candidate distribution");
    add_output(assoc, cfg);

    auto* demo = app.add_subcommand("demo", "named scenario");
    demo->add_option("name", cfg.scenario, "scenario name")->required();
    add_output(demo, cfg);

    auto* net = app.add_subcommand("verify-net", "check the delta net conditions on the circle");
    bool non_strict = false;
    net->add_option("--q", cfg.q, "generator order");
    net->add_flag("--non-strict", non_strict, "use the non-strict generator");
    net->add_option("--variant", cfg.variant, "generator variant");
    net->add_flag("--escalating", cfg.escalating, "escalating-order net");
    net->add_option("--k-max", cfg.k_max, "longest Lie chain");
    net->add_option("--m-max", cfg.m_max, "highest decay order tested");
    add_grid(net, cfg);
    add_output(net, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (cfg.command == "verify-net") cfg.strict = !non_strict;
        cfg.tol = quad_tolerance();
        cfg.validate();
        const auto out = dispatch(cfg);
        const std::string text = cfg.format == "csv" ? out.csv() : out.body.dump(2) + "\n";
        if (cfg.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(cfg.out);
            if (!f) throw InvalidArgument("cannot open " + cfg.out);
            f << text;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "wall_time_s " << secs << "\n";
    return kOk;
}
