#include <CLI11.hpp>
#include <iostream>
#include <new>

#include "commands.hpp"
#include "uppnc/errors.hpp"
#include "uppnc/runtime.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;
constexpr int kExitDivergence = 4;

// Parsed as plain "disable" switches so that UPPNC_NO_*=1 means disabled.
struct DisableSwitches {
    bool minimize = false, dominance = false, asymptotic = false, selfconv = false;

    void apply(upp::app::OptimizationFlags& f) const {
        f.minimize = !minimize;
        f.dominance = !dominance;
        f.asymptotic = !asymptotic;
        f.selfconv = !selfconv;
    }
};

void add_flags(CLI::App* cmd, DisableSwitches& off, upp::app::OptimizationFlags& f) {
    cmd->add_flag("--no-minimize", off.minimize, "Skip representation minimization between steps")
        ->envname("UPPNC_NO_MINIMIZE");
    cmd->add_flag("--no-dominance", off.dominance, "Disable the dominance shortcut")->envname("UPPNC_NO_DOMINANCE");
    cmd->add_flag("--no-asymptotic", off.asymptotic, "Disable the asymptotic-dominance shortcut")
        ->envname("UPPNC_NO_ASYMPTOTIC");
    cmd->add_flag("--no-selfconv", off.selfconv, "Disable the self-convolution-of-minimum shortcut")
        ->envname("UPPNC_NO_SELFCONV");
    cmd->add_option("--budget", f.budget, "Seconds allowed per pipeline step (0 = unlimited)")
        ->envname("UPPNC_BUDGET")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace upp::app;
    CLI::App app{"Flow-controlled tandem analysis with ultimately pseudo-periodic curves"};
    app.require_subcommand(1);
    bool parallel = false;
    app.add_flag("--parallel", parallel, "Parallel elementary convolutions")->envname("UPPNC_PARALLEL");

    AnalyzeOptions analyze;
    auto* a = app.add_subcommand("analyze", "Compute an end-to-end service curve");
    a->add_option("file", analyze.file, "Network file")->required()->check(CLI::ExistingFile);
    a->add_option("-m,--method", analyze.method, "exact or approx")
        ->check(CLI::IsMember({"exact", "approx"}))
        ->envname("UPPNC_METHOD")
        ->capture_default_str();
    a->add_option("-o,--curve-out", analyze.curve_out, "Write the resulting curve to this file");
    DisableSwitches analyze_off;
    add_flags(a, analyze_off, analyze.flags);

    CompareOptions compare;
    auto* c = app.add_subcommand("compare", "Compare the exact and approximate methods");
    c->add_option("file", compare.file, "Network file")->required()->check(CLI::ExistingFile);
    DisableSwitches compare_off;
    add_flags(c, compare_off, compare.flags);

    BenchOptions bench;
    auto* b = app.add_subcommand("bench", "Baseline vs optimized convolution of random operand pairs");
    b->add_option("--seed", bench.seed)->envname("UPPNC_SEED")->capture_default_str();
    b->add_option("--count", bench.count)->check(CLI::PositiveNumber)->capture_default_str();
    b->add_option("--class", bench.cls)
        ->check(CLI::IsMember({"dominance", "asymptotic", "incomparable", "mixed"}))
        ->capture_default_str();
    b->add_option("-o,--out", bench.out, "CSV output, '-' for stdout")->capture_default_str();
    b->add_option("--minimization-out", bench.minimization_out, "CSV of minimization reports of baseline results");

    ExportOptions exp;
    auto* e = app.add_subcommand("export", "Export a cut of a computed curve as CSV");
    e->add_option("file", exp.file, "Network file")->required()->check(CLI::ExistingFile);
    e->add_option("--curve", exp.curve, "exact, approx, arrival, beta:<i>, exact:<i>, approx:<i>")
        ->capture_default_str();
    e->add_option("--horizon", exp.horizon, "Cut over [0, horizon[")->required();
    e->add_option("-o,--out", exp.out, "CSV output, '-' for stdout")->capture_default_str();
    DisableSwitches export_off;
    add_flags(e, export_off, exp.flags);

    VerifyOptions verify;
    auto* v = app.add_subcommand("verify", "Check the convolution engine against the brute-force oracle");
    v->add_option("--seed", verify.seed)->envname("UPPNC_SEED")->capture_default_str();
    v->add_option("--count", verify.count)->check(CLI::PositiveNumber)->capture_default_str();
    v->add_option("--samples", verify.samples)->check(CLI::PositiveNumber)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int rc = app.exit(err);
        return rc == 0 ? 0 : kExitParse;
    }
    analyze_off.apply(analyze.flags);
    compare_off.apply(compare.flags);
    export_off.apply(exp.flags);
    upp::set_parallel(parallel);

    try {
        if (*a) return cmd_analyze(analyze, std::cout);
        if (*c) return cmd_compare(compare, std::cout);
        if (*b) return cmd_bench(bench, std::cout);
        if (*e) return cmd_export(exp, std::cout);
        if (*v) return cmd_verify(verify, std::cout);
    } catch (const upp::ParseError& err) {
        std::cerr << "parse error: " << err.what() << '\n';
        return kExitParse;
    } catch (const upp::BudgetExceeded& err) {
        std::cerr << "time budget exceeded: " << err.what() << '\n';
        return kExitBudget;
    } catch (const upp::DivergenceError& err) {
        std::cerr << "divergence: " << err.what() << '\n';
        return kExitDivergence;
    } catch (const std::bad_alloc&) {
        std::cerr << "memory exhausted\n";
        return kExitBudget;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 1;
}
