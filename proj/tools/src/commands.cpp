#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <vector>

#include "network.hpp"
#include "uppnc/minimize.hpp"
#include "uppnc/minplus.hpp"
#include "uppnc/oracles.hpp"
#include "uppnc/runtime.hpp"
#include "workload.hpp"

namespace upp::app {

PipelineOptions OptimizationFlags::pipeline() const {
    PipelineOptions p;
    p.minimize = minimize;
    p.conv.dominance = dominance;
    p.conv.asymptotic = asymptotic;
    p.conv.self_conv = selfconv;
    p.step_budget = budget;
    return p;
}

namespace {

void print_step(std::ostream& out, const StepRecord& r) {
    out << "step " << std::left << std::setw(12) << r.operation << std::setw(28) << r.label << std::right << " N:";
    for (std::size_t i = 0; i < r.operandCardinalities.size(); ++i) out << (i ? "," : " ") << r.operandCardinalities[i];
    out << " -> " << r.resultCardinality;
    if (r.minimizedCardinality != r.resultCardinality) out << " -> " << r.minimizedCardinality;
    out << "  (" << std::fixed << std::setprecision(4) << r.seconds << " s)" << std::defaultfloat << '\n';
}

void print_curve(std::ostream& out, const Curve& f) {
    out << "curve T=" << f.T() << " d=" << f.d() << " c=" << f.c() << " N=" << f.cardinality() << '\n';
}

// Opens path for writing, or returns nullptr for "-".
std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    if (path.empty() || path == "-") return nullptr;
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw DomainError("cannot write '" + path + "'");
    return f;
}

std::size_t parse_index(const std::string& s) {
    try {
        std::size_t pos = 0;
        unsigned long v = std::stoul(s, &pos);
        if (pos != s.size()) throw DomainError("");
        return v;
    } catch (const std::exception&) {
        throw DomainError("malformed node index '" + s + "'");
    }
}

}  // namespace

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
    NetworkFile net = parse_network(o.file);
    PipelineOptions p = o.flags.pipeline();
    if (o.show_steps) p.on_step = [&](const StepRecord& r) { print_step(out, r); };
    out << "method " << o.method << ", " << net.tandem.size() << " nodes\n";
    auto start = std::chrono::steady_clock::now();
    Curve beta;
    if (o.method == "exact") beta = exact_equivalent(net.tandem, p);
    else if (o.method == "approx") beta = approx_equivalent(net.tandem, p);
    else throw DomainError("unknown method '" + o.method + "'");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    print_curve(out, beta);
    out << "total " << std::fixed << std::setprecision(4) << secs << " s" << std::defaultfloat << '\n';
    if (net.arrival) {
        out << "delay bound " << delay_bound(*net.arrival, beta) << '\n';
        out << "backlog bound " << backlog_bound(*net.arrival, beta) << '\n';
    }
    if (auto f = open_out(o.curve_out)) *f << beta.to_text();
    return 0;
}

namespace {

void report_pair(std::ostream& out, const std::string& what, const Curve& exact, const Curve& approx) {
    auto t = first_divergence(exact, approx);
    if (!t) {
        out << what << ": equal\n";
        return;
    }
    out << what << ": differ from t=" << *t << " (exact " << exact.eval(*t) << " / " << exact.right_limit(*t)
        << "+, approx " << approx.eval(*t) << " / " << approx.right_limit(*t) << "+)\n";
}

}  // namespace

int cmd_compare(const CompareOptions& o, std::ostream& out) {
    NetworkFile net = parse_network(o.file);
    PipelineOptions p = o.flags.pipeline();
    const std::size_t n = net.tandem.size();
    for (std::size_t i = 1; i < n; ++i)
        report_pair(out, "node " + std::to_string(i), per_node_exact(net.tandem, i, p),
                    per_node_approx(net.tandem, i, p));
    Curve exact = exact_equivalent(net.tandem, p), approx = approx_equivalent(net.tandem, p);
    report_pair(out, "end-to-end", exact, approx);
    if (net.arrival)
        out << "delay bound exact " << delay_bound(*net.arrival, exact) << ", approx "
            << delay_bound(*net.arrival, approx) << '\n';
    return 0;
}

int cmd_bench(const BenchOptions& o, std::ostream& out) {
    if (o.count == 0) throw DomainError("bench needs count >= 1");
    std::vector<OperandClass> classes;
    if (o.cls == "mixed") classes = {OperandClass::Dominance, OperandClass::Asymptotic, OperandClass::Incomparable};
    else classes = {operand_class_from_string(o.cls)};
    auto file = open_out(o.out);
    std::ostream& csv = file ? *file : out;
    auto mfile = open_out(o.minimization_out);
    if (mfile) *mfile << "trial," << MinimizationReport::csv_header() << '\n';
    csv << kBenchHeader << '\n';
    WorkloadGenerator gen(o.seed);
    for (std::uint64_t trial = 0; trial < o.count; ++trial) {
        OperandPair pair = gen.next(classes[trial % classes.size()]);
        const std::string cls = to_string(pair.cls);

        std::uint64_t before = counters().elementaryConvolutions;
        auto t0 = std::chrono::steady_clock::now();
        Curve base = convolution(pair.cf, pair.cg);
        auto t1 = std::chrono::steady_clock::now();
        std::uint64_t base_conv = counters().elementaryConvolutions - before;

        ConvTrace trace;
        auto t2 = std::chrono::steady_clock::now();
        Curve opt = conv_optimized(pair.cf, pair.cg, &trace);
        auto t3 = std::chrono::steady_clock::now();

        auto [base_min, report] = minimize_with_report(base);
        bool eq = equivalent(opt, base);
        auto ns = [](auto a, auto b) { return std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count(); };
        csv << trial << ',' << cls << ",baseline," << pair.cf.cardinality() << ',' << pair.cg.cardinality() << ','
            << base.cardinality() << ',' << base_min.cardinality() << ',' << base_conv << ",baseline," << ns(t0, t1)
            << ",true\n";
        csv << trial << ',' << cls << ",optimized," << pair.cf.cardinality() << ',' << pair.cg.cardinality() << ','
            << opt.cardinality() << ',' << minimize(opt).cardinality() << ',' << trace.elementaryConvolutions << ','
            << to_string(trace.branch) << ',' << ns(t2, t3) << ',' << (eq ? "true" : "false") << '\n';
        if (mfile) *mfile << trial << ',' << report.csv_row() << '\n';
    }
    return 0;
}

Curve select_curve(const std::string& file, const std::string& id, const OptimizationFlags& flags) {
    NetworkFile net = parse_network(file);
    PipelineOptions p = flags.pipeline();
    auto colon = id.find(':');
    std::string kind = id.substr(0, colon);
    if (colon == std::string::npos) {
        if (kind == "exact") return exact_equivalent(net.tandem, p);
        if (kind == "approx") return approx_equivalent(net.tandem, p);
        if (kind == "arrival") {
            if (!net.arrival) throw DomainError("network has no arrival line");
            return net.arrival->curve();
        }
    } else {
        std::size_t i = parse_index(id.substr(colon + 1));
        if (i < 1 || i > net.tandem.size()) throw DomainError("node index out of range in '" + id + "'");
        if (kind == "beta") return net.tandem.beta(i);
        if (kind == "exact") return per_node_exact(net.tandem, i, p);
        if (kind == "approx") return per_node_approx(net.tandem, i, p);
    }
    throw DomainError("unknown curve id '" + id + "'");
}

int cmd_export(const ExportOptions& o, std::ostream& out) {
    Rat h = Rat::parse(o.horizon);
    if (!h.is_finite() || h.sign() <= 0) throw DomainError("export horizon must be positive and finite");
    Curve f = select_curve(o.file, o.curve, o.flags);
    auto file = open_out(o.out);
    (file ? *file : out) << to_csv(cut(f, Interval::closed_open(0, h)));
    return 0;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
    WorkloadGenerator gen(o.seed);
    OracleConfig cfg;
    cfg.seed = o.seed;
    cfg.sampleCount = o.samples;
    cfg.horizonPeriods = 2;
    const OperandClass classes[] = {OperandClass::Dominance, OperandClass::Asymptotic, OperandClass::Incomparable};
    std::uint64_t failures = 0;
    for (std::uint64_t i = 0; i < o.count; ++i) {
        OperandPair pair = gen.next(classes[i % 3]);
        Curve base = convolution(pair.cf, pair.cg);
        auto bad = check_convolution(pair.cf, pair.cg, base, cfg);
        bool eq = equivalent(conv_optimized(pair.cf, pair.cg), base);
        if (!bad.empty() || !eq) {
            ++failures;
            out << "pair " << i << " (" << to_string(pair.cls) << "): " << bad.size() << " oracle mismatches"
                << (eq ? "" : ", optimized convolution differs") << '\n';
            for (const auto& m : bad)
                out << "  t=" << m.t << " oracle " << m.expected << " engine " << m.actual << '\n';
        }
    }
    out << (failures ? "FAIL " : "OK ") << (o.count - failures) << "/" << o.count << " pairs\n";
    return failures ? 1 : 0;
}

}  // namespace upp::app
