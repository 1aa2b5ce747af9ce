// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "network.hpp"
#include "uppnc/flowcontrol.hpp"
#include "uppnc/minimize.hpp"
#include "uppnc/minplus.hpp"
#include "uppnc/oracles.hpp"
#include "uppnc/sequence_ops.hpp"
#include "uppnc/subadd.hpp"
#include "workload.hpp"

using namespace upp;
using namespace upp::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed checks of one criterion.
struct Check {
    std::size_t failed = 0;
    std::vector<std::string> failures;  // the first few
    std::ostringstream summary;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (++failed <= 5) failures.push_back(what);
    }
    bool ok() const { return failed == 0; }
};

std::string str(const Rat& r) {
    std::ostringstream s;
    s << r;
    return s.str();
}

bool near(std::size_t actual, std::size_t expected, std::size_t tol = 2) {
    return actual + tol >= expected && actual <= expected + tol;
}

TandemSpec load(const std::string& name) {
    return app::parse_network(std::string(UPPNC_DATA_DIR) + "/" + name).tandem;
}

TandemSpec homogeneous(int n, const std::vector<Rat>& windows) {
    TandemSpec t;
    for (int i = 0; i < n; ++i) t.nodes.push_back({16, 2});
    t.windows = windows;
    return t;
}

std::map<std::string, StepRecord> record_steps(const std::function<Curve(const PipelineOptions&)>& run,
                                               double& secs) {
    std::map<std::string, StepRecord> steps;
    PipelineOptions opt;
    opt.on_step = [&](const StepRecord& r) { steps[r.label] = r; };
    auto t0 = Clock::now();
    run(opt);
    secs = seconds_since(t0);
    return steps;
}

void exact_pipeline_cardinalities(Check& c) {
    double secs = 0;
    TandemSpec t = load("four_node_exact.net");
    auto steps = record_steps([&](const PipelineOptions& o) { return exact_equivalent(t, o); }, secs);
    if (!steps.count("sac(beta2*beta3eq+W)") || !steps.count("sac(beta1*beta2eq+W)")) {
        c.require(false, "pipeline steps missing");
        return;
    }
    const StepRecord& inner = steps.at("sac(beta2*beta3eq+W)");
    const StepRecord& outer = steps.at("sac(beta1*beta2eq+W)");
    c.require(near(inner.operandCardinalities.at(0), 10), "inner operand N");
    c.require(near(inner.minimizedCardinality, 10), "inner result N");
    c.require(near(outer.operandCardinalities.at(0), 14), "outer operand N");
    c.require(near(outer.minimizedCardinality, 6), "outer result N");
    c.require(secs < 60, "runtime");
    c.summary << "inner " << inner.operandCardinalities.at(0) << " -> " << inner.minimizedCardinality << ", outer "
              << outer.operandCardinalities.at(0) << " -> " << outer.minimizedCardinality << ", " << secs << " s";
}

void approx_pipeline_cardinalities(Check& c) {
    double secs = 0;
    TandemSpec t = load("four_node_approx.net");
    auto steps = record_steps([&](const PipelineOptions& o) { return approx_equivalent(t, o); }, secs);
    for (const char* label : {"sac(beta1*beta2+W)", "sac(beta2*beta3+W)", "factors1..2", "factors1..3"})
        if (!steps.count(label)) {
            c.require(false, std::string("missing step ") + label);
            return;
        }
    std::size_t f1 = steps.at("sac(beta1*beta2+W)").minimizedCardinality;
    std::size_t f2 = steps.at("sac(beta2*beta3+W)").minimizedCardinality;
    const StepRecord& first = steps.at("factors1..2");
    const StepRecord& last = steps.at("factors1..3");
    c.require(near(f1, 6) && near(f2, 6), "factor N");
    c.require(near(first.minimizedCardinality, 42), "first convolution N");
    c.require(near(last.operandCardinalities.at(0), 42) && near(last.operandCardinalities.at(1), 6),
              "final operands N");
    c.require(near(last.minimizedCardinality, 6), "final N");
    c.require(secs < 1, "runtime >= 1 s");
    c.summary << "factors " << f1 << "," << f2 << " -> " << first.minimizedCardinality << "; "
              << last.operandCardinalities.at(0) << "," << last.operandCardinalities.at(1) << " -> "
              << last.minimizedCardinality << ", " << secs << " s";
}

void case_study_equality(Check& c) {
    for (int n = 2; n <= 6; ++n) {
        std::vector<Rat> windows;
        for (int i = 0; i < n - 1; ++i) windows.push_back(13 + 2 * i);
        TandemSpec t = homogeneous(n, windows);
        auto t0 = Clock::now();
        bool eq = equivalent(exact_equivalent(t), approx_equivalent(t));
        c.require(eq, "n=" + std::to_string(n));
        c.summary << "n=" << n << (eq ? " equal" : " differ") << " (" << seconds_since(t0) << " s)"
                  << (n < 6 ? ", " : "");
    }
}

void strict_gap_at_first_node(Check& c) {
    TandemSpec t = homogeneous(3, {20, 13});
    Curve ex = per_node_exact(t, 1), ap = per_node_approx(t, 1);
    Rat horizon = 4 * (ex.T() + ex.d() + ap.T() + ap.d());
    int strict = 0, samples = 0;
    for (int k = 0; k <= 4000; ++k) {
        Rat s = horizon * Rat(k, 4000);
        for (const Rat& x : {s, s + Rat(1, 7919)}) {
            ++samples;
            c.require(ex.eval(x) >= ap.eval(x), "exact below approx at t=" + str(x));
            strict += ex.eval(x) > ap.eval(x);
        }
    }
    c.require(strict > 0, "no strict sample");
    bool eq = equivalent(exact_equivalent(t), approx_equivalent(t));
    c.require(eq, "end-to-end differ");
    c.summary << strict << "/" << samples << " samples strict, end-to-end " << (eq ? "equal" : "differ");
}

const app::OperandClass kClasses[] = {app::OperandClass::Dominance, app::OperandClass::Asymptotic,
                                      app::OperandClass::Incomparable};

void optimized_convolution_correct(Check& c) {
    app::WorkloadGenerator gen(2024);
    auto t0 = Clock::now();
    int good = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
        app::OperandPair p = gen.next(kClasses[i % 3]);
        bool eq = equivalent(conv_optimized(p.cf, p.cg), convolution(p.cf, p.cg));
        good += eq;
        c.require(eq, "trial " + std::to_string(i));
    }
    double secs = seconds_since(t0);
    c.require(secs < 600, "runtime");
    c.summary << good << "/" << trials << " equivalent, " << secs << " s";
}

struct Timing {
    std::vector<double> ratios;  // optimized / baseline
    std::uint64_t optimizedConvolutions = 0;
};

Timing time_class(app::OperandClass cls, int trials, std::uint64_t seed) {
    app::WorkloadGenerator gen(seed);
    Timing out;
    for (int i = 0; i < trials; ++i) {
        app::OperandPair p = gen.next(cls);
        auto t0 = Clock::now();
        Curve base = convolution(p.cf, p.cg);
        double tb = seconds_since(t0);
        ConvTrace trace;
        auto t1 = Clock::now();
        Curve opt = conv_optimized(p.cf, p.cg, &trace);
        double to = seconds_since(t1);
        out.ratios.push_back(to / tb);
        out.optimizedConvolutions += trace.elementaryConvolutions;
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

void speedup_direction(Check& c) {
    Timing dom = time_class(app::OperandClass::Dominance, 25, 11);
    Timing inc = time_class(app::OperandClass::Incomparable, 25, 12);
    double speedup = 1 / median(dom.ratios);
    double inc_median = median(inc.ratios);
    double inc_frac = static_cast<double>(std::count_if(inc.ratios.begin(), inc.ratios.end(),
                                                        [](double r) { return r <= 1.0; })) /
                      static_cast<double>(inc.ratios.size());
    c.require(dom.optimizedConvolutions == 0, "dominance trials convolved");
    c.require(speedup >= 100, "dominance median speedup < 100");
    c.require(inc_median <= 0.9, "incomparable median ratio > 0.9");
    c.require(inc_frac >= 0.8, "fewer than 80% incomparable ratios <= 1");

    // Pair-count bound of the self-convolution of a minimum.
    app::WorkloadGenerator gen(13);
    std::uint64_t worst_slack = ~0ull;
    for (int i = 0; i < 25; ++i) {
        app::OperandPair p = gen.next(app::OperandClass::Incomparable);
        Curve h = minimize(minimum(p.cf, p.cg));
        Interval D = Interval::closed(0, 2 * h.T() + 2 * h.d());
        const std::uint64_t n = pointwise_min_colored(cut(p.cf, D), cut(p.cg, D)).seq.size();
        ConvTrace t;
        conv_optimized(p.cf, p.cg, &t);
        const std::uint64_t bound = (n * n - n) / 2 + n;
        c.require(t.branch != ConvBranch::SelfConvMin || t.elementaryConvolutions <= bound,
                  "pair count above bound in trial " + std::to_string(i));
        if (t.elementaryConvolutions <= bound) worst_slack = std::min(worst_slack, bound - t.elementaryConvolutions);
    }
    c.summary << "dominance median speedup " << speedup << "x with " << dom.optimizedConvolutions
              << " convolutions; incomparable median ratio " << inc_median << ", " << 100 * inc_frac
              << "% <= 1; pair bound slack >= " << worst_slack;
}

// Minimization checks shared by the pipeline and random curves.
void check_minimization(Check& c, const Curve& f, const std::string& what) {
    auto [m, r] = minimize_with_report(f);
    c.require(equivalent(f, m), what + ": not equivalent");
    c.require((f.d() / m.d()).is_integer(), what + ": period ratio not integral");
    c.require(m.cardinality() <= f.cardinality(), what + ": grew");
    Curve again = minimize(m);
    c.require(again.sequence() == m.sequence() && again.T() == m.T() && again.d() == m.d(),
              what + ": not idempotent");
}

void minimization_suite(Check& c) {
    PipelineOptions raw;
    raw.minimize = false;
    std::vector<std::pair<std::string, Curve>> curves;
    for (const char* file : {"four_node_exact.net", "four_node_approx.net", "homogeneous3.net", "two_node.net"}) {
        TandemSpec t = load(file);
        PipelineOptions opt = raw;
        opt.on_step = nullptr;
        curves.emplace_back(std::string(file) + " approx", approx_equivalent(t, opt));
        if (std::string(file) != "four_node_approx.net") {
            curves.emplace_back(std::string(file) + " exact", exact_equivalent(t, opt));
            for (std::size_t i = 1; i < t.size(); ++i) {
                curves.emplace_back(std::string(file) + " exact:" + std::to_string(i), per_node_exact(t, i, opt));
                curves.emplace_back(std::string(file) + " approx:" + std::to_string(i), per_node_approx(t, i, opt));
            }
        }
    }
    Curve a = sac_rate_latency_jump(21, 32, 23), b = sac_rate_latency_jump(7, 44, 29);
    Curve h = convolution(a, b);
    curves.emplace_back("factor convolution", h);
    for (const auto& [what, f] : curves) check_minimization(c, f, what);

    Rng rng(41);
    for (int i = 0; i < 100; ++i) {
        Curve f = random_curve(rng);
        if (rand_int(rng, 0, 1)) f = inflate(f, rand_int(rng, 0, 3), rand_int(rng, 1, 4));
        check_minimization(c, f, "random " + std::to_string(i));
    }
    std::size_t reduced = minimize(h).cardinality();
    c.require(near(h.cardinality(), 270) && near(reduced, 42), "factor convolution reduction");
    c.summary << curves.size() << " pipeline + 100 random curves, factor convolution " << h.cardinality() << " -> "
              << reduced;
}

void sac_suite(Check& c) {
    Rng rng(53);
    auto jump_curve = [&] {
        return add_jump(make_rate_latency(rand_int(rng, 1, 8), rand_rat(rng, 1, 4, 2)), rand_int(rng, 1, 16));
    };
    int closures = 0;
    for (int i = 0; i < 30; ++i, ++closures) {
        Curve f = i % 2 ? jump_curve()
                        : random_curve(rng, {.max_pieces = 2, .nondecreasing = true, .zero_at_origin = true});
        Curve s = sac(f);
        const std::string what = "closure " + std::to_string(i);
        c.require(s.eval(0) == Rat(0), what + ": value at 0");
        Rat horizon = 3 * (f.T() + f.d() + s.T() + s.d());
        for (const Rat& t : random_times(rng, horizon, 200, 997))
            c.require(s.eval(t) <= f.eval(t), what + ": above f at t=" + str(t));
        Rat h2 = 3 * (s.T() + s.d());
        for (int k = 0; k < 10000; ++k) {
            Rat u = h2 * Rat(rand_int(rng, 0, 1000), 1000), v = h2 * Rat(rand_int(rng, 0, 1000), 1000);
            if (s.eval(u) + s.eval(v) < s.eval(u + v)) {
                c.require(false, what + ": not sub-additive at " + str(u) + ", " + str(v));
                break;
            }
        }
        c.require(equivalent(convolution(s, s), s), what + ": s*s differs from s");
    }
    int pairs = 0;
    for (int i = 0; i < 50; ++i, ++pairs) {
        Curve f = jump_curve(), g = jump_curve();
        c.require(equivalent(sac(minimum(f, g)), convolution(sac(f), sac(g))), "min pair " + std::to_string(i));
    }
    int triples = 0;
    for (int i = 0; i < 50; ++i, ++triples) {
        Rat R = rand_int(rng, 1, 20), theta = rand_rat(rng, 1, 8, 2), W = rand_int(rng, 1, 60);
        c.require(equivalent(sac(add_jump(make_rate_latency(R, theta), W)), sac_rate_latency_jump(R, theta, W)),
                  "closed form " + str(R) + "," + str(theta) + "," + str(W));
    }
    c.summary << closures << " closures, " << pairs << " minimum pairs, " << triples << " closed-form triples";
}

void oracle_gate(Check& c) {
    Rng rng(6);
    OracleConfig cfg;
    cfg.sampleCount = 200;
    cfg.horizonPeriods = 2;
    std::size_t points = 0;
    for (int i = 0; i < 100; ++i) {
        Curve f = random_curve(rng, {.max_pieces = 3}), g = random_curve(rng, {.max_pieces = 3});
        cfg.seed = static_cast<std::uint64_t>(i + 1);
        Curve h = convolution(f, g);
        points += sample_times(h, cfg).size();
        auto bad = check_convolution(f, g, h, cfg);
        c.require(bad.empty(), "pair " + std::to_string(i) + ": " + std::to_string(bad.size()) + " mismatches");
    }
    Rat delay = delay_bound(ArrivalSpec{2, 3}, make_rate_latency(16, 2));
    c.require(delay == Rat(17, 8), "delay bound " + str(delay));
    c.summary << "100 pairs, " << points << " sample times; delay bound " << delay;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"exact pipeline cardinalities", exact_pipeline_cardinalities},
        {"approximate pipeline cardinalities", approx_pipeline_cardinalities},
        {"homogeneous tandems: exact equals approximate", case_study_equality},
        {"strict gap at node 1, equal end-to-end", strict_gap_at_first_node},
        {"optimized convolution correctness", optimized_convolution_correct},
        {"speedup direction and pair bound", speedup_direction},
        {"minimization suite", minimization_suite},
        {"sub-additive closure suite", sac_suite},
        {"oracle gate and delay bound", oracle_gate},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        auto t0 = Clock::now();
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        failed += !c.ok();
        std::cout << (c.ok() ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
                  << c.summary.str() << "; " << seconds_since(t0) << " s)\n";
        for (const auto& f : c.failures) std::cout << "    " << f << '\n';
        if (c.failed > c.failures.size()) std::cout << "    ... " << c.failed - c.failures.size() << " more\n";
        std::cout.flush();
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size() << '\n';
    return failed ? 1 : 0;
}
