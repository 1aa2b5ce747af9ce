#include "uppnc/flowcontrol.hpp"

#include <chrono>
#include <optional>

#include "uppnc/minimize.hpp"
#include "uppnc/minplus.hpp"
#include "uppnc/runtime.hpp"

namespace upp {

Curve TandemSpec::beta(std::size_t i) const {
    const NodeSpec& n = nodes.at(i - 1);
    return make_rate_latency(n.R, n.theta);
}

const Rat& TandemSpec::window(std::size_t i) const {
    if (i < 2 || i > nodes.size()) throw DomainError("window index out of range");
    return windows[i - 2];
}

void TandemSpec::validate() const {
    if (nodes.empty()) throw DomainError("tandem needs at least one node");
    if (windows.size() + 1 != nodes.size()) throw DomainError("tandem of n nodes needs n - 1 windows");
    for (const NodeSpec& n : nodes) {
        if (!n.R.is_finite() || n.R.sign() <= 0) throw DomainError("node rate must be positive and finite");
        if (!n.theta.is_finite() || n.theta.sign() < 0) throw DomainError("node latency must be nonnegative and finite");
    }
    for (const Rat& w : windows)
        if (w.sign() <= 0) throw DomainError("windows must be positive");
}

Curve ArrivalSpec::curve() const {
    validate();
    return make_token_bucket(sigma, rho);
}

void ArrivalSpec::validate() const {
    if (!sigma.is_finite() || !rho.is_finite() || sigma.sign() < 0 || rho.sign() < 0)
        throw DomainError("arrival curve parameters must be finite and nonnegative");
}

namespace {

class Pipeline {
public:
    Pipeline(const TandemSpec& t, const PipelineOptions& o) : t_(t), opt_(o) { t_.validate(); }

    template <class Fn>
    Curve step(const char* op, std::string label, std::vector<std::size_t> operands, Fn&& fn) {
        std::optional<BudgetScope> budget;
        if (opt_.step_budget > 0) budget.emplace(std::chrono::duration<double>(opt_.step_budget));
        check_deadline();
        auto start = std::chrono::steady_clock::now();
        Curve raw = fn();
        StepRecord r;
        r.operation = op;
        r.label = std::move(label);
        r.operandCardinalities = std::move(operands);
        r.resultCardinality = raw.cardinality();
        Curve out = opt_.minimize ? minimize(raw) : std::move(raw);
        r.minimizedCardinality = out.cardinality();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (opt_.on_step) opt_.on_step(r);
        return out;
    }

    Curve convolve(const Curve& a, const Curve& b, std::string label) {
        return step("convolution", std::move(label), {a.cardinality(), b.cardinality()},
                    [&] { return convolution(a, b); });
    }

    // Both operands sub-additive with value 0 at 0.
    Curve convolve_factors(const Curve& a, const Curve& b, std::string label) {
        return step("convolution", std::move(label), {a.cardinality(), b.cardinality()},
                    [&] { return conv_optimized(a, b, nullptr, opt_.conv); });
    }

    Curve closure(const Curve& f, const Rat& W, std::string label) {
        Curve operand = W.is_plus_inf() ? make_delta_zero() : add_jump(f, W);
        if (opt_.minimize) operand = minimize(operand);
        return step("sac", std::move(label), {operand.cardinality()}, [&] {
            return W.is_plus_inf() ? make_delta_zero() : sac(operand, opt_.sac);
        });
    }

    // Closure of beta_{R,theta} + W.
    Curve closure_rl(const Rat& R, const Rat& theta, const Rat& W, std::string label) {
        if (!opt_.closed_form) return closure(make_rate_latency(R, theta), W, std::move(label));
        std::size_t n = W.is_plus_inf() ? make_delta_zero().cardinality()
                                        : add_jump(make_rate_latency(R, theta), W).cardinality();
        return step("sac", std::move(label), {n}, [&] { return sac_rate_latency_jump(R, theta, W); });
    }

    // beta_{i..j}: rate-latency convolution of nodes i..j.
    std::pair<Rat, Rat> rl_chain(std::size_t i, std::size_t j) const {
        Rat R = t_.nodes[i - 1].R, theta = 0;
        for (std::size_t k = i; k <= j; ++k) {
            R = rmin(R, t_.nodes[k - 1].R);
            theta += t_.nodes[k - 1].theta;
        }
        return {R, theta};
    }

    // Equivalent service curves beta_k^eq for k = i..n, indexed by k - i.
    std::vector<Curve> exact_from(std::size_t i) {
        const std::size_t n = t_.size();
        std::vector<Curve> eq(n - i + 1);
        eq[n - i] = t_.beta(n);
        for (std::size_t k = n - 1; k >= i && k >= 1; --k) {
            std::string tag = std::to_string(k);
            Curve bk = t_.beta(k);
            const Rat& W = t_.window(k + 1);
            Curve fc;
            if (k + 1 == n) {
                auto [R, theta] = rl_chain(k, n);
                fc = closure_rl(R, theta, W, "sac(beta" + tag + "*beta" + std::to_string(n) + "+W)");
            } else {
                Curve inner = convolve(bk, eq[k + 1 - i], "beta" + tag + "*beta" + std::to_string(k + 1) + "eq");
                fc = closure(inner, W, "sac(beta" + tag + "*beta" + std::to_string(k + 1) + "eq+W)");
            }
            eq[k - i] = convolve(bk, fc, "beta" + tag + "eq");
            if (k == 1) break;
        }
        return eq;
    }

    // Closures of beta_j * beta_{j+1} + W_{j+1} for j = i..n-1, folded.
    Curve factor_product(std::size_t i) {
        const std::size_t n = t_.size();
        Curve acc;
        for (std::size_t j = i; j + 1 <= n; ++j) {
            auto [R, theta] = rl_chain(j, j + 1);
            std::string tag = std::to_string(j);
            Curve f = closure_rl(R, theta, t_.window(j + 1), "sac(beta" + tag + "*beta" + std::to_string(j + 1) + "+W)");
            acc = j == i ? f : convolve_factors(acc, f, "factors" + std::to_string(i) + ".." + tag);
        }
        return acc;
    }

    const TandemSpec& tandem() const { return t_; }

private:
    const TandemSpec& t_;
    const PipelineOptions& opt_;
};

}  // namespace

Curve per_node_exact(const TandemSpec& tandem, std::size_t i, const PipelineOptions& opt) {
    Pipeline p(tandem, opt);
    if (i < 1 || i > tandem.size()) throw DomainError("node index out of range");
    return p.exact_from(i).front();
}

Curve exact_equivalent(const TandemSpec& tandem, const PipelineOptions& opt) {
    Pipeline p(tandem, opt);
    std::vector<Curve> eq = p.exact_from(1);
    const std::size_t n = tandem.size();
    Curve acc = eq[n - 1];
    for (std::size_t k = n - 1; k >= 1; --k)
        acc = p.convolve(eq[k - 1], acc, "end-to-end" + std::to_string(k));
    return acc;
}

Curve per_node_approx(const TandemSpec& tandem, std::size_t i, const PipelineOptions& opt) {
    Pipeline p(tandem, opt);
    if (i < 1 || i >= tandem.size()) throw DomainError("node index out of range for the approximate method");
    Curve factors = p.factor_product(i);
    return p.convolve(tandem.beta(i), factors, "beta" + std::to_string(i) + "eq'");
}

Curve approx_equivalent(const TandemSpec& tandem, const PipelineOptions& opt) {
    Pipeline p(tandem, opt);
    const std::size_t n = tandem.size();
    auto [R, theta] = p.rl_chain(1, n);
    Curve rl = make_rate_latency(R, theta);
    if (n == 1) return rl;
    Curve factors = p.factor_product(1);
    return p.convolve(rl, factors, "end-to-end");
}

bool is_nondecreasing(const Curve& f) {
    if (f.c().sign() < 0) return false;
    Rat end = f.T() + (f.ultimately_infinite() ? f.d() : 2 * f.d());
    Sequence s = cut(f, Interval::closed_open(0, end));
    Rat prev = Rat::minus_infinity();
    for (const Element& e : s.elements()) {
        if (is_point(e)) {
            if (as_point(e).value < prev) return false;
            prev = as_point(e).value;
        } else {
            const Segment& g = as_segment(e);
            if (g.left < prev || (g.left.is_finite() && g.slope.sign() < 0)) return false;
            prev = g.right();
        }
    }
    return true;
}

namespace {

void check_service(const Curve& beta) {
    if (beta.eval(0).sign() < 0 || !is_nondecreasing(beta))
        throw DomainError("service curve must be nonnegative and nondecreasing");
}

// Breakpoint values of beta over the transient and one period.
std::vector<Rat> levels(const Curve& beta) {
    std::vector<Rat> out;
    Sequence s = cut(beta, Interval::closed(0, beta.T() + beta.d()));
    for (const Element& e : s.elements()) {
        if (is_point(e)) {
            out.push_back(as_point(e).value);
        } else {
            out.push_back(as_segment(e).left);
            out.push_back(as_segment(e).right());
        }
    }
    return out;
}

}  // namespace

// With beta nondecreasing, the delay of data arriving at level y is
// U(y) - t(y), where U(y) = inf{s : beta(s) > y} and t(y) = (y - sigma) / rho.
// Between two consecutive breakpoint levels of beta both terms are affine in
// y, so the supremum is approached at a level. Past the transient, shifting a
// level by one period changes the delay by d - c / rho <= 0 whenever
// rho <= rho_beta, so the levels of the transient and one period suffice.
Rat delay_bound(const ArrivalSpec& alpha, const Curve& beta) {
    alpha.validate();
    check_service(beta);
    if (alpha.rho > beta.rho()) return Rat::plus_infinity();
    if (alpha.rho.is_zero()) return alpha.sigma.is_zero() ? Rat(0) : first_time_above(beta, alpha.sigma, false);
    Rat best = first_time_above(beta, alpha.sigma, true);
    for (const Rat& v : levels(beta)) {
        if (!v.is_finite() || v <= alpha.sigma) continue;
        best = rmax(best, first_time_above(beta, v, true) - (v - alpha.sigma) / alpha.rho);
    }
    return best;
}

// alpha - beta is affine between breakpoints of beta; past the transient each
// period adds rho d - c <= 0 when rho <= rho_beta.
Rat backlog_bound(const ArrivalSpec& alpha, const Curve& beta) {
    alpha.validate();
    check_service(beta);
    if (alpha.rho > beta.rho()) return Rat::plus_infinity();
    auto a = [&](const Rat& t) { return alpha.sigma + alpha.rho * t; };
    Rat best = -beta.eval(0);
    Sequence s = cut(beta, Interval::closed(0, beta.T() + beta.d()));
    for (const Element& e : s.elements()) {
        if (is_point(e)) {
            const Point& p = as_point(e);
            if (p.time.sign() > 0) best = rmax(best, a(p.time) - p.value);
        } else {
            const Segment& g = as_segment(e);
            best = rmax(best, a(g.start) - g.left);
            best = rmax(best, a(g.end) - g.right());
        }
    }
    return best;
}

}  // namespace upp
