#include "uppnc/subadd.hpp"

#include <optional>
#include <string>
#include <vector>

#include "uppnc/minimize.hpp"
#include "uppnc/minplus.hpp"
#include "uppnc/runtime.hpp"
#include "uppnc/sequence_ops.hpp"

namespace upp {

// ------------------------------------------------------------- closed form

Curve sac_rate_latency_jump(const Rat& R, const Rat& theta, const Rat& W) {
    if (!R.is_finite() || R.sign() <= 0) throw DomainError("closure of rate-latency plus jump requires R > 0");
    if (!theta.is_finite() || theta.sign() < 0) throw DomainError("closure of rate-latency plus jump requires theta >= 0");
    if (W.sign() < 0) throw DomainError("closure of rate-latency plus jump requires W >= 0");
    if (W.is_plus_inf()) return make_delta_zero();
    Curve beta = make_rate_latency(R, theta);
    if (W.is_zero()) return theta.is_zero() ? beta : make_zero();
    if (theta.is_zero() || W >= R * theta) return add_jump(beta, W);
    // Staircase: W on ]0, theta], then every theta a rise of slope R lasting
    // W/R. Stored from T = theta; minimize() moves T down to W/R.
    Rat rise = theta + W / R;
    std::vector<Element> el{Point{0, 0},           Segment(0, theta, W, 0),   Point{theta, W},
                            Segment(theta, rise, W, R), Point{rise, 2 * W}, Segment(rise, 2 * theta, 2 * W, 0)};
    return Curve(Sequence(std::move(el)), theta, theta, W);
}

// ------------------------------------------------------------ general SAC

namespace {

Curve self_convolution(const Curve& h) {
    if (h.ultimately_infinite()) return convolution(h, h);
    Rat T = 2 * h.T() + h.d();
    Interval D = Interval::closed_open(0, T + h.d());
    Sequence s = restrict_to(self_convolve_sequence(cut(h, D)), D);
    return Curve(std::move(s), T, h.d(), h.c());
}

// Infimum of f over ]0, +inf[, limits included.
Rat inf_positive(const Curve& f) {
    Rat best = Rat::plus_infinity();
    const auto& el = f.sequence().elements();
    for (std::size_t i = 1; i < el.size(); ++i) {
        const Element& e = el[i];
        if (is_point(e)) {
            best = rmin(best, as_point(e).value);
        } else {
            best = rmin(best, as_segment(e).left);
            best = rmin(best, as_segment(e).right());
        }
    }
    return best;
}

bool has_negative_values(const Curve& f) {
    for (const Element& e : f.sequence().elements()) {
        if (is_point(e) ? as_point(e).value.sign() < 0
                        : (as_segment(e).left.sign() < 0 || as_segment(e).right().sign() < 0))
            return true;
    }
    return f.c().sign() < 0;
}

// f is 0 on some ]0, a[.
bool zero_near_origin(const Curve& f) {
    const Segment& s = as_segment(f.sequence()[1]);
    return s.left.is_zero() && s.slope.is_zero();
}

// f without its first segment ]0, a[, i.e. +inf there.
Curve drop_first_segment(const Curve& f) {
    const Rat& a = as_segment(f.sequence()[1]).end;
    Rat T = rmax(f.T(), a);
    Sequence s = cut(f, Interval::closed_open(0, T + f.d()));
    Segment& first = std::get<Segment>(s.mutable_elements()[1]);
    first = Segment(first.start, first.end, Rat::plus_infinity(), 0);
    return Curve(std::move(s), T, f.d(), f.c());
}

// h with its leading +inf segment lowered to 0. The closure is +inf there
// too, so that stretch never limits the exact prefix of h.
Curve fill_leading_gap(const Curve& h) {
    const Segment& first = as_segment(h.sequence()[1]);
    if (!first.left.is_plus_inf() || h.ultimately_infinite()) return h;
    Sequence s = h.sequence();
    s.mutable_elements()[1] = Segment(first.start, first.end, 0, 0);
    return Curve(std::move(s), h.T(), h.d(), h.c());
}

struct PeriodCandidate {
    Rat d, c;
};

// Smallest f(t)/t over the points of the stored sequence with t > 0, and
// smallest ratio of a one-sided limit at a segment end.
std::vector<PeriodCandidate> best_ratios(const Curve& f) {
    std::optional<PeriodCandidate> point, limit;
    auto consider = [](std::optional<PeriodCandidate>& best, const Rat& t, const Rat& v) {
        if (t.sign() <= 0 || v.is_infinite()) return;
        if (!best || v / t < best->c / best->d) best = PeriodCandidate{t, v};
    };
    for (const Element& e : f.sequence().elements()) {
        if (is_point(e)) {
            consider(point, as_point(e).time, as_point(e).value);
        } else {
            const Segment& g = as_segment(e);
            consider(limit, g.start, g.left);
            consider(limit, g.end, g.right());
        }
    }
    std::vector<PeriodCandidate> out;
    if (point) out.push_back(*point);
    if (limit) out.push_back(*limit);
    return out;
}

// With h >= sac(f) and g = sac(f) up to T + d, extending g by its period
// stays above sac(f) if for every t >= T one of the splits of t + d at
// t, t+ or t- gives sac(t + d) <= g(t) + c:
//   c >= h(d),  c >= h(d-) + g(t+) - g(t),  c >= h(d+) + g(t-) - g(t).
// g repeats, so the breakpoints of one period and one interior value suffice.
bool periodic_step_bounded(const Curve& g, const Curve& h) {
    const Rat& c = g.c();
    const Rat& d = g.d();
    const Rat at = h.eval(d), below = h.left_limit(d), above = h.right_limit(d);
    if (c >= at) return true;
    if (c < below && c < above) return false;
    auto ok = [&](const Rat& t) {
        Rat v = g.eval(t);
        if (c >= below + (g.right_limit(t) - v)) return true;
        return t.sign() > 0 && c >= above + (g.left_limit(t) - v);
    };
    const Sequence s = cut(g, Interval::closed(g.T(), g.T() + d));
    for (const Element& e : s.elements()) {
        if (is_point(e)) {
            if (!ok(as_point(e).time)) return false;
        } else if (!ok((as_segment(e).start + as_segment(e).end) / 2)) {
            return false;
        }
    }
    return true;
}

bool verify_closure(const Curve& g, const Curve& f, const Curve& h) {
    if (!periodic_step_bounded(g, h)) return false;
    if (!equivalent(minimum(g, f), g)) return false;
    return equivalent(self_convolution(g), g);
}

}  // namespace

Curve sac(const Curve& f, const SacOptions& opt) {
    if (f.eval(0).sign() < 0) throw DomainError("closure of a curve with f(0) < 0 diverges to -inf");
    if (f.c().is_minus_inf() || has_negative_values(f))
        throw DomainError("closure of a curve with negative values is not supported");
    if (zero_near_origin(f)) return make_zero();
    // A segment leaving the origin at 0 with slope r closes to r t, and
    // sac(f) = sac(rest of f) * sac(that segment).
    if (const Segment& first = as_segment(f.sequence()[1]); first.left.is_zero())
        return minimize(convolution(sac(drop_first_segment(f), opt), make_rate_latency(first.slope, 0)));
    Curve h = minimize(minimum(make_delta_zero(), f));
    const Rat eps = inf_positive(f);
    // End of a leading +inf stretch of f; candidates must start after it.
    const Segment& lead = as_segment(h.sequence()[1]);
    const Rat gap = lead.left.is_plus_inf() ? lead.end : Rat(0);
    std::vector<PeriodCandidate> candidates;
    auto add_candidate = [&](const Rat& d, const Rat& c) {
        if (!d.is_finite() || !c.is_finite() || d.sign() <= 0) return;
        for (const auto& x : candidates)
            if (x.d == d && x.c == c) return;
        candidates.push_back({d, c});
    };
    for (const auto& r : best_ratios(f)) add_candidate(r.d, r.c);
    if (!f.ultimately_infinite()) add_candidate(f.d(), f.c());

    Rat multiplicity = 1;  // h = min over n <= multiplicity of the n-fold powers
    for (int k = 0; k < opt.max_doublings; ++k) {
        check_deadline();
        Curve sq = minimize(self_convolution(h));
        Curve next = minimize(minimum(h, sq));
        if (equivalent(next, h)) return h;
        h = std::move(next);
        multiplicity = multiplicity * 2;
        if (!(eps.sign() > 0)) continue;
        Rat H = first_time_above(fill_leading_gap(h), multiplicity * eps);
        if (!H.is_finite()) continue;
        std::vector<PeriodCandidate> trial = candidates;
        if (!h.ultimately_infinite()) trial.push_back({h.d(), h.c()});
        for (const auto& cand : trial) {
            Rat Tc = H - cand.d;
            if (Tc.sign() < 0 || Tc < gap) continue;
            Curve g(cut(h, Interval::closed_open(0, Tc + cand.d)), Tc, cand.d, cand.c);
            if (verify_closure(g, f, h)) return minimize(g);
        }
    }
    throw DivergenceError("sub-additive closure did not stabilize within " + std::to_string(opt.max_doublings) +
                          " doublings");
}

// --------------------------------------------------------------- dominance

std::string to_string(Dominance d) {
    switch (d) {
        case Dominance::FirstDominates: return "FirstDominates";
        case Dominance::SecondDominates: return "SecondDominates";
        case Dominance::AsymptoticSecondOverFirst: return "AsymptoticSecondOverFirst";
        case Dominance::AsymptoticFirstOverSecond: return "AsymptoticFirstOverSecond";
        case Dominance::Incomparable: return "Incomparable";
    }
    return "?";
}

std::string to_string(ConvBranch b) {
    switch (b) {
        case ConvBranch::Dominance: return "dominance";
        case ConvBranch::Asymptotic: return "asymptotic";
        case ConvBranch::AsymptoticDirect: return "asymptotic-direct";
        case ConvBranch::SelfConvMin: return "self-conv-min";
        case ConvBranch::Baseline: return "baseline";
    }
    return "?";
}

namespace {

bool tail_matches(const Curve& m, const Curve& f) {
    Interval D = Interval::closed_open(m.T(), m.T() + m.d());
    return same_values(cut(m, D), cut(f, D));
}

DominanceRelation classify(const Curve& f, const Curve& g, const MinimumResult& m) {
    if (equivalent(g, m.curve)) return {Dominance::FirstDominates, 0};
    if (equivalent(f, m.curve)) return {Dominance::SecondDominates, 0};
    Rat rf = f.rho(), rg = g.rho();
    if (rf < rg) return {Dominance::AsymptoticSecondOverFirst, m.T};
    if (rf > rg) return {Dominance::AsymptoticFirstOverSecond, m.T};
    if (rf.is_plus_inf()) return {Dominance::Incomparable, 0};
    if (tail_matches(m.curve, f)) return {Dominance::AsymptoticSecondOverFirst, m.T};
    if (tail_matches(m.curve, g)) return {Dominance::AsymptoticFirstOverSecond, m.T};
    return {Dominance::Incomparable, 0};
}

void require_zero_at_origin(const Curve& f, const Curve& g) {
    if (f.eval(0) != 0 || g.eval(0) != 0) throw DomainError("operands must satisfy f(0) = g(0) = 0");
}

Curve truncate_at(const Curve& g, const Rat& t) {
    const Rat inf = Rat::plus_infinity();
    std::vector<Element> el = cut(g, Interval::closed_open(0, t)).elements();
    el.push_back(Point{t, inf});
    el.push_back(Segment(t, t + 1, inf, 0));
    return Curve(Sequence(std::move(el)), t, 1, inf);
}

Curve asymptotic_impl(const Curve& f, const Curve& g, const Rat& tStar) {
    if (tStar.sign() <= 0) return f;
    return minimum(convolution(f, truncate_at(g, tStar)), f);
}

std::uint64_t asymptotic_cost(const Curve& f, const Curve& g, const Rat& tStar) {
    if (tStar.sign() <= 0) return 0;
    return (cut_cardinality(g, 0, tStar) + 1) * cut_cardinality(f, 0, tStar + f.T() + f.d());
}

Curve self_conv_min_impl(const Curve& f, const Curve& g, const Curve& h_raw) {
    if (h_raw.ultimately_infinite()) return convolution(f, g);
    Curve h = minimize(h_raw);
    // Periodic from 2 T_h + d_h; starting at min(2 T_h, T_f + T_g) breaks
    // periodicity (see the self-convolution tests).
    Rat T = 2 * h.T() + h.d();
    Rat end = T + h.d();
    Interval D = Interval::closed(0, end);
    ColoredSequence S = pointwise_min_colored(cut(f, D), cut(g, D));
    const auto& el = S.seq.elements();
    std::vector<Element> E(el.begin(), el.end());
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < el.size(); ++i) {
        check_deadline();
        for (std::size_t j = i + 1; j < el.size(); ++j) {
            if (S.colors[i] == S.colors[j]) continue;
            elementary_convolution(el[i], el[j], E);
            ++pairs;
        }
    }
    counters().elementaryConvolutions += pairs;
    Interval R = Interval::closed_open(0, end);
    Sequence s = restrict_to(lower_envelope(E), R);
    return Curve(std::move(s), T, h.d(), h.c());
}

}  // namespace

DominanceRelation check_dominance(const Curve& f, const Curve& g) {
    return classify(f, g, minimum_detailed(f, g));
}

Curve conv_dominance(const Curve& f, const Curve& g) {
    require_zero_at_origin(f, g);
    if (!equivalent(minimum(f, g), f)) throw DomainError("conv_dominance requires g >= f");
    return f;
}

Curve conv_asymptotic(const Curve& f, const Curve& g, const Rat& tStar) {
    require_zero_at_origin(f, g);
    if (f.has_minus_inf()) throw DomainError("conv_asymptotic requires f > -inf");
    Curve m = minimum(f, g);
    Rat from = rmax(tStar, m.T());
    Interval D = Interval::closed_open(tStar, from + m.d());
    if (!same_values(cut(m, D), cut(f, D))) throw DomainError("conv_asymptotic requires g >= f from tStar on");
    return asymptotic_impl(f, g, tStar);
}

Curve self_conv_min(const Curve& f, const Curve& g) {
    require_zero_at_origin(f, g);
    return self_conv_min_impl(f, g, minimum(f, g));
}

Curve conv_optimized(const Curve& f, const Curve& g, ConvTrace* trace, const ConvOptions& opt) {
    const std::uint64_t before = counters().elementaryConvolutions;
    ConvTrace t;
    t.cardinalityF = f.cardinality();
    t.cardinalityG = g.cardinality();
    t.branch = ConvBranch::Baseline;
    std::optional<Curve> result;
    if (opt.dominance || opt.asymptotic || opt.self_conv) {
        MinimumResult m = minimum_detailed(f, g);
        DominanceRelation rel = classify(f, g, m);
        t.dominance = rel.kind;
        switch (rel.kind) {
            case Dominance::FirstDominates:
            case Dominance::SecondDominates:
                if (!opt.dominance) break;
                t.branch = ConvBranch::Dominance;
                result = rel.kind == Dominance::FirstDominates ? g : f;
                break;
            case Dominance::AsymptoticSecondOverFirst:
            case Dominance::AsymptoticFirstOverSecond: {
                if (!opt.asymptotic) break;
                bool second_over = rel.kind == Dominance::AsymptoticSecondOverFirst;
                const Curve& lower = second_over ? f : g;
                const Curve& upper = second_over ? g : f;
                if (asymptotic_cost(lower, upper, rel.tStar) > convolution_cost(f, g)) {
                    t.branch = ConvBranch::AsymptoticDirect;
                    result = convolution(f, g);
                } else {
                    t.branch = ConvBranch::Asymptotic;
                    result = asymptotic_impl(lower, upper, rel.tStar);
                }
                break;
            }
            case Dominance::Incomparable:
                if (!opt.self_conv) break;
                t.branch = ConvBranch::SelfConvMin;
                result = self_conv_min_impl(f, g, m.curve);
                break;
        }
    }
    if (!result) result = convolution(f, g);
    t.elementaryConvolutions = counters().elementaryConvolutions - before;
    t.cardinalityResult = result->cardinality();
    if (trace) *trace = t;
    return *result;
}

}  // namespace upp
