#include "uppnc/oracles.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace upp {

void OracleConfig::validate() const {
    if (sampleCount == 0 || horizonPeriods == 0 || sacDoublingLimit == 0 || seed == 0)
        throw DomainError("oracle configuration values must be positive");
}

namespace {

std::vector<Rat> breakpoints(const Curve& f, const Rat& lo, const Rat& hi) {
    std::vector<Rat> out;
    if (hi < lo) return out;
    const Sequence s = cut(f, Interval::closed(lo, hi));
    for (const Element& e : s.elements())
        if (is_point(e)) out.push_back(as_point(e).time);
    return out;
}

Rat add_checked(const Rat& a, const Rat& b) {
    if ((a.is_plus_inf() && b.is_minus_inf()) || (a.is_minus_inf() && b.is_plus_inf()))
        throw DomainError("+inf meets -inf in a convolution");
    return a + b;
}

}  // namespace

// s -> f(s) + g(t - s) is affine between consecutive candidates, where the
// candidates are 0, t, the breakpoints of f and t minus the breakpoints of g.
// The infimum over [0, t] is therefore reached at a candidate or approached
// from one side of it, which the one-sided limits cover.
Rat conv_oracle_eval(const Curve& f, const Curve& g, const Rat& t) {
    if (!t.is_finite() || t.sign() < 0) throw DomainError("convolution oracle needs a finite t >= 0");
    std::set<Rat> cand{Rat(0), t};
    for (const Rat& b : breakpoints(f, 0, t)) cand.insert(b);
    for (const Rat& b : breakpoints(g, 0, t)) cand.insert(t - b);
    Rat best = Rat::plus_infinity();
    for (const Rat& s : cand) {
        Rat u = t - s;
        best = rmin(best, add_checked(f.eval(s), g.eval(u)));
        if (s.sign() > 0) best = rmin(best, add_checked(f.left_limit(s), g.right_limit(u)));
        if (u.sign() > 0) best = rmin(best, add_checked(f.right_limit(s), g.left_limit(u)));
    }
    return best;
}

namespace {

// A decomposition of t into parts. Moving length between two parts lying
// inside segments changes the cost linearly, so some optimal (or infimal)
// decomposition has at most one part inside a segment; every other part sits
// on a breakpoint b, either exactly (cost f(b)) or infinitesimally shorter
// (f(b-)) or longer (f(b+)). The mask records which perturbations occur.
enum : std::uint8_t { kLonger = 1, kShorter = 2 };

using PartMap = std::map<std::pair<Rat, std::uint8_t>, Rat>;

bool relax(PartMap& m, const Rat& sum, std::uint8_t mask, const Rat& cost) {
    auto key = std::make_pair(sum, mask);
    auto it = m.find(key);
    if (it == m.end()) {
        m.emplace(key, cost);
        return true;
    }
    if (cost < it->second) {
        it->second = cost;
        return true;
    }
    return false;
}

}  // namespace

SacOracleValue sac_oracle_eval(const Curve& f, const Rat& t, const OracleConfig& cfg) {
    if (!t.is_finite() || t.sign() < 0) throw DomainError("closure oracle needs a finite t >= 0");
    if (f.eval(0).sign() < 0) throw DomainError("closure oracle needs f(0) >= 0");
    std::vector<Rat> bps = breakpoints(f, 0, t);
    std::set<Rat> bp_set(bps.begin(), bps.end());

    PartMap parts;
    auto add_part = [&](const Rat& b, std::uint8_t mask, const Rat& cost) {
        if (!cost.is_plus_inf()) relax(parts, b, mask, cost);
    };
    add_part(0, kLonger, f.right_limit(0));
    for (const Rat& b : bps) {
        if (b.sign() <= 0) continue;
        add_part(b, 0, f.eval(b));
        add_part(b, kShorter, f.left_limit(b));
        add_part(b, kLonger, f.right_limit(b));
    }

    SacOracleValue out;
    PartMap cur = parts;
    while (true) {
        PartMap next = cur;
        bool changed = false;
        for (const auto& [ka, ca] : cur) {
            for (const auto& [kb, cb] : cur) {
                Rat sum = ka.first + kb.first;
                if (sum > t) continue;
                changed |= relax(next, sum, ka.second | kb.second, ca + cb);
            }
        }
        if (!changed) {
            out.stabilized = true;
            break;
        }
        cur = std::move(next);
        if (++out.doublings >= cfg.sacDoublingLimit) break;
    }

    // Remainder part of length x given the perturbation mask of the others.
    auto remainder = [&](const Rat& x, std::uint8_t mask) -> Rat {
        const bool longer = mask & kLonger, shorter = mask & kShorter;
        if (x.sign() == 0) {
            if (longer && !shorter) return Rat::plus_infinity();
            if (shorter && !longer) return f.right_limit(0);
            return 0;
        }
        if (!bp_set.count(x)) return f.eval(x);
        if (longer && shorter) return rmin(f.eval(x), rmin(f.left_limit(x), f.right_limit(x)));
        if (longer) return f.left_limit(x);
        if (shorter) return f.right_limit(x);
        return f.eval(x);
    };

    Rat best = remainder(t, 0);
    for (const auto& [k, c] : cur) {
        if (k.first > t) continue;
        best = rmin(best, c + remainder(t - k.first, k.second));
    }
    out.value = best;
    return out;
}

std::vector<Rat> sample_times(const Curve& f, const OracleConfig& cfg) {
    cfg.validate();
    Rat horizon = f.T() + Rat(static_cast<long long>(cfg.horizonPeriods)) * f.d();
    std::vector<Rat> out = breakpoints(f, 0, horizon);
    std::mt19937_64 rng(cfg.seed);
    const long long den = 997;
    std::uniform_int_distribution<long long> u(0, den);
    for (std::uint64_t i = 0; i < cfg.sampleCount; ++i) out.push_back(horizon * Rat(u(rng)) / Rat(den));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<OracleMismatch> check_convolution(const Curve& f, const Curve& g, const Curve& h,
                                              const OracleConfig& cfg) {
    std::vector<OracleMismatch> out;
    for (const Rat& t : sample_times(h, cfg)) {
        Rat want = conv_oracle_eval(f, g, t);
        Rat got = h.eval(t);
        if (want != got) out.push_back({t, want, got});
    }
    return out;
}

}  // namespace upp
