#include "uppnc/minimize.hpp"

#include <map>
#include <sstream>

#include "uppnc/runtime.hpp"

namespace upp {

namespace {

Sequence merged_cut(const Curve& f, const Rat& a, const Rat& b) {
    return merge_well_formed(cut(f, Interval::closed_open(a, b)));
}

Curve rebuild(const Curve& f, const Rat& T, const Rat& d, const Rat& c) {
    return Curve(merge_well_formed(cut(f, Interval::closed_open(0, T + d)), {T}), T, d, c);
}

// f(t + d) = f(t) + c for all t in [a, a + len[.
bool shift_matches(const Curve& f, const Rat& a, const Rat& len, const Rat& d, const Rat& c) {
    Sequence lhs = merged_cut(f, a + d, a + d + len);
    Sequence rhs = merged_cut(f, a, a + len).shifted(d, c);
    return lhs == rhs;
}

Curve canonical_infinite(const Curve& f) {
    const Rat inf = Rat::plus_infinity();
    const auto& el = f.sequence().elements();
    std::size_t i = el.size();
    while (i > 0) {
        const Element& e = el[i - 1];
        const Rat& v = is_point(e) ? as_point(e).value : as_segment(e).left;
        if (!v.is_plus_inf()) break;
        --i;
    }
    std::vector<Element> out;
    Rat T = 0;
    if (i == 0) {
        out.push_back(Point{0, inf});
    } else {
        const Element& e = el[i - 1];
        out.assign(el.begin(), el.begin() + static_cast<std::ptrdiff_t>(i));
        if (is_point(e)) {
            T = as_point(e).time;
        } else {
            T = as_segment(e).end;
            out.push_back(Point{T, inf});
        }
    }
    out.push_back(Segment(T, T + 1, inf, 0));
    return Curve(merge_well_formed(Sequence(std::move(out)), {T}), T, 1, inf);
}

void finish(MinimizationReport& r, const Curve& out) {
    r.minimizedCardinality = out.cardinality();
    r.minimizedPeriod = out.d();
}

}  // namespace

std::string MinimizationReport::csv_header() {
    return "original_cardinality,minimized_cardinality,breakpoints,factors_tested,periods_removed,"
           "transient_segments_removed,original_period,minimized_period";
}

std::string MinimizationReport::csv_row() const {
    std::ostringstream os;
    os << originalCardinality << ',' << minimizedCardinality << ',' << breakpointCount << ',';
    for (std::size_t i = 0; i < factorsTested.size(); ++i) {
        if (i) os << ';';
        os << factorsTested[i].first << (factorsTested[i].second ? "+" : "-");
    }
    os << ',' << periodsRemoved << ',' << transientSegmentsRemoved << ',' << originalPeriod << ',' << minimizedPeriod;
    return os.str();
}

std::uint64_t count_breakpoints(const Curve& f) {
    if (f.ultimately_infinite()) return 0;
    Sequence P = merge_well_formed(f.periodic_part());
    std::uint64_t b = 0;
    for (std::size_t i = 1; i < P.size(); ++i)
        if (is_point(P[i])) ++b;
    const Rat& fT = as_point(P[0]).value;
    const Segment& first = as_segment(P[1]);
    const Segment& last = as_segment(P[P.size() - 1]);
    bool smooth = last.slope == first.slope && last.right() == fT + f.c() && fT == first.left;
    if (!smooth) ++b;
    return b;
}

std::pair<Curve, MinimizationReport> minimize_period(const Curve& f) {
    MinimizationReport r;
    r.originalCardinality = f.cardinality();
    r.originalPeriod = f.d();
    if (f.ultimately_infinite()) {
        Curve out = canonical_infinite(f);
        finish(r, out);
        return {out, r};
    }
    r.breakpointCount = count_breakpoints(f);
    if (r.breakpointCount == 0) {
        Curve out = rebuild(f, f.T(), 1, f.rho());
        finish(r, out);
        return {out, r};
    }
    std::map<std::uint64_t, int> mult;
    for (std::uint64_t p : factorize(r.breakpointCount)) ++mult[p];
    Rat d = f.d(), c = f.c();
    for (const auto& [p, m] : mult) {
        for (int k = 0; k < m; ++k) {
            check_deadline();
            Rat dp = d / Rat(static_cast<long long>(p));
            Rat cp = c / Rat(static_cast<long long>(p));
            bool ok = shift_matches(f, f.T(), d - dp, dp, cp);
            r.factorsTested.emplace_back(p, ok);
            if (!ok) break;
            d = dp;
            c = cp;
        }
    }
    Curve out = rebuild(f, f.T(), d, c);
    finish(r, out);
    return {out, r};
}

std::pair<Curve, MinimizationReport> minimize_transient(const Curve& f) {
    MinimizationReport r;
    r.originalCardinality = f.cardinality();
    r.originalPeriod = f.d();
    if (f.ultimately_infinite()) {
        Curve out = canonical_infinite(f);
        finish(r, out);
        return {out, r};
    }
    const Rat& d = f.d();
    const Rat& c = f.c();
    Rat T = f.T();
    if (count_breakpoints(f) == 0) {
        // Ultimately affine: walk back to the start of the final affine piece,
        // unless the function jumps there (then no minimum exists).
        Sequence M = merge_well_formed(cut(f, Interval::closed_open(0, T + d)));
        const Segment& tail = as_segment(M[M.size() - 1]);
        const Point& p = as_point(M[M.size() - 2]);
        if (p.value == tail.left && p.time < T) {
            T = p.time;
            r.transientSegmentsRemoved = 1;
        }
    } else {
        bool changed = true;
        while (changed) {
            changed = false;
            while (T >= d && shift_matches(f, T - d, d, d, c)) {
                check_deadline();
                T -= d;
                ++r.periodsRemoved;
                changed = true;
            }
            Sequence P = merged_cut(f, T, T + d);
            if (P.size() >= 4) {
                const Rat& x = as_point(P[P.size() - 2]).time;
                Rat l = T + d - x;
                if (l <= T && shift_matches(f, T - l, l, d, c)) {
                    T -= l;
                    ++r.transientSegmentsRemoved;
                    changed = true;
                }
            }
        }
    }
    Curve out = rebuild(f, T, d, c);
    finish(r, out);
    return {out, r};
}

std::pair<Curve, MinimizationReport> minimize_with_report(const Curve& f) {
    Curve g(merge_well_formed(f.sequence(), {f.T()}), f.T(), f.d(), f.c());
    auto [p, rp] = minimize_period(g);
    auto [t, rt] = minimize_transient(p);
    MinimizationReport r = rp;
    r.originalCardinality = f.cardinality();
    r.originalPeriod = f.d();
    r.periodsRemoved = rt.periodsRemoved;
    r.transientSegmentsRemoved = rt.transientSegmentsRemoved;
    finish(r, t);
    return {t, r};
}

Curve minimize(const Curve& f) {
    return minimize_with_report(f).first;
}

}  // namespace upp
