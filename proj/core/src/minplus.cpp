#include "uppnc/minplus.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "uppnc/runtime.hpp"
#include "uppnc/sequence_ops.hpp"

namespace upp {

// ----------------------------------------------------------------- minimum

void check_infinity_clash(const Curve& f, const Curve& g) {
    if ((f.has_plus_inf() && g.has_minus_inf()) || (f.has_minus_inf() && g.has_plus_inf()))
        throw DomainError("operands mix +inf and -inf");
}

static void reject_minus_inf_tail(const Curve& f) {
    if (f.c().is_minus_inf()) throw DomainError("curves ultimately -inf are not supported");
}

static Rat sup_offset_over_period(const Curve& f) {
    const Rat rho = f.rho();
    Rat best = Rat::minus_infinity();
    const Sequence period = f.periodic_part();
    for (const Element& e : period.elements()) {
        if (is_point(e)) {
            const Point& p = as_point(e);
            best = rmax(best, p.value - rho * p.time);
        } else {
            const Segment& s = as_segment(e);
            best = rmax(best, s.left - rho * s.start);
            best = rmax(best, s.right() - rho * s.end);
        }
    }
    if (best.is_plus_inf()) throw DomainError("minimum: +inf inside the period of a curve with finite slope");
    return best;
}

static Rat inf_offset(const Curve& f) {
    const Rat rho = f.rho();
    Rat best = Rat::plus_infinity();
    for (const Element& e : f.sequence().elements()) {
        if (is_point(e)) {
            const Point& p = as_point(e);
            if (!p.value.is_plus_inf()) best = rmin(best, p.value - rho * p.time);
        } else {
            const Segment& s = as_segment(e);
            if (s.left.is_plus_inf()) continue;
            best = rmin(best, s.left - rho * s.start);
            best = rmin(best, s.right() - rho * s.end);
        }
    }
    if (best.is_minus_inf()) throw DomainError("minimum: -inf values make the crossing bound unbounded");
    return best;
}

MinimumResult minimum_detailed(const Curve& f, const Curve& g) {
    check_infinity_clash(f, g);
    reject_minus_inf_tail(f);
    reject_minus_inf_tail(g);
    Rat T, d, c;
    std::optional<TailCrossingBound> bound;
    const bool fi = f.ultimately_infinite(), gi = g.ultimately_infinite();
    if (fi && gi) {
        T = rmax(f.T(), g.T());
        d = 1;
        c = Rat::plus_infinity();
    } else if (fi || gi) {
        const Curve& u = fi ? f : g;
        const Curve& p = fi ? g : f;
        T = rmax(u.T(), p.T());
        // At T = T_u the finite point of u may still win; move past it.
        if (T == u.T() && u.eval(u.T()) < p.eval(u.T())) T = u.T() + p.d();
        d = p.d();
        c = p.c();
    } else if (f.rho() == g.rho()) {
        T = rmax(f.T(), g.T());
        d = rat_lcm(f.d(), g.d());
        c = f.rho() * d;
    } else {
        const Curve& lo = f.rho() < g.rho() ? f : g;
        const Curve& hi = f.rho() < g.rho() ? g : f;
        TailCrossingBound b;
        b.M = sup_offset_over_period(lo);
        b.m = inf_offset(hi);
        Rat raw = (b.M - b.m) / (hi.rho() - lo.rho());
        b.tBar = rmax(rmax(lo.T(), hi.T()), raw);
        T = b.tBar;
        d = lo.d();
        c = lo.c();
        bound = b;
    }
    Interval D = Interval::closed_open(0, T + d);
    Sequence s = pointwise_min(cut(f, D), cut(g, D));
    return MinimumResult{Curve(std::move(s), T, d, c), T, bound};
}

Curve minimum(const Curve& f, const Curve& g) {
    return minimum_detailed(f, g).curve;
}

// --------------------------------------------------- elementary convolution

static Rat sum_values(const Rat& a, const Rat& b) {
    if ((a.is_plus_inf() && b.is_minus_inf()) || (a.is_minus_inf() && b.is_plus_inf()))
        throw DomainError("elementary convolution mixes +inf and -inf");
    return a + b;
}

void elementary_convolution(const Element& a, const Element& b, std::vector<Element>& out) {
    if (is_point(a) && is_point(b)) {
        const Point& p = as_point(a);
        const Point& q = as_point(b);
        out.push_back(Point{p.time + q.time, sum_values(p.value, q.value)});
        return;
    }
    if (is_point(a) || is_point(b)) {
        const Point& p = is_point(a) ? as_point(a) : as_point(b);
        const Segment& s = is_point(a) ? as_segment(b) : as_segment(a);
        out.push_back(Segment(s.start + p.time, s.end + p.time, sum_values(s.left, p.value), s.slope));
        return;
    }
    const Segment& s1 = as_segment(a);
    const Segment& s2 = as_segment(b);
    Rat start = s1.start + s2.start;
    Rat end = s1.end + s2.end;
    Rat left = sum_values(s1.left, s2.left);
    if (left.is_infinite() || s1.slope == s2.slope) {
        out.push_back(Segment(start, end, left, s1.slope));
        return;
    }
    const Segment& flat = s1.slope < s2.slope ? s1 : s2;
    const Segment& steep = s1.slope < s2.slope ? s2 : s1;
    Rat mid = start + flat.length();
    Rat vmid = left + flat.slope * flat.length();
    out.push_back(Segment(start, mid, left, flat.slope));
    out.push_back(Point{mid, vmid});
    out.push_back(Segment(mid, end, vmid, steep.slope));
}

std::vector<Element> elementary_convolution(const Element& a, const Element& b) {
    std::vector<Element> out;
    elementary_convolution(a, b, out);
    return out;
}

// ------------------------------------------------------------ lower envelope

namespace {

struct Line {
    Rat v0;  // value at the interval start (right limit)
    Rat slope;
};

// Lower envelope of lines on ]a, b[, appended to out as alternating
// segments and crossing points. Ties go to the smaller slope.
void envelope_of_lines(std::vector<Line>& lines, const Rat& a, const Rat& b, std::vector<Element>& out) {
    std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
        if (x.slope != y.slope) return x.slope > y.slope;
        return x.v0 < y.v0;
    });
    std::vector<Line> uniq;
    for (Line& l : lines) {
        if (!uniq.empty() && uniq.back().slope == l.slope) continue;
        uniq.push_back(std::move(l));
    }
    auto cross = [](const Line& p, const Line& q) { return (q.v0 - p.v0) / (p.slope - q.slope); };
    // Convex hull for the minimum, slopes decreasing.
    std::vector<Line> hull;
    for (Line& l : uniq) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], l) <= cross(hull[hull.size() - 2], hull.back()))
            hull.pop_back();
        hull.push_back(std::move(l));
    }
    const Rat L = b - a;
    std::size_t i = 0;
    // Skip pieces whose range ends at or before 0.
    while (i + 1 < hull.size() && cross(hull[i], hull[i + 1]) <= 0) ++i;
    Rat x0 = 0;
    while (true) {
        Rat x1 = L;
        bool last = true;
        if (i + 1 < hull.size()) {
            Rat x = cross(hull[i], hull[i + 1]);
            if (x < L) {
                x1 = x;
                last = false;
            }
        }
        const Line& l = hull[i];
        Rat left = l.slope.is_zero() ? l.v0 : l.v0 + l.slope * x0;
        out.push_back(Segment(a + x0, a + x1, left, l.slope));
        if (last) break;
        out.push_back(Point{a + x1, l.v0 + l.slope * x1});
        x0 = x1;
        ++i;
    }
}

Rat value_of(const Element& e, const Rat& t) {
    return is_point(e) ? as_point(e).value : as_segment(e).value_at(t);
}

}  // namespace

Sequence lower_envelope(const std::vector<Element>& E) {
    if (E.empty()) throw DomainError("lower envelope of an empty set");
    std::vector<Rat> ts;
    ts.reserve(E.size() * 2);
    for (const Element& e : E) {
        ts.push_back(elem_start(e));
        if (!is_point(e)) ts.push_back(elem_end(e));
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const std::size_t N = ts.size();
    const std::size_t n_int = 2 * N - 1;
    auto idx = [&](const Rat& t) {
        return static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), t) - ts.begin());
    };
    // Interval span of every element: 2i is the point t_i, 2i+1 is ]t_i, t_i+1[.
    std::vector<std::pair<std::size_t, std::size_t>> span(E.size());
    std::vector<std::size_t> count(n_int + 1, 0);
    for (std::size_t k = 0; k < E.size(); ++k) {
        const Element& e = E[k];
        if (is_point(e)) {
            std::size_t i = 2 * idx(as_point(e).time);
            span[k] = {i, i};
        } else {
            span[k] = {2 * idx(as_segment(e).start) + 1, 2 * idx(as_segment(e).end) - 1};
        }
        for (std::size_t j = span[k].first; j <= span[k].second; ++j) ++count[j];
    }
    std::vector<std::size_t> offset(n_int + 1, 0);
    for (std::size_t j = 0; j < n_int; ++j) offset[j + 1] = offset[j] + count[j];
    std::vector<std::uint32_t> members(offset[n_int]);
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t k = 0; k < E.size(); ++k)
        for (std::size_t j = span[k].first; j <= span[k].second; ++j) members[fill[j]++] = static_cast<std::uint32_t>(k);
    counters().envelopeIntervals += n_int;

    std::vector<Element> out;
    out.reserve(n_int);
    std::vector<Line> lines;
    const Rat inf = Rat::plus_infinity();
    for (std::size_t j = 0; j < n_int; ++j) {
        if ((j & 1023) == 0) check_deadline();
        const std::size_t b = offset[j], e = offset[j + 1];
        if (j % 2 == 0) {
            const Rat& t = ts[j / 2];
            if (b == e && (j == 0 || j == n_int - 1)) continue;  // domain boundary not covered
            Rat v = inf;
            for (std::size_t m = b; m < e; ++m) {
                Rat w = value_of(E[members[m]], t);
                if (w < v) v = std::move(w);
            }
            out.push_back(Point{t, v});
            continue;
        }
        const Rat& lo = ts[j / 2];
        const Rat& hi = ts[j / 2 + 1];
        lines.clear();
        bool minus_inf = false;
        for (std::size_t m = b; m < e; ++m) {
            const Segment& s = as_segment(E[members[m]]);
            if (s.left.is_plus_inf()) continue;
            if (s.left.is_minus_inf()) {
                minus_inf = true;
                break;
            }
            lines.push_back(Line{s.value_at(lo), s.slope});
        }
        if (minus_inf) {
            out.push_back(Segment(lo, hi, Rat::minus_infinity(), 0));
        } else if (lines.empty()) {
            out.push_back(Segment(lo, hi, inf, 0));
        } else if (lines.size() == 1) {
            out.push_back(Segment(lo, hi, lines[0].v0, lines[0].slope));
        } else {
            envelope_of_lines(lines, lo, hi, out);
        }
    }
    return merge_well_formed(Sequence(std::move(out)));
}

// ---------------------------------------------------- by-sequence convolution

std::vector<Element> pairwise_products(const Sequence& a, const Sequence& b) {
    const std::size_t na = a.size(), nb = b.size();
    counters().elementaryConvolutions += static_cast<std::uint64_t>(na) * nb;
    std::vector<Element> out;
    const std::size_t workers = std::min<std::size_t>(worker_count(), na);
    if (!parallel_enabled() || workers < 2 || na * nb < 4096) {
        out.reserve(na * nb * 2);
        for (std::size_t i = 0; i < na; ++i) {
            check_deadline();
            for (std::size_t j = 0; j < nb; ++j) elementary_convolution(a[i], b[j], out);
        }
        return out;
    }
    // Rows are split into contiguous blocks and concatenated in order.
    std::vector<std::vector<Element>> parts(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                std::size_t lo = na * w / workers, hi = na * (w + 1) / workers;
                for (std::size_t i = lo; i < hi; ++i) {
                    check_deadline();
                    for (std::size_t j = 0; j < nb; ++j) elementary_convolution(a[i], b[j], parts[w]);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::size_t total = 0;
    for (auto& p : parts) total += p.size();
    out.reserve(total);
    for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
    return out;
}

Sequence convolve_sequences(const Sequence& a, const Sequence& b) {
    return lower_envelope(pairwise_products(a, b));
}

Sequence self_convolve_sequence(const Sequence& a) {
    const std::size_t n = a.size();
    counters().elementaryConvolutions += static_cast<std::uint64_t>(n) * (n + 1) / 2;
    std::vector<Element> E;
    E.reserve(n * (n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        check_deadline();
        for (std::size_t j = i; j < n; ++j) elementary_convolution(a[i], a[j], E);
    }
    return lower_envelope(E);
}

Sequence prepend_infinite(const Sequence& s) {
    if (s.domain_start().is_zero() && s.start_closed()) return s;
    const Rat inf = Rat::plus_infinity();
    std::vector<Element> out;
    out.push_back(Point{0, inf});
    if (s.domain_start().sign() > 0) {
        out.push_back(Segment(0, s.domain_start(), inf, 0));
        if (!s.start_closed()) out.push_back(Point{s.domain_start(), inf});
    }
    out.insert(out.end(), s.elements().begin(), s.elements().end());
    return Sequence(std::move(out));
}

// -------------------------------------------------------------- convolution

namespace {

Curve finite_tail(Sequence s, const Rat& T) {
    // s covers [0, T[ or [0, T]; the result is +inf from T on (or after T).
    const Rat inf = Rat::plus_infinity();
    auto& el = s.mutable_elements();
    if (!s.end_closed()) el.push_back(Point{T, inf});
    el.push_back(Segment(T, T + 1, inf, 0));
    return Curve(std::move(s), T, 1, inf);
}

// f is +inf after T_f, g has finite slope.
Curve conv_with_finite_support(const Curve& f, const Curve& g) {
    Rat T = f.T() + g.T();
    Sequence a = cut(f, Interval::closed(0, f.T()));
    Sequence b = cut(g, Interval::closed_open(0, T + g.d()));
    Sequence s = restrict_to(convolve_sequences(a, b), Interval::closed_open(0, T + g.d()));
    return Curve(std::move(s), T, g.d(), g.c());
}

Curve conv_same_slope(const Curve& f, const Curve& g) {
    Rat d = rat_lcm(f.d(), g.d());
    Rat T = f.T() + g.T() + d;
    // Both cuts span the whole result domain so that every decomposition
    // of t < T + d is available.
    Interval D = Interval::closed_open(0, T + d);
    Sequence s = restrict_to(convolve_sequences(cut(f, D), cut(g, D)), D);
    return Curve(std::move(s), T, d, f.rho() * d);
}

// Transient of f with the periodic part of g.
Curve conv_transient_periodic(const Curve& f, const Curve& g) {
    Rat T = f.T() + g.T();
    Sequence a = cut(f, Interval::closed_open(0, f.T()));
    Sequence b = cut(g, Interval::closed_open(g.T(), T + g.d()));
    Sequence s = restrict_to(convolve_sequences(a, b), Interval::closed_open(g.T(), T + g.d()));
    return Curve(prepend_infinite(s), T, g.d(), g.c());
}

Curve conv_general(const Curve& f, const Curve& g) {
    std::vector<Curve> parts;
    const bool ft = f.T().sign() > 0, gt = g.T().sign() > 0;
    if (ft && gt) {
        Sequence s = convolve_sequences(cut(f, Interval::closed_open(0, f.T())), cut(g, Interval::closed_open(0, g.T())));
        parts.push_back(finite_tail(restrict_to(s, Interval::closed_open(0, f.T() + g.T())), f.T() + g.T()));
    }
    if (ft) parts.push_back(conv_transient_periodic(f, g));
    if (gt) parts.push_back(conv_transient_periodic(g, f));
    {
        Rat d = rat_lcm(f.d(), g.d());
        Rat base = f.T() + g.T();
        Sequence a = cut(f, Interval::closed_open(f.T(), f.T() + 2 * d));
        Sequence b = cut(g, Interval::closed_open(g.T(), g.T() + 2 * d));
        Sequence s = restrict_to(convolve_sequences(a, b), Interval::closed_open(base, base + 2 * d));
        parts.push_back(Curve(prepend_infinite(s), base + d, d, d * rmin(f.rho(), g.rho())));
    }
    Curve acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = minimum(parts[i], acc);
    return acc;
}

}  // namespace

Curve convolution(const Curve& f, const Curve& g) {
    check_infinity_clash(f, g);
    reject_minus_inf_tail(f);
    reject_minus_inf_tail(g);
    const bool fi = f.ultimately_infinite(), gi = g.ultimately_infinite();
    if (fi && gi) {
        Sequence s = convolve_sequences(cut(f, Interval::closed(0, f.T())), cut(g, Interval::closed(0, g.T())));
        return finite_tail(std::move(s), f.T() + g.T());
    }
    if (fi) return conv_with_finite_support(f, g);
    if (gi) return conv_with_finite_support(g, f);
    if (f.rho() == g.rho()) return conv_same_slope(f, g);
    return conv_general(f, g);
}

std::uint64_t convolution_cost(const Curve& f, const Curve& g) {
    auto card = [](const Curve& h, const Rat& a, const Rat& b) -> std::uint64_t { return cut_cardinality(h, a, b); };
    const bool fi = f.ultimately_infinite(), gi = g.ultimately_infinite();
    if (fi && gi) return (card(f, 0, f.T()) + 1) * (card(g, 0, g.T()) + 1);
    if (fi || gi) {
        const Curve& u = fi ? f : g;
        const Curve& p = fi ? g : f;
        return (card(u, 0, u.T()) + 1) * card(p, 0, u.T() + p.T() + p.d());
    }
    Rat d = rat_lcm(f.d(), g.d());
    if (f.rho() == g.rho()) {
        Rat end = f.T() + g.T() + 2 * d;
        return card(f, 0, end) * card(g, 0, end);
    }
    std::uint64_t total = card(f, f.T(), f.T() + 2 * d) * card(g, g.T(), g.T() + 2 * d);
    const bool ft = f.T().sign() > 0, gt = g.T().sign() > 0;
    if (ft && gt) total += card(f, 0, f.T()) * card(g, 0, g.T());
    if (ft) total += card(f, 0, f.T()) * card(g, g.T(), f.T() + g.T() + g.d());
    if (gt) total += card(g, 0, g.T()) * card(f, f.T(), f.T() + g.T() + f.d());
    return total;
}

}  // namespace upp
