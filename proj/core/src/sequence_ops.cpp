#include "uppnc/sequence_ops.hpp"

namespace upp {

namespace {

struct Piece {
    bool point;
    Rat lo, hi;  // lo == hi for points
    Rat va, vb;  // values at lo (right limits for open pieces)
    Rat sa, sb;
};

std::pair<Sequence, Sequence> common_domain(const Sequence& a, const Sequence& b) {
    if (a.empty() || b.empty()) throw DomainError("operation on an empty sequence");
    const Rat& lo = rmax(a.domain_start(), b.domain_start());
    const Rat& hi = rmin(a.domain_end(), b.domain_end());
    if (hi < lo) throw DomainError("sequences have disjoint domains");
    bool lc = a.domain_start() == b.domain_start() ? (a.start_closed() && b.start_closed())
                                                    : (lo == a.domain_start() ? a.start_closed() : b.start_closed());
    bool hc = a.domain_end() == b.domain_end() ? (a.end_closed() && b.end_closed())
                                                : (hi == a.domain_end() ? a.end_closed() : b.end_closed());
    Interval D{lo, hi, lc, hc};
    bool same = a.domain_start() == b.domain_start() && a.domain_end() == b.domain_end() &&
                a.start_closed() == b.start_closed() && a.end_closed() == b.end_closed();
    if (same) return {a, b};
    return {restrict_to(a, D), restrict_to(b, D)};
}

// Walks two sequences over the same domain, calling fn on each maximal
// piece where both are a single element. fn returns false to stop early.
template <class Fn>
void walk_aligned(const Sequence& a, const Sequence& b, Fn&& fn) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const Element& ea = a[i];
        const Element& eb = b[j];
        if (is_point(ea) && is_point(eb)) {
            const Rat& t = as_point(ea).time;
            if (!fn(Piece{true, t, t, as_point(ea).value, as_point(eb).value, 0, 0})) return;
            ++i;
            ++j;
        } else if (is_point(ea)) {
            const Rat& t = as_point(ea).time;
            if (!fn(Piece{true, t, t, as_point(ea).value, as_segment(eb).value_at(t), 0, 0})) return;
            ++i;
        } else if (is_point(eb)) {
            const Rat& t = as_point(eb).time;
            if (!fn(Piece{true, t, t, as_segment(ea).value_at(t), as_point(eb).value, 0, 0})) return;
            ++j;
        } else {
            const Segment& sa = as_segment(ea);
            const Segment& sb = as_segment(eb);
            const Rat& lo = rmax(sa.start, sb.start);
            const Rat& hi = rmin(sa.end, sb.end);
            if (!fn(Piece{false, lo, hi, sa.value_at(lo), sb.value_at(lo), sa.slope, sb.slope})) return;
            bool ai = sa.end == hi, bj = sb.end == hi;
            if (ai) ++i;
            if (bj) ++j;
        }
    }
}

void check_inf_mix(const Rat& x, const Rat& y) {
    if ((x.is_plus_inf() && y.is_minus_inf()) || (x.is_minus_inf() && y.is_plus_inf()))
        throw DomainError("comparison of +inf against -inf");
}

Rat value_at(const Rat& left, const Rat& slope, const Rat& lo, const Rat& t) {
    if (left.is_infinite() || slope.is_zero()) return left;
    return left + slope * (t - lo);
}

struct ColoredBuilder {
    std::vector<Element> el;
    std::vector<Origin> col;

    void push(Element e, Origin o) {
        el.push_back(std::move(e));
        col.push_back(o);
    }
};

void emit_min(const Piece& p, ColoredBuilder& out) {
    if (p.point) {
        bool first = p.va <= p.vb;
        out.push(Point{p.lo, first ? p.va : p.vb}, first ? Origin::First : Origin::Second);
        return;
    }
    Rat ra = value_at(p.va, p.sa, p.lo, p.hi);
    Rat rb = value_at(p.vb, p.sb, p.lo, p.hi);
    if (p.va <= p.vb && ra <= rb) {
        out.push(Segment(p.lo, p.hi, p.va, p.sa), Origin::First);
    } else if (p.vb <= p.va && rb <= ra) {
        out.push(Segment(p.lo, p.hi, p.vb, p.sb), Origin::Second);
    } else {
        // Both finite lines crossing strictly inside ]lo, hi[.
        Rat x = p.lo + (p.vb - p.va) / (p.sa - p.sb);
        Rat vx = value_at(p.va, p.sa, p.lo, x);
        bool a_first = p.va < p.vb;
        if (a_first) {
            out.push(Segment(p.lo, x, p.va, p.sa), Origin::First);
            out.push(Point{x, vx}, Origin::First);
            out.push(Segment(x, p.hi, vx, p.sb), Origin::Second);
        } else {
            out.push(Segment(p.lo, x, p.vb, p.sb), Origin::Second);
            out.push(Point{x, vx}, Origin::First);
            out.push(Segment(x, p.hi, vx, p.sa), Origin::First);
        }
    }
}

}  // namespace

ColoredSequence pointwise_min_colored(const Sequence& a, const Sequence& b) {
    auto [x, y] = common_domain(a, b);
    ColoredBuilder raw;
    walk_aligned(x, y, [&](const Piece& p) {
        emit_min(p, raw);
        return true;
    });
    // Fuse S, P, S runs of a single color lying on one line.
    ColoredBuilder out;
    for (std::size_t i = 0; i < raw.el.size(); ++i) {
        const Element& e = raw.el[i];
        if (is_point(e) && !out.el.empty() && i + 1 < raw.el.size() && !is_point(out.el.back())) {
            const Segment& prev = as_segment(out.el.back());
            const Segment& next = as_segment(raw.el[i + 1]);
            const Point& p = as_point(e);
            Origin c = out.col.back();
            if (raw.col[i] == c && raw.col[i + 1] == c && prev.slope == next.slope && prev.right() == p.value &&
                p.value == next.left) {
                out.el.back() = Segment(prev.start, next.end, prev.left, prev.slope);
                ++i;
                continue;
            }
        }
        out.push(e, raw.col[i]);
    }
    return ColoredSequence{Sequence(std::move(out.el)), std::move(out.col)};
}

Sequence pointwise_min(const Sequence& a, const Sequence& b) {
    auto [x, y] = common_domain(a, b);
    ColoredBuilder raw;
    walk_aligned(x, y, [&](const Piece& p) {
        emit_min(p, raw);
        return true;
    });
    return merge_well_formed(Sequence(std::move(raw.el)));
}

bool same_values(const Sequence& a, const Sequence& b) {
    auto [x, y] = common_domain(a, b);
    bool same = true;
    walk_aligned(x, y, [&](const Piece& p) {
        check_inf_mix(p.va, p.vb);
        if (p.va != p.vb) {
            same = false;
        } else if (!p.point && p.va.is_finite() && p.sa != p.sb) {
            same = false;
        }
        return same;
    });
    return same;
}

bool pointwise_leq(const Sequence& a, const Sequence& b) {
    auto [x, y] = common_domain(a, b);
    bool leq = true;
    walk_aligned(x, y, [&](const Piece& p) {
        if (!(p.va <= p.vb)) {
            leq = false;
        } else if (!p.point && !(value_at(p.va, p.sa, p.lo, p.hi) <= value_at(p.vb, p.sb, p.lo, p.hi))) {
            leq = false;
        }
        return leq;
    });
    return leq;
}

std::optional<Rat> first_difference(const Sequence& a, const Sequence& b) {
    auto [x, y] = common_domain(a, b);
    std::optional<Rat> at;
    walk_aligned(x, y, [&](const Piece& p) {
        bool differ = p.va != p.vb || (!p.point && p.va.is_finite() && p.sa != p.sb);
        if (differ) at = p.lo;
        return !differ;
    });
    return at;
}

}  // namespace upp
