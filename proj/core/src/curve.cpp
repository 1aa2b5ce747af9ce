#include "uppnc/curve.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

#include "uppnc/sequence_ops.hpp"

namespace upp {

Segment::Segment(Rat s, Rat e, Rat lv, Rat sl)
    : start(std::move(s)), end(std::move(e)), left(std::move(lv)), slope(std::move(sl)) {
    if (left.is_infinite()) slope = 0;
}

Rat Segment::value_at(const Rat& t) const {
    if (left.is_infinite() || slope.is_zero()) return left;
    return left + slope * (t - start);
}

const Rat& elem_start(const Element& e) {
    return is_point(e) ? as_point(e).time : as_segment(e).start;
}

const Rat& elem_end(const Element& e) {
    return is_point(e) ? as_point(e).time : as_segment(e).end;
}

Element shifted(const Element& e, const Rat& dt, const Rat& dv) {
    if (is_point(e)) {
        const Point& p = as_point(e);
        return Point{p.time + dt, p.value + dv};
    }
    const Segment& s = as_segment(e);
    return Segment(s.start + dt, s.end + dt, s.left + dv, s.slope);
}

std::string to_string(const Element& e) {
    std::ostringstream os;
    if (is_point(e)) {
        os << "P " << as_point(e).time << ' ' << as_point(e).value;
    } else {
        const Segment& s = as_segment(e);
        os << "S " << s.start << ' ' << s.end << ' ' << s.left << ' ' << s.slope;
    }
    return os.str();
}

bool Interval::contains(const Rat& t) const {
    if (t < lower || t > upper) return false;
    if (t == lower && !lower_closed) return false;
    if (t == upper && !upper_closed) return false;
    return true;
}

// ---------------------------------------------------------------- Sequence

Sequence::Sequence(std::vector<Element> elements) : elements_(std::move(elements)) {}

std::size_t Sequence::find(const Rat& t) const {
    auto it = std::partition_point(elements_.begin(), elements_.end(), [&](const Element& e) {
        if (is_point(e)) return as_point(e).time < t;
        return as_segment(e).end <= t;
    });
    if (it == elements_.end()) return npos;
    if (is_point(*it)) return as_point(*it).time == t ? static_cast<std::size_t>(it - elements_.begin()) : npos;
    const Segment& s = as_segment(*it);
    return (s.start < t && t < s.end) ? static_cast<std::size_t>(it - elements_.begin()) : npos;
}

Rat Sequence::eval(const Rat& t) const {
    std::size_t i = find(t);
    if (i == npos) throw DomainError("eval outside sequence domain at t=" + t.str());
    const Element& e = elements_[i];
    return is_point(e) ? as_point(e).value : as_segment(e).value_at(t);
}

Rat Sequence::right_limit(const Rat& t) const {
    std::size_t i = find(t);
    if (i == npos) throw DomainError("right limit outside sequence domain at t=" + t.str());
    if (!is_point(elements_[i])) return as_segment(elements_[i]).value_at(t);
    if (i + 1 >= elements_.size()) throw DomainError("right limit at domain end");
    return as_segment(elements_[i + 1]).left;
}

Rat Sequence::left_limit(const Rat& t) const {
    if (!elements_.empty() && !end_closed() && t == domain_end())
        return as_segment(elements_.back()).right();
    std::size_t i = find(t);
    if (i == npos) throw DomainError("left limit outside sequence domain at t=" + t.str());
    if (!is_point(elements_[i])) return as_segment(elements_[i]).value_at(t);
    if (i == 0) throw DomainError("left limit at domain start");
    return as_segment(elements_[i - 1]).right();
}

Sequence Sequence::shifted(const Rat& dt, const Rat& dv) const {
    std::vector<Element> out;
    out.reserve(elements_.size());
    for (const Element& e : elements_) out.push_back(upp::shifted(e, dt, dv));
    return Sequence(std::move(out));
}

void Sequence::validate() const {
    if (elements_.empty()) throw DomainError("empty sequence");
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        const Element& e = elements_[i];
        if (!is_point(e) && !(as_segment(e).start < as_segment(e).end))
            throw DomainError("segment with empty domain: " + to_string(e));
        if (i == 0) continue;
        const Element& p = elements_[i - 1];
        if (is_point(p) == is_point(e)) throw DomainError("elements do not alternate at index " + std::to_string(i));
        if (elem_end(p) != elem_start(e)) throw DomainError("gap or overlap at index " + std::to_string(i));
    }
}

bool Sequence::has_plus_inf() const {
    for (const Element& e : elements_) {
        if (is_point(e) ? as_point(e).value.is_plus_inf() : as_segment(e).left.is_plus_inf()) return true;
    }
    return false;
}

bool Sequence::has_minus_inf() const {
    for (const Element& e : elements_) {
        if (is_point(e) ? as_point(e).value.is_minus_inf() : as_segment(e).left.is_minus_inf()) return true;
    }
    return false;
}

static bool is_kept(const Rat& t, const std::vector<Rat>& keep) {
    return std::find(keep.begin(), keep.end(), t) != keep.end();
}

Sequence merge_well_formed(const Sequence& s, const std::vector<Rat>& keep) {
    const auto& in = s.elements();
    std::vector<Element> out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const Element& e = in[i];
        if (is_point(e) && !out.empty() && i + 1 < in.size() && !is_point(out.back())) {
            const Point& p = as_point(e);
            const Segment& prev = as_segment(out.back());
            const Segment& next = as_segment(in[i + 1]);
            if (!is_kept(p.time, keep) && prev.slope == next.slope && prev.right() == p.value &&
                p.value == next.left) {
                Segment fused(prev.start, next.end, prev.left, prev.slope);
                out.back() = std::move(fused);
                ++i;  // the next segment has been absorbed
                continue;
            }
        }
        out.push_back(e);
    }
    return Sequence(std::move(out));
}

static void clip_append(std::vector<Element>& out, const Element& e, const Interval& D) {
    if (is_point(e)) {
        if (D.contains(as_point(e).time)) out.push_back(e);
        return;
    }
    const Segment& s = as_segment(e);
    const Rat& lo = rmax(s.start, D.lower);
    const Rat& hi = rmin(s.end, D.upper);
    if (!(lo < hi)) {
        // Point-sized intersection strictly inside the segment.
        if (lo == hi && s.start < lo && lo < s.end && D.contains(lo)) out.push_back(Point{lo, s.value_at(lo)});
        return;
    }
    if (s.start < lo && D.lower_closed) out.push_back(Point{lo, s.value_at(lo)});
    if (lo == s.start && hi == s.end) {
        out.push_back(e);
    } else {
        out.push_back(Segment(lo, hi, s.value_at(lo), s.slope));
    }
    if (hi < s.end && D.upper_closed) out.push_back(Point{hi, s.value_at(hi)});
}

Sequence restrict_to(const Sequence& s, const Interval& D) {
    std::vector<Element> out;
    std::size_t i = s.find(D.lower);
    if (i == Sequence::npos) throw DomainError("restrict_to: interval outside domain");
    for (; i < s.size(); ++i) {
        const Element& e = s[i];
        if (elem_start(e) > D.upper) break;
        clip_append(out, e, D);
    }
    return Sequence(std::move(out));
}

Sequence concat(const std::vector<Sequence>& parts) {
    std::vector<Element> out;
    for (const Sequence& p : parts) out.insert(out.end(), p.elements().begin(), p.elements().end());
    return Sequence(std::move(out));
}

// ------------------------------------------------------------------- Curve

Curve::Curve(Sequence seq, Rat T, Rat d, Rat c) : seq_(std::move(seq)), T_(std::move(T)), d_(std::move(d)), c_(std::move(c)) {
    normalize();
}

void Curve::normalize() {
    if (!T_.is_finite() || T_.sign() < 0) throw DomainError("curve T must be finite and >= 0");
    if (!d_.is_finite() || d_.sign() <= 0) throw DomainError("curve d must be finite and > 0");
    seq_.validate();
    if (!seq_.start_closed() || !seq_.domain_start().is_zero()) throw DomainError("curve sequence must start with a point at 0");
    Rat end = T_ + d_;
    if (seq_.domain_end() < end || (seq_.domain_end() == end && seq_.end_closed()))
        throw DomainError("curve sequence does not cover [0, T+d[");
    if (seq_.domain_end() != end || seq_.end_closed()) seq_ = restrict_to(seq_, Interval::closed_open(0, end));
    // Guarantee a point at T.
    std::size_t i = seq_.find(T_);
    if (!is_point(seq_[i])) {
        const Segment s = as_segment(seq_[i]);
        auto& el = seq_.mutable_elements();
        el[i] = Segment(s.start, T_, s.left, s.slope);
        el.insert(el.begin() + static_cast<std::ptrdiff_t>(i) + 1, Point{T_, s.value_at(T_)});
        el.insert(el.begin() + static_cast<std::ptrdiff_t>(i) + 2, Segment(T_, s.end, s.value_at(T_), s.slope));
        ++i;
    }
    t_index_ = i;
    if (c_.is_finite()) {
        bool all_plus = true, all_minus = true;
        for (std::size_t k = t_index_; k < seq_.size(); ++k) {
            const Element& e = seq_[k];
            const Rat& v = is_point(e) ? as_point(e).value : as_segment(e).left;
            all_plus = all_plus && v.is_plus_inf();
            all_minus = all_minus && v.is_minus_inf();
        }
        if (all_plus) c_ = Rat::plus_infinity();
        if (all_minus) c_ = Rat::minus_infinity();
    }
    if (c_.is_infinite()) {
        for (std::size_t k = t_index_ + 1; k < seq_.size(); ++k) {
            const Element& e = seq_[k];
            const Rat& v = is_point(e) ? as_point(e).value : as_segment(e).left;
            if (v != c_) throw DomainError("ultimately infinite curve must be infinite on ]T, T+d[");
        }
    }
}

Rat Curve::rho() const {
    if (c_.is_infinite()) return c_;
    return c_ / d_;
}

Rat Curve::eval(const Rat& t) const {
    if (t.sign() < 0 || !t.is_finite()) throw DomainError("eval at invalid t=" + t.str());
    Rat end = T_ + d_;
    if (t < end) return seq_.eval(t);
    Rat k = ((t - T_) / d_).floor();
    return seq_.eval(t - k * d_) + k * c_;
}

Rat Curve::right_limit(const Rat& t) const {
    if (t < T_) return seq_.right_limit(t);
    Rat k = ((t - T_) / d_).floor();
    if (k.is_zero()) return seq_.right_limit(t);
    return seq_.right_limit(t - k * d_) + k * c_;
}

Rat Curve::left_limit(const Rat& t) const {
    if (t.sign() <= 0) throw DomainError("left limit requires t > 0");
    if (t <= T_ + d_) return seq_.left_limit(t);
    Rat k = ((t - T_) / d_).ceil() - 1;
    return seq_.left_limit(t - k * d_) + k * c_;
}

Sequence Curve::transient() const {
    return Sequence(std::vector<Element>(seq_.elements().begin(), seq_.elements().begin() + static_cast<std::ptrdiff_t>(t_index_)));
}

Sequence Curve::periodic_part() const {
    return Sequence(std::vector<Element>(seq_.elements().begin() + static_cast<std::ptrdiff_t>(t_index_), seq_.elements().end()));
}

std::string Curve::to_text() const {
    std::ostringstream os;
    os << "upp T=" << T_ << " d=" << d_ << " c=" << c_ << '\n';
    for (const Element& e : seq_.elements()) os << to_string(e) << '\n';
    return os.str();
}

static std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

Curve Curve::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    Rat T, d, c;
    std::vector<Element> el;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto w = split_ws(line);
        if (w.empty()) continue;
        try {
            if (!header) {
                if (w.size() != 4 || w[0] != "upp") throw ParseError("expected 'upp T=<rat> d=<rat> c=<rat>'", lineno);
                auto field = [&](const std::string& s, const char* key) {
                    std::string k = std::string(key) + "=";
                    if (s.rfind(k, 0) != 0) throw ParseError(std::string("expected ") + key + "=", lineno);
                    return Rat::parse(s.substr(k.size()));
                };
                T = field(w[1], "T");
                d = field(w[2], "d");
                c = field(w[3], "c");
                header = true;
            } else if (w[0] == "P" && w.size() == 3) {
                el.push_back(Point{Rat::parse(w[1]), Rat::parse(w[2])});
            } else if (w[0] == "S" && w.size() == 5) {
                el.push_back(Segment(Rat::parse(w[1]), Rat::parse(w[2]), Rat::parse(w[3]), Rat::parse(w[4])));
            } else {
                throw ParseError("unrecognized element line", lineno);
            }
        } catch (const ParseError& e) {
            if (e.line() > 0) throw;
            throw ParseError(e.what(), lineno);
        }
    }
    if (!header) throw ParseError("missing curve header");
    try {
        return Curve(Sequence(std::move(el)), T, d, c);
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid curve: ") + e.what());
    }
}

std::string to_csv(const Sequence& s) {
    std::ostringstream os;
    os << "t,kind,value,left_limit,slope\n";
    for (const Element& e : s.elements()) {
        if (is_point(e)) {
            os << as_point(e).time << ",P," << as_point(e).value << ",,\n";
        } else {
            const Segment& g = as_segment(e);
            os << g.start << ",S,," << g.left << ',' << g.slope << '\n';
        }
    }
    return os.str();
}

Sequence sequence_from_csv(const std::string& text, const Rat& domain_end) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    struct Row {
        bool point;
        Rat t, a, b;
    };
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string col;
        while (std::getline(ls, col, ',')) cols.push_back(col);
        while (cols.size() < 5) cols.emplace_back();
        try {
            if (cols[1] == "P") rows.push_back({true, Rat::parse(cols[0]), Rat::parse(cols[2]), 0});
            else if (cols[1] == "S") rows.push_back({false, Rat::parse(cols[0]), Rat::parse(cols[3]), Rat::parse(cols[4])});
            else throw ParseError("unknown element kind", lineno);
        } catch (const ParseError& e) {
            if (e.line() > 0) throw;
            throw ParseError(e.what(), lineno);
        }
    }
    std::vector<Element> el;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        if (r.point) {
            el.push_back(Point{r.t, r.a});
        } else {
            Rat end = i + 1 < rows.size() ? rows[i + 1].t : domain_end;
            el.push_back(Segment(r.t, end, r.a, r.b));
        }
    }
    return Sequence(std::move(el));
}

std::ostream& operator<<(std::ostream& os, const Curve& f) {
    return os << f.to_text();
}

// --------------------------------------------------------------------- cut

namespace {

// Iterates the elements of the infinite unrolled sequence of a curve.
class Unroller {
public:
    explicit Unroller(const Curve& f) : f_(f), n_(f.sequence().size()), ti_(f.period_start_index()), np_(n_ - ti_) {}

    // Positions the iterator on the element containing t.
    void seek(const Rat& t) {
        const Sequence& s = f_.sequence();
        if (t < f_.T() + f_.d()) {
            k_ = 0;
            idx_ = s.find(t);
        } else {
            k_ = ((t - f_.T()) / f_.d()).floor();
            idx_ = s.find(t - k_ * f_.d());
        }
        if (idx_ == Sequence::npos) throw DomainError("cut: cannot locate t=" + t.str());
        refresh();
    }

    const Element& current() const { return cur_; }

    void next() {
        ++idx_;
        if (idx_ == n_) {
            idx_ = ti_;
            k_ += 1;
        }
        refresh();
    }

private:
    void refresh() {
        const Element& e = f_.sequence()[idx_];
        if (k_.is_zero()) {
            cur_ = e;
        } else {
            cur_ = shifted(e, k_ * f_.d(), k_ * f_.c());
        }
    }

    const Curve& f_;
    std::size_t n_, ti_, np_;
    std::size_t idx_ = 0;
    Rat k_{0};
    Element cur_;
};

}  // namespace

Sequence cut(const Curve& f, const Interval& D) {
    if (!D.lower.is_finite() || !D.upper.is_finite()) throw DomainError("cut requires a bounded interval");
    if (D.lower.sign() < 0 || D.upper < D.lower) throw DomainError("cut: invalid interval");
    if (D.lower == D.upper) {
        if (!D.lower_closed || !D.upper_closed) throw DomainError("cut: empty interval");
        return Sequence({Point{D.lower, f.eval(D.lower)}});
    }
    // Fast path: the stored sequence.
    if (D.lower.is_zero() && D.lower_closed && !D.upper_closed && D.upper == f.T() + f.d()) return f.sequence();
    std::vector<Element> out;
    Unroller u(f);
    u.seek(D.lower);
    while (true) {
        const Element& e = u.current();
        if (elem_start(e) > D.upper) break;
        if (elem_start(e) == D.upper && !is_point(e)) break;
        clip_append(out, e, D);
        if (elem_end(e) > D.upper) break;
        u.next();
    }
    return Sequence(std::move(out));
}

static std::size_t saturating(const Rat& k) {
    const mpz_class& n = k.q().get_num();
    if (n > mpz_class(std::numeric_limits<long>::max() / 4)) return std::numeric_limits<std::size_t>::max() / 4;
    return static_cast<std::size_t>(n.get_si());
}

std::size_t cut_cardinality(const Curve& f, const Rat& a, const Rat& b) {
    if (!(a < b)) return a == b ? 1 : 0;
    const Sequence& s = f.sequence();
    const std::size_t ti = f.period_start_index();
    const std::size_t np = s.size() - ti;
    auto unrolled = [&](const Rat& t) -> std::size_t {
        if (t < f.T() + f.d()) return s.find(t);
        Rat k = ((t - f.T()) / f.d()).floor();
        std::size_t r = s.find(t - k * f.d());
        return ti + saturating(k) * np + (r - ti);
    };
    auto element_at = [&](std::size_t j) -> const Element& {
        return j < s.size() ? s[j] : s[ti + (j - ti) % np];
    };
    std::size_t ja = unrolled(a);
    std::size_t jb = unrolled(b);
    if (is_point(element_at(jb))) --jb;
    std::size_t count = jb - ja + 1;
    if (!is_point(element_at(ja))) ++count;
    return count;
}

// ------------------------------------------------------------ constructors

Curve make_rate_latency(const Rat& R, const Rat& theta) {
    if (!R.is_finite() || R.sign() <= 0) throw DomainError("rate-latency requires a finite rate R > 0");
    if (!theta.is_finite() || theta.sign() < 0) throw DomainError("rate-latency requires a finite latency >= 0");
    if (theta.is_zero()) return Curve(Sequence({Point{0, 0}, Segment(0, 1, 0, R)}), 0, 1, R);
    return Curve(Sequence({Point{0, 0}, Segment(0, theta, 0, 0), Point{theta, 0}, Segment(theta, theta + 1, 0, R)}),
                 theta, 1, R);
}

Curve make_token_bucket(const Rat& sigma, const Rat& rho) {
    if (!sigma.is_finite() || !rho.is_finite() || sigma.sign() < 0 || rho.sign() < 0)
        throw DomainError("token bucket requires finite nonnegative parameters");
    // The jump at 0 breaks periodicity at the origin, so T = 1.
    return Curve(Sequence({Point{0, 0}, Segment(0, 1, sigma, rho), Point{1, sigma + rho}, Segment(1, 2, sigma + rho, rho)}),
                 1, 1, rho);
}

Curve make_delta_zero() {
    return Curve(Sequence({Point{0, 0}, Segment(0, 1, Rat::plus_infinity(), 0)}), 0, 1, Rat::plus_infinity());
}

Curve make_zero() {
    return Curve(Sequence({Point{0, 0}, Segment(0, 1, 0, 0)}), 0, 1, 0);
}

Curve make_constant(const Rat& v) {
    return Curve(Sequence({Point{0, v}, Segment(0, 1, v, 0)}), 0, 1, v.is_infinite() ? v : Rat(0));
}

Curve add_jump(const Curve& f, const Rat& W) {
    if (W.sign() < 0 || W.is_minus_inf()) throw DomainError("add_jump requires W >= 0");
    if (f.eval(0) != 0) throw DomainError("add_jump requires f(0) = 0");
    if (W.is_plus_inf()) return make_delta_zero();
    // With T = 0 the jump at the origin breaks periodicity at 0, so the
    // representation is re-anchored one period later.
    Rat T = f.T().is_zero() ? f.d() : f.T();
    Sequence s = cut(f, Interval::closed_open(0, T + f.d()));
    std::vector<Element> out = s.elements();
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = shifted(out[i], 0, W);
    return Curve(Sequence(std::move(out)), T, f.d(), f.c());
}

// ------------------------------------------------------------- equivalence

static Rat comparison_horizon(const Curve& f, const Curve& g) {
    return rmax(f.T(), g.T()) + rat_lcm(f.d(), g.d());
}

bool equivalent(const Curve& f, const Curve& g) {
    if (f.rho() != g.rho()) return false;
    Interval D = Interval::closed_open(0, comparison_horizon(f, g));
    Sequence a = merge_well_formed(cut(f, D));
    Sequence b = merge_well_formed(cut(g, D));
    if (a == b) return true;
    return same_values(a, b);
}

std::optional<Rat> first_divergence(const Curve& f, const Curve& g) {
    Rat horizon = comparison_horizon(f, g);
    for (int i = 0; i < 64; ++i) {
        Interval D = Interval::closed_open(0, horizon);
        auto diff = first_difference(cut(f, D), cut(g, D));
        if (diff) return diff;
        if (f.rho() == g.rho()) return std::nullopt;
        horizon = horizon * 2;
    }
    return std::nullopt;
}

Rat first_time_above(const Curve& f, const Rat& v, bool strict) {
    auto above = [&](const Rat& x) { return strict ? x > v : x >= v; };
    auto hit = [&](const Element& e, const Rat& dt, const Rat& dv) -> std::optional<Rat> {
        if (is_point(e)) {
            const Point& p = as_point(e);
            if (above(p.value + dv)) return p.time + dt;
            return std::nullopt;
        }
        const Segment& s = as_segment(e);
        Rat l = s.left + dv;
        if (above(l)) return s.start + dt;
        if (above(s.right() + dv)) return s.start + dt + (v - l) / s.slope;
        return std::nullopt;
    };
    for (const Element& e : f.sequence().elements())
        if (auto t = hit(e, 0, 0)) return *t;
    if (f.ultimately_infinite() || f.c().sign() <= 0) return Rat::plus_infinity();
    // Copy k of a periodic element is shifted by (k d, k c); find the first
    // k at which each element rises above v.
    Rat best = Rat::plus_infinity();
    const Sequence period = f.periodic_part();
    for (const Element& e : period.elements()) {
        Rat sup = is_point(e) ? as_point(e).value : rmax(as_segment(e).left, as_segment(e).right());
        Rat q = (v - sup) / f.c();
        Rat k = strict ? q.floor() + 1 : q.ceil();
        if (k.sign() <= 0) k = 1;
        if (auto t = hit(e, k * f.d(), k * f.c())) best = rmin(best, *t);
    }
    return best;
}

}  // namespace upp
