#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uppnc/rational.hpp"

namespace upp {

// f(time) = value.
struct Point {
    Rat time;
    Rat value;
    bool operator==(const Point&) const = default;
};

// f on the open interval ]start, end[, affine with the given slope.
// left is the right-limit of f at start. Infinite segments have slope 0.
struct Segment {
    Rat start;
    Rat end;
    Rat left;
    Rat slope;

    Segment() = default;
    Segment(Rat s, Rat e, Rat lv, Rat sl);

    bool is_infinite() const { return left.is_infinite(); }
    Rat length() const { return end - start; }
    Rat value_at(const Rat& t) const;  // t in [start, end], limits at the ends
    Rat right() const { return value_at(end); }
    bool operator==(const Segment&) const = default;
};

using Element = std::variant<Point, Segment>;

inline bool is_point(const Element& e) { return e.index() == 0; }
inline const Point& as_point(const Element& e) { return std::get<Point>(e); }
inline const Segment& as_segment(const Element& e) { return std::get<Segment>(e); }
const Rat& elem_start(const Element& e);
const Rat& elem_end(const Element& e);
Element shifted(const Element& e, const Rat& dt, const Rat& dv);
std::string to_string(const Element& e);

// Interval with independent open/closed bounds.
struct Interval {
    Rat lower;
    Rat upper;
    bool lower_closed = true;
    bool upper_closed = false;

    static Interval closed_open(Rat a, Rat b) { return {std::move(a), std::move(b), true, false}; }
    static Interval closed(Rat a, Rat b) { return {std::move(a), std::move(b), true, true}; }
    static Interval open(Rat a, Rat b) { return {std::move(a), std::move(b), false, false}; }
    bool contains(const Rat& t) const;
};

// Ordered alternation of points and open segments tiling an interval.
class Sequence {
public:
    Sequence() = default;
    explicit Sequence(std::vector<Element> elements);

    const std::vector<Element>& elements() const { return elements_; }
    std::vector<Element>& mutable_elements() { return elements_; }
    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    const Element& operator[](std::size_t i) const { return elements_[i]; }

    const Rat& domain_start() const { return elem_start(elements_.front()); }
    const Rat& domain_end() const { return elem_end(elements_.back()); }
    bool start_closed() const { return is_point(elements_.front()); }
    bool end_closed() const { return is_point(elements_.back()); }

    // Index of the element whose domain contains t, or npos.
    std::size_t find(const Rat& t) const;
    Rat eval(const Rat& t) const;
    Rat right_limit(const Rat& t) const;
    Rat left_limit(const Rat& t) const;

    Sequence shifted(const Rat& dt, const Rat& dv) const;

    // Throws DomainError if alternation or tiling invariants are violated.
    void validate() const;
    bool has_plus_inf() const;
    bool has_minus_inf() const;

    bool operator==(const Sequence& o) const { return elements_ == o.elements_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<Element> elements_;
};

// Removes every interior point that is not a breakpoint, fusing the
// surrounding segments. Points at times listed in keep are preserved.
Sequence merge_well_formed(const Sequence& s, const std::vector<Rat>& keep = {});

// Restricts a sequence to a sub-interval of its domain.
Sequence restrict_to(const Sequence& s, const Interval& D);

// Concatenates sequences whose domains are adjacent.
Sequence concat(const std::vector<Sequence>& parts);

// Representation (S, T, d, c) of an ultimately pseudo-periodic function:
// f(t + d) = f(t) + c for t >= T; S describes f over [0, T + d[.
// A curve with c = +inf is +inf on ]T, +inf[ (finite value at T allowed).
class Curve {
public:
    Curve() = default;
    Curve(Sequence seq, Rat T, Rat d, Rat c);

    const Sequence& sequence() const { return seq_; }
    const Rat& T() const { return T_; }
    const Rat& d() const { return d_; }
    const Rat& c() const { return c_; }
    // c/d, or +inf/-inf for ultimately infinite curves.
    Rat rho() const;
    bool ultimately_infinite() const { return c_.is_infinite(); }
    std::size_t cardinality() const { return seq_.size(); }
    std::size_t period_start_index() const { return t_index_; }

    Rat eval(const Rat& t) const;
    Rat right_limit(const Rat& t) const;  // f(t+)
    Rat left_limit(const Rat& t) const;   // f(t-), t > 0

    bool has_plus_inf() const { return seq_.has_plus_inf(); }
    bool has_minus_inf() const { return seq_.has_minus_inf(); }

    Sequence transient() const;     // [0, T[
    Sequence periodic_part() const;  // [T, T + d[

    std::string to_text() const;
    static Curve from_text(const std::string& text);

private:
    Sequence seq_;
    Rat T_{0};
    Rat d_{1};
    Rat c_{0};
    std::size_t t_index_ = 0;

    void normalize();
};

// Materializes f over a bounded interval using the periodic extension.
Sequence cut(const Curve& f, const Interval& D);

// Number of elements cut(f, [a, b[) would have, without materializing it.
std::size_t cut_cardinality(const Curve& f, const Rat& a, const Rat& b);

Curve make_rate_latency(const Rat& R, const Rat& theta);
Curve make_token_bucket(const Rat& sigma, const Rat& rho);
Curve make_delta_zero();
Curve make_zero();
Curve make_constant(const Rat& v);  // v everywhere, including 0
Curve add_jump(const Curve& f, const Rat& W);

// True iff f(t) = g(t) for all t >= 0.
bool equivalent(const Curve& f, const Curve& g);

// First abscissa where f and g differ (or the start of the first open
// interval where they differ), if any.
std::optional<Rat> first_divergence(const Curve& f, const Curve& g);

// inf{t >= 0 : f(t) > v} (or f(t) >= v when strict is false); +inf if
// no such t exists.
Rat first_time_above(const Curve& f, const Rat& v, bool strict = true);

// CSV with columns t,kind,value,left_limit,slope; one row per element.
// Segment rows carry their start in t; their end is the next row's t.
std::string to_csv(const Sequence& s);
Sequence sequence_from_csv(const std::string& text, const Rat& domain_end);

std::ostream& operator<<(std::ostream& os, const Curve& f);

}  // namespace upp
