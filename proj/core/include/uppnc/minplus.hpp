#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uppnc/curve.hpp"

namespace upp {

// Bound on the last crossing of two curves with different slopes.
struct TailCrossingBound {
    Rat M;     // sup of f1(t) - rho1 t over one period of the flatter curve
    Rat m;     // inf of f2(t) - rho2 t over the steeper curve
    Rat tBar;  // (M - m) / (rho2 - rho1), or 0 if negative
};

struct MinimumResult {
    Curve curve;
    // T chosen before any minimization; used by dominance checks.
    Rat T;
    std::optional<TailCrossingBound> bound;
};

MinimumResult minimum_detailed(const Curve& f, const Curve& g);
Curve minimum(const Curve& f, const Curve& g);

// Throws DomainError if one operand takes +inf where the other takes -inf.
void check_infinity_clash(const Curve& f, const Curve& g);

// Appends the convolution of two elements to out.
void elementary_convolution(const Element& a, const Element& b, std::vector<Element>& out);
std::vector<Element> elementary_convolution(const Element& a, const Element& b);

// Lower envelope of a set of elements whose domains union to an interval.
// Uncovered gaps are filled with +inf.
Sequence lower_envelope(const std::vector<Element>& E);

// Elementary convolutions of every pair (a[i], b[j]), in row-major order.
std::vector<Element> pairwise_products(const Sequence& a, const Sequence& b);

// By-sequence convolution: pairwise products followed by the envelope.
Sequence convolve_sequences(const Sequence& a, const Sequence& b);

// Self-convolution computing only the pairs i <= j.
Sequence self_convolve_sequence(const Sequence& a);

// Prefixes s with +inf on [0, s.domain_start()[.
Sequence prepend_infinite(const Sequence& s);

// Exact convolution of two curves.
Curve convolution(const Curve& f, const Curve& g);

// Number of elementary convolutions convolution(f, g) performs.
std::uint64_t convolution_cost(const Curve& f, const Curve& g);

}  // namespace upp
