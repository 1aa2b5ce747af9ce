#pragma once

#include <cstdint>
#include <vector>

#include "uppnc/curve.hpp"

namespace upp {

enum class Origin : std::uint8_t { First, Second };

struct ColoredSequence {
    Sequence seq;
    std::vector<Origin> colors;  // one per element of seq
};

// Pointwise minimum of two sequences over the same domain. Crossings
// inside segments are split exactly.
Sequence pointwise_min(const Sequence& a, const Sequence& b);

// As pointwise_min, tagging each element with the operand it comes from
// (ties go to the first operand). Adjacent same-colored pieces are fused
// when they form a single affine piece.
ColoredSequence pointwise_min_colored(const Sequence& a, const Sequence& b);

// True iff a(t) = b(t) over the common domain. Throws DomainError when a
// +inf is compared against a -inf.
bool same_values(const Sequence& a, const Sequence& b);

// True iff a(t) <= b(t) over the common domain.
bool pointwise_leq(const Sequence& a, const Sequence& b);

// Infimum of the abscissas in the common domain where a and b differ.
std::optional<Rat> first_difference(const Sequence& a, const Sequence& b);

}  // namespace upp
