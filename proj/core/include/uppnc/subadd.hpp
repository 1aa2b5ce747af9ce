#pragma once

#include <cstdint>
#include <string>

#include "uppnc/curve.hpp"
#include "uppnc/errors.hpp"

namespace upp {

// Closed form of the sub-additive closure of add_jump(rate_latency(R, theta), W).
Curve sac_rate_latency_jump(const Rat& R, const Rat& theta, const Rat& W);

struct SacOptions {
    int max_doublings = 20;
};

// Sub-additive closure. Throws DomainError for negative inputs and
// DivergenceError if no verified closure is found within the doubling limit.
Curve sac(const Curve& f, const SacOptions& opt = {});

enum class Dominance {
    FirstDominates,             // f >= g everywhere (also when equal)
    SecondDominates,            // g >= f everywhere
    AsymptoticSecondOverFirst,  // g >= f for t >= tStar
    AsymptoticFirstOverSecond,  // f >= g for t >= tStar
    Incomparable,
};

struct DominanceRelation {
    Dominance kind = Dominance::Incomparable;
    Rat tStar{0};
};

std::string to_string(Dominance d);

DominanceRelation check_dominance(const Curve& f, const Curve& g);

// f sub-additive, g >= f: returns f.
Curve conv_dominance(const Curve& f, const Curve& g);

// f sub-additive, g >= f from tStar on: f ⊗ g via the part of g before tStar.
Curve conv_asymptotic(const Curve& f, const Curve& g, const Rat& tStar);

// f, g sub-additive with f(0) = g(0) = 0: (f ∧ g) ⊗ (f ∧ g), skipping
// duplicate and same-colored element pairs.
Curve self_conv_min(const Curve& f, const Curve& g);

enum class ConvBranch { Dominance, Asymptotic, AsymptoticDirect, SelfConvMin, Baseline };

std::string to_string(ConvBranch b);

struct ConvTrace {
    ConvBranch branch = ConvBranch::SelfConvMin;
    Dominance dominance = Dominance::Incomparable;
    std::uint64_t elementaryConvolutions = 0;
    std::size_t cardinalityF = 0;
    std::size_t cardinalityG = 0;
    std::size_t cardinalityResult = 0;
};

// Which shortcuts conv_optimized may take; disabled ones fall back to the
// baseline convolution.
struct ConvOptions {
    bool dominance = true;
    bool asymptotic = true;
    bool self_conv = true;
};

// Convolution of sub-additive curves with f(0) = g(0) = 0, picking the
// cheapest applicable strategy. Always equivalent to convolution(f, g).
Curve conv_optimized(const Curve& f, const Curve& g, ConvTrace* trace = nullptr, const ConvOptions& opt = {});

}  // namespace upp
