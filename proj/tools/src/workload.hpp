#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "uppnc/curve.hpp"

namespace upp::app {

// Which convolution shortcut a pair of sub-additive operands qualifies for.
enum class OperandClass { Dominance, Asymptotic, Incomparable };

std::string to_string(OperandClass c);
OperandClass operand_class_from_string(const std::string& s);

// Closure of a rate-latency curve plus a jump: a staircase with period theta.
struct StaircaseParams {
    Rat R, theta, h;
    Curve curve() const;
};

struct OperandPair {
    OperandClass cls;
    StaircaseParams f, g;
    Curve cf, cg;
};

struct WorkloadOptions {
    long long max_param = 1000;
    // Bound on (lcm / theta_f) * (lcm / theta_g), where lcm is the common
    // period of the pair; keeps the baseline convolution tractable.
    long long max_period_product = 400;
};

// Seeded generator of staircase operand pairs with integer parameters in
// [1, max_param], filtered by class.
class WorkloadGenerator {
public:
    explicit WorkloadGenerator(std::uint64_t seed, WorkloadOptions opt = {});
    OperandPair next(OperandClass cls);

private:
    long long uniform(long long lo, long long hi);
    // Latencies theta_f = g a, theta_g = g b with a, b coprime.
    void periods(long long& a, long long& b, long long& g);

    std::mt19937_64 rng_;
    WorkloadOptions opt_;
};

}  // namespace upp::app
