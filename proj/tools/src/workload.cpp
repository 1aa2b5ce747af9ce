#include "workload.hpp"

#include <numeric>

#include "uppnc/subadd.hpp"

namespace upp::app {

std::string to_string(OperandClass c) {
    switch (c) {
        case OperandClass::Dominance: return "dominance";
        case OperandClass::Asymptotic: return "asymptotic";
        case OperandClass::Incomparable: return "incomparable";
    }
    return "?";
}

OperandClass operand_class_from_string(const std::string& s) {
    if (s == "dominance") return OperandClass::Dominance;
    if (s == "asymptotic") return OperandClass::Asymptotic;
    if (s == "incomparable" || s == "neither") return OperandClass::Incomparable;
    throw DomainError("unknown operand class '" + s + "'");
}

Curve StaircaseParams::curve() const {
    return sac_rate_latency_jump(R, theta, h);
}

WorkloadGenerator::WorkloadGenerator(std::uint64_t seed, WorkloadOptions opt) : rng_(seed), opt_(opt) {}

long long WorkloadGenerator::uniform(long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng_);
}

void WorkloadGenerator::periods(long long& a, long long& b, long long& g) {
    while (true) {
        a = uniform(1, 40);
        b = uniform(1, 40);
        if (a * b > opt_.max_period_product || std::gcd(a, b) != 1) continue;
        long long gmax = opt_.max_param / std::max(a, b);
        if (gmax < 1) continue;
        g = uniform(1, gmax);
        return;
    }
}

namespace {

bool matches(OperandClass cls, Dominance d) {
    switch (cls) {
        case OperandClass::Dominance:
            return d == Dominance::FirstDominates || d == Dominance::SecondDominates;
        case OperandClass::Asymptotic:
            return d == Dominance::AsymptoticFirstOverSecond || d == Dominance::AsymptoticSecondOverFirst;
        case OperandClass::Incomparable:
            return d == Dominance::Incomparable;
    }
    return false;
}

}  // namespace

OperandPair WorkloadGenerator::next(OperandClass cls) {
    const long long P = opt_.max_param;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        long long a, b, g;
        periods(a, b, g);
        StaircaseParams f{uniform(1, P), g * a, 0}, h{uniform(1, P), g * b, 0};
        if (cls == OperandClass::Incomparable) {
            // Equal long-run rates: h_f / theta_f = h_g / theta_g.
            long long m = uniform(1, P / std::max(a, b));
            f.h = a * m;
            h.h = b * m;
        } else {
            f.h = uniform(1, P);
            h.h = uniform(1, P);
        }
        OperandPair p{cls, f, h, f.curve(), h.curve()};
        if (matches(cls, check_dominance(p.cf, p.cg).kind)) return p;
    }
    throw DomainError("no operand pair of class " + to_string(cls) + " found");
}

}  // namespace upp::app
