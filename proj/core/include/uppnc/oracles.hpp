#pragma once

#include <cstdint>
#include <vector>

#include "uppnc/curve.hpp"

namespace upp {

struct OracleConfig {
    std::uint64_t sampleCount = 200;
    std::uint64_t horizonPeriods = 4;
    std::uint64_t sacDoublingLimit = 12;
    std::uint64_t seed = 1;

    void validate() const;
};

// inf_{0 <= s <= t} f(s) + g(t - s), by direct scan of candidate splits.
Rat conv_oracle_eval(const Curve& f, const Curve& g, const Rat& t);

struct SacOracleValue {
    Rat value;
    bool stabilized = false;  // false: doubling limit hit, value is only an upper bound
    std::uint64_t doublings = 0;
};

// inf_{n >= 0} f^(n)(t), by doubling the number of parts until no
// decomposition of t improves.
SacOracleValue sac_oracle_eval(const Curve& f, const Rat& t, const OracleConfig& cfg = {});

// Deterministic sample times over [0, T_f + horizonPeriods * d_f]: every
// breakpoint in that range plus sampleCount pseudo-random rationals.
std::vector<Rat> sample_times(const Curve& f, const OracleConfig& cfg);

struct OracleMismatch {
    Rat t;
    Rat expected;
    Rat actual;
};

// Compares eval(h, t) against conv_oracle_eval(f, g, t) at the sample times
// of h; returns every mismatch.
std::vector<OracleMismatch> check_convolution(const Curve& f, const Curve& g, const Curve& h,
                                              const OracleConfig& cfg = {});

}  // namespace upp
