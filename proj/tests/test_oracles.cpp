#include <gtest/gtest.h>

#include "generators.hpp"
#include "uppnc/minplus.hpp"
#include "uppnc/oracles.hpp"

using namespace upp;
using namespace upp::testing;

TEST(ConvOracle, Examples) {
    Curve f = make_rate_latency(8, 5), g = make_rate_latency(11, 7);
    EXPECT_EQ(conv_oracle_eval(f, g, 12), Rat(0));
    EXPECT_EQ(conv_oracle_eval(f, g, 14), Rat(16));
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        Curve h = random_curve(rng);
        for (const Rat& t : random_times(rng, 3 * (h.T() + h.d()), 20))
            EXPECT_EQ(conv_oracle_eval(h, make_delta_zero(), t), h.eval(t));
    }
}

TEST(ConvOracle, RejectsBadInput) {
    Curve f = make_rate_latency(8, 5);
    EXPECT_THROW(conv_oracle_eval(f, f, -1), DomainError);
    EXPECT_THROW(conv_oracle_eval(f, f, Rat::plus_infinity()), DomainError);
    Curve neg(Sequence({Point{0, 0}, Segment(0, 1, Rat::minus_infinity(), 0)}), 0, 1, Rat::minus_infinity());
    EXPECT_THROW(conv_oracle_eval(neg, make_delta_zero(), 2), DomainError);
}

TEST(ConvOracle, OpenSegmentInfimum) {
    // At t = 3/2 the infimum 1/2 is approached as s -> 1/2+ but not attained.
    Curve f(Sequence({Point{0, 0}, Segment(0, 1, 0, 1), Point{1, 5}, Segment(1, 2, 5, 0)}), 1, 1, 0);
    Curve g(Sequence({Point{0, 0}, Segment(0, 1, 0, 0), Point{1, 10}, Segment(1, 2, 10, 0)}), 1, 1, 0);
    Rat v = conv_oracle_eval(f, g, Rat(3, 2));
    EXPECT_EQ(v, Rat(1, 2));
    EXPECT_EQ(convolution(f, g).eval(Rat(3, 2)), v);
}

TEST(SacOracle, Examples) {
    Curve f = add_jump(make_rate_latency(16, 2), 20);
    SacOracleValue v = sac_oracle_eval(f, 3);
    EXPECT_TRUE(v.stabilized);
    EXPECT_EQ(v.value, Rat(36));
    SacOracleValue z = sac_oracle_eval(make_rate_latency(16, 2), 10);
    EXPECT_TRUE(z.stabilized);
    EXPECT_EQ(z.value, Rat(0));
    Curve g = make_token_bucket(2, 3);
    Rng rng(2);
    for (const Rat& t : random_times(rng, 10, 30)) {
        SacOracleValue s = sac_oracle_eval(g, t);
        EXPECT_TRUE(s.stabilized);
        EXPECT_EQ(s.value, g.eval(t)) << t;
    }
}

TEST(SacOracle, DoublingLimitFlagsResult) {
    OracleConfig cfg;
    cfg.sacDoublingLimit = 1;
    SacOracleValue v = sac_oracle_eval(add_jump(make_rate_latency(1, 1), 1), 40, cfg);
    EXPECT_FALSE(v.stabilized);
    EXPECT_EQ(v.doublings, 1u);
}

TEST(SacOracle, AgreesWithClosure) {
    Rng rng(3);
    OracleConfig cfg;
    for (int i = 0; i < 20; ++i) {
        Curve f = i % 2 ? add_jump(make_rate_latency(rand_int(rng, 1, 8), rand_int(rng, 1, 4)), rand_int(rng, 1, 16))
                        : random_curve(rng, {.max_pieces = 2, .nondecreasing = true, .zero_at_origin = true});
        Curve s = sac(f);
        for (const Rat& t : random_times(rng, 2 * (f.T() + f.d()), 10, 31)) {
            SacOracleValue v = sac_oracle_eval(f, t, cfg);
            if (v.stabilized) EXPECT_EQ(v.value, s.eval(t)) << f << " t=" << t;
            else EXPECT_LE(s.eval(t), v.value);
        }
    }
}

TEST(SampleTimes, DeterministicAndCoversBreakpoints) {
    Curve f = sac_rate_latency_jump(16, 2, 20);
    OracleConfig cfg;
    cfg.sampleCount = 50;
    cfg.seed = 9;
    auto a = sample_times(f, cfg), b = sample_times(f, cfg);
    EXPECT_EQ(a, b);
    for (const Rat& t : {Rat(0), Rat(2), Rat(13, 4), Rat(4)}) EXPECT_NE(std::find(a.begin(), a.end(), t), a.end()) << t;
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    cfg.seed = 0;
    EXPECT_THROW(sample_times(f, cfg), DomainError);
}

TEST(CheckConvolution, ReportsPlantedError) {
    Curve f = make_rate_latency(8, 5), g = make_rate_latency(11, 7);
    EXPECT_TRUE(check_convolution(f, g, convolution(f, g)).empty());
    EXPECT_FALSE(check_convolution(f, g, make_rate_latency(8, 11)).empty());
}
