#include <gtest/gtest.h>

#include "generators.hpp"
#include "uppnc/curve.hpp"
#include "uppnc/minimize.hpp"

using namespace upp;
using namespace upp::testing;

namespace {

Rat R(const char* s) { return Rat::parse(s); }

const Rat kInf = Rat::plus_infinity();

}  // namespace

TEST(Constructors, RateLatency) {
    Curve b = make_rate_latency(16, 2);
    EXPECT_EQ(b.eval(4), Rat(32));
    EXPECT_EQ(b.eval(2), Rat(0));
    Curve b85 = make_rate_latency(8, 5);
    EXPECT_EQ(b85.T(), Rat(5));
    EXPECT_EQ(b85.rho(), Rat(8));
    EXPECT_EQ(make_rate_latency(16, 2).cardinality(), 4u);
    EXPECT_EQ(make_rate_latency(3, 0).cardinality(), 2u);
    EXPECT_THROW(make_rate_latency(0, 2), DomainError);
    EXPECT_THROW(make_rate_latency(-1, 2), DomainError);
}

TEST(Constructors, TokenBucket) {
    Curve g = make_token_bucket(2, 3);
    EXPECT_EQ(g.eval(0), Rat(0));
    EXPECT_EQ(g.eval(1), Rat(5));
    EXPECT_EQ(g.right_limit(0), Rat(2));
    EXPECT_EQ(g.eval(10), Rat(32));
    EXPECT_TRUE(equivalent(make_token_bucket(0, 0), make_zero()));
}

TEST(Constructors, DeltaZero) {
    Curve d = make_delta_zero();
    EXPECT_EQ(d.eval(0), Rat(0));
    EXPECT_EQ(d.eval(R("1/2")), kInf);
    EXPECT_EQ(d.eval(7), kInf);
}

TEST(Constructors, AddJump) {
    Curve f = add_jump(make_rate_latency(16, 2), 20);
    EXPECT_EQ(f.eval(0), Rat(0));
    EXPECT_EQ(f.eval(3), Rat(36));
    EXPECT_EQ(f.right_limit(0), Rat(20));
    EXPECT_TRUE(equivalent(add_jump(make_rate_latency(16, 2), kInf), make_delta_zero()));
    EXPECT_THROW(add_jump(make_token_bucket(2, 3) , -1), DomainError);
    EXPECT_THROW(add_jump(make_constant(1), 3), DomainError);
}

TEST(Eval, Examples) {
    EXPECT_EQ(make_rate_latency(8, 5).eval(100), Rat(760));
    EXPECT_EQ(make_delta_zero().eval(7), kInf);
    EXPECT_EQ(make_token_bucket(2, 3).eval(10), Rat(32));
}

TEST(Cut, RateLatencyOverFirstPeriod) {
    Sequence s = cut(make_rate_latency(16, 2), Interval::closed_open(0, 3));
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(as_point(s[0]), (Point{0, 0}));
    EXPECT_EQ(as_segment(s[1]), Segment(0, 2, 0, 0));
    EXPECT_EQ(as_point(s[2]), (Point{2, 0}));
    EXPECT_EQ(as_segment(s[3]), Segment(2, 3, 0, 16));
}

TEST(Cut, IdentityOverStoredDomain) {
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        Curve f = random_curve(rng);
        EXPECT_EQ(cut(f, Interval::closed_open(0, f.T() + f.d())), f.sequence());
    }
}

TEST(Cut, StaircaseAgreesWithEval) {
    // Staircase: value 20 k on ]2(k-1), 2k], a flat step of height 20 every 2.
    Curve f(Sequence({Point{0, 0}, Segment(0, 2, 20, 0)}), 0, 2, 20);
    Sequence s = cut(f, Interval::closed_open(0, 8));
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        Rat t = rand_rat(rng, 0, 7, 97);
        EXPECT_EQ(s.eval(t), f.eval(t)) << t;
    }
    EXPECT_EQ(s.eval(6), Rat(60));
    EXPECT_THROW(cut(f, Interval::closed_open(0, kInf)), DomainError);
}

TEST(MergeWellFormed, CollinearPiecesFuse) {
    Sequence s({Point{0, 0}, Segment(0, 1, 0, 2), Point{1, 2}, Segment(1, 2, 2, 2), Point{2, 4}});
    Sequence m = merge_well_formed(s);
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(as_segment(m[1]), Segment(0, 2, 0, 2));
    EXPECT_EQ(merge_well_formed(m), m);
}

TEST(MergeWellFormed, ChainOfFiveCollinearPieces) {
    std::vector<Element> el{Point{0, 1}};
    for (int i = 0; i < 5; ++i) {
        el.push_back(Segment(i, i + 1, 1 + 3 * i, 3));
        el.push_back(Point{i + 1, 1 + 3 * (i + 1)});
    }
    Sequence s(el);
    Sequence m = merge_well_formed(s);
    EXPECT_EQ(m.size(), 3u);
    for (int k = 0; k <= 500; ++k) {
        Rat t = Rat(k, 100);
        EXPECT_EQ(m.eval(t), s.eval(t));
    }
}

TEST(Equivalent, Examples) {
    Curve a = make_rate_latency(8, 5);
    Curve b(cut(a, Interval::closed_open(0, 7)), 5, 2, 16);
    EXPECT_TRUE(equivalent(a, b));
    EXPECT_FALSE(equivalent(a, make_rate_latency(8, 6)));
}

TEST(Equivalent, MinimizedRandomCurves) {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        Curve f = random_curve(rng);
        EXPECT_TRUE(equivalent(f, minimize(f))) << f;
    }
}

TEST(Equivalent, IsAnEquivalenceRelation) {
    Rng rng(13);
    for (int i = 0; i < 30; ++i) {
        Curve f = random_curve(rng);
        Curve g = inflate(f, rand_int(rng, 0, 2), rand_int(rng, 1, 3));
        Curve h = inflate(g, rand_int(rng, 0, 2), rand_int(rng, 1, 2));
        Curve other = random_curve(rng);
        EXPECT_TRUE(equivalent(f, f));
        EXPECT_TRUE(equivalent(f, g));
        EXPECT_TRUE(equivalent(g, f));
        EXPECT_TRUE(equivalent(g, h));
        EXPECT_TRUE(equivalent(f, h));
        EXPECT_EQ(equivalent(f, other), equivalent(other, f));
        EXPECT_EQ(equivalent(f, other), equivalent(h, other));
    }
}

TEST(Properties, PseudoPeriodicity) {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        Curve f = random_curve(rng);
        Rat horizon = 5 * (f.T() + f.d());
        for (const Rat& t : random_times(rng, horizon, 40)) {
            if (t < f.T()) continue;
            ASSERT_EQ(f.eval(t + f.d()), f.eval(t) + f.c()) << f << " at " << t;
        }
    }
}

TEST(Properties, CutAgreesWithEval) {
    Rng rng(19);
    for (int i = 0; i < 100; ++i) {
        Curve f = random_curve(rng);
        Rat a = rand_rat(rng, 0, 4), b = a + rand_rat(rng, 1, 12);
        Sequence s = cut(f, Interval::closed_open(a, b));
        s.validate();
        for (const Rat& u : random_times(rng, b - a, 40)) {
            Rat t = a + u;
            if (t == b) continue;
            ASSERT_EQ(s.eval(t), f.eval(t));
        }
    }
}

TEST(Properties, MergeKeepsValuesAndNeverGrows) {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        Curve f = random_curve(rng);
        Curve g = inflate(f, 1, 2);
        Sequence s = g.sequence();
        Sequence m = merge_well_formed(s);
        EXPECT_LE(m.size(), s.size());
        for (const Rat& t : random_times(rng, s.domain_end(), 60)) {
            if (t == s.domain_end()) continue;
            ASSERT_EQ(m.eval(t), s.eval(t));
        }
    }
}

TEST(Serialization, TextRoundTrip) {
    Rng rng(29);
    for (int i = 0; i < 50; ++i) {
        Curve f = random_curve(rng);
        Curve g = Curve::from_text(f.to_text());
        EXPECT_EQ(g.sequence(), f.sequence());
        EXPECT_EQ(g.T(), f.T());
        EXPECT_EQ(g.d(), f.d());
        EXPECT_EQ(g.c(), f.c());
    }
    Curve d = Curve::from_text(make_delta_zero().to_text());
    EXPECT_TRUE(equivalent(d, make_delta_zero()));
    EXPECT_THROW(Curve::from_text("upp T=0 d=1\nP 0 0\n"), ParseError);
}

TEST(Serialization, CsvRoundTrip) {
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        Curve f = random_curve(rng);
        Rat end = f.T() + 3 * f.d();
        Sequence s = cut(f, Interval::closed_open(0, end));
        EXPECT_EQ(sequence_from_csv(to_csv(s), end), s);
    }
}

TEST(FirstTimeAbove, RateLatencyAndStaircase) {
    Curve b = make_rate_latency(16, 2);
    EXPECT_EQ(first_time_above(b, 0), Rat(2));
    EXPECT_EQ(first_time_above(b, 2), R("17/8"));
    EXPECT_EQ(first_time_above(b, 0, false), Rat(0));
    Curve s(Sequence({Point{0, 0}, Segment(0, 2, 20, 0)}), 0, 2, 20);
    EXPECT_EQ(first_time_above(s, 20), Rat(2));
    EXPECT_EQ(first_time_above(s, 1000), Rat(100));
    EXPECT_EQ(first_time_above(make_zero(), 1), kInf);
    EXPECT_EQ(first_time_above(make_delta_zero(), 5), Rat(0));
}
