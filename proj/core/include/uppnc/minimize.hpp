#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uppnc/curve.hpp"

namespace upp {

struct MinimizationReport {
    std::size_t originalCardinality = 0;
    std::size_t minimizedCardinality = 0;
    std::uint64_t breakpointCount = 0;
    std::vector<std::pair<std::uint64_t, bool>> factorsTested;  // (prime, accepted)
    std::uint64_t periodsRemoved = 0;
    std::uint64_t transientSegmentsRemoved = 0;
    Rat originalPeriod{1};
    Rat minimizedPeriod{1};

    static std::string csv_header();
    std::string csv_row() const;
};

// Breakpoints of f in ]T, T+d], the junction at T+d judged against the
// periodic extension. Zero for ultimately infinite curves.
std::uint64_t count_breakpoints(const Curve& f);

std::pair<Curve, MinimizationReport> minimize_period(const Curve& f);
std::pair<Curve, MinimizationReport> minimize_transient(const Curve& f);

std::pair<Curve, MinimizationReport> minimize_with_report(const Curve& f);
Curve minimize(const Curve& f);

}  // namespace upp
