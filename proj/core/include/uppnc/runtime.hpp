#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

namespace upp {

// Instrumentation counters of the min-plus engine, per thread.
struct Counters {
    std::uint64_t elementaryConvolutions = 0;
    std::uint64_t envelopeIntervals = 0;
};

Counters& counters();
void reset_counters();

// Global wall-clock budget. Long-running loops call check_deadline(),
// which throws BudgetExceeded once the deadline has passed.
void set_deadline(std::chrono::steady_clock::time_point t);
void clear_deadline();
std::optional<std::chrono::steady_clock::time_point> deadline();
void check_deadline();

class BudgetScope {
public:
    explicit BudgetScope(std::chrono::duration<double> budget);
    ~BudgetScope();
    BudgetScope(const BudgetScope&) = delete;
    BudgetScope& operator=(const BudgetScope&) = delete;

private:
    std::optional<std::chrono::steady_clock::time_point> previous_;
};

// Enables the deterministic parallel elementary-convolution phase.
void set_parallel(bool on);
bool parallel_enabled();
unsigned worker_count();

}  // namespace upp
