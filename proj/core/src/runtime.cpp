#include "uppnc/runtime.hpp"

#include <atomic>
#include <algorithm>
#include <thread>

#include "uppnc/errors.hpp"

namespace upp {

namespace {
thread_local Counters tl_counters;
std::atomic<bool> g_parallel{false};
std::atomic<std::int64_t> g_deadline_ns{0};  // 0 means no deadline

std::int64_t to_ns(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(t.time_since_epoch()).count();
}
}  // namespace

Counters& counters() { return tl_counters; }

void reset_counters() { tl_counters = Counters{}; }

void set_deadline(std::chrono::steady_clock::time_point t) { g_deadline_ns.store(std::max<std::int64_t>(1, to_ns(t))); }

void clear_deadline() { g_deadline_ns.store(0); }

std::optional<std::chrono::steady_clock::time_point> deadline() {
    std::int64_t ns = g_deadline_ns.load();
    if (ns == 0) return std::nullopt;
    return std::chrono::steady_clock::time_point(std::chrono::nanoseconds(ns));
}

void check_deadline() {
    std::int64_t ns = g_deadline_ns.load(std::memory_order_relaxed);
    if (ns != 0 && to_ns(std::chrono::steady_clock::now()) > ns) throw BudgetExceeded("time budget exceeded");
}

BudgetScope::BudgetScope(std::chrono::duration<double> budget) : previous_(deadline()) {
    auto t = std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget);
    if (previous_ && *previous_ < t) t = *previous_;
    set_deadline(t);
}

BudgetScope::~BudgetScope() {
    if (previous_) {
        set_deadline(*previous_);
    } else {
        clear_deadline();
    }
}

void set_parallel(bool on) { g_parallel.store(on); }

bool parallel_enabled() { return g_parallel.load(); }

unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 2 : n;
}

}  // namespace upp
