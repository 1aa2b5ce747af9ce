#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "uppnc/flowcontrol.hpp"

namespace upp::app {

struct OptimizationFlags {
    bool minimize = true;
    bool dominance = true;
    bool asymptotic = true;
    bool selfconv = true;
    double budget = 300;  // seconds per pipeline step, 0 = unlimited

    PipelineOptions pipeline() const;
};

struct AnalyzeOptions {
    std::string file;
    std::string method = "approx";  // exact | approx
    OptimizationFlags flags;
    std::string curve_out;
    bool show_steps = true;
};

struct CompareOptions {
    std::string file;
    OptimizationFlags flags;
};

struct BenchOptions {
    std::uint64_t seed = 42;
    std::uint64_t count = 10;
    std::string cls = "mixed";  // dominance | asymptotic | incomparable | mixed
    std::string out = "-";
    std::string minimization_out;
};

struct ExportOptions {
    std::string file;
    std::string curve = "approx";
    std::string horizon;
    std::string out = "-";
    OptimizationFlags flags;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::uint64_t count = 20;
    std::uint64_t samples = 50;
};

// Each command writes its report to out and returns the process exit code.
// Errors propagate as exceptions.
int cmd_analyze(const AnalyzeOptions& o, std::ostream& out);
int cmd_compare(const CompareOptions& o, std::ostream& out);
int cmd_bench(const BenchOptions& o, std::ostream& out);
int cmd_export(const ExportOptions& o, std::ostream& out);
int cmd_verify(const VerifyOptions& o, std::ostream& out);

// Curve of a network selected by id: exact, approx, arrival, beta:<i>,
// exact:<i>, approx:<i>.
Curve select_curve(const std::string& file, const std::string& id, const OptimizationFlags& flags);

constexpr const char* kBenchHeader =
    "trial,class,variant,card_f,card_g,result_card,result_min_card,elementary_convolutions,branch,elapsed_ns,"
    "equivalent";

}  // namespace upp::app
