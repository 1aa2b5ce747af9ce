#pragma once

#include <functional>
#include <string>
#include <vector>

#include "uppnc/curve.hpp"
#include "uppnc/subadd.hpp"

namespace upp {

struct NodeSpec {
    Rat R;
    Rat theta;
};

// windows[k] is the buffer in front of node k + 2 (1-based), i.e. W_{k+2}.
struct TandemSpec {
    std::vector<NodeSpec> nodes;
    std::vector<Rat> windows;

    std::size_t size() const { return nodes.size(); }
    Curve beta(std::size_t i) const;          // 1-based
    const Rat& window(std::size_t i) const;   // W_i, 2 <= i <= n
    void validate() const;
};

struct ArrivalSpec {
    Rat sigma;
    Rat rho;

    Curve curve() const;
    void validate() const;
};

// One operation of a pipeline, as reported to progress callbacks.
struct StepRecord {
    std::string operation;
    std::string label;
    std::vector<std::size_t> operandCardinalities;
    std::size_t resultCardinality = 0;     // before minimization
    std::size_t minimizedCardinality = 0;  // equals resultCardinality when minimization is off
    double seconds = 0;
};

struct PipelineOptions {
    bool minimize = true;
    // Shortcuts for convolutions of sub-additive curves.
    ConvOptions conv;
    // Use the closed form for closures of rate-latency curves plus a jump.
    bool closed_form = true;
    SacOptions sac;
    // Wall-clock budget per step in seconds; 0 disables it.
    double step_budget = 0;
    std::function<void(const StepRecord&)> on_step;
};

Curve per_node_exact(const TandemSpec& tandem, std::size_t i, const PipelineOptions& opt = {});
Curve exact_equivalent(const TandemSpec& tandem, const PipelineOptions& opt = {});

Curve per_node_approx(const TandemSpec& tandem, std::size_t i, const PipelineOptions& opt = {});
Curve approx_equivalent(const TandemSpec& tandem, const PipelineOptions& opt = {});

// Maximum horizontal distance between the arrival curve and beta.
Rat delay_bound(const ArrivalSpec& alpha, const Curve& beta);

// Maximum vertical distance between the arrival curve and beta.
Rat backlog_bound(const ArrivalSpec& alpha, const Curve& beta);

// Exact check over the whole domain.
bool is_nondecreasing(const Curve& f);

}  // namespace upp
