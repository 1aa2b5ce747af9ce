#pragma once

#include <optional>
#include <string>

#include "uppnc/flowcontrol.hpp"

namespace upp::app {

struct NetworkFile {
    TandemSpec tandem;
    std::optional<ArrivalSpec> arrival;
};

// Line-oriented grammar, '#' starts a comment:
//   node <rate> <latency>
//   window <size|inf>      k-th window line is W_{k+1}
//   arrival <sigma> <rho>  at most once
// Missing trailing windows default to +inf.
NetworkFile parse_network_text(const std::string& text);
NetworkFile parse_network(const std::string& path);

}  // namespace upp::app
