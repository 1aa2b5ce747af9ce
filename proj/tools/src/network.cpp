#include "network.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace upp::app {

namespace {

std::vector<std::string> words(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

}  // namespace

NetworkFile parse_network_text(const std::string& text) {
    NetworkFile net;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto w = words(line);
        if (w.empty()) continue;
        try {
            if (w[0] == "node") {
                if (w.size() != 3) throw ParseError("expected 'node <rate> <latency>'", lineno);
                NodeSpec n{Rat::parse(w[1]), Rat::parse(w[2])};
                if (!n.R.is_finite() || n.R.sign() <= 0) throw ParseError("node rate must be positive", lineno);
                if (!n.theta.is_finite() || n.theta.sign() < 0) throw ParseError("node latency must be nonnegative", lineno);
                net.tandem.nodes.push_back(n);
            } else if (w[0] == "window") {
                if (w.size() != 2) throw ParseError("expected 'window <size|inf>'", lineno);
                if (net.tandem.windows.size() >= net.tandem.nodes.size())
                    throw ParseError("window W_" + std::to_string(net.tandem.windows.size() + 2) +
                                         " appears before the node it follows",
                                     lineno);
                Rat W = Rat::parse(w[1]);
                if (W.sign() <= 0) throw ParseError("window must be positive", lineno);
                net.tandem.windows.push_back(W);
            } else if (w[0] == "arrival") {
                if (w.size() != 3) throw ParseError("expected 'arrival <sigma> <rho>'", lineno);
                if (net.arrival) throw ParseError("arrival given more than once", lineno);
                ArrivalSpec a{Rat::parse(w[1]), Rat::parse(w[2])};
                try {
                    a.validate();
                } catch (const DomainError& e) {
                    throw ParseError(e.what(), lineno);
                }
                net.arrival = a;
            } else {
                throw ParseError("unknown directive '" + w[0] + "'", lineno);
            }
        } catch (const ParseError& e) {
            if (e.line() > 0) throw;
            throw ParseError(e.what(), lineno);
        }
    }
    if (net.tandem.nodes.empty()) throw ParseError("network has no nodes");
    if (net.tandem.windows.size() >= net.tandem.nodes.size())
        throw ParseError("a tandem of " + std::to_string(net.tandem.nodes.size()) + " nodes takes at most " +
                         std::to_string(net.tandem.nodes.size() - 1) + " windows");
    while (net.tandem.windows.size() + 1 < net.tandem.nodes.size()) net.tandem.windows.push_back(Rat::plus_infinity());
    return net;
}

NetworkFile parse_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read network file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_network_text(ss.str());
}

}  // namespace upp::app
