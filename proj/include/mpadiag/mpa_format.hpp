#pragma once

#include "mpadiag/automaton.hpp"
#include "mpadiag/epl.hpp"

#include <istream>
#include <stdexcept>
#include <string>

namespace mpadiag {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

Automaton parse_automaton(std::istream& in);
Automaton parse_automaton_string(const std::string& text);
Automaton load_automaton(const std::string& path);

std::string render_automaton(const Automaton& a);

// Weighted graphs: "wg 1", "dim 1|2", then "vertex <name>" and "edge <src> <dst> <w1> [<w2>]" lines.
WeightedGraph parse_weighted_graph(std::istream& in);
WeightedGraph load_weighted_graph(const std::string& path);

}  // namespace mpadiag
