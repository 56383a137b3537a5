#pragma once

#include "mpadiag/automaton.hpp"
#include "mpadiag/composition.hpp"
#include "mpadiag/verifier.hpp"

#include <string>

namespace mpadiag {

// Nodes and edges are emitted in lexicographic order, so output is byte-stable.
std::string export_dot(const Automaton& a);
std::string export_dot(const CompositionGraph& cc);
// The composition with the witness run highlighted.
std::string export_dot(const CompositionGraph& cc, const Witness& w);

}  // namespace mpadiag
