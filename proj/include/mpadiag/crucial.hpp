#pragma once

#include "mpadiag/automaton.hpp"

#include <vector>

namespace mpadiag {

// Indexed by state. Only states reachable from an initial state are ever marked.
struct CrucialReport {
    std::vector<bool> crucial;
    std::vector<bool> anti_crucial;
    std::vector<bool> eventually_crucial;
    std::vector<bool> eventually_anti;
};

// A state is crucial when an unobservable cycle through it has positive weight,
// anti-crucial when one has negative weight.
CrucialReport crucial_states(const Automaton& a);

// Strongly connected components of the unobservable subgraph restricted to `keep`.
// comp[v] is the component id, -1 outside `keep`.
std::vector<int> uo_components(const Automaton& a, const std::vector<bool>& keep, int& count);

}  // namespace mpadiag
