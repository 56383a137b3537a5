#pragma once

#include "mpadiag/automaton.hpp"

#include <cstdint>
#include <vector>

namespace mpadiag {

// Chain q0..qm with parallel weighted/zero steps, a faulty branch after qm and
// a fault-free branch that observes `a` after N+1 time units.
Automaton gen_subset_sum(const std::vector<long>& n_list, long N);

struct RandomParams {
    std::size_t states = 4;
    std::size_t events = 3;
    std::size_t fault_count = 1;
    long weight_range = 3;  // |w| <= weight_range; maxplus-nonneg-q also draws halves
    double density = 0.5;   // chance that a (state, event) pair gets a transition
    DioidKind kind = DioidKind::MaxPlusQ;
    double cycle_bias = 0.3;  // share of instances forced to contain uo loops
};

// Deterministic in (params, seed); only states reachable from the initial state are kept.
Automaton gen_random(const RandomParams& params, std::uint64_t seed);

// Brute force over all subsets.
bool subset_sum_exists(const std::vector<long>& n_list, long N);

}  // namespace mpadiag
