#pragma once

#include "mpadiag/automaton.hpp"

#include <optional>
#include <vector>

namespace mpadiag {

// A faulty path, its continuation, and a fault-free path with the same
// labeled timed word that lasts at least t longer than the faulty prefix.
struct WitnessTriple {
    Path pi;
    Path pi_prime;
    Path pi_dprime;
    Rational t;
};

struct OracleResult {
    bool present = false;                          // a triple was found for every t
    std::vector<std::optional<WitnessTriple>> per_t;  // aligned with the t grid
};

// All paths with at most max_len transitions starting in `from`, shortest
// first, then lexicographic by (start, transition indices).
std::vector<Path> enumerate_paths(const Automaton& a, const std::vector<std::size_t>& from, std::size_t max_len);

// Expects initial weights already folded in (all zero). Each path has at most max_len transitions.
OracleResult find_witness(const Automaton& a, const std::vector<Rational>& t_grid, std::size_t max_len);

bool is_valid_triple(const Automaton& a, const WitnessTriple& w);

}  // namespace mpadiag
