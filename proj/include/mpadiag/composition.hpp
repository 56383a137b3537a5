#pragma once

#include "mpadiag/automaton.hpp"
#include "mpadiag/epl.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace mpadiag {

enum class Side { Left, Right };

struct CcState {
    std::size_t left = 0;   // state of the faulty subautomaton
    std::size_t right = 0;  // state of the normal subautomaton
};

struct UoEdge {
    std::size_t src = 0;
    std::size_t dst = 0;
    Side side = Side::Left;
    std::size_t transition = 0;  // in the automaton of `side`
    Rational weight;             // +mu on the left, -mu on the right
    bool faulty = false;
};

struct ObsEdge {
    std::size_t src = 0;
    std::size_t dst = 0;
    std::size_t left_event = 0;
    std::size_t right_event = 0;
    bool faulty = false;
    bool positive = false;
    // Supremum over admissible left paths of their weight; unset means unbounded.
    std::optional<Rational> left_sup;
    // One realization: the uo edges walked from src, then the two observable transitions.
    std::vector<std::size_t> uo_walk;
    std::size_t left_transition = 0;
    std::size_t right_transition = 0;
};

struct UnknownQuery {
    std::size_t src = 0;
    std::size_t left_transition = 0;
    std::size_t right_transition = 0;
    std::string what;
    std::string reason;
};

struct CcStep {
    bool observable = false;
    std::size_t edge = 0;
    bool operator==(const CcStep& o) const { return observable == o.observable && edge == o.edge; }
};

struct CcRun {
    std::size_t start = 0;
    std::vector<CcStep> steps;
};

struct CompositionGraph {
    Automaton left;
    Automaton right;
    std::vector<CcState> states;
    std::vector<std::size_t> initial;
    std::vector<UoEdge> uo_edges;
    std::vector<ObsEdge> obs_edges;
    std::vector<UnknownQuery> unknowns;

    std::vector<std::vector<std::size_t>> uo_out;
    std::vector<std::vector<std::size_t>> obs_out;

    std::optional<std::size_t> find_state(std::size_t l, std::size_t r) const;
    std::optional<std::size_t> find_uo_edge(std::size_t src, Side side, std::size_t transition) const;
    std::string state_name(std::size_t s) const;
    std::string uo_label(const UoEdge& e) const;
    std::string obs_label(const ObsEdge& e) const;

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    std::map<std::tuple<std::size_t, int, std::size_t>, std::size_t> uo_index;
};

// Reachable part of the composition of a faulty subautomaton (left) with a
// normal subautomaton (right), both over the same event set.
CompositionGraph build_composition(const Automaton& af, const Automaton& an, const EplBudget& budget = {});

// Positive iff the per-edge suprema of admissible left weights sum above zero.
bool positive_simple_cycle(const CompositionGraph& cc, const std::vector<std::size_t>& cycle);

bool is_valid_run(const CompositionGraph& cc, const CcRun& run);
std::size_t run_end(const CompositionGraph& cc, const CcRun& run);
// Left and right automaton transitions along a run, in order.
std::vector<std::size_t> left_component(const CompositionGraph& cc, const CcRun& run);
std::vector<std::size_t> right_component(const CompositionGraph& cc, const CcRun& run);

// Reorders an unobservable run into all left steps followed by all right steps.
CcRun normalize_unobservable_run(const CompositionGraph& cc, const CcRun& run);

}  // namespace mpadiag
