#pragma once

#include "mpadiag/dioid.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mpadiag {

struct State {
    std::string name;
    bool initial = false;
    Rational init_weight;  // meaningful only when initial
    bool synthetic = false;
};

struct Event {
    std::string name;
    bool observable = false;
    std::string label;  // empty when unobservable
    bool fault = false;
    bool synthetic = false;
};

struct Transition {
    std::size_t src = 0;
    std::size_t event = 0;
    std::size_t dst = 0;
    Rational weight;
};

// Labeled max-plus automaton. Transition weights are finite rationals (the
// dioid zero is not a legal weight).
class Automaton {
public:
    DioidKind kind = DioidKind::MaxPlusQ;

    std::size_t add_state(const std::string& name, bool initial = false, const Rational& init_weight = 0,
                          bool synthetic = false);
    std::size_t add_event(const Event& e);
    // Throws std::invalid_argument on a duplicate (src, event, dst).
    std::size_t add_transition(std::size_t src, std::size_t event, std::size_t dst, const Rational& weight);

    std::optional<std::size_t> find_state(const std::string& name) const;
    std::optional<std::size_t> find_event(const std::string& name) const;
    bool has_transition(std::size_t src, std::size_t event, std::size_t dst) const;

    const std::vector<State>& states() const { return states_; }
    const std::vector<Event>& events() const { return events_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    // Outgoing transition indices per state, in insertion order.
    const std::vector<std::vector<std::size_t>>& out() const { return out_; }

    State& state(std::size_t i) { return states_[i]; }
    const State& state(std::size_t i) const { return states_[i]; }
    const Event& event(std::size_t i) const { return events_[i]; }
    const Transition& transition(std::size_t i) const { return transitions_[i]; }

    bool is_faulty(std::size_t t) const { return events_[transitions_[t].event].fault; }
    bool is_observable(std::size_t t) const { return events_[transitions_[t].event].observable; }
    std::vector<std::size_t> initial_states() const;

    // Fresh identifier derived from base that clashes with no state or event.
    std::string fresh_name(const std::string& base) const;

    bool operator==(const Automaton& o) const;

private:
    std::vector<State> states_;
    std::vector<Event> events_;
    std::vector<Transition> transitions_;
    std::vector<std::vector<std::size_t>> out_;
    std::unordered_map<std::string, std::size_t> state_index_;
    std::unordered_map<std::string, std::size_t> event_index_;
    std::unordered_map<std::string, std::size_t> transition_keys_;
};

struct Path {
    std::size_t start = 0;
    std::vector<std::size_t> steps;  // transition indices
};

struct TimedEntry {
    std::size_t event;
    Rational time;
};
using TimedWord = std::vector<TimedEntry>;

struct LabeledEntry {
    std::string label;
    Rational time;
    bool operator==(const LabeledEntry& o) const { return label == o.label && time == o.time; }
};
using LabeledTimedWord = std::vector<LabeledEntry>;

bool is_valid_path(const Automaton& a, const Path& p);
std::size_t path_end(const Automaton& a, const Path& p);
Rational path_weight(const Automaton& a, const Path& p);
TimedWord timed_word(const Automaton& a, const Path& p);
LabeledTimedWord labeled_timed_word(const Automaton& a, const Path& p);

struct StateClasses {
    std::vector<bool> dead;
    std::vector<bool> stuck;
};
StateClasses classify_states(const Automaton& a);

Automaton normalize_initial_weights(const Automaton& a);
Automaton make_stuck_free(const Automaton& a);

Automaton normal_subautomaton(const Automaton& a);
Automaton faulty_subautomaton(const Automaton& a);

struct StructuralFlags {
    bool deterministic = false;
    bool deadlock_free = false;
    bool divergence_free = false;
};
StructuralFlags structural_checks(const Automaton& a);

// Forward reachability over all transitions from the given states.
std::vector<bool> reachable_from(const Automaton& a, const std::vector<std::size_t>& from);
std::vector<bool> reachable_states(const Automaton& a);

}  // namespace mpadiag
