#pragma once

#include "mpadiag/automaton.hpp"
#include "mpadiag/composition.hpp"
#include "mpadiag/crucial.hpp"
#include "mpadiag/epl.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace mpadiag {

struct Witness {
    CcRun run;  // starts at an initial composition state
    // Index into run.steps of the faulty observable edge (i, ii) or faulty uo edge (iii, iv).
    std::size_t fault_step = 0;
    std::vector<std::size_t> cycle;  // obs edges of the positive cycle, (i) only
    std::size_t cycle_start = 0;     // first step of the cycle inside run.steps
    std::optional<std::size_t> anti_state;  // composition state with an anti-crucial left part, (iv) only
};

struct ConditionResult {
    bool present = false;
    Witness witness;
};

struct Preprocessing {
    bool initial_weights_normalized = false;
    bool stuck_states_freed = false;
    std::size_t states_added = 0;
};

struct Verdict {
    std::optional<bool> diagnosable;  // unset when inconclusive
    bool inconclusive = false;
    std::array<ConditionResult, 4> conditions;
    Preprocessing preprocessing;
    std::vector<UnknownQuery> unknowns;
};

struct VerifierConfig {
    EplBudget budget;
};

// Everything the verifier derives from the input automaton.
struct Analysis {
    Automaton prepared;
    Preprocessing preprocessing;
    Automaton faulty;
    Automaton normal;
    CompositionGraph cc;
    CrucialReport crucial_faulty;
    CrucialReport crucial_normal;
};

Analysis analyze(const Automaton& a, const VerifierConfig& config = {});
Verdict decide(const Analysis& an);
Verdict check_diagnosability(const Automaton& a, const VerifierConfig& config = {});

ConditionResult check_condition_i(const CompositionGraph& cc);
ConditionResult check_condition_ii(const CompositionGraph& cc, const CrucialReport& cf, const CrucialReport& cn);
ConditionResult check_condition_iii(const CompositionGraph& cc, const CrucialReport& cf, const CrucialReport& cn);
ConditionResult check_condition_iv(const CompositionGraph& cc, const CrucialReport& cf);

extern const std::array<const char*, 4> kConditionNames;

}  // namespace mpadiag
