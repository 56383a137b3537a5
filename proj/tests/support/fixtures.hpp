#pragma once

#include "mpadiag/mpa_format.hpp"

#include <string>

#ifndef DATA_DIR
#error "DATA_DIR must point at the sample automata"
#endif

inline mpadiag::Automaton load_sample(const std::string& name) {
    return mpadiag::load_automaton(std::string(DATA_DIR) + "/" + name);
}

inline std::string sample_path(const std::string& name) { return std::string(DATA_DIR) + "/" + name; }
