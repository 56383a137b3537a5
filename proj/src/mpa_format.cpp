#include "mpadiag/mpa_format.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace mpadiag {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    return toks;
}

Rational parse_weight(const std::string& tok, DioidKind kind, std::size_t line) {
    if (tok == "-inf") throw ParseError(line, "zero weight forbidden");
    if (!tok.empty() && tok.front() == '-' && kind != DioidKind::MaxPlusQ)
        throw ParseError(line, "negative weight '" + tok + "' not allowed in " + to_string(kind));
    Rational q;
    try {
        q = parse_rational(tok);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line, e.what());
    }
    if (!admits(kind, DioidValue(q)))
        throw ParseError(line, "weight '" + tok + "' is not an element of " + to_string(kind));
    return q;
}

}  // namespace

Automaton parse_automaton(std::istream& in) {
    Automaton a;
    bool header = false;
    bool have_kind = false;
    std::size_t lineno = 0;
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        auto t = tokenize(raw);
        if (t.empty()) continue;
        if (!header) {
            if (t.size() != 2 || t[0] != "mpa" || t[1] != "1") throw ParseError(lineno, "expected header 'mpa 1'");
            header = true;
            continue;
        }
        const std::string& kw = t[0];
        if (kw == "dioid") {
            if (have_kind) throw ParseError(lineno, "dioid declared twice");
            if (t.size() != 2) throw ParseError(lineno, "expected 'dioid <kind>'");
            auto k = parse_dioid_kind(t[1]);
            if (!k) throw ParseError(lineno, "unknown dioid '" + t[1] + "'");
            a.kind = *k;
            have_kind = true;
            continue;
        }
        if (!have_kind) throw ParseError(lineno, "dioid must be declared before '" + kw + "'");
        try {
            if (kw == "state") {
                if (t.size() == 2) {
                    a.add_state(t[1]);
                } else if ((t.size() == 3 || t.size() == 4) && t[2] == "init") {
                    Rational w = t.size() == 4 ? parse_weight(t[3], a.kind, lineno) : Rational(0);
                    a.add_state(t[1], true, w);
                } else {
                    throw ParseError(lineno, "expected 'state <name> [init [<weight>]]'");
                }
            } else if (kw == "event") {
                Event e;
                if (t.size() < 3) throw ParseError(lineno, "expected 'event <name> uo|obs <label> [fault]'");
                e.name = t[1];
                std::size_t next;
                if (t[2] == "uo") {
                    next = 3;
                } else if (t[2] == "obs" && t.size() >= 4) {
                    e.observable = true;
                    e.label = t[3];
                    next = 4;
                } else {
                    throw ParseError(lineno, "expected 'uo' or 'obs <label>'");
                }
                if (next < t.size()) {
                    if (t[next] != "fault" || next + 1 != t.size())
                        throw ParseError(lineno, "unexpected token '" + t[next] + "'");
                    e.fault = true;
                }
                a.add_event(e);
            } else if (kw == "trans") {
                if (t.size() != 5) throw ParseError(lineno, "expected 'trans <src> <event> <dst> <weight>'");
                auto src = a.find_state(t[1]);
                auto ev = a.find_event(t[2]);
                auto dst = a.find_state(t[3]);
                if (!src) throw ParseError(lineno, "unknown state '" + t[1] + "'");
                if (!ev) throw ParseError(lineno, "unknown event '" + t[2] + "'");
                if (!dst) throw ParseError(lineno, "unknown state '" + t[3] + "'");
                Rational w = parse_weight(t[4], a.kind, lineno);
                a.add_transition(*src, *ev, *dst, w);
            } else {
                throw ParseError(lineno, "unknown directive '" + kw + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, e.what());
        }
    }
    if (!header) throw ParseError(lineno, "missing header 'mpa 1'");
    if (!have_kind) throw ParseError(lineno, "missing dioid declaration");
    if (a.initial_states().empty()) throw ParseError(lineno, "no initial state");
    return a;
}

Automaton parse_automaton_string(const std::string& text) {
    std::istringstream in(text);
    return parse_automaton(in);
}

Automaton load_automaton(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_automaton(in);
}

std::string render_automaton(const Automaton& a) {
    std::ostringstream os;
    os << "mpa 1\n";
    os << "dioid " << to_string(a.kind) << "\n";
    for (const auto& s : a.states()) {
        os << "state " << s.name;
        if (s.initial) os << " init " << rational_str(s.init_weight);
        os << "\n";
    }
    for (const auto& e : a.events()) {
        os << "event " << e.name;
        if (e.observable)
            os << " obs " << e.label;
        else
            os << " uo";
        if (e.fault) os << " fault";
        os << "\n";
    }
    for (const auto& t : a.transitions())
        os << "trans " << a.state(t.src).name << " " << a.event(t.event).name << " " << a.state(t.dst).name << " "
           << rational_str(t.weight) << "\n";
    return os.str();
}

WeightedGraph parse_weighted_graph(std::istream& in) {
    WeightedGraph g;
    bool header = false, have_dim = false;
    std::size_t lineno = 0;
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        auto t = tokenize(raw);
        if (t.empty()) continue;
        if (!header) {
            if (t.size() != 2 || t[0] != "wg" || t[1] != "1") throw ParseError(lineno, "expected header 'wg 1'");
            header = true;
            continue;
        }
        if (t[0] == "dim") {
            if (have_dim || !g.edges.empty() || t.size() != 2 || (t[1] != "1" && t[1] != "2"))
                throw ParseError(lineno, "expected a single 'dim 1' or 'dim 2' before any edge");
            g.dim = t[1] == "1" ? 1 : 2;
            have_dim = true;
        } else if (t[0] == "vertex") {
            if (t.size() != 2) throw ParseError(lineno, "expected 'vertex <name>'");
            if (g.find_vertex(t[1])) throw ParseError(lineno, "duplicate vertex '" + t[1] + "'");
            g.add_vertex(t[1]);
        } else if (t[0] == "edge") {
            if (t.size() != 3 + g.dim)
                throw ParseError(lineno, "expected 'edge <src> <dst>' and " + std::to_string(g.dim) + " weight(s)");
            std::vector<Rational> w;
            try {
                for (std::size_t k = 0; k < g.dim; ++k) w.push_back(parse_rational(t[3 + k]));
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
            g.add_edge(t[1], t[2], std::move(w));
        } else {
            throw ParseError(lineno, "unknown directive '" + t[0] + "'");
        }
    }
    if (!header) throw ParseError(lineno, "missing header 'wg 1'");
    return g;
}

WeightedGraph load_weighted_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_weighted_graph(in);
}

}  // namespace mpadiag
