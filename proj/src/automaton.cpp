#include "mpadiag/automaton.hpp"

#include <deque>
#include <stdexcept>

namespace mpadiag {

namespace {

std::string transition_key(std::size_t src, std::size_t event, std::size_t dst) {
    return std::to_string(src) + ":" + std::to_string(event) + ":" + std::to_string(dst);
}

// Backward closure: states from which some state in `targets` is reachable.
std::vector<bool> coreachable(const Automaton& a, const std::vector<bool>& targets) {
    std::vector<std::vector<std::size_t>> in(a.states().size());
    for (const auto& t : a.transitions()) in[t.dst].push_back(t.src);
    std::vector<bool> seen = targets;
    std::deque<std::size_t> work;
    for (std::size_t q = 0; q < seen.size(); ++q)
        if (seen[q]) work.push_back(q);
    while (!work.empty()) {
        std::size_t q = work.front();
        work.pop_front();
        for (std::size_t p : in[q])
            if (!seen[p]) {
                seen[p] = true;
                work.push_back(p);
            }
    }
    return seen;
}

Automaton copy_skeleton(const Automaton& a) {
    Automaton r;
    r.kind = a.kind;
    for (const auto& e : a.events()) r.add_event(e);
    return r;
}

}  // namespace

std::size_t Automaton::add_state(const std::string& name, bool initial, const Rational& init_weight,
                                 bool synthetic) {
    if (state_index_.count(name)) throw std::invalid_argument("duplicate state '" + name + "'");
    state_index_[name] = states_.size();
    states_.push_back(State{name, initial, init_weight, synthetic});
    out_.emplace_back();
    return states_.size() - 1;
}

std::size_t Automaton::add_event(const Event& e) {
    if (event_index_.count(e.name)) throw std::invalid_argument("duplicate event '" + e.name + "'");
    event_index_[e.name] = events_.size();
    events_.push_back(e);
    return events_.size() - 1;
}

std::size_t Automaton::add_transition(std::size_t src, std::size_t event, std::size_t dst, const Rational& weight) {
    if (src >= states_.size() || dst >= states_.size() || event >= events_.size())
        throw std::invalid_argument("transition refers to an unknown state or event");
    auto key = transition_key(src, event, dst);
    if (transition_keys_.count(key))
        throw std::invalid_argument("duplicate transition " + states_[src].name + " " + events_[event].name + " " +
                                    states_[dst].name);
    transition_keys_[key] = transitions_.size();
    Rational w = weight;
    w.canonicalize();
    transitions_.push_back(Transition{src, event, dst, w});
    out_[src].push_back(transitions_.size() - 1);
    return transitions_.size() - 1;
}

std::optional<std::size_t> Automaton::find_state(const std::string& name) const {
    auto it = state_index_.find(name);
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Automaton::find_event(const std::string& name) const {
    auto it = event_index_.find(name);
    if (it == event_index_.end()) return std::nullopt;
    return it->second;
}

bool Automaton::has_transition(std::size_t src, std::size_t event, std::size_t dst) const {
    return transition_keys_.count(transition_key(src, event, dst)) > 0;
}

std::vector<std::size_t> Automaton::initial_states() const {
    std::vector<std::size_t> r;
    for (std::size_t q = 0; q < states_.size(); ++q)
        if (states_[q].initial) r.push_back(q);
    return r;
}

std::string Automaton::fresh_name(const std::string& base) const {
    auto taken = [&](const std::string& s) { return state_index_.count(s) || event_index_.count(s); };
    if (!taken(base)) return base;
    for (std::size_t i = 1;; ++i) {
        std::string candidate = base + "_" + std::to_string(i);
        if (!taken(candidate)) return candidate;
    }
}

bool Automaton::operator==(const Automaton& o) const {
    if (kind != o.kind || states_.size() != o.states_.size() || events_.size() != o.events_.size() ||
        transitions_.size() != o.transitions_.size())
        return false;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        const auto& x = states_[i];
        const auto& y = o.states_[i];
        if (x.name != y.name || x.initial != y.initial) return false;
        if (x.initial && x.init_weight != y.init_weight) return false;
    }
    for (std::size_t i = 0; i < events_.size(); ++i) {
        const auto& x = events_[i];
        const auto& y = o.events_[i];
        if (x.name != y.name || x.observable != y.observable || x.label != y.label || x.fault != y.fault)
            return false;
    }
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        const auto& x = transitions_[i];
        const auto& y = o.transitions_[i];
        if (x.src != y.src || x.event != y.event || x.dst != y.dst || x.weight != y.weight) return false;
    }
    return true;
}

bool is_valid_path(const Automaton& a, const Path& p) {
    if (p.start >= a.states().size()) return false;
    std::size_t cur = p.start;
    for (std::size_t t : p.steps) {
        if (t >= a.transitions().size() || a.transition(t).src != cur) return false;
        cur = a.transition(t).dst;
    }
    return true;
}

std::size_t path_end(const Automaton& a, const Path& p) {
    return p.steps.empty() ? p.start : a.transition(p.steps.back()).dst;
}

Rational path_weight(const Automaton& a, const Path& p) {
    Rational w = 0;
    for (std::size_t t : p.steps) w += a.transition(t).weight;
    return w;
}

TimedWord timed_word(const Automaton& a, const Path& p) {
    TimedWord word;
    Rational acc = 0;
    for (std::size_t t : p.steps) {
        acc += a.transition(t).weight;
        word.push_back(TimedEntry{a.transition(t).event, acc});
    }
    return word;
}

LabeledTimedWord labeled_timed_word(const Automaton& a, const Path& p) {
    LabeledTimedWord word;
    for (const auto& entry : timed_word(a, p)) {
        const Event& e = a.event(entry.event);
        if (e.observable) word.push_back(LabeledEntry{e.label, entry.time});
    }
    return word;
}

StateClasses classify_states(const Automaton& a) {
    const std::size_t n = a.states().size();
    StateClasses c;
    c.dead.assign(n, false);
    std::vector<bool> timed_src(n, false);
    for (std::size_t q = 0; q < n; ++q) c.dead[q] = a.out()[q].empty();
    for (const auto& t : a.transitions())
        if (t.weight != 0) timed_src[t.src] = true;
    auto live = coreachable(a, timed_src);
    c.stuck.assign(n, false);
    for (std::size_t q = 0; q < n; ++q) c.stuck[q] = !live[q];
    return c;
}

Automaton normalize_initial_weights(const Automaton& a) {
    bool needed = false;
    for (const auto& s : a.states())
        if (s.initial && s.init_weight != 0) needed = true;
    if (!needed) return a;

    Automaton r = copy_skeleton(a);
    std::string init_name = a.fresh_name("init");
    std::size_t eps = r.add_event(Event{a.fresh_name("eps_hat"), false, "", false, true});
    std::size_t init = r.add_state(init_name, true, 0, true);
    for (const auto& s : a.states()) {
        bool keep_initial = s.initial && s.init_weight == 0;
        r.add_state(s.name, keep_initial, keep_initial ? s.init_weight : Rational(0), s.synthetic);
    }
    for (const auto& t : a.transitions()) r.add_transition(t.src + 1, t.event, t.dst + 1, t.weight);
    for (std::size_t q = 0; q < a.states().size(); ++q) {
        const auto& s = a.state(q);
        if (s.initial && s.init_weight != 0) r.add_transition(init, eps, q + 1, s.init_weight);
    }
    return r;
}

Automaton make_stuck_free(const Automaton& a) {
    auto classes = classify_states(a);
    bool any = false;
    for (bool s : classes.stuck) any = any || s;
    if (!any) return a;

    Automaton r = a;
    std::size_t u = r.add_event(Event{a.fresh_name("sink_u"), false, "", false, true});
    for (std::size_t q = 0; q < a.states().size(); ++q) {
        if (!classes.stuck[q]) continue;
        std::size_t sink = r.add_state(r.fresh_name("sink_" + a.state(q).name), false, 0, true);
        r.add_transition(q, u, sink, 1);
        r.add_transition(sink, u, sink, 1);
    }
    return r;
}

Automaton normal_subautomaton(const Automaton& a) {
    Automaton r = copy_skeleton(a);
    for (const auto& s : a.states()) r.add_state(s.name, s.initial, s.init_weight, s.synthetic);
    for (std::size_t i = 0; i < a.transitions().size(); ++i) {
        if (a.is_faulty(i)) continue;
        const auto& t = a.transition(i);
        r.add_transition(t.src, t.event, t.dst, t.weight);
    }
    return r;
}

Automaton faulty_subautomaton(const Automaton& a) {
    const std::size_t n = a.states().size();
    std::vector<bool> fault_src(n, false);
    std::vector<std::size_t> fault_dst;
    for (std::size_t i = 0; i < a.transitions().size(); ++i)
        if (a.is_faulty(i)) {
            fault_src[a.transition(i).src] = true;
            fault_dst.push_back(a.transition(i).dst);
        }
    auto reaches_fault = coreachable(a, fault_src);
    auto after_fault = reachable_from(a, fault_dst);

    std::vector<bool> keep(a.transitions().size(), false);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < a.transitions().size(); ++i) {
        const auto& t = a.transition(i);
        keep[i] = a.is_faulty(i) || reaches_fault[t.dst] || after_fault[t.src];
        if (keep[i]) used[t.src] = used[t.dst] = true;
    }
    // Only initial states that can reach a fault stay initial.
    std::vector<bool> initial(n, false);
    for (std::size_t q = 0; q < n; ++q) {
        initial[q] = a.state(q).initial && reaches_fault[q];
        if (initial[q]) used[q] = true;
    }

    Automaton r = copy_skeleton(a);
    std::vector<std::size_t> index(n, 0);
    for (std::size_t q = 0; q < n; ++q)
        if (used[q]) index[q] = r.add_state(a.state(q).name, initial[q], a.state(q).init_weight, a.state(q).synthetic);
    for (std::size_t i = 0; i < a.transitions().size(); ++i) {
        if (!keep[i]) continue;
        const auto& t = a.transition(i);
        r.add_transition(index[t.src], t.event, index[t.dst], t.weight);
    }
    return r;
}

std::vector<bool> reachable_from(const Automaton& a, const std::vector<std::size_t>& from) {
    std::vector<bool> seen(a.states().size(), false);
    std::deque<std::size_t> work;
    for (std::size_t q : from)
        if (!seen[q]) {
            seen[q] = true;
            work.push_back(q);
        }
    while (!work.empty()) {
        std::size_t q = work.front();
        work.pop_front();
        for (std::size_t t : a.out()[q]) {
            std::size_t d = a.transition(t).dst;
            if (!seen[d]) {
                seen[d] = true;
                work.push_back(d);
            }
        }
    }
    return seen;
}

std::vector<bool> reachable_states(const Automaton& a) { return reachable_from(a, a.initial_states()); }

StructuralFlags structural_checks(const Automaton& a) {
    StructuralFlags f;
    const std::size_t n = a.states().size();
    auto reach = reachable_states(a);

    f.deterministic = a.initial_states().size() == 1;
    for (std::size_t q = 0; q < n && f.deterministic; ++q) {
        std::vector<bool> seen(a.events().size(), false);
        for (std::size_t t : a.out()[q]) {
            std::size_t e = a.transition(t).event;
            if (seen[e]) {
                f.deterministic = false;
                break;
            }
            seen[e] = true;
        }
    }

    f.deadlock_free = true;
    for (std::size_t q = 0; q < n; ++q)
        if (reach[q] && a.out()[q].empty()) f.deadlock_free = false;

    // Kahn's algorithm on the reachable unobservable subgraph.
    std::vector<std::size_t> indeg(n, 0);
    for (std::size_t i = 0; i < a.transitions().size(); ++i) {
        const auto& t = a.transition(i);
        if (!a.is_observable(i) && reach[t.src]) ++indeg[t.dst];
    }
    std::deque<std::size_t> work;
    std::size_t total = 0, removed = 0;
    for (std::size_t q = 0; q < n; ++q) {
        if (!reach[q]) continue;
        ++total;
        if (indeg[q] == 0) work.push_back(q);
    }
    while (!work.empty()) {
        std::size_t q = work.front();
        work.pop_front();
        ++removed;
        for (std::size_t t : a.out()[q]) {
            if (a.is_observable(t)) continue;
            if (--indeg[a.transition(t).dst] == 0) work.push_back(a.transition(t).dst);
        }
    }
    f.divergence_free = removed == total;
    return f;
}

}  // namespace mpadiag
