#include "mpadiag/verifier.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace mpadiag {

const std::array<const char*, 4> kConditionNames{"i", "ii", "iii", "iv"};

namespace {

constexpr long kUnreached = -1;
constexpr long kSource = -2;

// BFS over one edge kind from a set of sources; parent holds the edge used, or kSource.
struct Search {
    std::vector<long> parent;
    bool reached(std::size_t s) const { return parent[s] != kUnreached; }
};

Search obs_search(const CompositionGraph& cc, const std::vector<std::size_t>& sources) {
    Search r{std::vector<long>(cc.states.size(), kUnreached)};
    std::deque<std::size_t> work;
    for (std::size_t s : sources)
        if (!r.reached(s)) {
            r.parent[s] = kSource;
            work.push_back(s);
        }
    while (!work.empty()) {
        std::size_t s = work.front();
        work.pop_front();
        for (std::size_t e : cc.obs_out[s]) {
            std::size_t d = cc.obs_edges[e].dst;
            if (!r.reached(d)) {
                r.parent[d] = static_cast<long>(e);
                work.push_back(d);
            }
        }
    }
    return r;
}

Search uo_search(const CompositionGraph& cc, const Search& from) {
    Search r{std::vector<long>(cc.states.size(), kUnreached)};
    std::deque<std::size_t> work;
    for (std::size_t s = 0; s < cc.states.size(); ++s)
        if (from.reached(s)) {
            r.parent[s] = kSource;
            work.push_back(s);
        }
    while (!work.empty()) {
        std::size_t s = work.front();
        work.pop_front();
        for (std::size_t e : cc.uo_out[s]) {
            std::size_t d = cc.uo_edges[e].dst;
            if (!r.reached(d)) {
                r.parent[d] = static_cast<long>(e);
                work.push_back(d);
            }
        }
    }
    return r;
}

// Steps from the search source to s; `start` receives the source.
std::vector<CcStep> trace(const CompositionGraph& cc, const Search& search, std::size_t s, bool observable,
                          std::size_t& start) {
    std::vector<CcStep> steps;
    while (search.parent[s] != kSource) {
        auto e = static_cast<std::size_t>(search.parent[s]);
        steps.push_back({observable, e});
        s = observable ? cc.obs_edges[e].src : cc.uo_edges[e].src;
    }
    start = s;
    std::reverse(steps.begin(), steps.end());
    return steps;
}

void append(std::vector<CcStep>& a, const std::vector<CcStep>& b) { a.insert(a.end(), b.begin(), b.end()); }

// Obs-reachable from the initial states.
Search initial_obs(const CompositionGraph& cc) { return obs_search(cc, cc.initial); }

// Run from an initial state through faulty edge `f` (whose src is obs-reachable).
CcRun run_through(const CompositionGraph& cc, const Search& init, std::size_t f, std::size_t& fault_step) {
    CcRun run;
    run.steps = trace(cc, init, cc.obs_edges[f].src, true, run.start);
    fault_step = run.steps.size();
    run.steps.push_back({true, f});
    return run;
}

// States obs-reachable from targets of faulty obs edges that are obs-reachable from the start.
struct AfterFault {
    Search search;
    std::vector<long> origin;  // faulty edge whose target seeded the search
};

AfterFault after_fault(const CompositionGraph& cc, const Search& init) {
    std::vector<std::size_t> seeds;
    std::vector<long> origin(cc.states.size(), kUnreached);
    for (std::size_t e = 0; e < cc.obs_edges.size(); ++e) {
        const auto& oe = cc.obs_edges[e];
        if (!oe.faulty || !init.reached(oe.src) || origin[oe.dst] != kUnreached) continue;
        origin[oe.dst] = static_cast<long>(e);
        seeds.push_back(oe.dst);
    }
    return {obs_search(cc, seeds), origin};
}

ConditionResult witness_after_fault(const CompositionGraph& cc, const Search& init, const AfterFault& af,
                                    std::size_t target) {
    std::size_t seed = 0;
    auto tail = trace(cc, af.search, target, true, seed);
    ConditionResult r;
    r.present = true;
    r.witness.run = run_through(cc, init, static_cast<std::size_t>(af.origin[seed]), r.witness.fault_step);
    append(r.witness.run.steps, tail);
    return r;
}

}  // namespace

ConditionResult check_condition_i(const CompositionGraph& cc) {
    Search init = initial_obs(cc);
    AfterFault af = after_fault(cc, init);
    const std::size_t n = cc.states.size();
    auto in_r = [&](std::size_t s) { return af.search.reached(s); };

    std::vector<std::size_t> cycle;
    // An unbounded edge on any closed walk is enough.
    for (std::size_t e = 0; e < cc.obs_edges.size() && cycle.empty(); ++e) {
        const auto& oe = cc.obs_edges[e];
        if (oe.left_sup || !in_r(oe.src)) continue;
        Search back = obs_search(cc, {oe.dst});
        if (!back.reached(oe.src)) continue;
        std::size_t start = 0;
        for (const auto& st : trace(cc, back, oe.src, true, start)) cycle.push_back(st.edge);
        cycle.insert(cycle.begin(), e);
    }
    if (cycle.empty()) {
        // Bellman-Ford for a cycle with positive total supremum.
        std::vector<Rational> dist(n, Rational(0));
        std::vector<long> pred(n, kUnreached);
        long relaxed = -1;
        std::size_t count = 0;
        for (std::size_t s = 0; s < n; ++s) count += in_r(s);
        for (std::size_t round = 0; round <= count; ++round) {
            relaxed = -1;
            for (std::size_t e = 0; e < cc.obs_edges.size(); ++e) {
                const auto& oe = cc.obs_edges[e];
                if (!in_r(oe.src) || !in_r(oe.dst)) continue;
                Rational cand = dist[oe.src] - *oe.left_sup;
                if (cand < dist[oe.dst]) {
                    dist[oe.dst] = cand;
                    pred[oe.dst] = static_cast<long>(e);
                    relaxed = static_cast<long>(oe.dst);
                }
            }
            if (relaxed < 0) break;
        }
        if (relaxed >= 0) {
            auto y = static_cast<std::size_t>(relaxed);
            for (std::size_t i = 0; i < count; ++i) {
                if (pred[y] < 0) throw std::logic_error("predecessor chain left the cycle");
                y = cc.obs_edges[pred[y]].src;
            }
            std::size_t x = y;
            do {
                cycle.push_back(static_cast<std::size_t>(pred[x]));
                x = cc.obs_edges[pred[x]].src;
            } while (x != y);
            std::reverse(cycle.begin(), cycle.end());
        }
    }
    if (cycle.empty()) return {};

    ConditionResult r = witness_after_fault(cc, init, af, cc.obs_edges[cycle.front()].src);
    r.witness.cycle = cycle;
    r.witness.cycle_start = r.witness.run.steps.size();
    for (std::size_t e : cycle) r.witness.run.steps.push_back({true, e});
    return r;
}

ConditionResult check_condition_ii(const CompositionGraph& cc, const CrucialReport& cf, const CrucialReport& cn) {
    Search init = initial_obs(cc);
    AfterFault af = after_fault(cc, init);
    for (std::size_t s = 0; s < cc.states.size(); ++s)
        if (af.search.reached(s) && cf.eventually_crucial[cc.states[s].left] &&
            cn.eventually_crucial[cc.states[s].right])
            return witness_after_fault(cc, init, af, s);
    return {};
}

ConditionResult check_condition_iii(const CompositionGraph& cc, const CrucialReport& cf, const CrucialReport& cn) {
    Search init = initial_obs(cc);
    Search uo = uo_search(cc, init);
    for (std::size_t e = 0; e < cc.uo_edges.size(); ++e) {
        const auto& ue = cc.uo_edges[e];
        if (!ue.faulty || !uo.reached(ue.src)) continue;
        const auto& q = cc.states[ue.dst];
        if (!cf.eventually_crucial[q.left] || !cn.eventually_crucial[q.right]) continue;
        ConditionResult r;
        r.present = true;
        std::size_t mid = 0;
        auto segment = trace(cc, uo, ue.src, false, mid);
        r.witness.run.steps = trace(cc, init, mid, true, r.witness.run.start);
        append(r.witness.run.steps, segment);
        r.witness.fault_step = r.witness.run.steps.size();
        r.witness.run.steps.push_back({false, e});
        return r;
    }
    return {};
}

ConditionResult check_condition_iv(const CompositionGraph& cc, const CrucialReport& cf) {
    Search init = initial_obs(cc);
    const std::size_t n = cc.states.size();
    // Node 2*s + bit; bit records an anti-crucial left component seen on the segment.
    std::vector<long> parent(2 * n, kUnreached);
    std::vector<std::size_t> from(2 * n, 0);
    std::deque<std::size_t> work;
    for (std::size_t s = 0; s < n; ++s)
        if (init.reached(s)) {
            std::size_t node = 2 * s + (cf.anti_crucial[cc.states[s].left] ? 1 : 0);
            parent[node] = kSource;
            work.push_back(node);
        }
    while (!work.empty()) {
        std::size_t node = work.front();
        work.pop_front();
        std::size_t bit = node % 2;
        for (std::size_t e : cc.uo_out[node / 2]) {
            std::size_t d = cc.uo_edges[e].dst;
            std::size_t next = 2 * d + ((bit || cf.anti_crucial[cc.states[d].left]) ? 1 : 0);
            if (parent[next] == kUnreached) {
                parent[next] = static_cast<long>(e);
                from[next] = node;
                work.push_back(next);
            }
        }
    }
    for (std::size_t e = 0; e < cc.uo_edges.size(); ++e) {
        const auto& ue = cc.uo_edges[e];
        if (!ue.faulty || parent[2 * ue.src + 1] == kUnreached) continue;
        if (!cf.eventually_crucial[cc.states[ue.dst].left]) continue;
        ConditionResult r;
        r.present = true;
        std::vector<CcStep> segment;
        std::size_t node = 2 * ue.src + 1;
        while (parent[node] != kSource) {
            segment.push_back({false, static_cast<std::size_t>(parent[node])});
            node = from[node];
        }
        std::reverse(segment.begin(), segment.end());
        std::size_t cur = node / 2;
        r.witness.run.steps = trace(cc, init, cur, true, r.witness.run.start);
        if (cf.anti_crucial[cc.states[cur].left]) r.witness.anti_state = cur;
        for (const auto& st : segment) {
            cur = cc.uo_edges[st.edge].dst;
            if (!r.witness.anti_state && cf.anti_crucial[cc.states[cur].left]) r.witness.anti_state = cur;
        }
        append(r.witness.run.steps, segment);
        r.witness.fault_step = r.witness.run.steps.size();
        r.witness.run.steps.push_back({false, e});
        return r;
    }
    return {};
}

Analysis analyze(const Automaton& a, const VerifierConfig& config) {
    Analysis an;
    Automaton normalized = normalize_initial_weights(a);
    an.preprocessing.initial_weights_normalized = normalized.states().size() != a.states().size();
    an.prepared = make_stuck_free(normalized);
    an.preprocessing.stuck_states_freed = an.prepared.states().size() != normalized.states().size();
    an.preprocessing.states_added = an.prepared.states().size() - a.states().size();
    an.faulty = faulty_subautomaton(an.prepared);
    an.normal = normal_subautomaton(an.prepared);
    an.cc = build_composition(an.faulty, an.normal, config.budget);
    an.crucial_faulty = crucial_states(an.faulty);
    an.crucial_normal = crucial_states(an.normal);
    return an;
}

Verdict decide(const Analysis& an) {
    Verdict v;
    v.preprocessing = an.preprocessing;
    v.unknowns = an.cc.unknowns;
    v.conditions[0] = check_condition_i(an.cc);
    v.conditions[1] = check_condition_ii(an.cc, an.crucial_faulty, an.crucial_normal);
    v.conditions[2] = check_condition_iii(an.cc, an.crucial_faulty, an.crucial_normal);
    v.conditions[3] = check_condition_iv(an.cc, an.crucial_faulty);
    bool any = false;
    for (const auto& c : v.conditions) any = any || c.present;
    // Present conditions only use certified edges, so they stand even with unknowns.
    if (any)
        v.diagnosable = false;
    else if (!v.unknowns.empty())
        v.inconclusive = true;
    else
        v.diagnosable = true;
    return v;
}

Verdict check_diagnosability(const Automaton& a, const VerifierConfig& config) { return decide(analyze(a, config)); }

}  // namespace mpadiag
