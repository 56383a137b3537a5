#include "mpadiag/crucial.hpp"

#include <algorithm>
#include <functional>

namespace mpadiag {

std::vector<int> uo_components(const Automaton& a, const std::vector<bool>& keep, int& count) {
    const std::size_t n = a.states().size();
    std::vector<int> comp(n, -1), low(n, 0), num(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int counter = 0;
    count = 0;

    // Iterative Tarjan: frames hold (vertex, next out-edge position).
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (!keep[root] || num[root] >= 0) continue;
        frames.push_back({root, 0});
        num[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            const auto& outs = a.out()[v];
            if (pos < outs.size()) {
                std::size_t t = outs[pos++];
                if (a.is_observable(t)) continue;
                std::size_t w = a.transition(t).dst;
                if (!keep[w]) continue;
                if (num[w] < 0) {
                    num[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], num[w]);
                }
                continue;
            }
            std::size_t done = v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
            if (low[done] == num[done]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                } while (w != done);
                ++count;
            }
        }
    }
    return comp;
}

namespace {

// Does the component contain a cycle whose weight has the given sign?
bool has_signed_cycle(const Automaton& a, const std::vector<int>& comp, int c,
                      const std::vector<std::size_t>& members, int sign) {
    std::vector<std::size_t> edges;
    for (std::size_t v : members)
        for (std::size_t t : a.out()[v])
            if (!a.is_observable(t) && comp[a.transition(t).dst] == c) edges.push_back(t);
    if (edges.empty()) return false;
    // Negative cycle on -sign*w from a virtual source (all distances 0).
    std::vector<Rational> dist(a.states().size(), Rational(0));
    for (std::size_t round = 0; round <= members.size(); ++round) {
        bool changed = false;
        for (std::size_t t : edges) {
            const auto& tr = a.transition(t);
            Rational cand = dist[tr.src] - sign * tr.weight;
            if (cand < dist[tr.dst]) {
                dist[tr.dst] = cand;
                changed = true;
            }
        }
        if (!changed) return false;
    }
    return true;
}

std::vector<bool> backward_uo_closure(const Automaton& a, const std::vector<bool>& keep, std::vector<bool> seed) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& tr : a.transitions()) {
            if (a.event(tr.event).observable || !keep[tr.src]) continue;
            if (seed[tr.dst] && !seed[tr.src]) {
                seed[tr.src] = true;
                changed = true;
            }
        }
    }
    return seed;
}

}  // namespace

CrucialReport crucial_states(const Automaton& a) {
    const std::size_t n = a.states().size();
    std::vector<bool> keep = reachable_states(a);
    int count = 0;
    std::vector<int> comp = uo_components(a, keep, count);
    std::vector<std::vector<std::size_t>> members(count);
    for (std::size_t v = 0; v < n; ++v)
        if (comp[v] >= 0) members[comp[v]].push_back(v);

    CrucialReport r;
    r.crucial.assign(n, false);
    r.anti_crucial.assign(n, false);
    for (int c = 0; c < count; ++c) {
        bool pos = has_signed_cycle(a, comp, c, members[c], 1);
        bool neg = has_signed_cycle(a, comp, c, members[c], -1);
        for (std::size_t v : members[c]) {
            r.crucial[v] = pos;
            r.anti_crucial[v] = neg;
        }
    }
    r.eventually_crucial = backward_uo_closure(a, keep, r.crucial);
    r.eventually_anti = backward_uo_closure(a, keep, r.anti_crucial);
    return r;
}

}  // namespace mpadiag
