#include "mpadiag/genkit.hpp"

#include <random>
#include <stdexcept>

namespace mpadiag {

Automaton gen_subset_sum(const std::vector<long>& n_list, long N) {
    if (n_list.empty()) throw std::invalid_argument("subset sum needs at least one value");
    for (long v : n_list)
        if (v < 1) throw std::invalid_argument("subset sum values must be positive");
    if (N < 1) throw std::invalid_argument("subset sum target must be positive");

    const std::size_t m = n_list.size();
    Automaton a;
    a.kind = DioidKind::MaxPlusN;
    std::size_t u = a.add_event({"u", false, "", false});
    std::size_t u1 = a.add_event({"u1", false, "", false});
    std::size_t u2 = a.add_event({"u2", false, "", false});
    std::size_t ef = a.add_event({"ef", false, "", true});
    std::size_t ea = a.add_event({"a", true, "a", false});
    std::size_t eb = a.add_event({"b", true, "b", false});

    std::vector<std::size_t> chain;
    for (std::size_t i = 0; i <= m; ++i) chain.push_back(a.add_state("q" + std::to_string(i), i == 0, 0));
    std::string k1 = std::to_string(m + 1), k2 = std::to_string(m + 2);
    std::size_t f1 = a.add_state("q" + k1 + "_1");
    std::size_t f2 = a.add_state("q" + k2 + "_1");
    std::size_t g1 = a.add_state("q" + k1 + "_2");
    std::size_t g2 = a.add_state("q" + k2 + "_2");

    for (std::size_t i = 0; i < m; ++i) {
        a.add_transition(chain[i], u1, chain[i + 1], n_list[i]);
        a.add_transition(chain[i], u2, chain[i + 1], 0);
    }
    a.add_transition(chain[m], ea, f1, 1);
    a.add_transition(f1, ef, f2, 1);
    a.add_transition(f2, eb, f2, 1);
    a.add_transition(chain[0], ea, g1, N + 1);
    a.add_transition(g1, u, g2, 1);
    a.add_transition(g2, eb, g2, 1);
    return a;
}

bool subset_sum_exists(const std::vector<long>& n_list, long N) {
    if (n_list.size() >= 63) throw std::invalid_argument("too many values for brute force");
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n_list.size()); ++mask) {
        long sum = 0;
        for (std::size_t i = 0; i < n_list.size(); ++i)
            if (mask >> i & 1) sum += n_list[i];
        if (sum == N) return true;
    }
    return false;
}

namespace {

Automaton trim_unreachable(const Automaton& a) {
    auto keep = reachable_states(a);
    Automaton r;
    r.kind = a.kind;
    for (const auto& e : a.events()) r.add_event(e);
    std::vector<std::size_t> index(a.states().size(), 0);
    for (std::size_t q = 0; q < a.states().size(); ++q)
        if (keep[q]) index[q] = r.add_state(a.state(q).name, a.state(q).initial, a.state(q).init_weight);
    for (const auto& t : a.transitions())
        if (keep[t.src]) r.add_transition(index[t.src], t.event, index[t.dst], t.weight);
    return r;
}

}  // namespace

Automaton gen_random(const RandomParams& p, std::uint64_t seed) {
    if (p.states == 0) throw std::invalid_argument("need at least one state");
    if (p.fault_count > p.events) throw std::invalid_argument("more faults than events");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto weight = [&]() -> Rational {
        switch (p.kind) {
        case DioidKind::MaxPlusQ: return std::uniform_int_distribution<long>(-p.weight_range, p.weight_range)(rng);
        case DioidKind::MaxPlusN: return std::uniform_int_distribution<long>(0, p.weight_range)(rng);
        case DioidKind::MaxPlusNonNegQ:
            return Rational(std::uniform_int_distribution<long>(0, 2 * p.weight_range)(rng), 2);
        }
        return 0;
    };

    Automaton a;
    a.kind = p.kind;
    for (std::size_t q = 0; q < p.states; ++q) a.add_state("q" + std::to_string(q), q == 0, 0);
    std::vector<std::size_t> normal_uo;
    for (std::size_t i = 0; i < p.events; ++i) {
        Event e;
        e.name = "e" + std::to_string(i);
        if (i < p.fault_count) {
            e.fault = true;
        } else if (coin(rng) < 0.5) {
            e.observable = true;
            e.label = coin(rng) < 0.5 ? "a" : "b";
        } else {
            normal_uo.push_back(i);
        }
        a.add_event(e);
    }

    for (std::size_t q = 0; q < p.states; ++q)
        for (std::size_t e = 0; e < p.events; ++e) {
            if (!(coin(rng) < p.density)) continue;
            std::size_t d = pick(p.states);
            a.add_transition(q, e, d, weight());
            if (coin(rng) < p.density * p.density) {
                std::size_t d2 = pick(p.states);
                if (!a.has_transition(q, e, d2)) a.add_transition(q, e, d2, weight());
            }
        }

    if (!normal_uo.empty() && coin(rng) < p.cycle_bias) {
        // Loops before and after a fault make crucial states likely on both sides.
        std::size_t e = normal_uo[pick(normal_uo.size())];
        std::vector<std::size_t> spots{pick(p.states)};
        for (const auto& t : a.transitions())
            if (a.event(t.event).fault) {
                spots.push_back(t.dst);
                break;
            }
        for (std::size_t q : spots)
            if (!a.has_transition(q, e, q)) a.add_transition(q, e, q, weight());
    }
    return trim_unreachable(a);
}

}  // namespace mpadiag
