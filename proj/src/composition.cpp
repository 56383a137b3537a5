#include "mpadiag/composition.hpp"

#include <deque>
#include <stdexcept>

namespace mpadiag {

namespace {

constexpr std::int64_t kMaxScaled = std::int64_t(1) << 40;

std::int64_t scaled(const Rational& q, const mpz_class& factor) {
    mpz_class v = q.get_num() * (factor / q.get_den());
    if (abs(v) > kMaxScaled) throw std::runtime_error("weights too large for exact integer search");
    return v.get_si();
}

// Uo graph over all (left, right) pairs; vertex = l * |Qn| + r.
struct UoGraph {
    epl::IntGraph g;
    std::vector<Side> side;
    std::vector<std::size_t> transition;
    std::vector<bool> faulty;
};

UoGraph build_uo_graph(const Automaton& af, const Automaton& an, const mpz_class& factor) {
    const std::size_t nf = af.states().size(), nn = an.states().size();
    UoGraph u{epl::IntGraph(nf * nn), {}, {}, {}};
    for (std::size_t l = 0; l < nf; ++l)
        for (std::size_t r = 0; r < nn; ++r) {
            auto v = static_cast<std::uint32_t>(l * nn + r);
            for (std::size_t t : af.out()[l]) {
                if (af.is_observable(t)) continue;
                const auto& tr = af.transition(t);
                std::int64_t w = scaled(tr.weight, factor);
                u.g.add_edge(v, static_cast<std::uint32_t>(tr.dst * nn + r), w, w);
                u.side.push_back(Side::Left);
                u.transition.push_back(t);
                u.faulty.push_back(af.is_faulty(t));
            }
            for (std::size_t t : an.out()[r]) {
                if (an.is_observable(t) || an.is_faulty(t)) continue;
                const auto& tr = an.transition(t);
                u.g.add_edge(v, static_cast<std::uint32_t>(l * nn + tr.dst), -scaled(tr.weight, factor), 0);
                u.side.push_back(Side::Right);
                u.transition.push_back(t);
                u.faulty.push_back(false);
            }
        }
    return u;
}

// Same graph doubled with a "fault seen" bit: vertex = 2 * v + bit.
epl::IntGraph fault_bit_graph(const UoGraph& u) {
    epl::IntGraph d(2 * u.g.size());
    for (std::size_t e = 0; e < u.g.edges().size(); ++e) {
        const auto& ed = u.g.edges()[e];
        for (std::uint32_t bit = 0; bit < 2; ++bit) {
            std::uint32_t nb = (bit || u.faulty[e]) ? 1 : 0;
            d.add_edge(2 * ed.src + bit, 2 * ed.dst + nb, ed.w1, 0);
        }
    }
    return d;
}

}  // namespace

std::optional<std::size_t> CompositionGraph::find_state(std::size_t l, std::size_t r) const {
    auto it = index.find({l, r});
    if (it == index.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> CompositionGraph::find_uo_edge(std::size_t src, Side side, std::size_t transition) const {
    auto it = uo_index.find({src, side == Side::Left ? 0 : 1, transition});
    if (it == uo_index.end()) return std::nullopt;
    return it->second;
}

std::string CompositionGraph::state_name(std::size_t s) const {
    return "(" + left.state(states[s].left).name + "," + right.state(states[s].right).name + ")";
}

std::string CompositionGraph::uo_label(const UoEdge& e) const {
    if (e.side == Side::Left)
        return "(" + left.event(left.transition(e.transition).event).name + ",eps)/" + rational_str(e.weight);
    return "(eps," + right.event(right.transition(e.transition).event).name + ")/" + rational_str(e.weight);
}

std::string CompositionGraph::obs_label(const ObsEdge& e) const {
    return "(" + left.event(e.left_event).name + "," + right.event(e.right_event).name + ")";
}

CompositionGraph build_composition(const Automaton& af, const Automaton& an, const EplBudget& budget) {
    CompositionGraph cc;
    cc.left = af;
    cc.right = an;
    const std::size_t nn = an.states().size();

    mpz_class factor = 1;
    for (const auto* a : {&af, &an})
        for (const auto& t : a->transitions())
            mpz_lcm(factor.get_mpz_t(), factor.get_mpz_t(), t.weight.get_den_mpz_t());
    UoGraph u = build_uo_graph(af, an, factor);
    std::optional<epl::IntGraph> doubled;

    std::vector<std::size_t> obs_f, obs_n;
    std::int64_t max_f = 0, max_n = 0;
    for (std::size_t t = 0; t < af.transitions().size(); ++t)
        if (af.is_observable(t)) {
            obs_f.push_back(t);
            max_f = std::max(max_f, std::abs(scaled(af.transition(t).weight, factor)));
        }
    for (std::size_t t = 0; t < an.transitions().size(); ++t)
        if (an.is_observable(t) && !an.is_faulty(t)) {
            obs_n.push_back(t);
            max_n = std::max(max_n, std::abs(scaled(an.transition(t).weight, factor)));
        }

    std::deque<std::size_t> work;
    auto intern = [&](std::size_t l, std::size_t r) {
        auto [it, fresh] = cc.index.emplace(std::make_pair(l, r), cc.states.size());
        if (fresh) {
            cc.states.push_back({l, r});
            cc.uo_out.emplace_back();
            cc.obs_out.emplace_back();
            work.push_back(it->second);
        }
        return it->second;
    };
    for (std::size_t l : af.initial_states())
        for (std::size_t r : an.initial_states()) cc.initial.push_back(intern(l, r));

    // uo edges of each state are added first, so every explored state has them.
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, std::size_t> obs_index;
    std::vector<std::size_t> pending_obs;
    auto add_uo_edges = [&](std::size_t s) {
        auto v = static_cast<std::uint32_t>(cc.states[s].left * nn + cc.states[s].right);
        for (std::uint32_t e : u.g.out(v)) {
            const auto& ed = u.g.edges()[e];
            std::size_t dst = intern(ed.dst / nn, ed.dst % nn);
            UoEdge ue;
            ue.src = s;
            ue.dst = dst;
            ue.side = u.side[e];
            ue.transition = u.transition[e];
            ue.weight = ue.side == Side::Left ? af.transition(ue.transition).weight
                                              : Rational(-an.transition(ue.transition).weight);
            ue.faulty = u.faulty[e];
            cc.uo_index[{s, ue.side == Side::Left ? 0 : 1, ue.transition}] = cc.uo_edges.size();
            cc.uo_out[s].push_back(cc.uo_edges.size());
            cc.uo_edges.push_back(ue);
        }
    };
    auto to_cc_walk = [&](std::size_t s, const std::vector<std::uint32_t>& walk) {
        std::vector<std::size_t> out;
        std::size_t cur = s;
        for (std::uint32_t e : walk) {
            std::size_t id = *cc.find_uo_edge(cur, u.side[e], u.transition[e]);
            out.push_back(id);
            cur = cc.uo_edges[id].dst;
        }
        return out;
    };

    std::size_t processed = 0;
    std::vector<std::size_t> order;
    while (!work.empty()) {
        std::size_t s = work.front();
        work.pop_front();
        add_uo_edges(s);
        order.push_back(s);
        // Obs discovery is deferred until the whole uo closure of s exists.
        while (processed < order.size() && work.empty()) {
            std::size_t src = order[processed++];
            auto v = static_cast<std::uint32_t>(cc.states[src].left * nn + cc.states[src].right);
            epl::Explorer ex(u.g, v, max_f + max_n, budget, true);
            std::optional<epl::Explorer> fx;
            for (std::size_t t1 : obs_f) {
                const auto& tr1 = af.transition(t1);
                const auto& ev1 = af.event(tr1.event);
                std::int64_t m1 = scaled(tr1.weight, factor);
                for (std::size_t t2 : obs_n) {
                    const auto& tr2 = an.transition(t2);
                    if (an.event(tr2.event).label != ev1.label) continue;
                    std::int64_t z = scaled(tr2.weight, factor) - m1;
                    auto via = static_cast<std::uint32_t>(tr1.src * nn + tr2.src);
                    if (!ex.reached(via, z)) {
                        if (!ex.complete())
                            cc.unknowns.push_back({src, t1, t2, "existence", ex.reason()});
                        continue;
                    }
                    epl::Best b = ex.best(via, z);
                    std::optional<Rational> sup;
                    if (b.kind == epl::Best::Finite) sup = Rational(b.value + m1, 1) / Rational(factor);
                    if (!ex.complete()) cc.unknowns.push_back({src, t1, t2, "left supremum", ex.reason()});

                    bool faulty = ev1.fault;
                    if (!faulty) {
                        if (!fx) {
                            if (!doubled) doubled = fault_bit_graph(u);
                            fx.emplace(*doubled, 2 * v, max_f + max_n, budget, false);
                        }
                        faulty = fx->reached(2 * via + 1, z);
                        if (!faulty && !fx->complete())
                            cc.unknowns.push_back({src, t1, t2, "fault flag", fx->reason()});
                    }

                    std::size_t dst = intern(tr1.dst, tr2.dst);
                    auto key = std::make_tuple(src, tr1.event, tr2.event, dst);
                    auto it = obs_index.find(key);
                    if (it == obs_index.end()) {
                        ObsEdge oe;
                        oe.src = src;
                        oe.dst = dst;
                        oe.left_event = tr1.event;
                        oe.right_event = tr2.event;
                        oe.faulty = faulty;
                        oe.left_sup = sup;
                        oe.positive = !sup || *sup > 0;
                        oe.uo_walk = to_cc_walk(src, ex.walk(via, z));
                        oe.left_transition = t1;
                        oe.right_transition = t2;
                        obs_index[key] = cc.obs_edges.size();
                        cc.obs_out[src].push_back(cc.obs_edges.size());
                        cc.obs_edges.push_back(std::move(oe));
                    } else {
                        ObsEdge& oe = cc.obs_edges[it->second];
                        oe.faulty = oe.faulty || faulty;
                        if (oe.left_sup && (!sup || *sup > *oe.left_sup)) oe.left_sup = sup;
                        oe.positive = !oe.left_sup || *oe.left_sup > 0;
                    }
                }
            }
        }
    }
    return cc;
}

bool positive_simple_cycle(const CompositionGraph& cc, const std::vector<std::size_t>& cycle) {
    if (cycle.empty()) return false;
    Rational total = 0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const ObsEdge& e = cc.obs_edges.at(cycle[i]);
        if (e.dst != cc.obs_edges.at(cycle[(i + 1) % cycle.size()]).src)
            throw std::invalid_argument("edges do not form a cycle");
        if (!e.left_sup) return true;
        total += *e.left_sup;
    }
    return total > 0;
}

std::size_t run_end(const CompositionGraph& cc, const CcRun& run) {
    std::size_t cur = run.start;
    for (const auto& s : run.steps) cur = s.observable ? cc.obs_edges[s.edge].dst : cc.uo_edges[s.edge].dst;
    return cur;
}

bool is_valid_run(const CompositionGraph& cc, const CcRun& run) {
    if (run.start >= cc.states.size()) return false;
    std::size_t cur = run.start;
    for (const auto& s : run.steps) {
        if (s.observable) {
            if (s.edge >= cc.obs_edges.size() || cc.obs_edges[s.edge].src != cur) return false;
            cur = cc.obs_edges[s.edge].dst;
        } else {
            if (s.edge >= cc.uo_edges.size() || cc.uo_edges[s.edge].src != cur) return false;
            cur = cc.uo_edges[s.edge].dst;
        }
    }
    return true;
}

namespace {

std::vector<std::size_t> component(const CompositionGraph& cc, const CcRun& run, Side side) {
    std::vector<std::size_t> out;
    for (const auto& s : run.steps) {
        if (s.observable) {
            const ObsEdge& e = cc.obs_edges[s.edge];
            for (std::size_t id : e.uo_walk)
                if (cc.uo_edges[id].side == side) out.push_back(cc.uo_edges[id].transition);
            out.push_back(side == Side::Left ? e.left_transition : e.right_transition);
        } else if (cc.uo_edges[s.edge].side == side) {
            out.push_back(cc.uo_edges[s.edge].transition);
        }
    }
    return out;
}

}  // namespace

std::vector<std::size_t> left_component(const CompositionGraph& cc, const CcRun& run) {
    return component(cc, run, Side::Left);
}

std::vector<std::size_t> right_component(const CompositionGraph& cc, const CcRun& run) {
    return component(cc, run, Side::Right);
}

CcRun normalize_unobservable_run(const CompositionGraph& cc, const CcRun& run) {
    for (const auto& s : run.steps)
        if (s.observable) throw std::invalid_argument("run contains an observable step");
    CcRun out{run.start, {}};
    std::size_t cur = run.start;
    for (Side side : {Side::Left, Side::Right})
        for (const auto& s : run.steps) {
            const UoEdge& e = cc.uo_edges[s.edge];
            if (e.side != side) continue;
            auto id = cc.find_uo_edge(cur, side, e.transition);
            if (!id) throw std::logic_error("reordered step missing from the composition");
            out.steps.push_back({false, *id});
            cur = cc.uo_edges[*id].dst;
        }
    return out;
}

}  // namespace mpadiag
