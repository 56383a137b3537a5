#include "doctest.h"

#include "fixtures.hpp"
#include "mpadiag/composition.hpp"
#include "mpadiag/genkit.hpp"
#include "oracles.hpp"

#include <map>
#include <random>

using namespace mpadiag;

namespace {

CompositionGraph cc_of(const Automaton& a) {
    return build_composition(faulty_subautomaton(a), normal_subautomaton(a));
}

std::multiset<std::string> uo_multiset(const CompositionGraph& cc) {
    std::multiset<std::string> out;
    for (const auto& e : cc.uo_edges)
        out.insert(cc.state_name(e.src) + " " + cc.uo_label(e) + " " + cc.state_name(e.dst));
    return out;
}

const ObsEdge* obs(const CompositionGraph& cc, const std::string& src, const std::string& dst) {
    for (const auto& e : cc.obs_edges)
        if (cc.state_name(e.src) == src && cc.state_name(e.dst) == dst) return &e;
    return nullptr;
}

// Left and right weights of the recorded realization of e.
std::pair<Rational, Rational> realized(const CompositionGraph& cc, const ObsEdge& e) {
    Rational left = cc.left.transition(e.left_transition).weight;
    Rational right = cc.right.transition(e.right_transition).weight;
    std::size_t at = e.src;
    for (std::size_t u : e.uo_walk) {
        const auto& ue = cc.uo_edges.at(u);
        CHECK(ue.src == at);
        at = ue.dst;
        if (ue.side == Side::Left)
            left += ue.weight;
        else
            right -= ue.weight;
    }
    return {left, right};
}

}  // namespace

TEST_CASE("unobservable edges of the first sample") {
    auto cc = cc_of(load_sample("a1.mpa"));
    CHECK(cc.states.size() == 5);
    CHECK(uo_multiset(cc) == std::multiset<std::string>{
                                 "(q0,q0) (f,eps)/3 (q1,q0)",
                                 "(q0,q0) (eps,u)/-1 (q0,q2)",
                                 "(q1,q0) (eps,u)/-1 (q1,q2)",
                                 "(q1,q0) (u,eps)/1 (q1,q0)",
                                 "(q1,q2) (u,eps)/1 (q1,q2)",
                                 "(q1,q2) (eps,u)/-1 (q1,q2)",
                                 "(q0,q2) (eps,u)/-1 (q0,q2)",
                                 "(q0,q2) (f,eps)/3 (q1,q2)",
                             });
    for (const auto& e : cc.uo_edges) CHECK(e.faulty == (cc.uo_label(e).rfind("(f,", 0) == 0));
}

TEST_CASE("observable edges of the first sample") {
    auto cc = cc_of(load_sample("a1.mpa"));
    REQUIRE(cc.obs_edges.size() == 5);
    for (const char* src : {"(q0,q0)", "(q0,q2)", "(q1,q0)", "(q1,q2)", "(q3,q4)"}) {
        const ObsEdge* e = obs(cc, src, "(q3,q4)");
        REQUIRE(e);
        CHECK(cc.obs_label(*e) == "(a,a)");
    }
    const ObsEdge* first = obs(cc, "(q0,q0)", "(q3,q4)");
    CHECK(first->faulty);
    CHECK(first->positive);
    const ObsEdge* loop = obs(cc, "(q3,q4)", "(q3,q4)");
    CHECK_FALSE(loop->faulty);
    CHECK(loop->positive);
    REQUIRE(loop->left_sup.has_value());
    CHECK(*loop->left_sup == 1);
    CHECK_FALSE(obs(cc, "(q1,q0)", "(q3,q4)")->faulty);
    CHECK(cc.unknowns.empty());
}

TEST_CASE("the realization of an observable edge has equal weights") {
    auto cc = cc_of(load_sample("a1.mpa"));
    auto [left, right] = realized(cc, *obs(cc, "(q0,q0)", "(q3,q4)"));
    CHECK(left == right);
    CHECK(left == 4);
}

TEST_CASE("second sample has no observable edges") {
    auto cc = cc_of(load_sample("a2.mpa"));
    CHECK(cc.obs_edges.empty());
    CHECK_FALSE(cc.uo_edges.empty());
}

TEST_CASE("no unobservable left events") {
    Automaton a = parse_automaton_string(
        "mpa 1\ndioid maxplus-q\nstate p init\nstate r\nevent a obs a\nevent f obs a fault\n"
        "trans p f r 1\ntrans p a r 1\ntrans r a r 1\n");
    auto cc = cc_of(a);
    for (const auto& e : cc.uo_edges) CHECK(e.side == Side::Right);
    CHECK_FALSE(cc.obs_edges.empty());
}

TEST_CASE("fault-free self composition pairs each uo edge with its mirror") {
    Automaton a = parse_automaton_string(
        "mpa 1\ndioid maxplus-q\nstate p init\nstate r\nevent u uo\nevent a obs a\n"
        "trans p u r 2\ntrans r u p -1\ntrans r a p 0\n");
    auto cc = build_composition(a, a);
    std::map<std::size_t, int> balance;
    for (const auto& e : cc.uo_edges) {
        auto s = cc.states[e.src], d = cc.states[e.dst];
        if (e.side == Side::Left) {
            CHECK(s.right == d.right);
            CHECK(e.weight == cc.left.transition(e.transition).weight);
            balance[e.transition]++;
        } else {
            CHECK(s.left == d.left);
            CHECK(e.weight == -cc.right.transition(e.transition).weight);
            balance[e.transition]--;
        }
    }
    for (auto [k, v] : balance) CHECK(v == 0);
}

TEST_CASE("positive cycles") {
    auto cc = cc_of(load_sample("a1.mpa"));
    const ObsEdge* loop = obs(cc, "(q3,q4)", "(q3,q4)");
    std::size_t idx = loop - cc.obs_edges.data();
    CHECK(positive_simple_cycle(cc, {idx}));

    Automaton zero = parse_automaton_string("mpa 1\ndioid maxplus-q\nstate p init\nevent a obs a\ntrans p a p 0\n");
    auto z = build_composition(zero, zero);
    REQUIRE(z.obs_edges.size() == 1);
    CHECK_FALSE(z.obs_edges[0].positive);
    CHECK_FALSE(positive_simple_cycle(z, {0}));

    // x to y admits left weights -1 and 2, y back to x only -1.
    Automaton two = parse_automaton_string(
        "mpa 1\ndioid maxplus-q\nstate x init\nstate x2\nstate y\nevent a obs a\nevent u uo\n"
        "trans x a y -1\ntrans x u x2 3\ntrans x2 a y -1\ntrans y a x -1\n");
    auto t = build_composition(two, two);
    const ObsEdge* go = obs(t, "(x,x)", "(y,y)");
    const ObsEdge* back = obs(t, "(y,y)", "(x,x)");
    REQUIRE(go);
    REQUIRE(back);
    CHECK(*go->left_sup == 2);
    CHECK(*back->left_sup == -1);
    CHECK(positive_simple_cycle(t, {std::size_t(go - t.obs_edges.data()), std::size_t(back - t.obs_edges.data())}));
}

TEST_CASE("normalizing the five step run") {
    // Left: q1 -e1-> q3 -e3-> q5 -e4-> q6; right: q2 -e2-> q4 -e5-> q7.
    std::string events = "event e1 uo\nevent e2 uo\nevent e3 uo\nevent e4 uo\nevent e5 uo\n";
    Automaton left = parse_automaton_string("mpa 1\ndioid maxplus-q\nstate q1 init\nstate q3\nstate q5\nstate q6\n" +
                                            events + "trans q1 e1 q3 1\ntrans q3 e3 q5 2\ntrans q5 e4 q6 3\n");
    Automaton right = parse_automaton_string("mpa 1\ndioid maxplus-q\nstate q2 init\nstate q4\nstate q7\n" + events +
                                             "trans q2 e2 q4 1\ntrans q4 e5 q7 1\n");
    auto cc = build_composition(left, right);
    auto step = [&](std::size_t at, Side side, std::size_t t) {
        auto e = cc.find_uo_edge(at, side, t);
        REQUIRE(e.has_value());
        return *e;
    };
    CcRun run{cc.initial.front(), {}};
    std::size_t at = run.start;
    std::vector<std::pair<Side, std::size_t>> order{
        {Side::Left, 0}, {Side::Right, 0}, {Side::Left, 1}, {Side::Left, 2}, {Side::Right, 1}};
    for (auto [side, t] : order) {
        std::size_t e = step(at, side, t);
        run.steps.push_back({false, e});
        at = cc.uo_edges[e].dst;
    }
    REQUIRE(is_valid_run(cc, run));
    CHECK(cc.state_name(run_end(cc, run)) == "(q6,q7)");

    CcRun norm = normalize_unobservable_run(cc, run);
    REQUIRE(is_valid_run(cc, norm));
    std::vector<std::string> names{cc.state_name(norm.start)};
    for (const auto& s : norm.steps) names.push_back(cc.state_name(cc.uo_edges[s.edge].dst));
    CHECK(names == std::vector<std::string>{"(q1,q2)", "(q3,q2)", "(q5,q2)", "(q6,q2)", "(q6,q4)", "(q6,q7)"});
    CHECK(left_component(cc, norm) == left_component(cc, run));
    CHECK(right_component(cc, norm) == right_component(cc, run));

    CcRun again = normalize_unobservable_run(cc, norm);
    CHECK(again.steps == norm.steps);

    CcRun only_left{run.start, {norm.steps[0], norm.steps[1]}};
    CHECK(normalize_unobservable_run(cc, only_left).steps == only_left.steps);
}

TEST_CASE("observable edges match path pair enumeration") {
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        RandomParams p;
        p.states = 3 + seed % 3;
        p.events = 3;
        p.weight_range = 2;
        p.cycle_bias = 0;
        Automaton a = make_stuck_free(gen_random(p, seed));
        Automaton af = faulty_subautomaton(a), an = normal_subautomaton(a);
        auto cc = build_composition(af, an);
        REQUIRE(cc.unknowns.empty());
        std::set<oracles::ObsKey> built;
        for (const auto& e : cc.obs_edges)
            built.insert({cc.state_name(e.src), cc.left.event(e.left_event).name, cc.right.event(e.right_event).name,
                          cc.state_name(e.dst)});
        auto brute = oracles::brute_obs_edges(af, an, 8);
        // Every enumerated edge must be found; built edges beyond the bound must still be realizable.
        for (const auto& k : brute) CHECK(built.count(k) == 1);
        for (const auto& e : cc.obs_edges) {
            auto [l, r] = realized(cc, e);
            CHECK(l == r);
        }
        compared += brute == built;
    }
    CHECK(compared > 40);
}
