// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "cli.hpp"
#include "fixtures.hpp"
#include "mpadiag/composition.hpp"
#include "mpadiag/crucial.hpp"
#include "mpadiag/dioid.hpp"
#include "mpadiag/epl.hpp"
#include "mpadiag/genkit.hpp"
#include "mpadiag/oracle.hpp"
#include "mpadiag/verifier.hpp"
#include "oracles.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

using namespace mpadiag;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Outcome golden(const std::string& file, const std::map<std::string, bool>& expected) {
    std::ostringstream out, err;
    int code = cli::dispatch({"check", sample_path(file), "--json"}, out, err);
    Outcome o;
    auto j = nlohmann::json::parse(out.str());
    std::string got;
    for (const auto& [name, want] : expected) {
        bool present = j["conditions"][name]["present"];
        got += name + (present ? "=P " : "=A ");
        if (present != want) o.pass = false;
    }
    if (code != 1 || j["diagnosable"] != false || j["inconclusive"] != false) o.pass = false;
    o.detail = "exit " + std::to_string(code) + ", " + got + (j["diagnosable"] == false ? "not diagnosable" : "?");
    return o;
}

// Reference composition of the first sample, with short state names.
const std::vector<std::string> kReferenceEdges{
    "00 (f,eps)/3 10",  "00 (eps,u)/-1 02", "10 (eps,u)/-1 12", "12 (u,eps)/1 12",  "12 (eps,u)/-1 12",
    "10 (u,eps)/1 10",  "02 (eps,u)/-1 02", "02 (f,eps)/3 12",  "00 (a,a)/0 34",    "12 (a,a)/0 34",
    "10 (a,a)/0 34",    "02 (a,a)/0 34",    "34 (a,a)/0 34",
};

Outcome criterion3() {
    Analysis an = analyze(load_sample("a1.mpa"));
    const auto& cc = an.cc;
    Outcome o;
    for (const auto& e : cc.obs_edges) {
        Rational l = cc.left.transition(e.left_transition).weight, r = cc.right.transition(e.right_transition).weight;
        for (std::size_t u : e.uo_walk) {
            if (cc.uo_edges[u].side == Side::Left)
                l += cc.uo_edges[u].weight;
            else
                r -= cc.uo_edges[u].weight;
        }
        if (l != r) o.pass = false;
    }
    std::vector<std::string> ref_states{"00", "02", "10", "12", "34"};
    if (cc.states.size() != ref_states.size()) return {false, std::to_string(cc.states.size()) + " states"};
    std::multiset<std::string> want(kReferenceEdges.begin(), kReferenceEdges.end());
    std::vector<std::size_t> perm(cc.states.size());
    std::iota(perm.begin(), perm.end(), 0);
    bool iso = false;
    do {
        std::multiset<std::string> got;
        auto nm = [&](std::size_t s) { return ref_states[perm[s]]; };
        for (const auto& e : cc.uo_edges) got.insert(nm(e.src) + " " + cc.uo_label(e) + " " + nm(e.dst));
        for (const auto& e : cc.obs_edges) got.insert(nm(e.src) + " " + cc.obs_label(e) + "/0 " + nm(e.dst));
        iso = got == want;
    } while (!iso && std::next_permutation(perm.begin(), perm.end()));
    if (!iso) o.pass = false;
    o.detail = std::to_string(cc.uo_edges.size()) + " uo + " + std::to_string(cc.obs_edges.size()) +
               " obs edges, " + (iso ? "isomorphic to the reference" : "NOT isomorphic to the reference");
    return o;
}

Outcome criterion4() {
    std::mt19937_64 rng(4);
    int mismatches = 0, yes = 0;
    for (int k = 0; k < 200; ++k) {
        std::vector<long> n(1 + rng() % 8);
        long total = 0;
        for (auto& v : n) total += v = 1 + long(rng() % 20);
        long N = 0;
        if (rng() % 2) {
            for (long v : n)
                if (rng() % 2) N += v;
            if (N == 0) N = n.front();
        } else {
            N = 1 + long(rng() % (total + 5));
        }
        bool ss = oracles::subset_sum(n, N);
        yes += ss;
        Verdict v = check_diagnosability(gen_subset_sum(n, N));
        if (!v.diagnosable.has_value() || *v.diagnosable != !ss) ++mismatches;
    }
    return {mismatches == 0, "200 instances (" + std::to_string(yes) + " solvable), " + std::to_string(mismatches) +
                                 " mismatches"};
}

// Largest t in 1..10 for which the oracle still finds a witness.
long last_witness_t(const Automaton& a) {
    long last = 0;
    for (long t = 1; t <= 10; ++t)
        if (find_witness(a, {Rational(t)}, 18).present) last = t;
    return last;
}

Outcome criterion5() {
    int not_diag = 0, missed = 0, inconclusive = 0, agree_diag = 0;
    std::vector<std::pair<std::uint64_t, long>> one_sided;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        std::mt19937_64 pick(seed);
        RandomParams p;
        p.states = 2 + pick() % 5;
        p.events = 2 + pick() % 3;
        p.weight_range = 3;
        Automaton a = gen_random(p, seed);
        Analysis an = analyze(a);
        Verdict v = decide(an);
        OracleResult o = find_witness(an.prepared, {1, 2, 3}, 14);
        if (v.inconclusive) {
            ++inconclusive;
            continue;
        }
        if (!*v.diagnosable) {
            ++not_diag;
            if (!o.present) ++missed;
        } else if (o.present) {
            one_sided.push_back({seed, last_witness_t(an.prepared)});
        } else {
            ++agree_diag;
        }
    }
    std::ostringstream d;
    d << not_diag << " not diagnosable (oracle missed " << missed << "), " << agree_diag << " diagnosable, "
      << inconclusive << " inconclusive, " << one_sided.size() << " one-sided";
    if (!one_sided.empty()) {
        d << "\n    one-sided seeds, with the largest t <= 10 that still has a witness (max_len 18):";
        for (auto [s, t] : one_sided) d << " " << s << ":" << t;
    }
    return {missed == 0 && one_sided.empty(), d.str()};
}

Outcome criterion6() {
    std::mt19937_64 rng(6);
    long queries = 0, failures = 0, yes = 0;
    for (int k = 0; k < 500; ++k) {
        WeightedGraph g;
        std::size_t n = 1 + rng() % 6;
        for (std::size_t v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
        std::size_t m = rng() % (2 * n + 3);
        for (std::size_t i = 0; i < m; ++i) g.add_edge(rng() % n, rng() % n, {Rational(long(rng() % 11) - 5)});
        for (int pair = 0; pair < 3; ++pair) {
            std::size_t v1 = rng() % n, v2 = rng() % n;
            auto reach = brute_force_weights(g, v1, v2, 12);
            std::set<Rational> targets;
            for (const auto& w : reach) targets.insert(w[0]);
            Rational lo = targets.empty() ? Rational(-5) : *targets.begin() - 5;
            Rational hi = targets.empty() ? Rational(5) : *targets.rbegin() + 5;
            for (Rational z = lo; z <= hi; z += 1) {
                bool achievable = targets.count(z) > 0;
                auto r = epl_decide(g, v1, v2, z);
                ++queries;
                bool ok = r.status != EplStatus::Unknown;
                if (achievable && r.status != EplStatus::Yes) ok = false;
                if (r.status == EplStatus::Yes) {
                    ++yes;
                    auto w = replay_walk(g, v1, v2, r.witness);
                    if (!w || (*w)[0] != z) ok = false;
                }
                if (!ok) ++failures;
            }
        }
    }
    return {failures == 0, std::to_string(queries) + " queries (" + std::to_string(yes) + " yes), " +
                               std::to_string(failures) + " failures"};
}

Automaton negated(const Automaton& a) {
    Automaton r;
    r.kind = DioidKind::MaxPlusQ;
    for (const auto& s : a.states()) r.add_state(s.name, s.initial, s.init_weight, s.synthetic);
    for (const auto& e : a.events()) r.add_event(e);
    for (const auto& t : a.transitions()) r.add_transition(t.src, t.event, t.dst, -t.weight);
    return r;
}

Outcome criterion7() {
    int failures = 0, with_crucial = 0, with_anti = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        std::mt19937_64 pick(seed * 7919);
        RandomParams p;
        p.states = 1 + pick() % 8;
        p.events = 2 + pick() % 3;
        p.density = 0.3 + 0.1 * double(pick() % 4);
        Automaton a = gen_random(p, seed);
        auto got = crucial_states(a);
        auto want = oracles::brute_crucial(a);
        auto neg = crucial_states(negated(a));
        bool ok = got.crucial == want.crucial && got.anti_crucial == want.anti && neg.crucial == got.anti_crucial &&
                  neg.anti_crucial == got.crucial;
        with_crucial += std::count(got.crucial.begin(), got.crucial.end(), true) > 0;
        with_anti += std::count(got.anti_crucial.begin(), got.anti_crucial.end(), true) > 0;
        if (!ok) ++failures;
    }
    return {failures == 0, "200 automata (" + std::to_string(with_crucial) + " with crucial, " +
                               std::to_string(with_anti) + " with anti-crucial states), " + std::to_string(failures) +
                               " failures"};
}

Outcome criterion8() {
    std::mt19937_64 rng(8);
    auto sample = [&]() -> DioidValue {
        switch (rng() % 20) {
        case 0: return DioidValue::neg_inf();
        case 1: return DioidValue::one();
        default: return DioidValue(Rational(long(rng() % 2001) - 1000, long(1 + rng() % 100)));
        }
    };
    const DioidValue one = DioidValue::one(), zero = DioidValue::zero();
    auto lt = canonical_lt;
    auto leq = canonical_leq;
    // Bounded search for an exponent in 1..10^6, by doubling.
    auto exists_n = [](const std::function<bool(unsigned long)>& p) {
        for (unsigned long n = 1;; n *= 2) {
            unsigned long k = std::min(n, 1000000ul);
            if (p(k)) return true;
            if (k == 1000000ul) return false;
        }
    };
    std::map<std::string, int> violations;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) violations[what]++;
    };
    for (int i = 0; i < 10000; ++i) {
        DioidValue a = sample(), b = sample(), c = sample();
        expect(oplus(a, a) == a, "idempotency");
        expect(leq(a, b) || leq(b, a), "total order");
        expect(otimes(a, oplus(b, c)) == oplus(otimes(a, b), otimes(a, c)), "distributivity");
        expect(otimes(a, zero) == zero && oplus(a, zero) == a && otimes(a, one) == a, "units");
        if (a != zero) expect((otimes(a, b) == otimes(a, c)) == (b == c) && (otimes(b, a) == otimes(c, a)) == (b == c),
                              "cancellation");
        if (a != zero && b != zero) expect(otimes(a, b) != zero, "zero divisor");
        if (leq(one, b)) expect(leq(a, otimes(a, b)) && leq(a, otimes(b, a)), "product above one is monotone");
        if (lt(one, a) && lt(a, b)) expect(lt(a, otimes(a, b)) && lt(a, otimes(b, a)), "product grows strictly");
        if (lt(a, one) && lt(b, a)) expect(lt(otimes(a, b), a) && lt(otimes(b, a), a), "product shrinks strictly");
        if (lt(one, a))
            for (unsigned long k = 1; k < 5; ++k) expect(lt(dioid_pow(a, k), dioid_pow(a, k + 1)), "powers increase");
        // Nothing lies below the zero element and it absorbs products, so the checks
        // below that need either property skip it.
        if (lt(a, one) && a != zero)
            for (unsigned long k = 1; k < 5; ++k) expect(lt(dioid_pow(a, k + 1), dioid_pow(a, k)), "powers decrease");
        if (lt(one, a) && lt(one, b)) expect(exists_n([&](unsigned long n) { return lt(b, dioid_pow(a, n)); }), "powers outgrow");
        if (lt(a, one) && lt(b, one) && a != zero && b != zero)
            expect(exists_n([&](unsigned long n) { return lt(dioid_pow(a, n), b); }), "powers undercut");
        if (lt(a, one) && lt(one, b) && a != zero)
            expect(exists_n([&](unsigned long n) { return lt(one, otimes(a, dioid_pow(b, n))); }) &&
                       exists_n([&](unsigned long m) { return lt(one, otimes(dioid_pow(b, m), a)); }),
                   "positive powers dominate");
        if (lt(a, one) && lt(one, b))
            expect(exists_n([&](unsigned long n) { return lt(otimes(dioid_pow(a, n), b), one); }) &&
                       exists_n([&](unsigned long m) { return lt(otimes(b, dioid_pow(a, m)), one); }),
                   "negative powers dominate");
        for (auto kind : {DioidKind::MaxPlusNonNegQ, DioidKind::MaxPlusN})
            if (admits(kind, a) && admits(kind, b))
                expect(admits(kind, oplus(a, b)) && admits(kind, otimes(a, b)), "closure");
    }
    int total = 0;
    std::string which;
    for (const auto& [k, v] : violations) {
        total += v;
        which += " " + k + "=" + std::to_string(v);
    }
    return {total == 0, "10000 samples, " + std::to_string(total) + " violations" + which};
}

Outcome criterion9() {
    std::mt19937_64 rng(9);
    int runs = 0, violations = 0;
    for (std::uint64_t seed = 1; runs < 100 && seed < 10000; ++seed) {
        RandomParams p;
        p.states = 3 + seed % 4;
        p.events = 4;
        p.fault_count = 1 + seed % 2;
        p.density = 0.5;
        Automaton a = make_stuck_free(gen_random(p, seed));
        auto cc = build_composition(faulty_subautomaton(a), normal_subautomaton(a));
        if (cc.uo_edges.empty()) continue;
        CcRun run{rng() % cc.states.size(), {}};
        std::size_t at = run.start, len = 1 + rng() % 10;
        while (run.steps.size() < len && !cc.uo_out[at].empty()) {
            std::size_t e = cc.uo_out[at][rng() % cc.uo_out[at].size()];
            run.steps.push_back({false, e});
            at = cc.uo_edges[e].dst;
        }
        if (run.steps.empty()) continue;
        ++runs;
        CcRun norm = normalize_unobservable_run(cc, run);
        bool ok = is_valid_run(cc, norm) && norm.start == run.start && run_end(cc, norm) == run_end(cc, run) &&
                  norm.steps.size() == run.steps.size() && left_component(cc, norm) == left_component(cc, run) &&
                  right_component(cc, norm) == right_component(cc, run);
        bool seen_right = false;
        for (const auto& s : norm.steps) {
            if (s.observable) ok = false;
            bool right = !s.observable && cc.uo_edges[s.edge].side == Side::Right;
            if (!right && seen_right) ok = false;
            seen_right = seen_right || right;
        }
        if (!ok) ++violations;
    }
    return {runs == 100 && violations == 0,
            std::to_string(runs) + " runs, " + std::to_string(violations) + " violations"};
}

Outcome criterion10() {
    int present = 0, nd = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        RandomParams p;
        p.kind = DioidKind::MaxPlusNonNegQ;
        p.states = 2 + seed % 5;
        p.events = 2 + seed % 3;
        Verdict v = check_diagnosability(gen_random(p, seed));
        present += v.conditions[3].present;
        nd += v.diagnosable == false;
    }
    return {present == 0, "100 instances (" + std::to_string(nd) + " not diagnosable), condition iv present in " +
                              std::to_string(present)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit;  // seconds
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all{
        {1, "first sample golden verdict", 1.0,
         [] { return golden("a1.mpa", {{"i", true}, {"ii", false}, {"iii", true}, {"iv", false}}); }},
        {2, "second sample golden verdict", 1.0,
         [] { return golden("a2.mpa", {{"i", false}, {"ii", false}, {"iii", false}, {"iv", true}}); }},
        {3, "composition structure", 1.0, criterion3},
        {4, "subset-sum differential", 60.0, criterion4},
        {5, "verifier vs oracle differential", 600.0, criterion5},
        {6, "exact path length solver", 120.0, criterion6},
        {7, "crucial states", 60.0, criterion7},
        {8, "dioid properties", 10.0, criterion8},
        {9, "run normalization", 60.0, criterion9},
        {10, "nonnegative weights exclude condition iv", 60.0, criterion10},
    };
    int failed = 0;
    for (const auto& c : all) {
        auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = since(start);
        bool pass = o.pass && secs < c.limit;
        failed += !pass;
        std::cout << "criterion " << std::setw(2) << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << c.name
                  << "  [" << std::fixed << std::setprecision(2) << secs << " s, limit " << std::setprecision(0)
                  << c.limit << " s]\n    " << o.detail << std::endl;
    }
    std::cout << (all.size() - failed) << "/" << all.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
