#include "cli.hpp"

#include "mpadiag/crucial.hpp"
#include "mpadiag/dot.hpp"
#include "mpadiag/epl.hpp"
#include "mpadiag/genkit.hpp"
#include "mpadiag/mpa_format.hpp"
#include "mpadiag/oracle.hpp"
#include "mpadiag/verifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mpadiag::cli {

namespace {

using nlohmann::json;

constexpr int kUsage = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

json names(const Automaton& a, const std::vector<bool>& set) {
    std::vector<std::string> v;
    for (std::size_t q = 0; q < set.size(); ++q)
        if (set[q]) v.push_back(a.state(q).name);
    std::sort(v.begin(), v.end());
    return v;
}

json path_json(const Automaton& a, const Path& p) {
    json steps = json::array();
    for (std::size_t t : p.steps) {
        const auto& tr = a.transition(t);
        steps.push_back({{"event", a.event(tr.event).name},
                         {"dst", a.state(tr.dst).name},
                         {"weight", rational_str(tr.weight)}});
    }
    return {{"start", a.state(p.start).name}, {"steps", steps}, {"weight", rational_str(path_weight(a, p))}};
}

json run_json(const CompositionGraph& cc, const CcRun& run) {
    json steps = json::array();
    for (const auto& s : run.steps) {
        if (s.observable) {
            const auto& e = cc.obs_edges[s.edge];
            steps.push_back({{"kind", "obs"},
                             {"src", cc.state_name(e.src)},
                             {"label", cc.obs_label(e)},
                             {"dst", cc.state_name(e.dst)},
                             {"faulty", e.faulty},
                             {"positive", e.positive}});
        } else {
            const auto& e = cc.uo_edges[s.edge];
            steps.push_back({{"kind", "uo"},
                             {"src", cc.state_name(e.src)},
                             {"label", cc.uo_label(e)},
                             {"dst", cc.state_name(e.dst)},
                             {"faulty", e.faulty}});
        }
    }
    return {{"start", cc.state_name(run.start)}, {"steps", steps}};
}

json cc_json(const CompositionGraph& cc) {
    json states = json::array(), initial = json::array(), uo = json::array(), obs = json::array();
    for (std::size_t s = 0; s < cc.states.size(); ++s) states.push_back(cc.state_name(s));
    for (std::size_t s : cc.initial) initial.push_back(cc.state_name(s));
    for (const auto& e : cc.uo_edges)
        uo.push_back({{"src", cc.state_name(e.src)},
                      {"dst", cc.state_name(e.dst)},
                      {"label", cc.uo_label(e)},
                      {"side", e.side == Side::Left ? "left" : "right"},
                      {"weight", rational_str(e.weight)},
                      {"faulty", e.faulty}});
    for (const auto& e : cc.obs_edges)
        obs.push_back({{"src", cc.state_name(e.src)},
                       {"dst", cc.state_name(e.dst)},
                       {"label", cc.obs_label(e)},
                       {"faulty", e.faulty},
                       {"positive", e.positive},
                       {"left_sup", e.left_sup ? json(rational_str(*e.left_sup)) : json("inf")}});
    json unknown = json::array();
    for (const auto& u : cc.unknowns)
        unknown.push_back({{"src", cc.state_name(u.src)}, {"what", u.what}, {"reason", u.reason}});
    return {{"states", states}, {"initial", initial}, {"uo_edges", uo}, {"obs_edges", obs}, {"unknowns", unknown}};
}

json verdict_json(const Analysis& an, const Verdict& v) {
    json j;
    j["diagnosable"] = v.diagnosable ? json(*v.diagnosable) : json(nullptr);
    j["inconclusive"] = v.inconclusive;
    j["conditions"] = json::object();
    j["witnesses"] = json::array();
    for (std::size_t c = 0; c < 4; ++c) {
        const auto& cond = v.conditions[c];
        j["conditions"][kConditionNames[c]] = {{"present", cond.present}};
        if (!cond.present) continue;
        json w = run_json(an.cc, cond.witness.run);
        w["condition"] = kConditionNames[c];
        w["fault_step"] = cond.witness.fault_step;
        if (!cond.witness.cycle.empty()) w["cycle_start"] = cond.witness.cycle_start;
        if (cond.witness.anti_state) w["anti_crucial_state"] = an.cc.state_name(*cond.witness.anti_state);
        j["witnesses"].push_back(w);
    }
    j["preprocessing"] = {{"initial_weights_normalized", v.preprocessing.initial_weights_normalized},
                          {"stuck_states_freed", v.preprocessing.stuck_states_freed},
                          {"states_added", v.preprocessing.states_added}};
    json unknown = json::array();
    for (const auto& u : v.unknowns)
        unknown.push_back({{"src", an.cc.state_name(u.src)}, {"what", u.what}, {"reason", u.reason}});
    j["unknowns"] = unknown;
    return j;
}

EplBudget budget_from(long max_window) {
    EplBudget b;
    if (max_window >= 0) b.max_window = max_window;
    return b;
}

int cmd_parse(const std::string& file, bool as_json, const std::string& dot, std::ostream& out) {
    Automaton a = load_automaton(file);
    if (!dot.empty()) write_file(dot, export_dot(a));
    if (as_json) {
        auto f = structural_checks(a);
        auto cls = classify_states(a);
        out << json{{"dioid", to_string(a.kind)},
                    {"states", a.states().size()},
                    {"events", a.events().size()},
                    {"transitions", a.transitions().size()},
                    {"deterministic", f.deterministic},
                    {"deadlock_free", f.deadlock_free},
                    {"divergence_free", f.divergence_free},
                    {"stuck", names(a, cls.stuck)}}
                   .dump(2)
            << "\n";
    } else {
        out << render_automaton(a);
    }
    return 0;
}

int cmd_check(const std::string& file, bool as_json, const std::string& dot, long max_window, std::ostream& out) {
    Automaton a = load_automaton(file);
    VerifierConfig cfg{budget_from(max_window)};
    Analysis an = analyze(a, cfg);
    Verdict v = decide(an);
    if (!dot.empty()) {
        const Witness* w = nullptr;
        for (const auto& c : v.conditions)
            if (c.present && !w) w = &c.witness;
        write_file(dot, w ? export_dot(an.cc, *w) : export_dot(an.cc));
    }
    if (as_json) {
        out << verdict_json(an, v).dump(2) << "\n";
    } else {
        out << "verdict: "
            << (v.inconclusive ? "inconclusive" : (*v.diagnosable ? "diagnosable" : "not diagnosable")) << "\n";
        for (std::size_t c = 0; c < 4; ++c)
            out << "  condition " << kConditionNames[c] << ": " << (v.conditions[c].present ? "present" : "absent")
                << "\n";
        for (const auto& u : v.unknowns)
            out << "  unresolved " << u.what << " query from " << an.cc.state_name(u.src) << ": " << u.reason << "\n";
    }
    if (v.inconclusive) return 2;
    return *v.diagnosable ? 0 : 1;
}

int cmd_cc(const std::string& file, const std::string& dot, const std::string& json_path, long max_window,
           std::ostream& out) {
    Automaton a = load_automaton(file);
    Analysis an = analyze(a, VerifierConfig{budget_from(max_window)});
    if (!dot.empty()) write_file(dot, export_dot(an.cc));
    if (!json_path.empty()) write_file(json_path, cc_json(an.cc).dump(2) + "\n");
    std::size_t faulty = 0, positive = 0;
    for (const auto& e : an.cc.obs_edges) {
        faulty += e.faulty;
        positive += e.positive;
    }
    out << "states: " << an.cc.states.size() << "\n"
        << "uo edges: " << an.cc.uo_edges.size() << "\n"
        << "obs edges: " << an.cc.obs_edges.size() << " (faulty " << faulty << ", positive " << positive << ")\n"
        << "unresolved queries: " << an.cc.unknowns.size() << "\n";
    return 0;
}

int cmd_crucial(const std::string& file, const std::string& which, std::ostream& out) {
    Automaton a = load_automaton(file);
    if (!which.empty()) {
        Automaton prepared = make_stuck_free(normalize_initial_weights(a));
        a = which == "faulty" ? faulty_subautomaton(prepared) : normal_subautomaton(prepared);
    }
    auto r = crucial_states(a);
    out << json{{"crucial", names(a, r.crucial)},
                {"anti_crucial", names(a, r.anti_crucial)},
                {"eventually_crucial", names(a, r.eventually_crucial)},
                {"eventually_anti", names(a, r.eventually_anti)}}
               .dump(2)
        << "\n";
    return 0;
}

int cmd_epl(const std::string& file, const std::string& from, const std::string& to, const std::string& exact,
            const std::string& gt, long max_window, bool as_json, std::ostream& out) {
    WeightedGraph g = load_weighted_graph(file);
    auto v1 = g.find_vertex(from), v2 = g.find_vertex(to);
    if (!v1) throw UsageError("unknown vertex '" + from + "'");
    if (!v2) throw UsageError("unknown vertex '" + to + "'");
    Rational z = parse_rational(exact);
    EplBudget b = budget_from(max_window);
    EplAnswer ans = gt.empty() ? epl_decide(g, *v1, *v2, z, b)
                               : epl_decide_thresholded(g, *v1, *v2, z, parse_rational(gt), b);
    std::vector<std::string> walk;
    for (std::size_t e : ans.witness) walk.push_back(g.names[g.edges[e].src] + "->" + g.names[g.edges[e].dst]);
    if (as_json) {
        json j{{"answer", to_string(ans.status)}, {"witness", walk}};
        if (!ans.reason.empty()) j["reason"] = ans.reason;
        out << j.dump(2) << "\n";
    } else {
        out << to_string(ans.status) << "\n";
        for (const auto& w : walk) out << "  " << w << "\n";
        if (!ans.reason.empty()) out << "  " << ans.reason << "\n";
    }
    return 0;
}

int cmd_oracle(const std::string& file, std::size_t max_len, const std::string& ts, bool as_json,
               std::ostream& out) {
    Automaton a = make_stuck_free(normalize_initial_weights(load_automaton(file)));
    std::vector<Rational> grid;
    for (const auto& s : split_list(ts)) grid.push_back(parse_rational(s));
    if (grid.empty()) throw UsageError("empty --t list");
    OracleResult r = find_witness(a, grid, max_len);
    if (as_json) {
        json per = json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            json item{{"t", rational_str(grid[i])}};
            if (r.per_t[i]) {
                item["pi"] = path_json(a, r.per_t[i]->pi);
                item["pi_prime"] = path_json(a, r.per_t[i]->pi_prime);
                item["pi_dprime"] = path_json(a, r.per_t[i]->pi_dprime);
            } else {
                item["pi"] = nullptr;
            }
            per.push_back(item);
        }
        out << json{{"witness_found", r.present}, {"max_len", max_len}, {"per_t", per}}.dump(2) << "\n";
    } else {
        out << (r.present ? "witness found for every t" : "no witness within the bound (not a proof of diagnosability)")
            << "\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            out << "  t=" << rational_str(grid[i]) << ": " << (r.per_t[i] ? "found" : "none") << "\n";
    }
    return 0;
}

void emit(const Automaton& a, const std::string& path, std::ostream& out) {
    if (path.empty())
        out << render_automaton(a);
    else
        write_file(path, render_automaton(a));
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fault diagnosability of labeled max-plus automata", "mpadiag"};
    app.require_subcommand(1);

    std::string file, dot, json_path, from, to, exact, gt, ts = "1,2,3", which, n_list, output;
    bool as_json = false;
    long max_window = -1, big_n = 0;
    std::size_t max_len = 12;
    std::uint64_t seed = 0;
    RandomParams rp;
    std::string dioid = "maxplus-q";

    auto* parse = app.add_subcommand("parse", "Parse an automaton and print it in canonical form");
    parse->add_option("file", file, "Automaton file")->required();
    parse->add_flag("--json", as_json, "Print structural facts as JSON");
    parse->add_option("--dot", dot, "Write the automaton as DOT");

    auto* check = app.add_subcommand("check", "Decide diagnosability");
    check->add_option("file", file, "Automaton file")->required();
    check->add_flag("--json", as_json, "Print the verdict as JSON");
    check->add_option("--dot-witness", dot, "Write the composition with the first witness highlighted");
    check->add_option("--max-window", max_window, "Cap on the weight window of exact-weight searches");

    auto* cc = app.add_subcommand("cc", "Build the concurrent composition");
    cc->add_option("file", file, "Automaton file")->required();
    cc->add_option("--dot", dot, "Write DOT");
    cc->add_option("--json", json_path, "Write JSON");
    cc->add_option("--max-window", max_window, "Cap on the weight window of exact-weight searches");

    auto* crucial = app.add_subcommand("crucial", "List crucial and anti-crucial states as JSON");
    crucial->add_option("file", file, "Automaton file")->required();
    crucial->add_option("--subautomaton", which, "faulty or normal")->check(CLI::IsMember({"faulty", "normal"}));

    auto* epl = app.add_subcommand("epl", "Exact path weight query on a weighted graph");
    epl->add_option("file", file, "Weighted graph file")->required();
    epl->add_option("--from", from, "Source vertex")->required();
    epl->add_option("--to", to, "Target vertex")->required();
    epl->add_option("--exact", exact, "Required weight on the first dimension")->required();
    epl->add_option("--gt", gt, "Second-dimension weight must exceed this");
    epl->add_option("--max-window", max_window, "Cap on the weight window");
    epl->add_flag("--json", as_json, "Print JSON");

    auto* oracle = app.add_subcommand("oracle", "Bounded search for a non-diagnosability witness");
    oracle->add_option("file", file, "Automaton file")->required();
    oracle->add_option("--max-len", max_len, "Longest path considered");
    oracle->add_option("--t", ts, "Comma-separated thresholds");
    oracle->add_flag("--json", as_json, "Print JSON");

    auto* gen_ss = app.add_subcommand("gen-ss", "Automaton encoding a subset-sum instance");
    gen_ss->add_option("--n", n_list, "Comma-separated positive integers")->required();
    gen_ss->add_option("--N", big_n, "Target sum")->required();
    gen_ss->add_option("-o,--output", output, "Output file (default: standard output)");

    auto* gen_rand = app.add_subcommand("gen-rand", "Seeded random automaton");
    gen_rand->add_option("--seed", seed, "Random seed")->required();
    gen_rand->add_option("--states", rp.states, "Number of states");
    gen_rand->add_option("--events", rp.events, "Number of events");
    gen_rand->add_option("--faults", rp.fault_count, "Number of faulty events");
    gen_rand->add_option("--weight-range", rp.weight_range, "Largest absolute weight");
    gen_rand->add_option("--density", rp.density, "Transition density in [0,1]");
    gen_rand->add_option("--dioid", dioid, "maxplus-q, maxplus-nonneg-q or maxplus-n");
    gen_rand->add_option("-o,--output", output, "Output file (default: standard output)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*parse) return cmd_parse(file, as_json, dot, out);
        if (*check) return cmd_check(file, as_json, dot, max_window, out);
        if (*cc) return cmd_cc(file, dot, json_path, max_window, out);
        if (*crucial) return cmd_crucial(file, which, out);
        if (*epl) return cmd_epl(file, from, to, exact, gt, max_window, as_json, out);
        if (*oracle) return cmd_oracle(file, max_len, ts, as_json, out);
        if (*gen_ss) {
            std::vector<long> values;
            for (const auto& s : split_list(n_list)) values.push_back(std::stol(s));
            emit(gen_subset_sum(values, big_n), output, out);
            return 0;
        }
        if (*gen_rand) {
            auto kind = parse_dioid_kind(dioid);
            if (!kind) throw UsageError("unknown dioid '" + dioid + "'");
            rp.kind = *kind;
            emit(gen_random(rp, seed), output, out);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace mpadiag::cli
