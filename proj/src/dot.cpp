#include "mpadiag/dot.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace mpadiag {

namespace {

std::string quote(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r + "\"";
}

struct DotEdge {
    std::string src, dst, label, attrs;
    bool operator<(const DotEdge& o) const {
        return std::tie(src, dst, label, attrs) < std::tie(o.src, o.dst, o.label, o.attrs);
    }
};

std::string render(const std::string& name, const std::vector<std::string>& nodes,
                   const std::vector<std::string>& initial, const std::vector<DotEdge>& edges) {
    std::vector<std::string> sorted_nodes = nodes;
    std::sort(sorted_nodes.begin(), sorted_nodes.end());
    std::vector<std::string> sorted_init = initial;
    std::sort(sorted_init.begin(), sorted_init.end());
    std::vector<DotEdge> sorted_edges = edges;
    std::sort(sorted_edges.begin(), sorted_edges.end());

    std::ostringstream os;
    os << "digraph " << quote(name) << " {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=circle];\n";
    for (const auto& n : sorted_nodes) os << "  " << quote(n) << ";\n";
    for (std::size_t i = 0; i < sorted_init.size(); ++i) {
        std::string start = "__start" + std::to_string(i);
        os << "  " << quote(start) << " [shape=point];\n";
        os << "  " << quote(start) << " -> " << quote(sorted_init[i]) << ";\n";
    }
    for (const auto& e : sorted_edges) {
        os << "  " << quote(e.src) << " -> " << quote(e.dst) << " [label=" << quote(e.label);
        if (!e.attrs.empty()) os << ", " << e.attrs;
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::string cc_dot(const CompositionGraph& cc, const Witness* w) {
    std::set<std::size_t> hl_uo, hl_obs;
    if (w)
        for (const auto& s : w->run.steps) (s.observable ? hl_obs : hl_uo).insert(s.edge);
    std::vector<std::string> nodes, initial;
    for (std::size_t s = 0; s < cc.states.size(); ++s) nodes.push_back(cc.state_name(s));
    for (std::size_t s : cc.initial) initial.push_back(cc.state_name(s));
    std::vector<DotEdge> edges;
    for (std::size_t i = 0; i < cc.uo_edges.size(); ++i) {
        const auto& e = cc.uo_edges[i];
        std::string attrs = "style=dashed";
        if (e.faulty) attrs += ", color=red";
        if (hl_uo.count(i)) attrs += ", penwidth=3";
        edges.push_back({cc.state_name(e.src), cc.state_name(e.dst), cc.uo_label(e), attrs});
    }
    for (std::size_t i = 0; i < cc.obs_edges.size(); ++i) {
        const auto& e = cc.obs_edges[i];
        std::string label = cc.obs_label(e) + "/0";
        if (e.positive) label += " +";
        std::string attrs = e.faulty ? "color=red" : "";
        if (hl_obs.count(i)) attrs += attrs.empty() ? "penwidth=3" : ", penwidth=3";
        edges.push_back({cc.state_name(e.src), cc.state_name(e.dst), label, attrs});
    }
    return render(w ? "witness" : "composition", nodes, initial, edges);
}

}  // namespace

std::string export_dot(const Automaton& a) {
    std::vector<std::string> nodes, initial;
    for (const auto& s : a.states()) {
        nodes.push_back(s.name);
        if (s.initial) initial.push_back(s.name);
    }
    std::vector<DotEdge> edges;
    for (const auto& t : a.transitions()) {
        const Event& e = a.event(t.event);
        std::string attrs;
        if (!e.observable) attrs = "style=dashed";
        if (e.fault) attrs += attrs.empty() ? "color=red" : ", color=red";
        edges.push_back({a.state(t.src).name, a.state(t.dst).name, e.name + "/" + rational_str(t.weight), attrs});
    }
    return render("automaton", nodes, initial, edges);
}

std::string export_dot(const CompositionGraph& cc) { return cc_dot(cc, nullptr); }

std::string export_dot(const CompositionGraph& cc, const Witness& w) { return cc_dot(cc, &w); }

}  // namespace mpadiag
