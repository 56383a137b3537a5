#pragma once

#include "mpadiag/dioid.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mpadiag {

// Directed graph with 1- or 2-dimensional exact rational edge weights.
struct WeightedGraph {
    struct Edge {
        std::size_t src = 0;
        std::size_t dst = 0;
        std::vector<Rational> w;
        std::string tag;
    };

    std::size_t dim = 1;
    std::vector<std::string> names;
    std::vector<Edge> edges;

    std::size_t add_vertex(const std::string& name);
    std::optional<std::size_t> find_vertex(const std::string& name) const;
    // Adds missing endpoints by name.
    std::size_t add_edge(const std::string& src, const std::string& dst, std::vector<Rational> w,
                         std::string tag = {});
    std::size_t add_edge(std::size_t src, std::size_t dst, std::vector<Rational> w, std::string tag = {});
};

struct EplBudget {
    // Largest |accumulated scaled weight| the search may visit; unset means the certified bound.
    std::optional<std::int64_t> max_window;
    // Cap on explored (vertex, weight) pairs; larger windows are shrunk and may yield Unknown.
    std::size_t max_states = std::size_t(1) << 23;
};

enum class EplStatus { Yes, No, Unknown };

struct EplAnswer {
    EplStatus status = EplStatus::No;
    std::vector<std::size_t> witness;  // edge indices, in walk order
    std::string reason;
};

std::string to_string(EplStatus s);

// Is there a walk v1 -> v2 whose weight is exactly z? The empty walk counts when v1 == v2.
EplAnswer epl_decide(const WeightedGraph& g, std::size_t v1, std::size_t v2, const Rational& z,
                     const EplBudget& budget = {});

// Walk with dim-1 weight exactly z_exact and dim-2 weight strictly above bound.
EplAnswer epl_decide_thresholded(const WeightedGraph& g, std::size_t v1, std::size_t v2, const Rational& z_exact,
                                 const Rational& bound, const EplBudget& budget = {});

// Weights of all walks v1 -> v2 with at most max_len edges.
std::set<std::vector<Rational>> brute_force_weights(const WeightedGraph& g, std::size_t v1, std::size_t v2,
                                                    std::size_t max_len);

// Sum of the edge weights along a walk; nullopt if the edges do not chain from v1 to v2.
std::optional<std::vector<Rational>> replay_walk(const WeightedGraph& g, std::size_t v1, std::size_t v2,
                                                 const std::vector<std::size_t>& walk);

namespace epl {

struct IntEdge {
    std::uint32_t src;
    std::uint32_t dst;
    std::int64_t w1;
    std::int64_t w2;
};

class IntGraph {
public:
    explicit IntGraph(std::size_t n = 0) : out_(n) {}
    std::size_t add_vertex() {
        out_.emplace_back();
        return out_.size() - 1;
    }
    std::size_t add_edge(std::uint32_t src, std::uint32_t dst, std::int64_t w1, std::int64_t w2 = 0);
    std::size_t size() const { return out_.size(); }
    const std::vector<IntEdge>& edges() const { return edges_; }
    const std::vector<std::uint32_t>& out(std::size_t v) const { return out_[v]; }

private:
    std::vector<IntEdge> edges_;
    std::vector<std::vector<std::uint32_t>> out_;
};

struct Best {
    enum Kind { Unreached, Finite, Infinite } kind = Unreached;
    std::int64_t value = 0;
};

// Single-source search over (vertex, accumulated dim-1 weight) pairs inside a
// symmetric window. With `longest` set it also maximizes the dim-2 weight,
// reporting Infinite where a positive dim-2 cycle can be pumped.
class Explorer {
public:
    Explorer(const IntGraph& g, std::uint32_t source, std::int64_t max_abs_target, const EplBudget& budget,
             bool longest);

    // True when an unreached pair is certainly unreachable.
    bool complete() const { return complete_; }
    std::int64_t window() const { return window_; }
    std::int64_t certified_window() const { return certified_; }
    const std::string& reason() const { return reason_; }

    bool reached(std::uint32_t v, std::int64_t z) const;
    // BFS walk (fewest edges, ties broken by edge order).
    std::vector<std::uint32_t> walk(std::uint32_t v, std::int64_t z) const;

    Best best(std::uint32_t v, std::int64_t z) const;
    // A walk ending at (v, z) whose dim-2 weight exceeds bound. Requires best() above bound.
    std::vector<std::uint32_t> best_walk(std::uint32_t v, std::int64_t z, std::int64_t bound) const;

private:
    std::int64_t index(std::uint32_t v, std::int64_t z) const;
    std::uint32_t vertex_of(std::size_t idx) const { return verts_[idx / span_]; }
    std::int64_t weight_of(std::size_t idx) const { return static_cast<std::int64_t>(idx % span_) - window_; }
    std::size_t pred(std::size_t idx, std::uint32_t edge) const;
    void run_longest();
    std::vector<std::uint32_t> bfs_path(std::size_t idx) const;

    const IntGraph& g_;
    std::uint32_t source_;
    std::vector<std::uint32_t> verts_;
    std::vector<std::int32_t> local_;
    std::int64_t window_ = 0;
    std::int64_t certified_ = 0;
    std::size_t span_ = 1;
    bool complete_ = true;
    std::string reason_;

    std::vector<std::int32_t> parent_;  // -1 unreached, -2 source, else edge id

    bool longest_ = false;
    std::vector<std::int64_t> dist_;
    std::vector<std::int32_t> lp_parent_;
    std::vector<std::uint8_t> inf_;
    std::vector<std::int32_t> inf_parent_;  // edge into the node during closure, -3 on a cycle
    std::vector<std::int32_t> inf_cycle_;
    std::vector<std::vector<std::uint32_t>> cycles_;  // edge ids
    std::vector<std::vector<std::size_t>> cycle_nodes_;
};

}  // namespace epl

}  // namespace mpadiag
