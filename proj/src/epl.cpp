#include "mpadiag/epl.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

namespace mpadiag {

namespace {

constexpr std::int64_t kMaxScaled = std::int64_t(1) << 40;
constexpr std::int64_t kNoDist = std::numeric_limits<std::int64_t>::min();

mpz_class lcm_of_denominators(const std::vector<const Rational*>& values) {
    mpz_class l = 1;
    for (const Rational* q : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q->get_den_mpz_t());
    return l;
}

std::optional<std::int64_t> scale(const Rational& q, const mpz_class& factor) {
    mpz_class v = q.get_num() * (factor / q.get_den());
    if (abs(v) > kMaxScaled) return std::nullopt;
    return v.get_si();
}

struct Scaled {
    epl::IntGraph graph;
    std::int64_t z = 0;
    std::int64_t bound = 0;
    bool ok = true;
};

Scaled scale_graph(const WeightedGraph& g, const Rational& z, const Rational* bound) {
    std::vector<const Rational*> d1{&z}, d2;
    if (bound) d2.push_back(bound);
    for (const auto& e : g.edges) {
        d1.push_back(&e.w.at(0));
        if (bound) d2.push_back(&e.w.at(1));
    }
    mpz_class f1 = lcm_of_denominators(d1);
    mpz_class f2 = lcm_of_denominators(d2);
    Scaled s{epl::IntGraph(g.names.size())};
    auto sz = scale(z, f1);
    if (!sz) s.ok = false;
    s.z = sz.value_or(0);
    if (bound) {
        auto sb = scale(*bound, f2);
        if (!sb) s.ok = false;
        s.bound = sb.value_or(0);
    }
    for (const auto& e : g.edges) {
        auto w1 = scale(e.w[0], f1);
        std::optional<std::int64_t> w2 = std::int64_t(0);
        if (bound) w2 = scale(e.w[1], f2);
        if (!w1 || !w2) s.ok = false;
        s.graph.add_edge(static_cast<std::uint32_t>(e.src), static_cast<std::uint32_t>(e.dst), w1.value_or(0),
                         w2.value_or(0));
    }
    return s;
}

void check_vertex(const WeightedGraph& g, std::size_t v) {
    if (v >= g.names.size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
}

std::vector<std::size_t> widen(const std::vector<std::uint32_t>& w) { return {w.begin(), w.end()}; }

}  // namespace

std::size_t WeightedGraph::add_vertex(const std::string& name) {
    if (auto v = find_vertex(name)) return *v;
    names.push_back(name);
    return names.size() - 1;
}

std::optional<std::size_t> WeightedGraph::find_vertex(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

std::size_t WeightedGraph::add_edge(const std::string& src, const std::string& dst, std::vector<Rational> w,
                                    std::string tag) {
    std::size_t s = add_vertex(src);
    std::size_t d = add_vertex(dst);
    return add_edge(s, d, std::move(w), std::move(tag));
}

std::size_t WeightedGraph::add_edge(std::size_t src, std::size_t dst, std::vector<Rational> w, std::string tag) {
    if (w.size() != dim) throw std::invalid_argument("edge weight dimension mismatch");
    for (auto& q : w) q.canonicalize();
    edges.push_back(Edge{src, dst, std::move(w), std::move(tag)});
    return edges.size() - 1;
}

std::string to_string(EplStatus s) {
    switch (s) {
    case EplStatus::Yes: return "yes";
    case EplStatus::No: return "no";
    case EplStatus::Unknown: return "unknown";
    }
    return "?";
}

EplAnswer epl_decide(const WeightedGraph& g, std::size_t v1, std::size_t v2, const Rational& z,
                     const EplBudget& budget) {
    check_vertex(g, v1);
    check_vertex(g, v2);
    Scaled s = scale_graph(g, z, nullptr);
    if (!s.ok) return {EplStatus::Unknown, {}, "scaled weights exceed 2^40"};
    epl::Explorer ex(s.graph, static_cast<std::uint32_t>(v1), s.z < 0 ? -s.z : s.z, budget, false);
    if (ex.reached(static_cast<std::uint32_t>(v2), s.z))
        return {EplStatus::Yes, widen(ex.walk(static_cast<std::uint32_t>(v2), s.z)), {}};
    if (ex.complete()) return {EplStatus::No, {}, {}};
    return {EplStatus::Unknown, {}, ex.reason()};
}

EplAnswer epl_decide_thresholded(const WeightedGraph& g, std::size_t v1, std::size_t v2, const Rational& z_exact,
                                 const Rational& bound, const EplBudget& budget) {
    if (g.dim != 2) throw std::invalid_argument("thresholded query needs a 2-dimensional graph");
    check_vertex(g, v1);
    check_vertex(g, v2);
    Scaled s = scale_graph(g, z_exact, &bound);
    if (!s.ok) return {EplStatus::Unknown, {}, "scaled weights exceed 2^40"};
    auto t = static_cast<std::uint32_t>(v2);
    epl::Explorer ex(s.graph, static_cast<std::uint32_t>(v1), s.z < 0 ? -s.z : s.z, budget, true);
    epl::Best b = ex.best(t, s.z);
    if (b.kind == epl::Best::Infinite || (b.kind == epl::Best::Finite && b.value > s.bound))
        return {EplStatus::Yes, widen(ex.best_walk(t, s.z, s.bound)), {}};
    if (ex.complete()) return {EplStatus::No, {}, {}};
    return {EplStatus::Unknown, {}, ex.reason()};
}

std::set<std::vector<Rational>> brute_force_weights(const WeightedGraph& g, std::size_t v1, std::size_t v2,
                                                    std::size_t max_len) {
    check_vertex(g, v1);
    check_vertex(g, v2);
    std::vector<std::vector<std::size_t>> out(g.names.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) out[g.edges[i].src].push_back(i);
    using Key = std::pair<std::size_t, std::vector<Rational>>;
    std::set<Key> layer{{v1, std::vector<Rational>(g.dim, Rational(0))}};
    std::set<std::vector<Rational>> result;
    for (std::size_t len = 0;; ++len) {
        for (const auto& [v, w] : layer)
            if (v == v2) result.insert(w);
        if (len == max_len) break;
        std::set<Key> next;
        for (const auto& [v, w] : layer)
            for (std::size_t e : out[v]) {
                std::vector<Rational> nw = w;
                for (std::size_t k = 0; k < g.dim; ++k) nw[k] += g.edges[e].w[k];
                next.emplace(g.edges[e].dst, std::move(nw));
            }
        layer = std::move(next);
    }
    return result;
}

std::optional<std::vector<Rational>> replay_walk(const WeightedGraph& g, std::size_t v1, std::size_t v2,
                                                 const std::vector<std::size_t>& walk) {
    std::vector<Rational> sum(g.dim, Rational(0));
    std::size_t cur = v1;
    for (std::size_t e : walk) {
        if (e >= g.edges.size() || g.edges[e].src != cur) return std::nullopt;
        for (std::size_t k = 0; k < g.dim; ++k) sum[k] += g.edges[e].w[k];
        cur = g.edges[e].dst;
    }
    if (cur != v2) return std::nullopt;
    return sum;
}

namespace epl {

std::size_t IntGraph::add_edge(std::uint32_t src, std::uint32_t dst, std::int64_t w1, std::int64_t w2) {
    edges_.push_back(IntEdge{src, dst, w1, w2});
    out_[src].push_back(static_cast<std::uint32_t>(edges_.size() - 1));
    return edges_.size() - 1;
}

Explorer::Explorer(const IntGraph& g, std::uint32_t source, std::int64_t max_abs_target, const EplBudget& budget,
                   bool longest)
    : g_(g), source_(source), longest_(longest) {
    local_.assign(g.size(), -1);
    local_[source] = 0;
    verts_.push_back(source);
    for (std::size_t i = 0; i < verts_.size(); ++i)
        for (std::uint32_t e : g.out(verts_[i])) {
            std::uint32_t d = g.edges()[e].dst;
            if (local_[d] < 0) {
                local_[d] = static_cast<std::int32_t>(verts_.size());
                verts_.push_back(d);
            }
        }
    const std::size_t n = verts_.size();

    std::int64_t wmax = 0;
    std::vector<std::size_t> indeg(n, 0);
    for (std::uint32_t v : verts_)
        for (std::uint32_t e : g.out(v)) {
            const auto& ed = g.edges()[e];
            wmax = std::max(wmax, ed.w1 < 0 ? -ed.w1 : ed.w1);
            ++indeg[local_[ed.dst]];
        }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.push_back(i);
    std::size_t removed = 0;
    while (!ready.empty()) {
        std::size_t i = ready.back();
        ready.pop_back();
        ++removed;
        for (std::uint32_t e : g.out(verts_[i]))
            if (--indeg[local_[g.edges()[e].dst]] == 0) ready.push_back(local_[g.edges()[e].dst]);
    }
    const bool acyclic = removed == n;

    // Acyclic: every walk is a simple path. Otherwise the cycle-reordering bound.
    __int128 cert = acyclic ? __int128(n - 1) * wmax
                            : __int128(max_abs_target) + __int128(n + 1) * __int128(n) * wmax;
    const __int128 cap = std::numeric_limits<std::int64_t>::max() / 4;
    certified_ = static_cast<std::int64_t>(std::min(cert, cap));

    window_ = certified_;
    if (budget.max_window && *budget.max_window < window_) window_ = std::max<std::int64_t>(0, *budget.max_window);
    std::int64_t fit = (static_cast<std::int64_t>(budget.max_states / n) - 1) / 2;
    if (fit < 0) fit = 0;
    window_ = std::min(window_, fit);
    span_ = static_cast<std::size_t>(2 * window_ + 1);

    parent_.assign(n * span_, -1);
    std::vector<std::uint32_t> queue;
    const std::size_t s = static_cast<std::size_t>(index(source, 0));
    parent_[s] = -2;
    queue.push_back(static_cast<std::uint32_t>(s));
    bool pruned = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t idx = queue[head];
        std::int64_t w = weight_of(idx);
        for (std::uint32_t e : g.out(vertex_of(idx))) {
            const auto& ed = g.edges()[e];
            std::int64_t nw = w + ed.w1;
            if (nw < -window_ || nw > window_) {
                pruned = true;
                continue;
            }
            std::size_t t = static_cast<std::size_t>(local_[ed.dst]) * span_ + static_cast<std::size_t>(nw + window_);
            if (parent_[t] == -1) {
                parent_[t] = static_cast<std::int32_t>(e);
                queue.push_back(static_cast<std::uint32_t>(t));
            }
        }
    }
    complete_ = !pruned || window_ >= certified_;
    if (!complete_)
        reason_ = "search window " + std::to_string(window_) + " is below the certified bound " +
                  std::to_string(certified_);
    if (longest_) run_longest();
}

std::int64_t Explorer::index(std::uint32_t v, std::int64_t z) const {
    if (v >= local_.size() || local_[v] < 0 || z < -window_ || z > window_) return -1;
    return static_cast<std::int64_t>(static_cast<std::size_t>(local_[v]) * span_ +
                                     static_cast<std::size_t>(z + window_));
}

std::size_t Explorer::pred(std::size_t idx, std::uint32_t edge) const {
    const auto& ed = g_.edges()[edge];
    std::int64_t w = weight_of(idx) - ed.w1;
    return static_cast<std::size_t>(local_[ed.src]) * span_ + static_cast<std::size_t>(w + window_);
}

bool Explorer::reached(std::uint32_t v, std::int64_t z) const {
    auto idx = index(v, z);
    return idx >= 0 && parent_[static_cast<std::size_t>(idx)] != -1;
}

std::vector<std::uint32_t> Explorer::bfs_path(std::size_t idx) const {
    std::vector<std::uint32_t> path;
    while (parent_[idx] != -2) {
        auto e = static_cast<std::uint32_t>(parent_[idx]);
        path.push_back(e);
        idx = pred(idx, e);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<std::uint32_t> Explorer::walk(std::uint32_t v, std::int64_t z) const {
    if (!reached(v, z)) throw std::logic_error("walk requested for an unreached pair");
    return bfs_path(static_cast<std::size_t>(index(v, z)));
}

void Explorer::run_longest() {
    const std::size_t total = parent_.size();
    dist_.assign(total, kNoDist);
    lp_parent_.assign(total, -1);
    inf_.assign(total, 0);
    inf_parent_.assign(total, -1);
    inf_cycle_.assign(total, -1);

    std::size_t reached_count = 0;
    for (auto p : parent_)
        if (p != -1) ++reached_count;

    // Infinite closure of a positive cycle found in the parent graph.
    auto infect = [&](std::size_t start) {
        std::vector<std::size_t> nodes;
        std::size_t x = start;
        do {
            nodes.push_back(x);
            x = pred(x, static_cast<std::uint32_t>(lp_parent_[x]));
        } while (x != start);
        // nodes = [y, p1, ..., pk]; forward order is y -> pk -> ... -> p1 -> y.
        std::vector<std::size_t> fwd{nodes[0]};
        for (std::size_t i = nodes.size() - 1; i >= 1; --i) fwd.push_back(nodes[i]);
        std::vector<std::uint32_t> edges;
        for (std::size_t i = 0; i < fwd.size(); ++i)
            edges.push_back(static_cast<std::uint32_t>(lp_parent_[fwd[(i + 1) % fwd.size()]]));
        const auto c = static_cast<std::int32_t>(cycles_.size());
        cycles_.push_back(edges);
        cycle_nodes_.push_back(fwd);

        std::vector<std::size_t> work;
        for (std::size_t y : fwd) {
            inf_[y] = 1;
            inf_parent_[y] = -3;
            inf_cycle_[y] = c;
            work.push_back(y);
        }
        for (std::size_t head = 0; head < work.size(); ++head) {
            std::size_t idx = work[head];
            std::int64_t w = weight_of(idx);
            for (std::uint32_t e : g_.out(vertex_of(idx))) {
                std::int64_t nw = w + g_.edges()[e].w1;
                if (nw < -window_ || nw > window_) continue;
                std::size_t t = static_cast<std::size_t>(local_[g_.edges()[e].dst]) * span_ +
                                static_cast<std::size_t>(nw + window_);
                if (inf_[t]) continue;
                inf_[t] = 1;
                inf_parent_[t] = static_cast<std::int32_t>(e);
                inf_cycle_[t] = c;
                work.push_back(t);
            }
        }
    };

    // Cycle in the parent pointers of finite nodes; returns a node on it.
    std::vector<std::uint8_t> color;
    auto find_parent_cycle = [&]() -> std::optional<std::size_t> {
        color.assign(total, 0);
        std::vector<std::size_t> trail;
        for (std::size_t i = 0; i < total; ++i) {
            if (color[i] || dist_[i] == kNoDist || inf_[i]) continue;
            trail.clear();
            std::size_t x = i;
            while (true) {
                if (color[x] == 1) return x;
                if (color[x] == 2 || lp_parent_[x] < 0 || inf_[x]) break;
                color[x] = 1;
                trail.push_back(x);
                x = pred(x, static_cast<std::uint32_t>(lp_parent_[x]));
            }
            for (std::size_t y : trail) color[y] = 2;
        }
        return std::nullopt;
    };

    std::deque<std::size_t> queue;
    std::vector<std::uint8_t> queued(total, 0);
    const std::size_t s = static_cast<std::size_t>(index(source_, 0));
    dist_[s] = 0;
    lp_parent_[s] = -2;
    queue.push_back(s);
    queued[s] = 1;
    std::size_t since_check = 0;
    while (!queue.empty()) {
        std::size_t idx = queue.front();
        queue.pop_front();
        queued[idx] = 0;
        if (inf_[idx]) continue;
        std::int64_t w = weight_of(idx);
        for (std::uint32_t e : g_.out(vertex_of(idx))) {
            const auto& ed = g_.edges()[e];
            std::int64_t nw = w + ed.w1;
            if (nw < -window_ || nw > window_) continue;
            std::size_t t = static_cast<std::size_t>(local_[ed.dst]) * span_ + static_cast<std::size_t>(nw + window_);
            if (inf_[t]) continue;
            std::int64_t cand = dist_[idx] + ed.w2;
            if (dist_[t] != kNoDist && cand <= dist_[t]) continue;
            dist_[t] = cand;
            lp_parent_[t] = static_cast<std::int32_t>(e);
            if (!queued[t]) {
                queued[t] = 1;
                queue.push_back(t);
            }
            if (++since_check >= reached_count) {
                since_check = 0;
                if (auto y = find_parent_cycle()) infect(*y);
            }
            if (inf_[idx]) break;
        }
    }
}

Best Explorer::best(std::uint32_t v, std::int64_t z) const {
    if (!longest_) throw std::logic_error("explorer built without longest search");
    auto idx = index(v, z);
    if (idx < 0 || parent_[static_cast<std::size_t>(idx)] == -1) return {};
    if (inf_[static_cast<std::size_t>(idx)]) return {Best::Infinite, 0};
    return {Best::Finite, dist_[static_cast<std::size_t>(idx)]};
}

std::vector<std::uint32_t> Explorer::best_walk(std::uint32_t v, std::int64_t z, std::int64_t bound) const {
    Best b = best(v, z);
    if (b.kind == Best::Unreached || (b.kind == Best::Finite && b.value <= bound))
        throw std::logic_error("no walk above the bound");
    auto idx = static_cast<std::size_t>(index(v, z));
    std::vector<std::uint32_t> path;
    if (b.kind == Best::Finite) {
        while (lp_parent_[idx] != -2) {
            auto e = static_cast<std::uint32_t>(lp_parent_[idx]);
            path.push_back(e);
            idx = pred(idx, e);
        }
        std::reverse(path.begin(), path.end());
        return path;
    }
    std::vector<std::uint32_t> tail;
    while (inf_parent_[idx] != -3) {
        auto e = static_cast<std::uint32_t>(inf_parent_[idx]);
        tail.push_back(e);
        idx = pred(idx, e);
    }
    std::reverse(tail.begin(), tail.end());
    const auto c = static_cast<std::size_t>(inf_cycle_[idx]);
    const auto& nodes = cycle_nodes_[c];
    const auto& cyc = cycles_[c];
    std::size_t pos = static_cast<std::size_t>(std::find(nodes.begin(), nodes.end(), idx) - nodes.begin());
    std::vector<std::uint32_t> loop;
    for (std::size_t i = 0; i < cyc.size(); ++i) loop.push_back(cyc[(pos + i) % cyc.size()]);

    auto dim2 = [&](const std::vector<std::uint32_t>& es) {
        std::int64_t s = 0;
        for (auto e : es) s += g_.edges()[e].w2;
        return s;
    };
    path = bfs_path(idx);
    const std::int64_t base = dim2(path) + dim2(tail);
    const std::int64_t gain = dim2(loop);
    std::int64_t k = 1;
    if (base + gain <= bound) k = (bound - base) / gain + 1;
    for (std::int64_t i = 0; i < k; ++i) path.insert(path.end(), loop.begin(), loop.end());
    path.insert(path.end(), tail.begin(), tail.end());
    return path;
}

}  // namespace epl

}  // namespace mpadiag
