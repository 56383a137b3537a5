#include "mpadiag/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace mpadiag {

std::vector<Path> enumerate_paths(const Automaton& a, const std::vector<std::size_t>& from, std::size_t max_len) {
    std::vector<std::size_t> starts = from;
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    std::vector<Path> all;
    for (std::size_t q : starts) all.push_back(Path{q, {}});
    std::size_t layer_begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t layer_end = all.size();
        for (std::size_t i = layer_begin; i < layer_end; ++i)
            for (std::size_t t : a.out()[path_end(a, all[i])]) {
                Path p = all[i];
                p.steps.push_back(t);
                all.push_back(std::move(p));
            }
        layer_begin = layer_end;
    }
    return all;
}

bool is_valid_triple(const Automaton& a, const WitnessTriple& w) {
    auto initial = [&](const Path& p) { return p.start < a.states().size() && a.state(p.start).initial; };
    if (!initial(w.pi) || !is_valid_path(a, w.pi) || w.pi.steps.empty() || !a.is_faulty(w.pi.steps.back()))
        return false;
    if (w.pi_prime.start != path_end(a, w.pi) || !is_valid_path(a, w.pi_prime)) return false;
    if (!initial(w.pi_dprime) || !is_valid_path(a, w.pi_dprime)) return false;
    for (std::size_t t : w.pi_dprime.steps)
        if (a.is_faulty(t)) return false;
    if (!(path_weight(a, w.pi_prime) > w.t)) return false;
    if (path_weight(a, w.pi_dprime) < path_weight(a, w.pi) + w.t) return false;
    Path joined = w.pi;
    joined.steps.insert(joined.steps.end(), w.pi_prime.steps.begin(), w.pi_prime.steps.end());
    return labeled_timed_word(a, joined) == labeled_timed_word(a, w.pi_dprime);
}

namespace {

struct Key {
    std::uint32_t left, right;
    std::int64_t x, y;
    bool split;
    bool operator==(const Key& o) const {
        return left == o.left && right == o.right && x == o.x && y == o.y && split == o.split;
    }
};

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        std::size_t h = std::hash<std::int64_t>()(k.x) * 1000003u ^ std::hash<std::int64_t>()(k.y);
        h = h * 1000003u ^ (std::size_t(k.left) << 20 | std::size_t(k.right) << 1 | std::size_t(k.split));
        return h;
    }
};

// Depth-first search over a faulty path (left) and a fault-free path (right)
// that emit the same observations at the same times. Before the split the
// key weights are (left - right, 0); after it they are the weights of the
// continuation and of the right path, both relative to the faulty prefix.
class Search {
public:
    Search(const Automaton& a, std::size_t max_len, const Rational& t) : a_(a), max_len_(max_len) {
        mpz_lcm(factor_.get_mpz_t(), factor_.get_mpz_t(), t.get_den_mpz_t());
        for (const auto& tr : a.transitions())
            mpz_lcm(factor_.get_mpz_t(), factor_.get_mpz_t(), tr.weight.get_den_mpz_t());
        mpz_class st = t.get_num() * (factor_ / t.get_den());
        if (!st.fits_slong_p()) throw std::runtime_error("threshold too large for the oracle");
        t_ = st.get_si();
        for (const auto& tr : a.transitions()) {
            mpz_class v = tr.weight.get_num() * (factor_ / tr.weight.get_den());
            if (!v.fits_slong_p()) throw std::runtime_error("weights too large for the oracle");
            w_.push_back(v.get_si());
        }
    }

    std::optional<WitnessTriple> run() {
        failed_.clear();
        for (std::size_t l : a_.initial_states())
            for (std::size_t r : a_.initial_states()) {
                pi_ = {l, {}};
                pip_ = {0, {}};
                pdp_ = {r, {}};
                if (dfs(l, r, 0, 0, false, 0, 0)) {
                    WitnessTriple w{pi_, pip_, pdp_, Rational(t_, 1) / Rational(factor_)};
                    return w;
                }
            }
        return std::nullopt;
    }

private:
    bool dominated(const Key& k, std::size_t n1, std::size_t n2) const {
        auto it = failed_.find(k);
        if (it == failed_.end()) return false;
        for (auto [m1, m2] : it->second)
            if (m1 <= n1 && m2 <= n2) return true;
        return false;
    }

    // n1: transitions used by the current left segment, n2: by the right path.
    bool dfs(std::size_t l, std::size_t r, std::int64_t x, std::int64_t y, bool split, std::size_t n1,
             std::size_t n2) {
        if (split && x > t_ && y >= t_) return true;
        Key key{static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(r), x, y, split};
        if (dominated(key, n1, n2)) return false;

        Path& left = split ? pip_ : pi_;
        if (n1 < max_len_) {
            for (std::size_t t : a_.out()[l]) {
                if (a_.is_observable(t)) continue;
                const auto& tr = a_.transition(t);
                left.steps.push_back(t);
                if (dfs(tr.dst, r, x + w_[t], y, split, n1 + 1, n2)) return true;
                // Ending the faulty prefix here starts the continuation at tr.dst.
                if (!split && a_.is_faulty(t)) {
                    pip_ = {tr.dst, {}};
                    if (dfs(tr.dst, r, 0, -(x + w_[t]), true, 0, n2)) return true;
                }
                left.steps.pop_back();
            }
        }
        if (n2 < max_len_) {
            for (std::size_t t : a_.out()[r]) {
                if (a_.is_observable(t) || a_.is_faulty(t)) continue;
                pdp_.steps.push_back(t);
                std::int64_t nx = split ? x : x - w_[t];
                std::int64_t ny = split ? y + w_[t] : y;
                if (dfs(l, a_.transition(t).dst, nx, ny, split, n1, n2 + 1)) return true;
                pdp_.steps.pop_back();
            }
        }
        if (n1 < max_len_ && n2 < max_len_) {
            for (std::size_t t1 : a_.out()[l]) {
                if (!a_.is_observable(t1)) continue;
                const auto& label = a_.event(a_.transition(t1).event).label;
                for (std::size_t t2 : a_.out()[r]) {
                    if (!a_.is_observable(t2) || a_.is_faulty(t2)) continue;
                    if (a_.event(a_.transition(t2).event).label != label) continue;
                    // Equal time stamps: left total equals right total after both steps.
                    std::int64_t diff = split ? (x - y) : x;
                    if (diff + w_[t1] - w_[t2] != 0) continue;
                    left.steps.push_back(t1);
                    pdp_.steps.push_back(t2);
                    std::int64_t nx = split ? x + w_[t1] : 0;
                    std::int64_t ny = split ? y + w_[t2] : y;
                    if (dfs(a_.transition(t1).dst, a_.transition(t2).dst, nx, ny, split, n1 + 1, n2 + 1))
                        return true;
                    left.steps.pop_back();
                    pdp_.steps.pop_back();
                }
            }
        }
        failed_[key].push_back({n1, n2});
        return false;
    }

    const Automaton& a_;
    std::size_t max_len_;
    std::int64_t t_ = 0;
    mpz_class factor_ = 1;
    std::vector<std::int64_t> w_;
    Path pi_, pip_, pdp_;
    std::unordered_map<Key, std::vector<std::pair<std::size_t, std::size_t>>, KeyHash> failed_;
};

}  // namespace

OracleResult find_witness(const Automaton& a, const std::vector<Rational>& t_grid, std::size_t max_len) {
    for (const auto& s : a.states())
        if (s.initial && s.init_weight != 0) throw std::invalid_argument("initial weights must be zero");
    OracleResult res;
    res.present = !t_grid.empty();
    for (const Rational& t : t_grid) {
        auto w = Search(a, max_len, t).run();
        if (!w) res.present = false;
        res.per_t.push_back(std::move(w));
    }
    return res;
}

}  // namespace mpadiag
