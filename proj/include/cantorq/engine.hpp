#ifndef CANTORQ_ENGINE_HPP
#define CANTORQ_ENGINE_HPP

#include "cantorq/codebook.hpp"
#include "cantorq/rational.hpp"
#include "cantorq/word.hpp"
#include "cantorq/word_measure.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cantorq {

/// Sorted (lexicographic) list of leaf words; the canonical form of an optimal set.
using WordSet = std::vector<Word>;

inline constexpr std::size_t kDefaultEnumerationLimit = 100000;

/// Thrown when a stage holds more optimal sets than the enumeration limit.
class EnumerationLimitExceeded : public std::runtime_error {
public:
    EnumerationLimitExceeded(std::uint64_t stage, BigInt count, std::size_t limit)
        : std::runtime_error("stage " + std::to_string(stage) + " has " + count.str() +
                             " optimal sets, above the enumeration limit " + std::to_string(limit)),
          stage_(stage), count_(std::move(count)) {}

    std::uint64_t stage() const { return stage_; }
    const BigInt& count() const { return count_; }

private:
    std::uint64_t stage_;
    BigInt count_;
};

/// Thrown when a structural invariant of the greedy construction fails.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline bool is_prefix_free(std::span<const Word> words) {
    std::vector<Word> sorted(words.begin(), words.end());
    std::sort(sorted.begin(), sorted.end());
    // In lexicographic order a prefix is always adjacent to something it prefixes.
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i - 1].is_prefix_of(sorted[i])) return false;
    return true;
}

/// Prefix-free and carrying total mass one.
inline bool is_complete_cut(std::span<const Word> words) {
    if (!is_prefix_free(words)) return false;
    Rational total = 0;
    for (const Word& w : words) total += prob(w);
    return total == 1;
}

inline Rational sum_weights(std::span<const Word> words) {
    Rational total = 0;
    for (const Word& w : words) total += weight(w);
    return total;
}

/// Leaves of maximal weight, sorted.
inline WordSet max_weight_leaves(std::span<const Word> leaves) {
    WordSet out;
    Rational best = -1;
    for (const Word& w : leaves) {
        Rational wt = weight(w);
        if (wt > best) {
            best = std::move(wt);
            out.clear();
            out.push_back(w);
        } else if (wt == best) {
            out.push_back(w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Replaces `victim` in a sorted word set by its two children, keeping it sorted.
inline WordSet replace_with_children(const WordSet& leaves, const Word& victim) {
    WordSet out;
    out.reserve(leaves.size() + 1);
    for (const Word& w : leaves)
        if (w != victim) out.push_back(w);
    out.push_back(victim.child(1));
    out.push_back(victim.child(2));
    std::sort(out.begin(), out.end());
    return out;
}

/// One frontier of the greedy construction: the leaf set O_n with its error V_n.
class SplitState {
public:
    /// The one-point state {empty word} with error V.
    SplitState() : leaves_{Word{}}, error_(moments().variance), max_entries_{Word{}} {}

    /// Builds a state from an explicit cut; rejects sets that are not complete cuts.
    static SplitState from_leaves(std::span<const Word> words) {
        if (words.empty() || !is_complete_cut(words))
            throw std::invalid_argument("leaf set is not a complete prefix-free cut");
        SplitState s;
        s.leaves_.assign(words.begin(), words.end());
        std::sort(s.leaves_.begin(), s.leaves_.end());
        s.error_ = sum_weights(s.leaves_) * moments().variance;
        s.max_entries_ = max_weight_leaves(s.leaves_);
        return s;
    }

    std::size_t n() const { return leaves_.size(); }
    const WordSet& leaves() const { return leaves_; }
    const Rational& error() const { return error_; }
    const WordSet& max_entries() const { return max_entries_; }
    Rational max_weight() const { return weight(max_entries_.front()); }

    bool is_max_entry(const Word& w) const {
        return std::binary_search(max_entries_.begin(), max_entries_.end(), w);
    }

    /// Splits a maximal-weight leaf; the error drops by (51/64) w(victim) V.
    SplitState split(const Word& victim) const {
        if (!is_max_entry(victim))
            throw std::invalid_argument("split victim " + (victim.empty() ? std::string("(empty)") : victim.str()) +
                                        " is not a maximal-weight leaf");
        SplitState next;
        next.leaves_ = replace_with_children(leaves_, victim);
        next.error_ = error_ - Rational(51, 64) * weight(victim) * moments().variance;
        next.max_entries_ = max_weight_leaves(next.leaves_);
        return next;
    }

private:
    WordSet leaves_;
    Rational error_;
    WordSet max_entries_;
};

inline SplitState split_step(const SplitState& state, const Word& victim) { return state.split(victim); }

namespace detail {

/// Weight class of a word: all words with equal (length, ones) share a weight.
struct WeightClass {
    std::size_t length = 0;
    std::size_t ones = 0;
    friend auto operator<=>(const WeightClass&, const WeightClass&) = default;
};

inline Rational class_weight(const WeightClass& c) {
    return Rational(pow_int(3, static_cast<unsigned>(c.length - c.ones)),
                    BigInt(1) << static_cast<unsigned>(4 * c.length + 2 * c.ones));
}

/// Leaves grouped by weight class, heaviest first; words within a group sorted.
class GroupedFrontier {
public:
    GroupedFrontier() { groups_[class_weight({0, 0})].push_back(Word{}); }

    bool empty() const { return groups_.empty(); }
    const std::vector<Word>& top() const { return groups_.begin()->second; }
    const Rational& top_weight() const { return groups_.begin()->first; }

    void split_top(std::size_t how_many) {
        auto it = groups_.begin();
        std::vector<Word> victims(it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(how_many));
        it->second.erase(it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(how_many));
        if (it->second.empty()) groups_.erase(it);
        for (const Word& v : victims) {
            insert(v.child(1));
            insert(v.child(2));
        }
    }

    WordSet leaves() const {
        WordSet out;
        for (const auto& [w, words] : groups_) out.insert(out.end(), words.begin(), words.end());
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void insert(const Word& w) {
        auto& bucket = groups_[weight(w)];
        bucket.insert(std::upper_bound(bucket.begin(), bucket.end(), w), w);
    }

    std::map<Rational, std::vector<Word>, std::greater<>> groups_;
};

/// Splits whole tied classes until fewer than a full class of splits remains.
/// Returns the frontier and the number r of splits still owed to its top class.
inline std::pair<GroupedFrontier, std::uint64_t> advance_full_classes(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("n must be at least 1");
    GroupedFrontier f;
    std::uint64_t remaining = n - 1;
    while (remaining > 0 && remaining >= f.top().size()) {
        const std::size_t m = f.top().size();
        f.split_top(m);
        remaining -= m;
    }
    return {std::move(f), remaining};
}

inline BigInt binomial(std::uint64_t m, std::uint64_t r) {
    if (r > m) return 0;
    r = std::min(r, m - r);
    BigInt result = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        result *= m - r + i;
        result /= i;
    }
    return result;
}

/// Calls visit for each r-subset of {0..m-1} in lexicographic order.
template <class Visit>
void for_each_combination(std::size_t m, std::size_t r, Visit&& visit) {
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        visit(std::span<const std::size_t>(idx));
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == m - r + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

/// The deterministic optimal leaf set: ties split lexicographically smallest first.
inline WordSet canonical_optimal_words(std::uint64_t n) {
    auto [frontier, remaining] = detail::advance_full_classes(n);
    if (remaining > 0) frontier.split_top(remaining);
    return frontier.leaves();
}

/// V_n by n - 1 greedy splits from {empty word}. Tied victims share a weight,
/// so the tie-break does not affect the value.
inline Rational optimal_error(std::uint64_t n) {
    return sum_weights(canonical_optimal_words(n)) * moments().variance;
}

/// card(C_n), counted over weight classes without materializing any set.
inline BigInt count_optimal_sets(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("n must be at least 1");
    std::map<Rational, std::pair<detail::WeightClass, std::uint64_t>, std::greater<>> classes;
    classes.emplace(detail::class_weight({0, 0}), std::pair{detail::WeightClass{0, 0}, std::uint64_t{1}});
    std::uint64_t remaining = n - 1;
    auto add = [&](detail::WeightClass c, std::uint64_t count) {
        auto [it, inserted] = classes.try_emplace(detail::class_weight(c), c, 0);
        it->second.second += count;
    };
    while (remaining > 0) {
        auto top = classes.begin();
        const auto [cls, m] = top->second;
        if (remaining < m) return detail::binomial(m, remaining);
        classes.erase(top);
        add({cls.length + 1, cls.ones + 1}, m);
        add({cls.length + 1, cls.ones}, m);
        remaining -= m;
    }
    return 1;
}

struct OptimalSetFamily {
    std::uint64_t n = 0;
    BigInt count;
    /// Present only when count <= the enumeration limit; sorted lexicographically.
    std::optional<std::vector<WordSet>> sets;
};

/// All optimal leaf sets at stage n when there are at most `limit` of them.
inline OptimalSetFamily enumerate_optimal_sets(std::uint64_t n, std::size_t limit = kDefaultEnumerationLimit) {
    if (limit == 0) throw std::invalid_argument("enumeration limit must be at least 1");
    OptimalSetFamily family;
    family.n = n;
    family.count = count_optimal_sets(n);
    if (family.count > limit) return family;

    auto [frontier, remaining] = detail::advance_full_classes(n);
    std::set<WordSet> unique;
    if (remaining == 0) {
        unique.insert(frontier.leaves());
    } else {
        const std::vector<Word> tied = frontier.top();
        const WordSet base = frontier.leaves();
        detail::for_each_combination(tied.size(), remaining, [&](std::span<const std::size_t> pick) {
            WordSet s = base;
            for (std::size_t i : pick) s.erase(std::lower_bound(s.begin(), s.end(), tied[i]));
            for (std::size_t i : pick) {
                s.push_back(tied[i].child(1));
                s.push_back(tied[i].child(2));
            }
            std::sort(s.begin(), s.end());
            unique.insert(std::move(s));
        });
    }
    family.sets.emplace(unique.begin(), unique.end());
    if (family.count != family.sets->size())
        throw InvariantViolation("class count " + family.count.str() + " disagrees with " +
                                 std::to_string(family.sets->size()) + " enumerated sets at n=" + std::to_string(n));
    return family;
}

/// Stage-by-stage union over every optimal set and every maximal-weight leaf,
/// deduplicated. Independent of the class-based counting; nullopt if any
/// intermediate stage exceeds `limit`.
inline std::optional<std::vector<WordSet>> enumerate_by_union(std::uint64_t n, std::size_t limit = kDefaultEnumerationLimit) {
    if (n == 0) throw std::invalid_argument("n must be at least 1");
    std::set<WordSet> stage{WordSet{Word{}}};
    for (std::uint64_t k = 1; k < n; ++k) {
        std::set<WordSet> next;
        for (const WordSet& parent : stage)
            for (const Word& tau : max_weight_leaves(parent)) next.insert(replace_with_children(parent, tau));
        if (next.size() > limit) return std::nullopt;
        stage = std::move(next);
    }
    return std::vector<WordSet>(stage.begin(), stage.end());
}

struct GenealogyEdge {
    std::uint64_t stage = 0;  ///< parent stage n; the child lives at n + 1
    std::size_t parent = 0;   ///< index into stages.at(stage)
    std::size_t child = 0;    ///< index into stages.at(stage + 1)
    Word split;               ///< the leaf that was replaced by its children
};

struct GenealogyGraph {
    std::uint64_t n_from = 0;
    std::uint64_t n_to = 0;
    /// Per stage, the optimal sets in lexicographic order; index i is alpha_{n,i+1}.
    std::map<std::uint64_t, std::vector<WordSet>> stages;
    std::vector<GenealogyEdge> edges;
};

/// Enumerates stages n_from..n_to and every parent -> child single-split edge.
inline GenealogyGraph genealogy(std::uint64_t n_from, std::uint64_t n_to, std::size_t limit = kDefaultEnumerationLimit) {
    if (n_from < 1 || n_from >= n_to) throw std::invalid_argument("genealogy needs 1 <= from < to");
    GenealogyGraph g;
    g.n_from = n_from;
    g.n_to = n_to;
    for (std::uint64_t n = n_from; n <= n_to; ++n) {
        OptimalSetFamily f = enumerate_optimal_sets(n, limit);
        if (!f.sets) throw EnumerationLimitExceeded(n, f.count, limit);
        g.stages.emplace(n, std::move(*f.sets));
    }
    for (std::uint64_t n = n_from; n < n_to; ++n) {
        const auto& parents = g.stages.at(n);
        const auto& children = g.stages.at(n + 1);
        std::map<WordSet, std::size_t> child_index;
        for (std::size_t j = 0; j < children.size(); ++j) child_index.emplace(children[j], j);
        std::vector<bool> reached(children.size(), false);
        for (std::size_t i = 0; i < parents.size(); ++i) {
            for (const Word& tau : max_weight_leaves(parents[i])) {
                auto it = child_index.find(replace_with_children(parents[i], tau));
                if (it == child_index.end())
                    throw InvariantViolation("split of " + tau.str() + " at stage " + std::to_string(n) +
                                             " produced a set missing from stage " + std::to_string(n + 1));
                reached[it->second] = true;
                g.edges.push_back({n, i, it->second, tau});
            }
        }
        if (std::find(reached.begin(), reached.end(), false) != reached.end())
            throw InvariantViolation("stage " + std::to_string(n + 1) + " has a set with no parent");
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const GenealogyEdge& a, const GenealogyEdge& b) {
        return std::tie(a.stage, a.parent, a.child) < std::tie(b.stage, b.parent, b.child);
    });
    return g;
}

/// Sorted conditional means a(w) of a prefix-free word set.
inline Codebook codebook_from_words(std::span<const Word> words) {
    if (!is_prefix_free(words)) throw std::invalid_argument("codebook_from_words: words are not prefix-free");
    std::vector<Rational> pts;
    pts.reserve(words.size());
    for (const Word& w : words) pts.push_back(centroid(w));
    return Codebook::from_unsorted(std::move(pts));
}

struct RecursionReport {
    bool ok = true;
    std::uint64_t n_max = 0;
    std::optional<std::uint64_t> first_violation;
    /// minimizing_j[n] is the smallest j attaining min_j (1/64) V_j + (3/16) V_{n-j}; index 0, 1 unused.
    std::vector<std::uint64_t> minimizing_j;
    std::vector<Rational> errors;  ///< errors[n] = V_n; index 0 unused
};

/// Checks V_n = min_{1<=j<n} (1/64) V_j + (3/16) V_{n-j} for 2 <= n <= n_max.
inline RecursionReport verify_recursion(std::uint64_t n_max) {
    if (n_max < 2) throw std::invalid_argument("verify_recursion needs n_max >= 2");
    RecursionReport rep;
    rep.n_max = n_max;
    rep.errors.resize(n_max + 1);
    rep.minimizing_j.assign(n_max + 1, 0);
    for (std::uint64_t n = 1; n <= n_max; ++n) rep.errors[n] = optimal_error(n);
    const Rational left(1, 64), right(3, 16);
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        std::optional<Rational> best;
        for (std::uint64_t j = 1; j < n; ++j) {
            Rational v = left * rep.errors[j] + right * rep.errors[n - j];
            if (!best || v < *best) {
                best = std::move(v);
                rep.minimizing_j[n] = j;
            }
        }
        if (*best != rep.errors[n] && rep.ok) {
            rep.ok = false;
            rep.first_violation = n;
        }
    }
    return rep;
}

}  // namespace cantorq

#endif  // CANTORQ_ENGINE_HPP
