#ifndef CANTORQ_ORACLE_HPP
#define CANTORQ_ORACLE_HPP

#include "cantorq/engine.hpp"
#include "cantorq/rational.hpp"
#include "cantorq/word.hpp"
#include "cantorq/word_measure.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cantorq {

inline constexpr unsigned kMaxDepth = 16;
inline constexpr unsigned kMaxExactDepth = 12;

struct Atom {
    Rational position;
    Rational mass;
    Word word;
};

/// Discrete approximation of P: one atom per depth-d cylinder, placed at its
/// conditional mean and carrying its mass.
struct AtomMeasure {
    std::vector<Atom> atoms;
    unsigned depth = 0;
    Ifs ifs;

    std::size_t size() const { return atoms.size(); }
};

inline AtomMeasure discretize(unsigned depth, const Ifs& ifs = Ifs::standard()) {
    if (depth < 1 || depth > kMaxDepth)
        throw std::out_of_range("discretization depth must be in [1, " + std::to_string(kMaxDepth) + "]");
    ifs.validate();
    AtomMeasure m;
    m.depth = depth;
    m.ifs = ifs;
    const Rational mean = ifs.is_standard() ? moments().mean : solve_moments(ifs).mean;
    const Rational p2 = ifs.p2();
    // Breadth-first over levels keeps the prefix products shared.
    m.atoms.push_back({mean, Rational(1), Word{}});
    for (unsigned level = 0; level < depth; ++level) {
        std::vector<Atom> next;
        next.reserve(m.atoms.size() * 2);
        for (const Atom& a : m.atoms) {
            // Prepending a symbol applies its map last: a(iw) = S_i(a(w)).
            next.push_back({ifs.r1 * a.position, ifs.p1 * a.mass, Word{}});
            next.push_back({ifs.r2 * a.position + ifs.shift2(), p2 * a.mass, Word{}});
        }
        m.atoms = std::move(next);
    }
    // Attach words: index bits give the symbols with the first symbol outermost.
    const std::size_t count = m.atoms.size();
    for (std::size_t idx = 0; idx < count; ++idx) {
        Word w;
        for (unsigned level = 0; level < depth; ++level) {
            // Atom idx was built by prepending symbols, so its last-applied (first)
            // symbol is the lowest bit.
            const bool two = (idx >> level) & 1u;
            w = w.child(two ? 2 : 1);
        }
        m.atoms[idx].word = w;
    }
    std::sort(m.atoms.begin(), m.atoms.end(), [](const Atom& a, const Atom& b) { return a.position < b.position; });
    return m;
}

struct DpResult {
    std::size_t n = 0;
    Rational error;
    std::vector<Rational> codebook;
    /// starts[i] is the first atom index of cluster i.
    std::vector<std::size_t> starts;
};

namespace detail {

inline BigInt to_big(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    BigInt r = BigInt(static_cast<unsigned long long>(u >> 64));
    r <<= 64;
    r += BigInt(static_cast<unsigned long long>(u));
    return neg ? BigInt(-r) : r;
}
inline const BigInt& to_big(const BigInt& v) { return v; }

inline long double to_ld(__int128 v) { return static_cast<long double>(v); }
inline long double to_ld(const BigInt& v) { return to_long_double(Rational(v)); }

/// Atoms scaled to integers: position = X / pos_den, mass = W / mass_den.
struct ScaledAtoms {
    std::vector<BigInt> x;
    std::vector<BigInt> w;
    BigInt pos_den;
    BigInt mass_den;
};

inline ScaledAtoms scale_atoms(const AtomMeasure& m) {
    ScaledAtoms s;
    s.pos_den = 1;
    s.mass_den = 1;
    for (const Atom& a : m.atoms) {
        s.pos_den = boost::multiprecision::lcm(s.pos_den, denominator_of(a.position));
        s.mass_den = boost::multiprecision::lcm(s.mass_den, denominator_of(a.mass));
    }
    for (const Atom& a : m.atoms) {
        s.x.push_back(numerator_of(a.position) * (s.pos_den / denominator_of(a.position)));
        s.w.push_back(numerator_of(a.mass) * (s.mass_den / denominator_of(a.mass)));
    }
    return s;
}

/// Prefix sums of W, W X, W X^2 in integer type Int.
template <class Int>
struct Prefix {
    std::vector<Int> a, b, c;

    explicit Prefix(const ScaledAtoms& s) : a(s.x.size() + 1, Int(0)), b(a), c(a) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            Int x = static_cast<Int>(s.x[i]);
            Int w = static_cast<Int>(s.w[i]);
            a[i + 1] = a[i] + w;
            b[i + 1] = b[i] + w * x;
            c[i + 1] = c[i] + w * x * x;
        }
    }

    /// Scaled cost of atoms [i, j) is numerator / mass: numerator = A C - B^2.
    Int numerator(std::size_t i, std::size_t j) const {
        const Int A = a[j] - a[i];
        const Int B = b[j] - b[i];
        const Int C = c[j] - c[i];
        return A * C - B * B;
    }
    Int mass(std::size_t i, std::size_t j) const { return a[j] - a[i]; }
    Int moment(std::size_t i, std::size_t j) const { return b[j] - b[i]; }
};

template <>
inline Prefix<__int128>::Prefix(const ScaledAtoms& s) : a(s.x.size() + 1, 0), b(a), c(a) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const __int128 x = static_cast<__int128>(s.x[i].convert_to<long long>());
        const __int128 w = static_cast<__int128>(s.w[i].convert_to<long long>());
        a[i + 1] = a[i] + w;
        b[i + 1] = b[i] + w * x;
        c[i + 1] = c[i] + w * x * x;
    }
}

/// True when every prefix quantity and every A C, B^2 fit in a signed 128-bit integer.
inline bool fits_int128(const ScaledAtoms& s) {
    BigInt A = 0, B = 0, C = 0, xmax = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        A += s.w[i];
        B += s.w[i] * s.x[i];
        C += s.w[i] * s.x[i] * s.x[i];
        xmax = std::max(xmax, s.x[i]);
    }
    if (xmax > BigInt(std::numeric_limits<long long>::max())) return false;
    if (A > BigInt(std::numeric_limits<long long>::max())) return false;
    const BigInt limit = BigInt(1) << 126;
    return A * C < limit && B * B < limit;
}

// Relative half-width of the floating filter. Each candidate value carries at
// most a few long double roundings (unit roundoff 2^-64) on non-negative terms,
// so a window of 1e-12 can never exclude the exact minimizer.
inline constexpr long double kFilterWindow = 1e-12L;

template <class Int>
std::vector<DpResult> exact_dp(const AtomMeasure& m, std::size_t max_n, const ScaledAtoms& s) {
    const Prefix<Int> pre(s);
    const std::size_t atoms = m.size();
    const std::size_t K = max_n;
    constexpr long double inf = std::numeric_limits<long double>::infinity();

    // Layer k holds the best k-cluster cost of the first j atoms, in scaled units.
    std::vector<std::vector<Rational>> exact(K + 1, std::vector<Rational>(atoms + 1));
    std::vector<std::vector<long double>> approx(K + 1, std::vector<long double>(atoms + 1, inf));
    std::vector<std::vector<std::uint32_t>> back(K + 1, std::vector<std::uint32_t>(atoms + 1, 0));
    approx[0][0] = 0.0L;

    std::vector<long double> seg(atoms + 1);
    std::vector<std::size_t> window;
    for (std::size_t j = 1; j <= atoms; ++j) {
        for (std::size_t i = 0; i < j; ++i) seg[i] = to_ld(pre.numerator(i, j)) / to_ld(pre.mass(i, j));
        const std::size_t kmax = std::min(K, j);
        for (std::size_t k = 1; k <= kmax; ++k) {
            const auto& prev = approx[k - 1];
            long double best = inf;
            for (std::size_t i = k - 1; i < j; ++i) {
                const long double v = prev[i] + seg[i];
                if (v < best) best = v;
            }
            const long double cutoff = best * (1.0L + kFilterWindow);
            window.clear();
            for (std::size_t i = k - 1; i < j; ++i)
                if (prev[i] + seg[i] <= cutoff) window.push_back(i);
            std::optional<Rational> best_exact;
            std::size_t arg = window.front();
            for (std::size_t i : window) {
                Rational v = exact[k - 1][i] + Rational(to_big(pre.numerator(i, j)), to_big(pre.mass(i, j)));
                // Strict comparison keeps the shortest left part among exact ties.
                if (!best_exact || v < *best_exact) {
                    best_exact = std::move(v);
                    arg = i;
                }
            }
            exact[k][j] = std::move(*best_exact);
            approx[k][j] = to_long_double(exact[k][j]);
            back[k][j] = static_cast<std::uint32_t>(arg);
        }
    }

    const Rational unscale = Rational(1) / (Rational(s.pos_den) * Rational(s.pos_den) * Rational(s.mass_den));
    std::vector<DpResult> out;
    for (std::size_t k = 1; k <= K; ++k) {
        DpResult r;
        r.n = k;
        r.error = exact[k][atoms] * unscale;
        std::vector<std::size_t> bounds{atoms};
        std::size_t j = atoms;
        for (std::size_t layer = k; layer >= 1; --layer) {
            j = back[layer][j];
            bounds.push_back(j);
        }
        std::reverse(bounds.begin(), bounds.end());
        for (std::size_t c = 0; c + 1 < bounds.size(); ++c) {
            r.starts.push_back(bounds[c]);
            r.codebook.push_back(Rational(to_big(pre.moment(bounds[c], bounds[c + 1])),
                                          to_big(pre.mass(bounds[c], bounds[c + 1]))) /
                                 Rational(s.pos_den));
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

/// Globally optimal discrete k-means for every k = 1..max_n, in exact arithmetic.
///
/// Optimal clusters of sorted 1-D points are contiguous, so the DP runs over
/// segment boundaries. Every transition is screened in long double; candidates
/// within the rounding window of the floating minimum are then compared as
/// exact rationals, so the stored minima and the argmins are exact.
inline std::vector<DpResult> dp_kmeans_all(const AtomMeasure& m, std::size_t max_n) {
    if (max_n < 1 || max_n > m.size())
        throw std::invalid_argument("dp_kmeans: n must be in [1, " + std::to_string(m.size()) + "]");
    const detail::ScaledAtoms s = detail::scale_atoms(m);
    if (detail::fits_int128(s)) return detail::exact_dp<__int128>(m, max_n, s);
    return detail::exact_dp<BigInt>(m, max_n, s);
}

inline DpResult dp_kmeans(const AtomMeasure& m, std::size_t n) { return dp_kmeans_all(m, n).back(); }

struct FastDpResult {
    std::size_t n = 0;
    __float128 error = 0;
    /// Absolute rounding allowance on `error`.
    __float128 tolerance = 0;
    std::vector<__float128> codebook;
};

namespace detail {

inline __float128 to_f128(const Rational& q) {
    BigInt num = numerator_of(q);
    if (num == 0) return 0;
    const bool neg = num < 0;
    if (neg) num = -num;
    const BigInt& den = denominator_of(q);
    const long shift = 112 + static_cast<long>(boost::multiprecision::msb(den)) -
                       static_cast<long>(boost::multiprecision::msb(num));
    BigInt scaled = shift >= 0 ? BigInt((num << static_cast<unsigned>(shift)) / den)
                               : BigInt(num / (den << static_cast<unsigned>(-shift)));
    const auto hi = static_cast<unsigned long long>(BigInt(scaled >> 64));
    const auto lo = static_cast<unsigned long long>(BigInt(scaled & BigInt(0xFFFFFFFFFFFFFFFFULL)));
    __float128 r = static_cast<__float128>(hi) * 18446744073709551616.0Q + static_cast<__float128>(lo);
    // Scale by 2^-shift in steps that stay in range.
    long e = shift;
    while (e > 0) {
        const int step = static_cast<int>(std::min<long>(e, 60));
        r /= static_cast<__float128>(1ULL << step);
        e -= step;
    }
    while (e < 0) {
        const int step = static_cast<int>(std::min<long>(-e, 60));
        r *= static_cast<__float128>(1ULL << step);
        e += step;
    }
    return neg ? -r : r;
}

}  // namespace detail

/// Quad-precision DP for large atom counts. Uses the monotonicity of optimal
/// split points in 1-D k-means (divide and conquer per layer), so the cost is
/// O(n m log m) instead of O(n m^2).
inline std::vector<FastDpResult> dp_kmeans_fast(const AtomMeasure& m, std::size_t max_n) {
    if (max_n < 1 || max_n > m.size())
        throw std::invalid_argument("dp_kmeans: n must be in [1, " + std::to_string(m.size()) + "]");
    const std::size_t atoms = m.size();
    std::vector<__float128> A(atoms + 1, 0), B(atoms + 1, 0), C(atoms + 1, 0);
    for (std::size_t i = 0; i < atoms; ++i) {
        const __float128 x = detail::to_f128(m.atoms[i].position);
        const __float128 w = detail::to_f128(m.atoms[i].mass);
        A[i + 1] = A[i] + w;
        B[i + 1] = B[i] + w * x;
        C[i + 1] = C[i] + w * x * x;
    }
    auto cost = [&](std::size_t i, std::size_t j) -> __float128 {
        const __float128 a = A[j] - A[i];
        const __float128 b = B[j] - B[i];
        const __float128 v = (C[j] - C[i]) - b * b / a;
        return v > 0 ? v : 0;
    };
    constexpr __float128 inf = 1e4000Q;
    std::vector<std::vector<__float128>> D(max_n + 1, std::vector<__float128>(atoms + 1, inf));
    std::vector<std::vector<std::uint32_t>> back(max_n + 1, std::vector<std::uint32_t>(atoms + 1, 0));
    D[0][0] = 0;

    for (std::size_t k = 1; k <= max_n; ++k) {
        const auto& prev = D[k - 1];
        auto& cur = D[k];
        auto& arg = back[k];
        // Fill cur[j] for j in [lo, hi] knowing the argmin lies in [opt_lo, opt_hi].
        auto solve = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t opt_lo, std::size_t opt_hi) -> void {
            if (lo > hi) return;
            const std::size_t mid = lo + (hi - lo) / 2;
            __float128 best = inf;
            std::size_t best_i = opt_lo;
            const std::size_t last = std::min(opt_hi, mid - 1);
            for (std::size_t i = opt_lo; i <= last; ++i) {
                if (prev[i] >= inf) continue;
                const __float128 v = prev[i] + cost(i, mid);
                if (v < best) {
                    best = v;
                    best_i = i;
                }
            }
            cur[mid] = best;
            arg[mid] = static_cast<std::uint32_t>(best_i);
            if (mid > lo) self(self, lo, mid - 1, opt_lo, best_i);
            self(self, mid + 1, hi, best_i, opt_hi);
        };
        solve(solve, k, atoms, k - 1, atoms - 1);
    }

    // Each segment cost loses at most ~8 ulps of its second moment; partitions
    // sum to at most the total second moment C[atoms].
    const __float128 eps = 1.925929944387235853055977942584927e-34Q;  // 2^-112
    std::vector<FastDpResult> out;
    for (std::size_t k = 1; k <= max_n; ++k) {
        FastDpResult r;
        r.n = k;
        r.error = D[k][atoms];
        r.tolerance = 16 * static_cast<__float128>(k + 1) * eps * C[atoms];
        std::vector<std::size_t> bounds{atoms};
        std::size_t j = atoms;
        for (std::size_t layer = k; layer >= 1; --layer) {
            j = back[layer][j];
            bounds.push_back(j);
        }
        std::reverse(bounds.begin(), bounds.end());
        for (std::size_t c = 0; c + 1 < bounds.size(); ++c)
            r.codebook.push_back((B[bounds[c + 1]] - B[bounds[c]]) / (A[bounds[c + 1]] - A[bounds[c]]));
        out.push_back(std::move(r));
    }
    return out;
}

/// Sum of mass * (position - nearest code)^2; codes must be sorted.
inline Rational discrete_distortion(const AtomMeasure& m, const std::vector<Rational>& codes) {
    Rational total = 0;
    std::size_t c = 0;
    for (const Atom& a : m.atoms) {
        while (c + 1 < codes.size() && (codes[c + 1] - a.position) < (a.position - codes[c])) ++c;
        const Rational d = a.position - codes[c];
        total += a.mass * d * d;
    }
    return total;
}

struct LloydResult {
    Rational error;
    std::vector<Rational> codebook;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Alternates nearest-code assignment and mass-centroid updates. Atoms at equal
/// distance go to the lower code; a code with an empty cell stays put.
inline LloydResult lloyd_refine(const AtomMeasure& m, std::vector<Rational> codes, std::size_t max_iters) {
    if (codes.empty()) throw std::invalid_argument("lloyd_refine: empty initial codebook");
    if (!std::is_sorted(codes.begin(), codes.end()))
        throw std::invalid_argument("lloyd_refine: initial codebook must be sorted");
    LloydResult r;
    for (r.iterations = 0; r.iterations < max_iters; ++r.iterations) {
        std::vector<Rational> mass(codes.size()), moment(codes.size());
        std::size_t c = 0;
        for (const Atom& a : m.atoms) {
            while (c + 1 < codes.size() && (codes[c + 1] - a.position) < (a.position - codes[c])) ++c;
            mass[c] += a.mass;
            moment[c] += a.mass * a.position;
        }
        std::vector<Rational> next = codes;
        for (std::size_t i = 0; i < codes.size(); ++i)
            if (mass[i] > 0) next[i] = moment[i] / mass[i];
        std::sort(next.begin(), next.end());
        if (next == codes) {
            r.converged = true;
            break;
        }
        codes = std::move(next);
    }
    r.error = discrete_distortion(m, codes);
    r.codebook = std::move(codes);
    return r;
}

enum class OracleMode { exact, fast };

struct OracleResult {
    std::size_t n = 0;
    unsigned depth = 0;
    OracleMode mode = OracleMode::exact;
    /// Exact mode only.
    std::optional<Rational> discrete_error;
    std::vector<Rational> codebook;
    /// Always filled; in fast mode these are the primary values.
    long double discrete_error_approx = 0;
    std::vector<long double> codebook_approx;
    long double tolerance = 0;
    Rational bound;
    Rational engine_error;
    bool bracket_ok = false;
    /// Each DP code point lies in the matching cylinder of some optimal set.
    bool cells_match = false;
    std::optional<std::size_t> matched_set;
    std::vector<std::string> engine_words;
    std::vector<std::string> diagnostics;

    bool passed() const { return bracket_ok && cells_match; }
};

/// (p1 r1^2 + p2 r2^2)^depth V: the total within-cell variance removed by discretizing.
inline Rational discretization_bound(unsigned depth, const Ifs& ifs = Ifs::standard()) {
    const Rational ratio = ifs.p1 * ifs.r1 * ifs.r1 + ifs.p2() * ifs.r2 * ifs.r2;
    const Rational v = ifs.is_standard() ? moments().variance : solve_moments(ifs).variance;
    Rational r = v;
    for (unsigned i = 0; i < depth; ++i) r *= ratio;
    return r;
}

namespace detail {

/// Matches sorted code points against the cylinders of each optimal set.
inline void match_cells(OracleResult& r, std::size_t limit) {
    const OptimalSetFamily fam = enumerate_optimal_sets(r.n, limit);
    std::vector<WordSet> candidates = fam.sets ? *fam.sets : std::vector<WordSet>{canonical_optimal_words(r.n)};
    for (std::size_t s = 0; s < candidates.size(); ++s) {
        std::vector<Cylinder> cyls;
        for (const Word& w : candidates[s]) cyls.push_back(cylinder(w));
        std::sort(cyls.begin(), cyls.end(), [](const Cylinder& a, const Cylinder& b) { return a.left < b.left; });
        bool ok = cyls.size() == r.n;
        for (std::size_t i = 0; ok && i < r.n; ++i) {
            if (r.mode == OracleMode::exact) {
                ok = cyls[i].left <= r.codebook[i] && r.codebook[i] <= cyls[i].right;
            } else {
                const long double slack = 1e-15L;
                ok = to_long_double(cyls[i].left) - slack <= r.codebook_approx[i] &&
                     r.codebook_approx[i] <= to_long_double(cyls[i].right) + slack;
            }
        }
        if (ok) {
            r.cells_match = true;
            r.matched_set = s;
            for (const Cylinder& c : cyls) r.engine_words.push_back(c.word.str());
            return;
        }
    }
    r.diagnostics.push_back("DP codebook does not lie cell-by-cell inside any of the " +
                            std::to_string(candidates.size()) + " checked optimal sets");
}

inline OracleResult evaluate_exact(const DpResult& dp, unsigned depth, std::size_t limit) {
    OracleResult r;
    r.n = dp.n;
    r.depth = depth;
    r.mode = OracleMode::exact;
    r.discrete_error = dp.error;
    r.discrete_error_approx = to_long_double(dp.error);
    r.codebook = dp.codebook;
    for (const Rational& c : dp.codebook) r.codebook_approx.push_back(to_long_double(c));
    r.bound = discretization_bound(depth);
    r.engine_error = optimal_error(dp.n);
    const Rational diff = r.engine_error - dp.error;
    r.bracket_ok = 0 <= diff && diff <= r.bound;
    if (!r.bracket_ok)
        r.diagnostics.push_back("V_n - discrete = " + to_string(diff) + " outside [0, " + to_string(r.bound) + "]");
    match_cells(r, limit);
    return r;
}

inline OracleResult evaluate_fast(const FastDpResult& dp, unsigned depth, std::size_t limit) {
    OracleResult r;
    r.n = dp.n;
    r.depth = depth;
    r.mode = OracleMode::fast;
    r.discrete_error_approx = static_cast<long double>(dp.error);
    for (const __float128& c : dp.codebook) r.codebook_approx.push_back(static_cast<long double>(c));
    r.tolerance = static_cast<long double>(dp.tolerance);
    r.bound = discretization_bound(depth);
    r.engine_error = optimal_error(dp.n);
    const __float128 diff = to_f128(r.engine_error) - dp.error;
    r.bracket_ok = -dp.tolerance <= diff && diff <= to_f128(r.bound) + dp.tolerance;
    if (!r.bracket_ok)
        r.diagnostics.push_back("V_n - discrete = " + std::to_string(static_cast<double>(diff)) +
                                " outside [0, bound] beyond rounding tolerance");
    match_cells(r, limit);
    return r;
}

}  // namespace detail

inline constexpr std::size_t kOracleSetLimit = 1000;

/// Runs the DP for every n' <= n once and checks each against the engine.
inline std::vector<OracleResult> oracle_sweep(std::size_t max_n, unsigned depth, OracleMode mode = OracleMode::exact) {
    if (mode == OracleMode::exact && depth > kMaxExactDepth)
        throw std::out_of_range("exact oracle supports depth <= " + std::to_string(kMaxExactDepth) + "; use fast mode");
    const AtomMeasure m = discretize(depth);
    if (max_n < 1 || max_n > m.size())
        throw std::invalid_argument("oracle: n must be in [1, 2^depth]");
    std::vector<OracleResult> out;
    if (mode == OracleMode::exact) {
        for (const DpResult& dp : dp_kmeans_all(m, max_n)) out.push_back(detail::evaluate_exact(dp, depth, kOracleSetLimit));
    } else {
        for (const FastDpResult& dp : dp_kmeans_fast(m, max_n))
            out.push_back(detail::evaluate_fast(dp, depth, kOracleSetLimit));
    }
    return out;
}

inline OracleResult oracle_check(std::size_t n, unsigned depth, OracleMode mode = OracleMode::exact) {
    return oracle_sweep(n, depth, mode).back();
}

/// Result of running the greedy and the DP for a non-standard system. Nothing
/// here is a certified claim; the greedy error need not be optimal.
struct HeuristicResult {
    std::size_t n = 0;
    unsigned depth = 0;
    Ifs ifs;
    WordSet greedy_words;
    Rational greedy_error;
    Rational discrete_error;
    std::vector<Rational> discrete_codebook;
    Rational bound;
};

/// Word-level greedy by weight p_w s_w^2 (ties: lexicographically smallest),
/// compared with the exact discrete optimum. Labelled heuristic by callers.
inline HeuristicResult heuristic_check(const Ifs& ifs, std::size_t n, unsigned depth) {
    ifs.validate();
    if (depth > kMaxExactDepth) throw std::out_of_range("heuristic oracle supports depth <= 12");
    HeuristicResult h;
    h.n = n;
    h.depth = depth;
    h.ifs = ifs;
    WordSet leaves{Word{}};
    for (std::size_t k = 1; k < n; ++k) {
        Rational best = -1;
        Word victim;
        for (const Word& w : leaves) {
            Rational wt = weight(w, ifs);
            if (wt > best) {
                best = std::move(wt);
                victim = w;
            }
        }
        leaves = replace_with_children(leaves, victim);
    }
    h.greedy_words = leaves;
    const Rational v = solve_moments(ifs).variance;
    h.greedy_error = 0;
    for (const Word& w : leaves) h.greedy_error += weight(w, ifs) * v;
    const AtomMeasure m = discretize(depth, ifs);
    DpResult dp = dp_kmeans(m, n);
    h.discrete_error = dp.error;
    h.discrete_codebook = std::move(dp.codebook);
    h.bound = discretization_bound(depth, ifs);
    return h;
}

}  // namespace cantorq

#endif  // CANTORQ_ORACLE_HPP
