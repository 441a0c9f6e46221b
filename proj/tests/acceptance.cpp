// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "cantorq/distortion.hpp"
#include "cantorq/engine.hpp"
#include "cantorq/oracle.hpp"
#include "cantorq/word_measure.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

using namespace cantorq;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double limit_ms, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (limit_ms > 0 && ms >= limit_ms) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "took %.3f ms, limit %.0f ms", ms, limit_ms);
        out.require(false, buf);
    }
    if (!out.ok) ++failures;
    std::printf("%s  %2d  %-44s %10.3f ms%s%s\n", out.ok ? "PASS" : "FAIL", id, title, ms, out.ok ? "" : "  ",
                out.detail.c_str());
    std::fflush(stdout);
}

WordSet words(std::initializer_list<const char*> list) {
    WordSet out;
    for (const char* s : list) out.push_back(Word::parse(s));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Word> level(std::size_t k) {
    std::vector<Word> out{Word{}};
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Word> next;
        for (const Word& u : out) {
            next.push_back(u.child(1));
            next.push_back(u.child(2));
        }
        out = std::move(next);
    }
    return out;
}

const std::map<std::uint64_t, std::uint64_t> kTable = {
    {5, 1},     {6, 1},     {7, 2},     {8, 1},    {9, 1},    {10, 3},   {11, 3},   {12, 1},   {13, 1},
    {14, 1},    {15, 4},    {16, 6},    {17, 4},   {18, 1},   {19, 3},   {20, 3},   {21, 1},   {22, 1},
    {23, 5},    {24, 10},   {25, 10},   {26, 5},   {27, 1},   {28, 6},   {29, 15},  {30, 20},  {31, 15},
    {32, 6},    {33, 1},    {34, 1},    {35, 1},   {36, 6},   {37, 15},  {38, 20},  {39, 15},  {40, 6},
    {41, 1},    {42, 10},   {43, 45},   {44, 120}, {45, 210}, {46, 252}, {47, 210}, {48, 120}, {49, 45},
    {50, 10},   {51, 1},    {52, 1},    {53, 4},   {54, 6},   {55, 4},   {56, 1},   {57, 7},   {58, 21},
    {59, 35},   {60, 35},   {61, 21},   {62, 7},   {63, 1},   {64, 15},  {65, 105}, {66, 455}, {67, 1365},
    {68, 3003}, {69, 5005}, {70, 6435}, {71, 6435}, {72, 5005}, {73, 3003}, {74, 1365}, {75, 455}, {76, 105},
    {77, 15},   {78, 1},    {79, 1},    {80, 10},  {81, 45},  {82, 120}};

}  // namespace

int main() {
    const Rational V(16, 153);

    criterion(1, "moments", 1, [&](Outcome& o) {
        const Moments m = solve_moments(Ifs::standard());
        o.require(m.mean == Rational(2, 3), "mean");
        o.require(m.variance == V, "variance");
        o.require(m.second_moment == Rational(28, 51), "second moment");
    });

    criterion(2, "V_2, V_3, V_4", 1, [&](Outcome& o) {
        o.require(optimal_error(2) == Rational(13, 612), "V_2");
        o.require(optimal_error(3) == Rational(55, 9792), "V_3");
        o.require(optimal_error(4) == Rational(421, 156672), "V_4");
    });

    criterion(3, "V_9 .. V_13", 10, [&](Outcome& o) {
        const std::map<std::uint64_t, long> num = {{9, 9805}, {10, 7969}, {11, 6133}, {12, 4297}, {13, 3481}};
        for (const auto& [n, p] : num) o.require(optimal_error(n) == Rational(p, 40108032), "V_" + std::to_string(n));
    });

    criterion(4, "optimal set listings for n = 9..13", 0, [&](Outcome& o) {
        const std::map<std::uint64_t, std::vector<WordSet>> expected = {
            {9, {words({"11", "121", "122", "211", "212", "221", "2221", "22221", "22222"})}},
            {10,
             {words({"11", "121", "122", "211", "212", "2211", "2212", "2221", "22221", "22222"}),
              words({"11", "121", "122", "211", "221", "2121", "2122", "2221", "22221", "22222"}),
              words({"11", "121", "211", "212", "221", "1221", "1222", "2221", "22221", "22222"})}},
            {11,
             {words({"11", "121", "122", "211", "2121", "2122", "2211", "2212", "2221", "22221", "22222"}),
              words({"11", "121", "211", "212", "1221", "1222", "2211", "2212", "2221", "22221", "22222"}),
              words({"11", "121", "211", "221", "1221", "1222", "2121", "2122", "2221", "22221", "22222"})}},
            {12, {words({"11", "121", "211", "1221", "1222", "2121", "2122", "2211", "2212", "2221", "22221", "22222"})}},
            {13,
             {words({"111", "112", "121", "211", "1221", "1222", "2121", "2122", "2211", "2212", "2221", "22221",
                     "22222"})}}};
        for (const auto& [n, sets] : expected) {
            const OptimalSetFamily fam = enumerate_optimal_sets(n, 1000);
            o.require(fam.sets.has_value(), "not enumerated at n = " + std::to_string(n));
            if (!fam.sets) continue;
            const std::set<WordSet> got(fam.sets->begin(), fam.sets->end());
            const std::set<WordSet> want(sets.begin(), sets.end());
            o.require(got == want, "set family differs at n = " + std::to_string(n));
        }
    });

    criterion(5, "card(C_n) for all 78 entries, 5 <= n <= 82", 1000, [&](Outcome& o) {
        o.require(kTable.size() == 78, "table size");
        for (const auto& [n, c] : kTable)
            o.require(count_optimal_sets(n) == c, "count differs at n = " + std::to_string(n));
    });

    criterion(6, "genealogy 9 -> 12", 0, [&](Outcome& o) {
        using Edge = std::tuple<std::uint64_t, std::size_t, std::size_t>;
        const std::set<Edge> want = {{9, 1, 1},  {9, 1, 2},  {9, 1, 3},  {10, 1, 1}, {10, 1, 2}, {10, 2, 1},
                                     {10, 2, 3}, {10, 3, 2}, {10, 3, 3}, {11, 1, 1}, {11, 2, 1}, {11, 3, 1}};
        const GenealogyGraph g = genealogy(9, 12);
        std::set<Edge> got;
        for (const GenealogyEdge& e : g.edges) got.emplace(e.stage, e.parent + 1, e.child + 1);
        o.require(got.size() == g.edges.size(), "duplicate edges");
        o.require(got == want, "edge set differs (" + std::to_string(got.size()) + " edges)");
    });

    criterion(7, "oracle bracket, n = 1..13, depth 12, exact", 60000, [&](Outcome& o) {
        const Rational bound = discretization_bound(12);
        Rational expected = V;
        for (int i = 0; i < 12; ++i) expected *= Rational(13, 64);
        o.require(bound == expected, "bound");
        for (const OracleResult& r : oracle_sweep(13, 12, OracleMode::exact)) {
            const std::string tag = "n = " + std::to_string(r.n);
            if (!r.discrete_error) {
                o.require(false, tag + ": no exact error");
                continue;
            }
            const Rational diff = optimal_error(r.n) - *r.discrete_error;
            o.require(0 <= diff && diff <= bound, tag + ": bracket");
            o.require(r.cells_match, tag + ": cells");
        }
    });

    criterion(8, "certified evaluation and suboptimality", 5000, [&](Outcome& o) {
        const Rational gap(1, 1000000000000LL);
        for (std::uint64_t n = 1; n <= 13; ++n) {
            const DistortionEstimate e = evaluate_codebook(codebook_from_words(canonical_optimal_words(n)), gap);
            const Rational vn = optimal_error(n);
            o.require(e.lower <= vn && vn <= e.upper && e.upper - e.lower <= gap, "bracket at n = " + std::to_string(n));
        }
        const DistortionEstimate p =
            evaluate_codebook(Codebook(std::vector<Rational>{Rational(1, 6) + Rational(1, 100), Rational(5, 6)}), gap);
        o.require(p.lower > Rational(13, 612), "perturbed lower bound");
    });

    criterion(9, "recursion V_n = min_j (1/64)V_j + (3/16)V_{n-j}", 100, [&](Outcome& o) {
        const RecursionReport rep = verify_recursion(20);
        o.require(rep.ok, "violated at n = " + std::to_string(rep.first_violation.value_or(0)));
        o.require(rep.n_max == 20, "n_max");
    });

    criterion(10, "conservation, split delta, parent dominance", 0, [&](Outcome& o) {
        for (std::size_t k = 0; k <= 12; ++k) {
            Rational mass = 0, mean = 0, w = 0, expected = 1;
            for (const Word& u : level(k)) {
                mass += prob(u);
                mean += prob(u) * centroid(u);
                w += weight(u);
            }
            for (std::size_t i = 0; i < k; ++i) expected *= Rational(13, 64);
            const std::string tag = " at k = " + std::to_string(k);
            o.require(mass == 1, "mass" + tag);
            o.require(mean == Rational(2, 3), "mean" + tag);
            o.require(w == expected, "weight" + tag);
        }
        for (std::uint64_t n = 1; n <= 100; ++n) {
            const Rational w_max = weight(max_weight_leaves(canonical_optimal_words(n)).front());
            o.require(optimal_error(n + 1) == optimal_error(n) - Rational(51, 64) * w_max * V,
                      "split delta at n = " + std::to_string(n));
        }
        for (std::uint64_t n = 1; n <= 30; ++n) {
            const OptimalSetFamily fam = enumerate_optimal_sets(n, 100000);
            o.require(fam.sets.has_value(), "enumeration at n = " + std::to_string(n));
            if (!fam.sets) continue;
            for (const WordSet& s : *fam.sets) {
                Rational max_leaf = 0;
                for (const Word& u : s) max_leaf = std::max(max_leaf, weight(u));
                for (const Word& leaf : s) {
                    Word prefix;
                    for (std::size_t i = 0; i < leaf.size(); ++i) {
                        o.require(weight(prefix) >= max_leaf, "parent dominance at n = " + std::to_string(n));
                        prefix = prefix.child(leaf[i]);
                    }
                }
            }
        }
    });

    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
