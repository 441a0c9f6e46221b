#include "cantorq/distortion.hpp"
#include "cantorq/engine.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace cantorq;

namespace {

const Rational kGap(1, 1000000000000LL);

Codebook book(std::initializer_list<Rational> pts) { return Codebook(std::vector<Rational>(pts)); }

// Level-d bracket with no adaptivity: every depth-d cylinder either sits in
// one region (exact value) or contributes [0, distortion with its best single code].
std::pair<Rational, Rational> fixed_depth_bracket(const Codebook& cb, std::size_t depth) {
    std::vector<Word> level{Word{}};
    for (std::size_t i = 0; i < depth; ++i) {
        std::vector<Word> next;
        for (const Word& u : level) {
            next.push_back(u.child(1));
            next.push_back(u.child(2));
        }
        level = std::move(next);
    }
    Rational lo = 0, hi = 0;
    for (const Word& u : level) {
        const Cylinder c = cylinder(u);
        std::optional<std::size_t> region;
        for (std::size_t i = 0; i < cb.size(); ++i) {
            const bool left_ok = i == 0 || cb.boundaries()[i - 1] <= c.left;
            const bool right_ok = i + 1 == cb.size() || c.right <= cb.boundaries()[i];
            if (left_ok && right_ok) region = i;
        }
        Rational best = -1;
        for (const Rational& a : cb.points()) {
            const Rational v = interval_distortion(u, a);
            if (best < 0 || v < best) best = v;
        }
        if (region) {
            const Rational v = interval_distortion(u, cb.points()[*region]);
            lo += v;
            hi += v;
        } else {
            hi += best;
        }
    }
    return {lo, hi};
}

}  // namespace

TEST_CASE("voronoi boundaries") {
    CHECK(voronoi_boundaries(std::vector<Rational>{Rational(1, 6), Rational(5, 6)}) == std::vector<Rational>{Rational(1, 2)});
    CHECK(voronoi_boundaries(std::vector<Rational>{Rational(1, 6), Rational(7, 12), Rational(11, 12)}) ==
          std::vector<Rational>{Rational(3, 8), Rational(3, 4)});
    CHECK(voronoi_boundaries(std::vector<Rational>{Rational(2, 3)}).empty());
    CHECK_THROWS_AS(voronoi_boundaries(std::vector<Rational>{Rational(1, 2), Rational(1, 3)}), std::invalid_argument);
    CHECK_THROWS_AS(voronoi_boundaries(std::vector<Rational>{Rational(1, 2), Rational(1, 2)}), std::invalid_argument);
    CHECK_THROWS_AS(voronoi_boundaries(std::vector<Rational>{}), std::invalid_argument);
}

TEST_CASE("Codebook region lookup puts boundary points on the left") {
    const Codebook cb = book({Rational(1, 6), Rational(5, 6)});
    CHECK(cb.region_of(Rational(1, 2)) == 0);
    CHECK(cb.region_of(Rational(51, 100)) == 1);
    CHECK(cb.distance_to_nearest(Rational(1, 2)) == Rational(1, 3));
}

TEST_CASE("evaluate_codebook: a single point is closed form at the root") {
    const DistortionEstimate e = evaluate_codebook(book({Rational(2, 3)}), kGap);
    CHECK(e.lower == Rational(16, 153));
    CHECK(e.upper == Rational(16, 153));
    CHECK(e.cylinders_expanded == 0);

    const DistortionEstimate mid = evaluate_codebook(book({Rational(1, 2)}), kGap);
    CHECK(mid.exact());
    CHECK(mid.lower == Rational(9, 68));
    CHECK(mid.lower == Rational(16, 153) + (Rational(1, 2) - Rational(2, 3)) * (Rational(1, 2) - Rational(2, 3)));
}

TEST_CASE("evaluate_codebook brackets the two-means error") {
    const DistortionEstimate e = evaluate_codebook(book({Rational(1, 6), Rational(5, 6)}), kGap);
    CHECK(e.lower <= Rational(13, 612));
    CHECK(Rational(13, 612) <= e.upper);
    CHECK(e.upper - e.lower <= kGap);
    // The boundary 1/2 is the left end of J_2, so one split settles everything.
    CHECK(e.exact());
    CHECK(e.cylinders_expanded == 1);
}

TEST_CASE("evaluate_codebook brackets V_n for the engine codebooks, n <= 13") {
    for (std::uint64_t n = 1; n <= 13; ++n) {
        const DistortionEstimate e = evaluate_codebook(codebook_from_words(canonical_optimal_words(n)), kGap);
        INFO("n = " << n);
        CHECK(e.lower <= optimal_error(n));
        CHECK(optimal_error(n) <= e.upper);
        CHECK(e.upper - e.lower <= kGap);
    }
}

TEST_CASE("evaluate_codebook detects a suboptimal codebook") {
    const DistortionEstimate e = evaluate_codebook(book({Rational(1, 6) + Rational(1, 100), Rational(5, 6)}), kGap);
    CHECK(e.lower > Rational(13, 612));
}

TEST_CASE("refinement is monotone", "[property]") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> num(0, 1000);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> pts;
        for (int i = 0; i < 1 + trial % 6; ++i) pts.push_back(Rational(num(rng), 1000));
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        const Codebook cb(pts);
        Rational last_lo = -1, last_hi = 1000;
        bool monotone = true;
        EvaluateOptions opts;
        opts.on_expand = [&](const Rational& lo, const Rational& hi) {
            if (lo < last_lo || hi > last_hi) monotone = false;
            last_lo = lo;
            last_hi = hi;
        };
        const DistortionEstimate e = evaluate_codebook(cb, Rational(1, 1000000000), opts);
        CHECK(monotone);
        CHECK(e.upper - e.lower <= Rational(1, 1000000000));

        // Cross-check against a non-adaptive bracket: the two enclosures must meet.
        const auto [lo, hi] = fixed_depth_bracket(cb, 10);
        CHECK(e.lower <= hi);
        CHECK(lo <= e.upper);
    }
}

TEST_CASE("evaluate_codebook budget and argument checks") {
    EvaluateOptions opts;
    opts.budget = 3;
    const Codebook cb = book({Rational(1, 10), Rational(1, 3), Rational(7, 10)});
    try {
        evaluate_codebook(cb, kGap, opts);
        FAIL("expected budget exhaustion");
    } catch (const BudgetExhausted& e) {
        CHECK(e.partial().cylinders_expanded == 3);
        CHECK(e.partial().lower <= e.partial().upper);
    }
    CHECK_THROWS_AS(evaluate_codebook(cb, Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_codebook(Codebook{}, kGap), std::invalid_argument);
}

TEST_CASE("distortion_of_words") {
    auto ws = [](std::initializer_list<const char*> l) {
        std::vector<Word> v;
        for (auto s : l) v.push_back(Word::parse(s));
        return v;
    };
    CHECK(distortion_of_words(ws({"1", "2"})) == Rational(13, 612));
    CHECK(distortion_of_words(ws({"1", "21", "221", "222"})) == Rational(421, 156672));
    CHECK(distortion_of_words(ws({""})) == Rational(16, 153));
    CHECK_THROWS_AS(distortion_of_words(ws({"1", "21"})), std::invalid_argument);
    CHECK_THROWS_AS(distortion_of_words(ws({"1", "2", "22"})), std::invalid_argument);
}

TEST_CASE("closed-form error equals the sum of per-cylinder integrals, n <= 20", "[property]") {
    for (std::uint64_t n = 1; n <= 20; ++n) {
        const WordSet ws = canonical_optimal_words(n);
        Rational sum = 0;
        for (const Word& u : ws) sum += interval_distortion(u, centroid(u));
        CHECK(distortion_of_words(ws) == sum);
    }
}
