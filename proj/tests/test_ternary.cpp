#include <array>
#include <cstdint>
#include <random>

#include "doctest.h"
#include "lowtwist/ternary.hpp"

using namespace lowtwist;
using namespace lowtwist::ternary;

namespace {

// independent six-loop oracle
uint64_t count_brute(const TernaryForm& f, const BoxBounds& box) {
    const int64_t U1 = static_cast<int64_t>(box.U1), U2 = static_cast<int64_t>(box.U2),
                  U3 = static_cast<int64_t>(box.U3), V1 = static_cast<int64_t>(box.V1),
                  V2 = static_cast<int64_t>(box.V2), V3 = static_cast<int64_t>(box.V3);
    auto g = [](int64_t a, int64_t b) {
        a = a < 0 ? -a : a;
        b = b < 0 ? -b : b;
        while (b) {
            int64_t t = a % b;
            a = b;
            b = t;
        }
        return a;
    };
    uint64_t cnt = 0;
    for (int64_t u1 = -U1; u1 <= U1; ++u1) {
        if (!u1) continue;
        for (int64_t u2 = -U2; u2 <= U2; ++u2) {
            if (!u2) continue;
            for (int64_t u3 = -U3; u3 <= U3; ++u3) {
                if (!u3) continue;
                for (int64_t v1 = -V1; v1 <= V1; ++v1) {
                    if (!v1) continue;
                    for (int64_t v2 = -V2; v2 <= V2; ++v2) {
                        if (!v2) continue;
                        for (int64_t v3 = -V3; v3 <= V3; ++v3) {
                            if (!v3) continue;
                            __int128 s = static_cast<__int128>(f.f1) * u1 * v1 * v1 +
                                         static_cast<__int128>(f.f2) * u2 * v2 * v2 +
                                         static_cast<__int128>(f.f3) * u3 * v3 * v3;
                            if (s != 0) continue;
                            if (g(u1 * v1, u2 * v2) != 1 || g(u1 * v1, u3 * v3) != 1 ||
                                g(u2 * v2, u3 * v3) != 1)
                                continue;
                            ++cnt;
                        }
                    }
                }
            }
        }
    }
    return cnt;
}

}  // namespace

TEST_CASE("make_form / make_box validation") {
    CHECK_THROWS_AS(make_form(0, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_form(2, 4, 1), ValidationError);  // gcd 2
    CHECK_NOTHROW(make_form(2, 3, -5));
    CHECK_THROWS_AS(make_box(1, 1, 0.5, 1, 1, 1), ValidationError);
}

TEST_CASE("count_solutions: frozen examples") {
    // frozen by the six-loop oracle
    CHECK(count_solutions(make_form(1, 1, 1), make_box(1, 1, 2, 1, 1, 1)) == 16);
    CHECK(count_solutions(make_form(1, 1, 1), make_box(1, 1, 1, 1, 1, 1)) == 0);
    CHECK(count_solutions(make_form(1, 1, -1), make_box(2, 2, 2, 2, 2, 2)) == 48);
    CHECK(count_solutions(make_form(1, -1, 1), make_box(3, 2, 5, 1, 1, 1)) == 144);
    CHECK(count_solutions(make_form(2, 3, -5), make_box(3, 3, 3, 3, 3, 3)) == 48);
    CHECK(count_solutions(make_form(1, 2, -3), make_box(4, 3, 2, 2, 1, 3)) == 32);
}

TEST_CASE("count_solutions: equals the oracle on random small instances") {
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 50) {
        int64_t f1 = static_cast<int64_t>(rng() % 9) - 4;
        int64_t f2 = static_cast<int64_t>(rng() % 9) - 4;
        int64_t f3 = static_cast<int64_t>(rng() % 9) - 4;
        TernaryForm f;
        try {
            f = make_form(f1, f2, f3);
        } catch (const ValidationError&) {
            continue;
        }
        BoxBounds box = make_box(1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 4,
                                 1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3);
        CHECK(count_solutions(f, box) == count_brute(f, box));
        ++done;
    }
}

TEST_CASE("count_solutions: symmetry properties") {
    // simultaneous index permutation
    CHECK(count_solutions(make_form(1, 2, -3), make_box(4, 3, 2, 2, 1, 3)) ==
          count_solutions(make_form(-3, 1, 2), make_box(2, 4, 3, 3, 2, 1)));
    // negating a coefficient is absorbed by u_i -> -u_i
    CHECK(count_solutions(make_form(1, 1, -1), make_box(3, 4, 2, 2, 2, 2)) ==
          count_solutions(make_form(-1, 1, -1), make_box(3, 4, 2, 2, 2, 2)));
    // filtered counts are contained in the unrestricted count
    CountOptions filt;
    filt.filter = [](const std::array<int64_t, 3>& u, const std::array<int64_t, 3>&) {
        return u[0] > 0;
    };
    uint64_t all = count_solutions(make_form(1, 1, -1), make_box(3, 3, 3, 3, 3, 3));
    uint64_t some = count_solutions(make_form(1, 1, -1), make_box(3, 3, 3, 3, 3, 3), filt);
    CHECK(some <= all);
    CHECK(some > 0);
}

TEST_CASE("count_solutions: worker count does not change the result") {
    CountOptions par;
    par.workers = 8;
    auto f = make_form(1, 1, -1);
    auto box = make_box(6, 6, 6, 6, 6, 6);
    CHECK(count_solutions(f, box) == count_solutions(f, box, par));
}

TEST_CASE("bound_value: arithmetic") {
    auto f = make_form(1, 1, -1);
    CHECK(bound_value(f, make_box(1, 1, 1, 1, 1, 1), 0.01) == doctest::Approx(1.0));
    CHECK(bound_value(f, make_box(2, 2, 2, 1, 1, 1), 0.0) == doctest::Approx(4.0));
    CHECK(bound_value(f, make_box(4, 4, 4, 8, 8, 8), 0.0) == doctest::Approx(128.0));
}

TEST_CASE("exponent_scan: shape and ratio reporting") {
    auto rep = exponent_scan(make_form(1, -1, 1), {4.0}, 0.05);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].count == count_solutions(make_form(1, -1, 1), make_box(4, 4, 4, 4, 4, 4)));
    CHECK(rep.rows[0].ratio == doctest::Approx(rep.rows[0].count / rep.rows[0].bound));
    CHECK(rep.max_ratio == rep.rows[0].ratio);

    auto rep2 = exponent_scan(make_form(1, 1, -1), {2.0, 4.0, 8.0}, 0.05);
    CHECK(rep2.rows.size() == 3);
    // frozen oracle counts at eps = 0.05
    CHECK(rep2.rows[0].count == 48);
    CHECK(rep2.rows[1].count == 432);
    CHECK(rep2.rows[2].count == 4464);
    for (const auto& r : rep2.rows) CHECK(r.ratio <= rep2.max_ratio);
}

TEST_CASE("budget guard") {
    CountOptions tiny;
    tiny.budget = 10;
    CHECK_THROWS_AS(count_solutions(make_form(1, 1, -1), make_box(8, 8, 8, 8, 8, 8), tiny),
                    ResourceError);
}
