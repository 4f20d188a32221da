#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "stacky/error.hpp"
#include "stacky/lambdaring.hpp"
#include "stacky/monoids.hpp"

using namespace stacky;
using stacky::testing::Q;
using stacky::testing::random_function;

namespace {

// Direct count of invertible n x n matrices over F_p.
long long count_invertible(int n, int p) {
    long long total = 0;
    int cells = n * n;
    long long combos = 1;
    for (int i = 0; i < cells; ++i) combos *= p;
    std::vector<long long> a(cells);
    for (long long code = 0; code < combos; ++code) {
        long long c = code;
        for (int i = 0; i < cells; ++i) {
            a[i] = c % p;
            c /= p;
        }
        // Gaussian elimination mod p
        std::vector<long long> m = a;
        int rank = 0;
        for (int col = 0; col < n && rank < n; ++col) {
            int piv = -1;
            for (int r = rank; r < n; ++r)
                if (m[r * n + col] % p != 0) { piv = r; break; }
            if (piv < 0) continue;
            for (int k = 0; k < n; ++k) std::swap(m[piv * n + k], m[rank * n + k]);
            long long inv = 1;
            while ((m[rank * n + col] * inv) % p != 1) ++inv;
            for (int r = 0; r < n; ++r) {
                if (r == rank) continue;
                long long f = (m[r * n + col] * inv) % p;
                for (int k = 0; k < n; ++k) m[r * n + k] = ((m[r * n + k] - f * m[rank * n + k]) % p + p) % p;
            }
            ++rank;
        }
        if (rank == n) ++total;
    }
    return total;
}

CountingFunction delta_at(const MonoidPtr& m, Truncation t, const Element& e) {
    return CountingFunction::from(m, t, [&](const Element& x, int) { return x == e ? Q(1) : ExactScalar(); });
}

}  // namespace

TEST_CASE("fixed_elements examples") {
    auto N = std::make_shared<DiscreteLattice>(1);
    CHECK(N->fixed_elements(5, 3) == std::vector<Element>{{0}, {1}, {2}, {3}});
    auto A = FreeOrbitMonoid::affine_line(2, 8);
    CHECK(A->fixed_elements(1, 1).size() == 3);  // zero plus two F_2-points
    CHECK(A->fixed_elements(2, 1).size() == 5);  // zero plus four F_4-points
    // zeta consistency: q^{ng} effective 0-cycles of degree g on A^1 over F_{q^n}
    for (int n = 1; n <= 4; ++n)
        for (int g = 0; g * n <= 8; ++g) {
            long long cnt = 0;
            for (const auto& x : A->fixed_cached(n, g))
                if (static_cast<int>(x.size()) == g) ++cnt;
            CHECK(cnt == (1LL << (n * g)));
        }
    CHECK_THROWS_AS(A->fixed_elements(3, 3), Error);
    CHECK(FreeOrbitMonoid::irreducible_count(2, 4) == 3);
    CHECK(FreeOrbitMonoid::irreducible_count(3, 2) == 3);
}

TEST_CASE("decompositions and trace fibers") {
    auto N = std::make_shared<DiscreteLattice>(1);
    CHECK(N->decompositions({0}, 1, 3) == std::vector<std::vector<Element>>{{{0}, {0}, {0}}});
    CHECK(N->decompositions({2}, 1, 2) == std::vector<std::vector<Element>>{{{0}, {2}}, {{1}, {1}}, {{2}, {0}}});
    auto V = LinearObjectsMonoid::vect();
    CHECK(V->decompositions({3}, 1, 2).size() == 4);
    CHECK(V->trace_fibers({2}, 1, 2) == std::vector<Element>{{1}});
    CHECK(V->trace_fibers({3}, 1, 2).empty());

    auto A = FreeOrbitMonoid::affine_line(3, 6);
    // a degree-2 closed point at level 1 is the trace of either geometric point
    Element x{A->point_id(2, 0, 0), A->point_id(2, 0, 1)};
    REQUIRE(A->is_fixed(x, 1));
    auto fib = A->trace_fibers(x, 1, 2);
    CHECK(fib == std::vector<Element>{{A->point_id(2, 0, 0)}, {A->point_id(2, 0, 1)}});
    for (const auto& y : fib) CHECK(A->trace(y, 1, 2) == x);
    // trace fibers agree with brute-force search among fixed elements
    for (int n = 1; n <= 2; ++n)
        for (int m = 1; m <= 3; ++m)
            for (const auto& xx : A->fixed_cached(n, 3)) {
                int g = static_cast<int>(xx.size());
                if (g % m != 0 || n * g > 6) continue;
                std::vector<Element> brute;
                for (const auto& y : A->fixed_cached(n * m, g / m))
                    if (static_cast<int>(y.size()) * m == g && A->trace(y, n, m) == xx)
                        brute.push_back(y);
                CHECK(A->trace_fibers(xx, n, m) == brute);
            }
}

TEST_CASE("GL orders match direct enumeration") {
    for (int p : {2, 3})
        for (int n = 1; n <= 3; ++n) {
            long long direct = count_invertible(n, p);
            CHECK((gl_order(n, 1) - Q(direct)).vanishes_at(p));
            CHECK(gl_order(n, 1) * inverse_gl_order(n, 1) == Q(1));
        }
    // |GL_2(F_4)| = (16 - 1)(16 - 4)
    CHECK((gl_order(2, 2) - Q(180)).vanishes_at(2));
}

TEST_CASE("convolution examples") {
    auto N = std::make_shared<DiscreteLattice>(1);
    Truncation t{6, 6};
    auto unit = CountingFunction::unit(N, t);
    CHECK(convolve(unit, unit) == unit);
    auto d1 = delta_at(N, t, {1});
    CHECK(convolve(d1, d1) == delta_at(N, t, {2}));

    auto V = LinearObjectsMonoid::vect();
    Truncation tv{2, 2};
    auto st = stacky_function(V, tv, {});
    auto sq = convolve(st, st);
    ExactScalar q = q_power(1);
    ExactScalar expect = q / ((q - Q(1)) * (q - Q(1))) + Q(2) * q * q * inverse_gl_order(2, 1);
    CHECK(sq.value({2}, 1) == expect);
}

TEST_CASE("Adams examples") {
    auto N = std::make_shared<DiscreteLattice>(1);
    Truncation t{4, 8};
    // level-dependent values to see the level shift
    auto f = CountingFunction::from(N, t, [](const Element& x, int n) { return x[0] == 1 ? q_power(n) : ExactScalar(); });
    CHECK(adams(f, 1) == f);
    auto a2 = adams(f, 2);
    CHECK(a2.value({2}, 1) == q_power(2));
    CHECK(a2.value({2}, 3) == q_power(6));
    CHECK(a2.value({1}, 1).is_zero());

    auto A = FreeOrbitMonoid::affine_line(2, 4);
    Truncation ta{2, 4};
    // tautological degree-1 function: value n at each grade-1 element of level n
    auto taut = CountingFunction::from(A, ta, [](const Element& x, int n) { return x.size() == 1 ? Q(n) : ExactScalar(); });
    Element x{A->point_id(2, 0, 0), A->point_id(2, 0, 1)};
    CHECK(adams(taut, 2).value(x, 1) == Q(4));  // two geometric points, each worth 2
}

TEST_CASE("Sym and Log examples") {
    auto N = std::make_shared<DiscreteLattice>(1);
    Truncation t{6, 6};
    auto d1 = delta_at(N, t, {1});
    auto sym = pleth_sym(d1);
    for (int n = 1; n <= 6; ++n)
        for (int k = 0; k * n <= 6; ++k) CHECK(sym.value({k}, n) == Q(1));
    CHECK(pleth_sym(CountingFunction::zero(N, t)) == CountingFunction::unit(N, t));
    CHECK(log_direct(CountingFunction::unit(N, t)) == CountingFunction::zero(N, t));

    auto V = LinearObjectsMonoid::vect();
    Truncation tv{3, 3};
    auto lg = pleth_log(stacky_function(V, tv, {}));
    CHECK(lg.value({1}, 1) == q_power(make_rat(1, 2)) * ExactScalar::inv_q_power_minus_one(1));

    auto one_plus = CountingFunction::unit(N, t) + d1;
    CHECK(log_direct(one_plus) == pleth_log(one_plus));
}

TEST_CASE("gerbe twist: Log(1+fg) = g Log(1+f)") {
    std::mt19937_64 rng(11);
    auto N2 = std::make_shared<DiscreteLattice>(2);
    Truncation t{4, 8};
    // g(x)_n = c_n^{|x|} with c_n = (-1)^n q^{n/2}, so g(Tr y)_n = g(y)_{nm}
    auto g = CountingFunction::from(N2, t, [](const Element& x, int n) {
        int k = x[0] + x[1];
        return (ExactScalar(n % 2 ? -1 : 1) * q_power(make_rat(n, 2))).pow(k);
    });
    for (int it = 0; it < 3; ++it) {
        auto F = random_function(N2, t, rng, 1, true);
        auto unit = CountingFunction::unit(N2, t);
        auto f = F - unit;
        auto lhs = log_direct(unit + f.pointwise(g));
        auto rhs = log_direct(F).pointwise(g);
        CHECK(lhs.differences(rhs).empty());
    }
}

TEST_CASE("lambda-ring identities on small truncations") {
    std::mt19937_64 rng(2026);
    std::vector<std::pair<MonoidPtr, Truncation>> cases = {
        {std::make_shared<DiscreteLattice>(1), {4, 8}},
        {std::make_shared<DiscreteLattice>(2), {3, 6}},
        {FreeOrbitMonoid::affine_line(2, 6), {3, 6}},
        {LinearObjectsMonoid::vect(), {4, 8}},
    };
    for (const auto& [M, t] : cases) {
        CAPTURE(M->name());
        for (int it = 0; it < 2; ++it) {
            bool rich = M->name() != "A1/F_2";
            auto f = random_function(M, t, rng, 0, rich);
            auto g = random_function(M, t, rng, 0, rich);
            auto F = random_function(M, t, rng, 1, rich);
            auto h = random_function(M, t, rng, static_cast<long long>(rng() % 3), rich);
            // ring axioms
            CHECK(convolve(f, g) == convolve(g, f));
            CHECK(convolve(convolve(f, g), h) == convolve(f, convolve(g, h)));
            CHECK(convolve(h, CountingFunction::unit(M, t)) == h);
            for (int m = 1; m <= 3; ++m) {
                CHECK(adams(convolve(f, g), m) == convolve(adams(f, m), adams(g, m)));
                for (int m2 = 1; m * m2 <= 4; ++m2) CHECK(adams(adams(f, m), m2) == adams(f, m * m2));
            }
            CHECK(log_series(exp_series(f)) == f);
            CHECK(exp_series(log_series(F)) == F);
            CHECK(pleth_log(pleth_sym(f)) == f);
            CHECK(pleth_sym(pleth_log(F)) == F);
            CHECK(log_direct(F) == pleth_log(F));
        }
    }
}

TEST_CASE("pushforward and pullback") {
    std::mt19937_64 rng(5);
    auto A = FreeOrbitMonoid::affine_line(2, 6);
    auto N = std::make_shared<DiscreteLattice>(1);
    Truncation t{3, 6};
    auto phi = grading_morphism(A, N);
    // #A^1(F_{q^n}) = q^n
    auto taut = CountingFunction::from(A, t, [](const Element& x, int) { return x.size() == 1 ? Q(1) : ExactScalar(); });
    auto pf = pushforward(*phi, taut);
    for (int n = 1; n <= 6; ++n) CHECK(pf.value({1}, n) == Q(1LL << n));
    for (int it = 0; it < 2; ++it) {
        auto F = random_function(A, t, rng, 1, false);
        auto f = random_function(A, t, rng, 0, false);
        CHECK(pushforward(*phi, pleth_log(F)) == pleth_log(pushforward(*phi, F)));
        CHECK(pushforward(*phi, pleth_sym(f)) == pleth_sym(pushforward(*phi, f)));
        CHECK(pushforward(*phi, adams(f, 2)) == adams(pushforward(*phi, f), 2));
        CHECK(pushforward(*phi, convolve(f, F)) == convolve(pushforward(*phi, f), pushforward(*phi, F)));
    }
    auto id = identity_morphism(A);
    auto F = random_function(A, t, rng, 1, false);
    CHECK(pushforward(*id, F) == F);
    CHECK(pullback(*id, F) == F);

    auto N2 = std::make_shared<DiscreteLattice>(2);
    Truncation t2{4, 4};
    auto inc = inclusion_morphism(N, N2);
    auto G = random_function(N2, t2, rng, 1, true);
    CHECK(pullback(*inc, pleth_log(G)) == pleth_log(pullback(*inc, G)));
    CHECK(pullback(*inc, adams(G, 2)) == adams(pullback(*inc, G), 2));

    CHECK_THROWS_WITH_AS(pullback(*phi, pf), doctest::Contains("NotFullSubmonoid"), Error);
    auto collapse = collapse_morphism(A, N);
    CHECK_THROWS_WITH_AS(pushforward(*collapse, taut), doctest::Contains("NotSigmaFinite"), Error);
}

TEST_CASE("errors") {
    auto N = std::make_shared<DiscreteLattice>(1);
    auto N2 = std::make_shared<DiscreteLattice>(1);
    Truncation t{3, 3};
    auto a = CountingFunction::unit(N, t);
    auto b = CountingFunction::unit(N2, t);
    CHECK_THROWS_WITH_AS(convolve(a, b), doctest::Contains("MonoidMismatch"), Error);
    CHECK_THROWS_WITH_AS(convolve(a, CountingFunction::unit(N, {3, 4})), doctest::Contains("MonoidMismatch"), Error);
    CHECK_THROWS_WITH_AS(pleth_sym(a), doctest::Contains("NotAugmented"), Error);
    CHECK_THROWS_WITH_AS(pleth_log(CountingFunction::zero(N, t)), doctest::Contains("NotAugmented"), Error);
    CHECK_THROWS_WITH_AS(a.value({2}, 2), doctest::Contains("TruncationExceeded"), Error);
    // non-constant value at zero cannot be extended beyond the level budget
    auto f = CountingFunction::from(N, t, [](const Element&, int n) { return q_power(n); });
    CHECK_THROWS_WITH_AS(adams(f, 2), doctest::Contains("TruncationExceeded"), Error);
    auto A = FreeOrbitMonoid::affine_line(2, 4);
    Element x{A->point_id(2, 0, 0)};
    CountingFunction fa(A, {2, 4});
    CHECK_THROWS_WITH_AS(fa.set(x, 1, Q(1)), doctest::Contains("OutsideSupport"), Error);
    CHECK_NOTHROW(fa.set(x, 2, Q(1)));
}

TEST_CASE("volume elements") {
    VolumeElem v;
    for (int n = 1; n <= 6; ++n) v.levels.push_back(q_power(n));
    CHECK(v.adams(1) == v);
    CHECK(v.adams(2).levels == std::vector<ExactScalar>{q_power(2), q_power(4), q_power(6)});
    CHECK(v.adams(2).adams(3) == v.adams(6));
    VolumeElem w = v * v;
    CHECK(w.adams(2) == v.adams(2) * v.adams(2));
}
