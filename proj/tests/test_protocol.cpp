#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "nosig/protocol.hpp"

using namespace nosig;

static constexpr std::uint64_t kSeed = 20060915;

static EveDecomposition random_d2_decomposition(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto strategies = chsh_facet_strategies();
    EveDecomposition dec;
    dec.d = 2;
    std::vector<double> w(9);
    double tot = 0.0;
    for (auto& v : w) {
        v = -std::log(1.0 - u(rng));
        tot += v;
    }
    dec.p_nl = w[0] / tot;
    for (int j = 0; j < 8; ++j) dec.locals.push_back({strategies[j], w[j + 1] / tot});
    return dec;
}

TEST_CASE("pseudo-sifting turns the nonlocal point into perfect correlation") {
    auto s = pseudo_sift(make_pr_box());
    for (int x = 0; x < 2; ++x) {
        CHECK(s.table(x)[0][0] + s.table(x)[1][1] == Catch::Approx(1.0).margin(1e-12));
        CHECK(s.error_rate(x) == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("isotropic error rate and d=3 slice error profile") {
    for (double p_nl : {0.1, 0.4, 0.8}) {
        auto s = pseudo_sift(make_isotropic(p_nl));
        for (int x = 0; x < 2; ++x)
            CHECK(s.error_rate(x) == Catch::Approx((1.0 - p_nl) / 4.0).margin(1e-12));
    }
    SlicePoint sp{3, {0.7, 0.2, 0.1}};
    auto s = pseudo_sift(sp.to_table());
    auto prof = s.delta_profile();
    CHECK(prof[1] == Catch::Approx((1.0 - 0.7) / 2.0).margin(1e-12));
    CHECK(prof[2] == Catch::Approx((1.0 - 0.7) / 2.0).margin(1e-12));
    // independent of x, P(a, a-Delta|x) = (p_D + p_-D)/(2d)
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 3; ++a)
            for (int delta = 0; delta < 3; ++delta)
                CHECK(s.table(x)[a][mod(a - delta, 3)] ==
                      Catch::Approx((sp.pf[delta] + sp.pf[mod(-delta, 3)]) / 6.0)
                          .margin(1e-12));
}

TEST_CASE("d=2 isotropic tripartite table, cell by cell") {
    double p_nl = 0.4, p_l = 0.6;
    auto t = build_tripartite(decompose(make_isotropic(p_nl)));
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            CHECK(t.prob(x, a, a, EveSymbol::none()) ==
                  Catch::Approx(p_nl / 2.0).margin(1e-12));
            CHECK(t.prob(x, a, a, EveSymbol::full(a, a)) ==
                  Catch::Approx(p_l / 4.0).margin(1e-12));
            CHECK(t.prob(x, a, a, EveSymbol::partial(a)) ==
                  Catch::Approx(p_l / 8.0).margin(1e-12));
            CHECK(t.prob(x, a, 1 - a, EveSymbol::partial(a)) ==
                  Catch::Approx(p_l / 8.0).margin(1e-12));
        }
}

TEST_CASE("tripartite marginal reproduces the sifted distribution") {
    std::mt19937_64 rng(kSeed);
    for (int i = 0; i < 20; ++i) {
        auto dec = random_d2_decomposition(rng);
        auto t = build_tripartite(dec);
        auto s = pseudo_sift(dec);
        for (int x = 0; x < 2; ++x) {
            auto m = t.sifted(x);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    CHECK(m[a][b] == Catch::Approx(s.table(x)[a][b]).margin(1e-12));
        }
    }
}

TEST_CASE("d=3 tripartite table with the information-optimal split") {
    double p0 = 0.8, p1 = 0.12, p2 = 0.08;
    SlicePoint sp{3, {p0, p1, p2}};
    double p_nl = sp.p_nl(), p_l = 1.0 - p_nl;
    auto t = build_tripartite(decompose_d3(sp));
    for (int x = 0; x < 2; ++x) {
        for (int i = 0; i < 3; ++i) {
            CHECK(t.prob(x, i, i, EveSymbol::none()) ==
                  Catch::Approx(p_nl / 3.0).margin(1e-12));
            CHECK(t.prob(x, i, i, EveSymbol::full(i, i)) ==
                  Catch::Approx(p_l / 6.0).margin(1e-12));
            CHECK(t.prob(x, i, i, EveSymbol::partial(i)) ==
                  Catch::Approx(p_l / 12.0 - p2 / 6.0).margin(1e-12));
            for (int j = 0; j < 3; ++j)
                if (j != i)
                    CHECK(t.prob(x, i, j, EveSymbol::partial(i)) ==
                          Catch::Approx((1.0 - p0) / 6.0).margin(1e-12));
        }
        // row/column sums are 1/3
        auto m = t.sifted(x);
        for (int i = 0; i < 3; ++i) {
            double row = 0.0, col = 0.0;
            for (int j = 0; j < 3; ++j) {
                row += m[i][j];
                col += m[j][i];
            }
            CHECK(row == Catch::Approx(1.0 / 3.0).margin(1e-12));
            CHECK(col == Catch::Approx(1.0 / 3.0).margin(1e-12));
        }
    }
}

TEST_CASE("free decomposition parameters are invisible in the cell sums") {
    SlicePoint sp{3, {0.78, 0.1, 0.12}};
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto ref = build_tripartite(decompose_d3(sp));
    for (int trial = 0; trial < 10; ++trial) {
        M2Parameters par;
        double p2c = u(rng) / 6.0;
        for (int r = 0; r < 3; ++r) {
            par.p2[r] = p2c;
            par.pe1[r] = (1.0 / 6.0 - p2c) * u(rng);
        }
        auto t = build_tripartite(decompose_d3(sp, par));
        for (int x = 0; x < 2; ++x) {
            auto a = t.sifted(x);
            auto b = ref.sifted(x);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(a[i][j] == Catch::Approx(b[i][j]).margin(1e-12));
        }
    }
}

TEST_CASE("pre-processing identities") {
    auto t = build_tripartite(decompose(make_isotropic(0.3)));
    auto same = preprocess_tripartite(t, 0.0, 0.0);
    for (const auto& en : t.entries())
        CHECK(same.prob(en.x, en.a, en.b, en.e) == Catch::Approx(en.p).margin(1e-12));

    auto flat = preprocess_tripartite(t, 0.5, 0.5);
    auto m = flat.sifted(0);
    CHECK(m[0][1] + m[1][0] == Catch::Approx(0.5).margin(1e-12));
    // Eve classes spread evenly over both a values
    for (int a = 0; a < 2; ++a)
        CHECK(flat.eve_marginal(0, EveSymbol::partial(0)) ==
              Catch::Approx(2.0 * flat.prob(0, a, 0, EveSymbol::partial(0)) +
                            2.0 * flat.prob(0, a, 1, EveSymbol::partial(0)))
                  .margin(1e-12));

    double p_nl = 0.3, p_l = 0.7, qA = 0.1, qB = 0.2;
    auto pre = preprocess_tripartite(t, qA, qB);
    double e = 0.0;
    auto s = pre.sifted(0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            if (a != b) e += s[a][b];
    double expected =
        (p_nl + p_l / 2.0) * (qA * (1 - qB) + (1 - qA) * qB) + p_l / 4.0;
    CHECK(e == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("uncertainty relation holds for every decomposition") {
    std::mt19937_64 rng(kSeed);
    for (int i = 0; i < 100; ++i) {
        auto dec = random_d2_decomposition(rng);
        auto t = build_tripartite(dec);
        for (int x = 0; x < 2; ++x) {
            auto r = uncertainty_relation(t, x);
            CHECK(r.h_b_given_e == Catch::Approx(r.one_minus_2e).margin(1e-12));
        }
        // conditioned mutual information equals the nonlocal weight
        for (int x = 0; x < 2; ++x)
            CHECK(conditional_mutual_information(t, x) ==
                  Catch::Approx(dec.p_nl).margin(1e-12));
    }
    // explicit slopes: weight on one strategy only
    auto strategies = chsh_facet_strategies();
    double p_l = 0.3;
    EveDecomposition dec;
    dec.d = 2;
    dec.p_nl = 1.0 - p_l;
    dec.locals.push_back({strategies[0], p_l});  // a=0, b=0 for all inputs
    auto t = build_tripartite(dec);
    auto r0 = uncertainty_relation(t, 0);
    CHECK(r0.h_b_given_e == Catch::Approx(1.0 - p_l).margin(1e-12));
}

TEST_CASE("symbol codes round-trip through the CSV encoding") {
    for (int d : {2, 3}) {
        std::vector<EveSymbol> syms{EveSymbol::none(), EveSymbol::full(1, 0),
                                    EveSymbol::partial(d - 1)};
        for (const auto& s : syms) CHECK(decode_eve_symbol(s.encode(d)) == s);
    }
    auto t = build_tripartite(decompose(make_isotropic(0.25)));
    std::stringstream ss;
    t.write_csv(ss);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "x,a,b,eve_symbol,probability");
    int rows = 0;
    for (std::string line; std::getline(ss, line);) ++rows;
    CHECK(rows == int(t.entries().size()));
}
