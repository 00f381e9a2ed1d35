#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nosig/keyrate.hpp"

using namespace nosig;

TEST_CASE("entropy plumbing") {
    CHECK(binary_h(0.5) == Catch::Approx(1.0).margin(1e-12));
    CHECK(binary_h(0.0) == 0.0);
    CHECK(h3({1.0 / 3, 1.0 / 3, 1.0 / 3}) == Catch::Approx(1.0).margin(1e-12));
    CHECK(binary_h(0.11) == Catch::Approx(0.499916).margin(1e-5));
    CHECK_THROWS_AS(entropy({-0.1, 1.1}, 2.0), std::domain_error);
}

TEST_CASE("one-way isotropic rate and thresholds") {
    CHECK(ck_isotropic(1.0, 0.0).rate == Catch::Approx(1.0).margin(1e-12));
    CHECK(ck_isotropic_threshold(false, 1e-6) == Catch::Approx(0.318).margin(0.002));
    double thr_opt = ck_isotropic_threshold(true, 1e-6);
    CHECK(thr_opt == Catch::Approx(0.236).margin(0.002));
    // equivalently D ~ 6.3% under p_nl = sqrt2 (1-2D) - 1
    double D = 0.5 * (1.0 - (1.0 + thr_opt) / std::sqrt(2.0));
    CHECK(D == Catch::Approx(0.063).margin(0.001));
    // optimizer dominance
    for (double p = 0.05; p < 1.0; p += 0.05)
        CHECK(ck_isotropic_opt(p).rate >= ck_isotropic(p, 0.0).rate - 1e-12);
}

TEST_CASE("facet-limited one-way rate") {
    CHECK(ck_bell_limit(0.0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(ck_bell_limit(1.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(ck_bell_limit(0.5) ==
          Catch::Approx(1.0 - 0.5 * binary_h(0.25) - 0.25).margin(1e-12));
    for (double p_l = 0.0; p_l < 1.0; p_l += 0.05) CHECK(ck_bell_limit(p_l) > 0.0);
}

TEST_CASE("advantage distillation without pre-processing") {
    CHECK(ad_isotropic(0.3));
    CHECK_FALSE(ad_isotropic(0.1));
    CHECK(ad_isotropic_threshold() == Catch::Approx(0.2).margin(1e-8));
    // block-error ratio decays geometrically with asymptotic factor e/p_nl
    double p_nl = 0.25, e = (1.0 - p_nl) / 4.0;
    double prev = 0.0;
    for (int n = 1; n <= 30; ++n) {
        auto be = ad_block_errors(p_nl, n);
        double ratio = be.e_ab_block / be.e_e_block;
        if (n > 1) {
            CHECK(ratio < prev);
            if (n > 20) CHECK(ratio / prev == Catch::Approx(e / p_nl).epsilon(1e-6));
        }
        prev = ratio;
    }
}

TEST_CASE("advantage distillation with pre-processing") {
    // qA = qB = 0 reduces to the bare condition margin p_nl - p_l/4
    for (double p : {0.1, 0.2, 0.3})
        CHECK(ad_preprocessing_margin(p, 0.0, 0.0) ==
              Catch::Approx(p - (1.0 - p) / 4.0).margin(1e-12));
    // at p_nl = 0.15 flipping helps where doing nothing fails
    CHECK(ad_preprocessing_margin(0.15, 0.0, 0.0) < 0.0);
    CHECK(ad_preprocessing_opt(0.15).margin > 0.0);
    double thr = ad_preprocessing_threshold(1e-5);
    CHECK(thr >= 0.085);
    CHECK(thr <= 0.095);
}

TEST_CASE("intrinsic information closed form") {
    CHECK(intrinsic_info_chsh(1.0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(intrinsic_info_chsh(0.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(intrinsic_info_chsh(0.5) ==
          Catch::Approx(0.75 * (1.0 - binary_h(1.0 / 6.0))).margin(1e-12));
    for (int i = 1; i <= 100; ++i) CHECK(intrinsic_info_chsh(i / 100.0) > 0.0);
}

TEST_CASE("channel minimization against the conjectured map") {
    double p_nl = 0.5;
    auto joint = to_joint(build_tripartite(decompose(make_isotropic(p_nl))));
    // identity channel reproduces I(A:B|E) = p_nl
    EveChannel ident(joint.symbols.size(),
                     std::vector<double>(joint.symbols.size(), 0.0));
    for (std::size_t i = 0; i < ident.size(); ++i) ident[i][i] = 1.0;
    check_channel(ident);
    CHECK(channel_cmi(joint, ident) == Catch::Approx(p_nl).margin(1e-12));
    // the conjectured map evaluates to the closed form
    CHECK(channel_cmi(joint, partial_to_none_channel(joint.symbols)) ==
          Catch::Approx(intrinsic_info_chsh(p_nl)).margin(1e-12));
    auto res = intrinsic_info_numeric(joint, 10);
    CHECK(res.value <= intrinsic_info_chsh(p_nl) + 1e-9);
    CHECK(res.value == Catch::Approx(intrinsic_info_chsh(p_nl)).margin(1e-3));
    CHECK_THROWS_AS(check_channel(EveChannel{{0.5, 0.4}}), std::domain_error);
}

TEST_CASE("d=3 one-way rate") {
    CHECK(ck_d3(1.0, 0.0, 0.0).rate == Catch::Approx(1.0).margin(1e-12));
    CHECK(ck_d3(1.0, 0.0, 0.0).bits == Catch::Approx(std::log2(3.0)).margin(1e-12));
    // q = 0 closed form
    double p0 = 0.85, p1 = 0.1;
    double p_l = 1.0 - (2.0 * (p0 - p1) - 1.0);
    double expect = 1.0 - h3({p0, (1 - p0) / 2, (1 - p0) / 2}) -
                    p_l * (1.0 - 0.5 * std::log(2.0) / std::log(3.0));
    CHECK(ck_d3(p0, p1, 0.0).rate == Catch::Approx(expect).margin(1e-12));
    CHECK(ck_d3_opt(p0, p1).rate >= ck_d3(p0, p1, 0.0).rate - 1e-12);
    CHECK_THROWS_AS(ck_d3(0.5, 0.4, 0.0), std::domain_error);
}

TEST_CASE("d=3 two-way condition and its endpoints") {
    CHECK(ad_d3(0.9, 0.05));
    // boundary p1 = 0: equality at p0 = 3/5, i.e. p_nl = 1/5
    CHECK_FALSE(ad_d3(0.6, 0.0));
    CHECK(ad_d3(0.6 + 1e-9, 0.0));
    CHECK(2.0 * (0.6 - 0.0) - 1.0 == Catch::Approx(0.2).margin(1e-12));
    // boundary p2 = 0: equality at p0 = 7/9, p_nl = 1/9
    CHECK_FALSE(ad_d3(7.0 / 9.0, 2.0 / 9.0));
    CHECK(ad_d3(7.0 / 9.0 + 1e-9, 2.0 / 9.0 - 1e-9));
    CHECK(2.0 * (7.0 / 9.0 - 2.0 / 9.0) - 1.0 == Catch::Approx(1.0 / 9.0).margin(1e-12));
}

TEST_CASE("d=3 intrinsic-information zero region") {
    // on the line 5p0 - 2p1 - 3 = 0 the bound vanishes
    for (double p0 : {0.61, 0.64, 2.0 / 3.0 - 1e-6}) {
        double p1 = (5.0 * p0 - 3.0) / 2.0;
        auto r = intrinsic_zero_region_d3(p0, p1);
        CHECK(r.upper_bound == Catch::Approx(0.0).margin(1e-10));
        CHECK(r.in_zero_region);
    }
    auto m3 = intrinsic_zero_region_d3(0.75, 0.25);
    CHECK(m3.linear_form == Catch::Approx(0.25).margin(1e-12));
    CHECK_FALSE(m3.in_zero_region);
    CHECK(m3.upper_bound > 0.0);
    auto p = intrinsic_zero_region_d3(0.7, 0.18);
    CHECK(p.linear_form == Catch::Approx(0.14).margin(1e-12));
    CHECK_FALSE(p.in_zero_region);

    // below the line, the map applied with a suitable probability kills the
    // conditional mutual information even though p_nl > 0
    double p0 = 0.63, p1 = 0.1;  // 5 p0 - 2 p1 - 3 = -0.05, p_nl = 0.06
    REQUIRE(5.0 * p0 - 2.0 * p1 - 3.0 < 0.0);
    SlicePoint sp{3, {p0, p1, 1.0 - p0 - p1}};
    REQUIRE(sp.p_nl() > 0.0);
    auto joint = to_joint(build_tripartite(decompose_d3(sp)));
    auto lam = lambda_map_minimum(joint);
    CHECK(lam.value <= 1e-6);
    CHECK(lam.x < 1.0);
}

TEST_CASE("generic d bounds on the slice") {
    SlicePoint pure{4, {1.0, 0.0, 0.0, 0.0}};
    CHECK(generic_d_oneway(pure).rate == Catch::Approx(1.0).margin(1e-12));
    CHECK(generic_d_ad(pure));

    // d = 3 reduction to the explicit rate at q = 0
    for (double p0 : {0.8, 0.9})
        for (double p1 : {0.0, 0.05}) {
            SlicePoint sp{3, {p0, p1, 1.0 - p0 - p1}};
            CHECK(generic_d_oneway(sp).rate ==
                  Catch::Approx(ck_d3(p0, p1, 0.0).rate).margin(1e-12));
            CHECK(generic_d_ad(sp) == ad_d3(p0, p1));
        }

    // d = 5 mixture of the extremal point with uniform noise: the two-way
    // condition flips at a unique weight, located by bisection
    auto point = [](double w) {
        SlicePoint sp{5, std::vector<double>(5, (1.0 - w) / 5.0)};
        sp.pf[0] += w;
        return sp;
    };
    auto sgn = [&](double w) {
        auto sp = point(w);
        double m = 0.0;
        for (int delta = 1; delta < 5; ++delta)
            m = std::max(m, sp.error_profile()[delta]);
        return sp.p_nl() - m;
    };
    double w = opt::bisect(sgn, 0.0, 1.0, 1e-10);
    CHECK_FALSE(generic_d_ad(point(std::max(0.0, w - 1e-6))));
    CHECK(generic_d_ad(point(w + 1e-6)));
}
