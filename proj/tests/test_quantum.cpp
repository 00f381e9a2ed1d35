#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nosig/quantum.hpp"

using namespace nosig;

static constexpr std::uint64_t kSeed = 20060915;

static SchmidtState random_state(int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> c(d);
    double n = 0.0;
    for (auto& v : c) {
        v = u(rng);
        n += v * v;
    }
    n = std::sqrt(n);
    for (auto& v : c) v /= n;
    return SchmidtState(d, c);
}

TEST_CASE("qubit point reaches the quantum bound") {
    auto st = SchmidtState::maximally_entangled(2);
    auto t = qudit_distribution(st);
    CHECK(validate(t).ok(1e-10));
    CHECK(chsh_value(t) == Catch::Approx(2.0 + std::sqrt(2.0)).margin(1e-12));
    auto sp = qudit_slice(st);
    CHECK(sp.p_nl() == Catch::Approx(std::sqrt(2.0) - 1.0).margin(1e-12));
}

TEST_CASE("measured states always give valid slice correlations") {
    std::mt19937_64 rng(kSeed);
    for (int d = 2; d <= 6; ++d)
        for (int i = 0; i < 20; ++i) {
            auto t = qudit_distribution(random_state(d, rng));
            CHECK(validate(t).ok(1e-10));
            CHECK(slice_residual(t) < 1e-10);
        }
}

TEST_CASE("d=3 closed forms match the cosine sums") {
    for (int i = 0; i <= 20; ++i) {
        double g = i / 20.0;
        auto analytic = probsgamma(g);
        auto numeric = qudit_slice(SchmidtState::gamma_state(g));
        for (int f = 0; f < 3; ++f)
            CHECK(analytic.pf[f] == Catch::Approx(numeric.pf[f]).margin(1e-10));
    }
    CHECK(probsgamma(1.0).p_nl() == Catch::Approx(0.4365).margin(5e-4));
    double g_mv = (std::sqrt(11.0) - std::sqrt(3.0)) / 2.0;
    CHECK(probsgamma(g_mv).p_nl() == Catch::Approx(0.4574).margin(5e-4));
    CHECK(g_mv == Catch::Approx(0.7923).margin(5e-4));
}

TEST_CASE("attack family and error-rate relations") {
    auto a0 = channel_from_disturbance(0.0);
    CHECK(a0.l1 == 1.0);
    CHECK(a0.qber_chsh() == Catch::Approx(q0_chsh()).margin(1e-12));
    CHECK(q0_chsh() == Catch::Approx((1.0 - 1.0 / std::sqrt(2.0)) / 2.0).margin(1e-12));

    auto a = channel_from_disturbance(0.11);
    CHECK(a.l1 == Catch::Approx(0.7921).margin(1e-12));
    CHECK(a.l2 == Catch::Approx(0.0979).margin(1e-12));
    CHECK(a.l4 == Catch::Approx(0.0121).margin(1e-12));

    for (double D = 0.0; D <= 0.5; D += 0.05) {
        auto at = channel_from_disturbance(D);
        CHECK(at.qber_bb84() ==
              Catch::Approx(std::sqrt(2.0) * (at.qber_chsh() - q0_chsh())).margin(1e-12));
        CHECK(at.l1 + 2.0 * at.l2 + at.l4 == Catch::Approx(1.0).margin(1e-12));
    }
    CHECK_THROWS_AS(channel_from_disturbance(0.7), std::domain_error);
}

TEST_CASE("jacobi eigenvalues of small symmetric matrices") {
    Mat m{{2, 1, 0}, {1, 2, 0}, {0, 0, 5}};
    auto w = jacobi_eigenvalues(m);
    std::sort(w.begin(), w.end());
    CHECK(w[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(w[1] == Catch::Approx(3.0).margin(1e-12));
    CHECK(w[2] == Catch::Approx(5.0).margin(1e-12));

    // eigenvalues of Eve's conditional states form a distribution
    for (double D : {0.05, 0.15, 0.3}) {
        auto at = channel_from_disturbance(D);
        for (int i = 0; i < 2; ++i) {
            auto rho = detail::normalized(detail::eve_conditional(
                at, Side::Bob, {std::numbers::pi / 4, 3 * std::numbers::pi / 4}, i));
            auto ev = jacobi_eigenvalues(rho);
            double s = 0.0;
            for (double v : ev) {
                CHECK(v >= -1e-10);
                s += v;
            }
            CHECK(s == Catch::Approx(1.0).margin(1e-10));
        }
    }
}

TEST_CASE("clean-channel rate and protocol equivalence") {
    double expect = 1.0 - binary_h((1.0 + 1.0 / std::sqrt(2.0)) / 2.0);
    CHECK(dw_rate_chsh(0.0, 0.0) == Catch::Approx(expect).margin(1e-10));

    // identical rates when the error-rate and flip-probability relations hold
    double q0 = q0_chsh();
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 5; ++j) {
            double D = 0.3 * i / 9.0;
            double qc = 0.4 * j / 4.0;
            if (q0 + qc / std::sqrt(2.0) > 0.5) continue;
            auto r = equivalence_check(D, qc);
            CHECK(std::abs(r.diff) < 1e-8);
        }
}

TEST_CASE("disturbance-to-nonlocality parametrization") {
    for (double D : {0.0, 0.05, 0.1}) {
        double p = p_nl_from_disturbance(D);
        CHECK(disturbance_from_p_nl(p) == Catch::Approx(D).margin(1e-12));
    }
    CHECK(p_nl_from_disturbance(0.0) == Catch::Approx(std::sqrt(2.0) - 1.0).margin(1e-12));
}

TEST_CASE("schmidt optimization stays symmetric for moderate d") {
    auto opt5 = schmidt_optimize_oneway(5);
    for (int k = 0; k < 5; ++k)
        CHECK(opt5.state.c[k] == Catch::Approx(opt5.state.c[4 - k]).margin(1e-9));
    CHECK(opt5.rate_bits >
          generic_d_oneway(qudit_slice(SchmidtState::maximally_entangled(5))).bits - 1e-9);
    CHECK(opt5.eta <= 1.0 + 1e-12);
}
