#include "hybeam/core.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace hybeam;

TEST_CASE("codebook members for small B")
{
    const PhaseCodebook b1(1);
    REQUIRE(b1.size() == 2);
    CHECK(b1.phases()[0] == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(b1.phases()[1] == doctest::Approx(two_pi).epsilon(1e-15));

    const PhaseCodebook b2(2);
    REQUIRE(b2.size() == 4);
    CHECK(b2.phases()[0] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(b2.phases()[1] == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(b2.phases()[2] == doctest::Approx(3 * std::numbers::pi / 2).epsilon(1e-15));
    CHECK(b2.phases()[3] == doctest::Approx(two_pi).epsilon(1e-15));

    const PhaseCodebook b3(3);
    REQUIRE(b3.size() == 8);
    for (std::size_t i = 1; i < 8; ++i)
        CHECK(b3.phases()[i] - b3.phases()[i - 1] ==
              doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));

    CHECK_THROWS_AS(PhaseCodebook(0), std::invalid_argument);
}

TEST_CASE("codebook phases strictly increasing in (0, 2pi]")
{
    for (int bits : {1, 2, 3, 5, 8}) {
        const PhaseCodebook cb(bits);
        CHECK(cb.size() == (std::size_t{1} << bits));
        CHECK(cb.phases().front() > 0.0);
        CHECK(cb.phases().back() == doctest::Approx(two_pi).epsilon(1e-15));
        for (std::size_t i = 1; i < cb.size(); ++i)
            CHECK(cb.phases()[i] > cb.phases()[i - 1]);
    }
}

TEST_CASE("one-bit phasors are exactly +1 and -1")
{
    const PhaseCodebook cb(1);
    CHECK(cb.phasor(0) == cxd(-1.0, 0.0));
    CHECK(cb.phasor(1) == cxd(1.0, 0.0));
    const PhaseCodebook cb2(2);
    CHECK(cb2.phasor(0) == cxd(0.0, 1.0));
    CHECK(cb2.phasor(2) == cxd(0.0, -1.0));
}

TEST_CASE("quantize_phase picks the circularly nearest member")
{
    const PhaseCodebook b2(2);
    CHECK(b2.quantize(0.1) == b2.phases()[3]); // 2pi beats pi/2
    const PhaseCodebook b1(1);
    CHECK(b1.quantize(std::numbers::pi) == b1.phases()[0]); // exact member
}

TEST_CASE("quantize_phase resolves exact midpoints to the smaller index")
{
    const PhaseCodebook b2(2);
    // pi/4 is equidistant from 2pi and pi/2; b = 1 wins.
    CHECK(b2.quantize(std::numbers::pi / 4) == b2.phases()[0]);
}

TEST_CASE("quantize_phase rejects non-finite input")
{
    const PhaseCodebook cb(2);
    CHECK_THROWS_AS(cb.quantize(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK_THROWS_AS(cb.quantize(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("quantize_phase is idempotent and within the resolution bound")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-30.0, 30.0);
    for (int bits = 1; bits <= 16; ++bits) {
        const PhaseCodebook cb(bits);
        const double bound = std::numbers::pi / static_cast<double>(std::size_t{1} << bits);
        for (int trial = 0; trial < 200; ++trial) {
            const double theta = dist(rng);
            const double q = cb.quantize(theta);
            CHECK(cb.quantize(q) == q);
            CHECK(circular_distance(theta, q) <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("analog beamformer construction satisfies its invariants")
{
    const PhaseCodebook cb(2);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 3);
    MatR phases(8, 3);
    for (Eigen::Index j = 0; j < 3; ++j)
        for (Eigen::Index i = 0; i < 8; ++i)
            phases(i, j) = cb.phases()[static_cast<std::size_t>(pick(rng))];
    const AnalogBeamformer bf = AnalogBeamformer::from_phases(phases);
    CHECK(bf.scale == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-15));
    CHECK_NOTHROW(bf.validate(cb));

    AnalogBeamformer bad_mod = bf;
    bad_mod.matrix(0, 0) *= 1.5;
    CHECK_THROWS_AS(bad_mod.validate(cb), std::invalid_argument);

    AnalogBeamformer bad_phase = bf;
    bad_phase.matrix(1, 1) = bf.scale * unit_phasor(0.3);
    CHECK_THROWS_AS(bad_phase.validate(cb), std::invalid_argument);
}

TEST_CASE("hybrid power validation")
{
    HybridBeamformer hb;
    const MatR ph = MatR::Zero(4, 2);
    hb.f_rf = AnalogBeamformer::from_phases(ph);
    hb.w_rf = AnalogBeamformer::from_phases(ph);
    hb.f_bb = MatC::Identity(2, 2);
    hb.w_bb = MatC::Identity(2, 2);
    // Unit-norm analog columns with identity digital: squared norm is N_s.
    CHECK_NOTHROW(hb.validate_power());
    hb.f_bb *= 2.0;
    CHECK_THROWS_AS(hb.validate_power(), std::invalid_argument);
}

TEST_CASE("config validation")
{
    SystemConfig cfg;
    cfg.n_tx = 16;
    cfg.n_rx = 16;
    cfg.n_streams = cfg.n_rf_tx = cfg.n_rf_rx = 2;
    cfg.bits = 2;
    cfg.n_paths = 4;
    CHECK_NOTHROW(validate_su(cfg));

    SystemConfig bad = cfg;
    bad.n_rf_rx = 3;
    CHECK_THROWS_AS(validate_su(bad), std::invalid_argument);
    bad = cfg;
    bad.n_streams = bad.n_rf_tx = bad.n_rf_rx = 20;
    CHECK_THROWS_AS(validate_su(bad), std::invalid_argument);
    bad = cfg;
    bad.n_paths = 1;
    CHECK_THROWS_AS(validate_su(bad), std::invalid_argument);
    bad = cfg;
    bad.bits = 0;
    CHECK_THROWS_AS(validate_su(bad), std::invalid_argument);

    SystemConfig mu;
    mu.n_tx = 16;
    mu.n_rx = 64;
    mu.n_streams = 1;
    mu.n_rf_tx = 1;
    mu.n_rf_rx = 4;
    CHECK_NOTHROW(validate_mu(mu, 4));
    CHECK_THROWS_AS(validate_mu(mu, 3), std::invalid_argument);
}
