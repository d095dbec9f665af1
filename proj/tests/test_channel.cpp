#include "hybeam/channel.hpp"

#include <Eigen/SVD>
#include <doctest.h>

#include <cstdio>
#include <random>

using namespace hybeam;

namespace {

SystemConfig small_config(int n, int streams, int paths)
{
    SystemConfig cfg;
    cfg.n_tx = cfg.n_rx = n;
    cfg.n_streams = cfg.n_rf_tx = cfg.n_rf_rx = streams;
    cfg.n_paths = paths;
    return cfg;
}

} // namespace

TEST_CASE("array response closed forms")
{
    const VecC a0 = array_response(4, 0.0, 0.5);
    for (int k = 0; k < 4; ++k) {
        CHECK(a0(k).real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(a0(k).imag() == doctest::Approx(0.0).epsilon(1e-14));
    }

    // sin(pi/2) = 1: second element picks up a phase of pi.
    const VecC a1 = array_response(2, std::numbers::pi / 2, 0.5);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(a1(0).real() == doctest::Approx(s).epsilon(1e-14));
    CHECK(a1(1).real() == doctest::Approx(-s).epsilon(1e-12));
    CHECK(std::abs(a1(1).imag()) < 1e-12);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(-std::numbers::pi / 2, std::numbers::pi / 2);
    for (int t = 0; t < 50; ++t) {
        const VecC a = array_response(16, ang(rng), 0.5);
        CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(array_response(0, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(array_response(4, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("sample_channel is deterministic for a fixed seed")
{
    const SystemConfig cfg = small_config(16, 2, 6);
    std::mt19937_64 r1(99), r2(99);
    const ChannelRealization a = sample_channel(cfg, r1);
    const ChannelRealization b = sample_channel(cfg, r2);
    REQUIRE(a.h.rows() == b.h.rows());
    CHECK((a.h.array() == b.h.array()).all());
    std::mt19937_64 r3(100);
    const ChannelRealization c = sample_channel(cfg, r3);
    CHECK(!(a.h.array() == c.h.array()).all());
}

TEST_CASE("channel rank is bounded by the path count")
{
    const SystemConfig cfg = small_config(16, 2, 6);
    std::mt19937_64 rng(4);
    const ChannelRealization ch = sample_channel(cfg, rng);
    Eigen::JacobiSVD<MatC> svd(ch.h);
    const VecR s = svd.singularValues();
    for (Eigen::Index i = 6; i < s.size(); ++i)
        CHECK(s(i) <= 1e-10 * s(0));
}

TEST_CASE("channel reconstructs from its path parameters")
{
    const SystemConfig cfg = small_config(8, 1, 5);
    std::mt19937_64 rng(21);
    const ChannelRealization ch = sample_channel(cfg, rng);
    REQUIRE(ch.paths.size() == 5);
    const double amp = std::sqrt(8.0 * 8.0 / 5.0);
    MatC rebuilt = MatC::Zero(8, 8);
    for (const PathParams& p : ch.paths) {
        CHECK(p.aod >= -std::numbers::pi / 2);
        CHECK(p.aod <= std::numbers::pi / 2);
        CHECK(p.aoa >= -std::numbers::pi / 2);
        CHECK(p.aoa <= std::numbers::pi / 2);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                const cxd ar = std::polar(1.0 / std::sqrt(8.0),
                                          two_pi * 0.5 * i * std::sin(p.aoa));
                const cxd at = std::polar(1.0 / std::sqrt(8.0),
                                          two_pi * 0.5 * j * std::sin(p.aod));
                rebuilt(i, j) += amp * p.gain * ar * std::conj(at);
            }
    }
    CHECK((rebuilt - ch.h).norm() <= 1e-10 * ch.h.norm());
}

TEST_CASE("channel power statistics match the model")
{
    const SystemConfig cfg = small_config(16, 2, 4);
    const double expected = 16.0 * 16.0 / 4.0;
    std::mt19937_64 rng(8);
    const int draws = 20000;
    double acc = 0.0;
    MatC mean = MatC::Zero(16, 16);
    for (int t = 0; t < draws; ++t) {
        const ChannelRealization ch = sample_channel(cfg, rng);
        acc += ch.h.squaredNorm();
        mean += ch.h;
    }
    acc /= draws;
    CHECK(std::abs(acc - expected) <= 0.02 * expected);

    // Entrywise mean: each component is N(0, 1/(2L)) scaled; 4.5 standard
    // errors keeps the 512-way union bound comfortably rare.
    mean /= static_cast<double>(draws);
    const double se = std::sqrt(1.0 / (2.0 * 4.0) / draws);
    CHECK(mean.real().cwiseAbs().maxCoeff() <= 4.5 * se);
    CHECK(mean.imag().cwiseAbs().maxCoeff() <= 4.5 * se);
}

TEST_CASE("truncate_svd on a diagonal matrix")
{
    MatC h = MatC::Zero(3, 3);
    h(0, 0) = 3.0;
    h(1, 1) = 2.0;
    h(2, 2) = 1.0;
    const TruncatedSvd svd = truncate_svd(h, 2);
    CHECK(svd.sigma_hat(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(svd.sigma_hat(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(truncate_svd(h, 4), std::invalid_argument);
}

TEST_CASE("truncate_svd orthonormality, ordering and best approximation")
{
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g(0.0, 1.0);
    MatC h(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            h(i, j) = cxd(g(rng), g(rng));

    const TruncatedSvd svd = truncate_svd(h, 3);
    const MatC iu = svd.u_hat.adjoint() * svd.u_hat;
    const MatC iv = svd.v_hat.adjoint() * svd.v_hat;
    CHECK((iu - MatC::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((iv - MatC::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(svd.sigma_hat(0) >= svd.sigma_hat(1));
    CHECK(svd.sigma_hat(1) >= svd.sigma_hat(2));

    // Residual of the rank-3 expansion equals the tail singular energy.
    Eigen::JacobiSVD<MatC> full(h);
    const VecR s = full.singularValues();
    double tail = 0.0;
    for (int i = 3; i < 8; ++i)
        tail += s(i) * s(i);
    const MatC approx = svd.u_hat * svd.sigma_hat.asDiagonal() * svd.v_hat.adjoint();
    CHECK((h - approx).norm() == doctest::Approx(std::sqrt(tail)).epsilon(1e-10));

    // Leading block agrees with an independent full decomposition.
    for (int k = 0; k < 3; ++k)
        CHECK(svd.sigma_hat(k) == doctest::Approx(s(k)).epsilon(1e-10));

    // Phase convention: largest-modulus entry of each right column is real
    // positive.
    for (int k = 0; k < 3; ++k) {
        Eigen::Index imax = 0;
        svd.v_hat.col(k).cwiseAbs().maxCoeff(&imax);
        CHECK(svd.v_hat(imax, k).imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(svd.v_hat(imax, k).real() > 0.0);
    }
}

TEST_CASE("channel csv round trip")
{
    const SystemConfig cfg = small_config(6, 1, 3);
    std::mt19937_64 rng(77);
    const ChannelRealization ch = sample_channel(cfg, rng, 0.4);
    const std::string path = "channel_roundtrip_test.csv";
    save_channel_csv(ch, path);
    const ChannelRealization back = load_channel_csv(path);
    REQUIRE(back.h.rows() == ch.h.rows());
    REQUIRE(back.h.cols() == ch.h.cols());
    CHECK((back.h.array() == ch.h.array()).all());
    CHECK(back.spacing_over_lambda == ch.spacing_over_lambda);
    REQUIRE(back.paths.size() == ch.paths.size());
    for (std::size_t i = 0; i < ch.paths.size(); ++i) {
        CHECK(back.paths[i].gain == ch.paths[i].gain);
        CHECK(back.paths[i].aod == ch.paths[i].aod);
        CHECK(back.paths[i].aoa == ch.paths[i].aoa);
    }
    std::remove(path.c_str());
    std::remove((path + ".paths").c_str());
}

TEST_CASE("mix_seed separates trials")
{
    CHECK(mix_seed(1, 0) != mix_seed(1, 1));
    CHECK(mix_seed(1, 0) != mix_seed(2, 0));
    CHECK(mix_seed(42, 7) == mix_seed(42, 7));
}
