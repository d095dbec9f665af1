#include "hybeam/multiuser.hpp"

#include "hybeam/channel.hpp"
#include "hybeam/numerics.hpp"

#include <doctest.h>

#include <random>

using namespace hybeam;

namespace {

SystemConfig mu_config(int n_tx, int n_rx, int users, int bits)
{
    SystemConfig cfg;
    cfg.n_tx = n_tx;
    cfg.n_rx = n_rx;
    cfg.n_streams = 1;
    cfg.n_rf_tx = 1;
    cfg.n_rf_rx = users;
    cfg.bits = bits;
    cfg.n_paths = 6;
    cfg.snr_db = 10.0;
    return cfg;
}

std::vector<MatC> sample_user_channels(const SystemConfig& cfg, int users, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<MatC> out;
    out.reserve(static_cast<std::size_t>(users));
    for (int k = 0; k < users; ++k)
        out.push_back(sample_channel(cfg, rng).h);
    return out;
}

MatC random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    MatC m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = cxd(g(rng), g(rng));
    return m;
}

} // namespace

TEST_CASE("project_channel removes the direction span")
{
    std::mt19937_64 rng(3);
    const MatC h = random_complex(8, 4, rng);
    CHECK((project_channel(h, MatC(8, 0)) - h).norm() == 0.0);

    MatC d(8, 2);
    d.col(0) = gram_schmidt_append(MatC(8, 0), random_complex(8, 1, rng).col(0));
    d.col(1) = gram_schmidt_append(d.leftCols(1), random_complex(8, 1, rng).col(0));
    const MatC projected = project_channel(h, d);
    CHECK((d.adjoint() * projected).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((project_channel(projected, d) - projected).norm() <= 1e-10 * h.norm());

    MatC skew = d;
    skew.col(1) *= 2.0;
    CHECK_THROWS_AS(project_channel(h, skew), std::invalid_argument);
}

TEST_CASE("multiuser design structure at K = 4")
{
    for (MuEngine engine : {MuEngine::phase_matching, MuEngine::one_bit}) {
        const int bits = engine == MuEngine::one_bit ? 1 : 2;
        const SystemConfig cfg = mu_config(16, 64, 4, bits);
        const std::vector<MatC> channels = sample_user_channels(cfg, 4, 77);
        const MultiuserDesign d = design_multiuser(channels, cfg, engine);

        REQUIRE(d.f.size() == 4);
        REQUIRE(d.w_rf.cols() == 4);
        const MatC gram = d.d.adjoint() * d.d;
        CHECK((gram - MatC::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);

        const PhaseCodebook cb(bits);
        for (int k = 0; k < 4; ++k) {
            AnalogBeamformer col;
            col.matrix = d.w_rf.col(k);
            col.scale = 1.0 / std::sqrt(64.0);
            CHECK_NOTHROW(col.validate(cb));
            AnalogBeamformer txc;
            txc.matrix = d.f[static_cast<std::size_t>(k)];
            txc.scale = 1.0 / std::sqrt(16.0);
            CHECK_NOTHROW(txc.validate(cb));
        }

        // Projected channels are orthogonal to all earlier directions.
        for (int k = 1; k < 4; ++k) {
            const MatC hk = project_channel(channels[static_cast<std::size_t>(k)],
                                            d.d.leftCols(k));
            CHECK((d.d.leftCols(k).adjoint() * hk).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("multiuser design is deterministic")
{
    const SystemConfig cfg = mu_config(16, 64, 3, 2);
    const std::vector<MatC> channels = sample_user_channels(cfg, 3, 123);
    const MultiuserDesign a = design_multiuser(channels, cfg, MuEngine::phase_matching);
    const MultiuserDesign b = design_multiuser(channels, cfg, MuEngine::phase_matching);
    CHECK((a.w_rf - b.w_rf).norm() == 0.0);
    CHECK((a.w_bb - b.w_bb).norm() == 0.0);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK((a.f[k] - b.f[k]).norm() == 0.0);
}

TEST_CASE("K = 1 degenerates to a single-user single-stream design")
{
    const SystemConfig cfg = mu_config(16, 64, 1, 2);
    const std::vector<MatC> channels = sample_user_channels(cfg, 1, 55);
    const MultiuserDesign d = design_multiuser(channels, cfg, MuEngine::phase_matching);
    REQUIRE(d.f.size() == 1);
    // d_1 is the (unit-norm) first combiner itself.
    CHECK((d.d.col(0) - d.w_rf.col(0)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("projection is inert for a user already orthogonal to prior combiners")
{
    const SystemConfig cfg = mu_config(16, 64, 2, 2);
    std::vector<MatC> channels = sample_user_channels(cfg, 2, 99);
    const MultiuserDesign first = design_multiuser(
        {channels[0], channels[1]}, cfg, MuEngine::phase_matching);
    // Rebuild user 2's channel orthogonal to the designed w_1, then the
    // projected design must coincide with the unprojected one.
    const VecC w1 = first.w_rf.col(0);
    MatC h2 = channels[1] - w1 * (w1.adjoint() * channels[1]);
    const MatC projected = project_channel(h2, first.d.leftCols(1));
    CHECK((projected - h2).norm() <= 1e-10 * h2.norm());
}

TEST_CASE("mmse combiner closed forms")
{
    std::mt19937_64 rng(19);
    // K = 1 with an orthonormal combiner column: w = h / (|h|^2 + sigma^2).
    {
        MatC w_rf = MatC::Zero(4, 1);
        w_rf(0, 0) = 1.0;
        MatC h_eff(1, 1);
        h_eff(0, 0) = cxd(1.5, -0.5);
        const double noise = 0.7;
        const MatC w = mmse_combiners(h_eff, w_rf, noise);
        const cxd expect = h_eff(0, 0) / (std::norm(h_eff(0, 0)) + noise);
        CHECK(std::abs(w(0, 0) - expect) <= 1e-12);
    }

    // Large-noise limit: direction converges to (W^H W)^{-1} h scaled by 1/sigma^2.
    {
        const MatC w_rf = random_complex(8, 3, rng);
        const MatC h_eff = random_complex(3, 3, rng);
        const double noise = 1e6;
        const MatC w = mmse_combiners(h_eff, w_rf, noise);
        const MatC gram = w_rf.adjoint() * w_rf;
        const MatC expect = gram.fullPivLu().solve(h_eff) / noise;
        for (int k = 0; k < 3; ++k) {
            const double ratio = (w.col(k) - expect.col(k)).norm() / expect.col(k).norm();
            CHECK(ratio <= 1e-4);
        }
    }

    CHECK_THROWS_AS(mmse_combiners(MatC::Ones(2, 2), MatC::Ones(3, 2), 0.0),
                    std::invalid_argument);
}

TEST_CASE("mmse combiner is a local minimum of the per-user mse")
{
    std::mt19937_64 rng(29);
    const MatC w_rf = random_complex(8, 3, rng) / std::sqrt(8.0);
    const MatC h_eff = random_complex(3, 3, rng);
    const double noise = 0.5;
    const MatC w = mmse_combiners(h_eff, w_rf, noise);
    const MatC a = h_eff * h_eff.adjoint() + noise * (w_rf.adjoint() * w_rf);

    auto mse = [&](const VecC& v, int k) {
        return std::real((v.adjoint() * a * v)(0, 0)) - 2.0 * std::real(v.dot(h_eff.col(k))) +
               1.0;
    };
    std::normal_distribution<double> g(0.0, 1.0);
    for (int k = 0; k < 3; ++k) {
        const double base = mse(w.col(k), k);
        for (int trial = 0; trial < 1000; ++trial) {
            VecC delta(3);
            for (int i = 0; i < 3; ++i)
                delta(i) = cxd(g(rng), g(rng));
            const VecC perturbed = w.col(k) + 1e-2 * delta;
            CHECK(mse(perturbed, k) >= base - 1e-12);
        }
    }
}

TEST_CASE("mmse combiners beat matched-filter combiners on average")
{
    const SystemConfig cfg = mu_config(16, 64, 3, 2);
    const LinkBudget budget = LinkBudget::from_snr_db(cfg.snr_db);
    double mmse_total = 0.0;
    double mf_total = 0.0;
    const int trials = 50;
    for (int trial = 0; trial < trials; ++trial) {
        const std::vector<MatC> channels = sample_user_channels(cfg, 3, 4000 + trial);
        const MultiuserDesign d = design_multiuser(channels, cfg, MuEngine::phase_matching);
        mmse_total += multiuser_sum_rate(channels, d, budget);

        MultiuserDesign mf = d;
        mf.w_bb = MatC::Identity(3, 3);
        mf_total += multiuser_sum_rate(channels, mf, budget);
    }
    CHECK(mmse_total >= mf_total);
}

TEST_CASE("multiuser validation errors")
{
    const SystemConfig cfg = mu_config(16, 64, 2, 2);
    const std::vector<MatC> channels = sample_user_channels(cfg, 2, 31);
    CHECK_THROWS_AS(design_multiuser(channels, cfg, MuEngine::one_bit), std::invalid_argument);
    SystemConfig wrong = cfg;
    wrong.n_rf_rx = 3;
    CHECK_THROWS_AS(design_multiuser(channels, wrong, MuEngine::phase_matching),
                    std::invalid_argument);
}
