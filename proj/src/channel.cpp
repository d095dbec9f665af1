#include "hybeam/channel.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hybeam {

VecC array_response(int n, double theta, double spacing_over_lambda)
{
    if (n < 1)
        throw std::invalid_argument("array_response: n must be positive");
    if (!(spacing_over_lambda > 0.0))
        throw std::invalid_argument("array_response: spacing must be positive");
    const double step = two_pi * spacing_over_lambda * std::sin(theta);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    VecC a(n);
    for (int k = 0; k < n; ++k)
        a(k) = scale * unit_phasor(step * static_cast<double>(k));
    return a;
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream)
{
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

ChannelRealization sample_channel(const SystemConfig& cfg, std::mt19937_64& rng,
                                  double spacing_over_lambda)
{
    const int nr = cfg.n_rx;
    const int nt = cfg.n_tx;
    const int paths = cfg.n_paths;
    if (nr < 1 || nt < 1 || paths < 1)
        throw std::invalid_argument("sample_channel: dimensions must be positive");

    // Per-path gain CN(0, 1/L): real and imaginary parts N(0, 1/(2L)).
    std::normal_distribution<double> gain_dist(0.0, std::sqrt(0.5 / static_cast<double>(paths)));
    std::uniform_real_distribution<double> angle_dist(-std::numbers::pi / 2.0,
                                                      std::numbers::pi / 2.0);

    ChannelRealization ch;
    ch.spacing_over_lambda = spacing_over_lambda;
    ch.paths.reserve(paths);
    ch.h = MatC::Zero(nr, nt);
    const double amp = std::sqrt(static_cast<double>(nr) * static_cast<double>(nt) /
                                 static_cast<double>(paths));
    for (int i = 0; i < paths; ++i) {
        PathParams p;
        const double re = gain_dist(rng);
        const double im = gain_dist(rng);
        p.gain = cxd(re, im);
        p.aod = angle_dist(rng);
        p.aoa = angle_dist(rng);
        ch.paths.push_back(p);
        const VecC ar = array_response(nr, p.aoa, spacing_over_lambda);
        const VecC at = array_response(nt, p.aod, spacing_over_lambda);
        ch.h.noalias() += (amp * p.gain) * (ar * at.adjoint());
    }
    return ch;
}

namespace {

// Rotate each singular pair so the largest-modulus entry of the right column
// is real positive (first index on modulus ties). Rank-deficient columns are
// left alone.
void fix_svd_phases(MatC& u, MatC& v)
{
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        Eigen::Index best = 0;
        double best_mod = 0.0;
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            const double m = std::abs(v(i, k));
            if (m > best_mod) {
                best_mod = m;
                best = i;
            }
        }
        if (best_mod == 0.0)
            continue;
        const cxd rot = unit_phasor(-std::arg(v(best, k)));
        v.col(k) *= rot;
        u.col(k) *= rot;
    }
}

} // namespace

TruncatedSvd truncate_svd(const MatC& h, int n_streams)
{
    if (n_streams < 1)
        throw std::invalid_argument("truncate_svd: n_streams must be positive");
    if (n_streams > std::min(h.rows(), h.cols()))
        throw std::invalid_argument("truncate_svd: n_streams exceeds matrix dimensions");
    Eigen::JacobiSVD<MatC> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    TruncatedSvd out;
    out.u_hat = svd.matrixU().leftCols(n_streams);
    out.v_hat = svd.matrixV().leftCols(n_streams);
    out.sigma_hat = svd.singularValues().head(n_streams);
    fix_svd_phases(out.u_hat, out.v_hat);
    return out;
}

namespace {

void write_value(std::ostream& os, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

} // namespace

void save_channel_csv(const ChannelRealization& ch, const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("save_channel_csv: cannot open " + path);
    for (Eigen::Index i = 0; i < ch.h.rows(); ++i) {
        for (Eigen::Index j = 0; j < ch.h.cols(); ++j) {
            if (j > 0)
                os << ',';
            write_value(os, ch.h(i, j).real());
            os << ',';
            write_value(os, ch.h(i, j).imag());
        }
        os << '\n';
    }
    std::ofstream ps(path + ".paths");
    if (!ps)
        throw std::runtime_error("save_channel_csv: cannot open " + path + ".paths");
    ps << "spacing_over_lambda=";
    write_value(ps, ch.spacing_over_lambda);
    ps << '\n' << "gain_re,gain_im,aod,aoa\n";
    for (const auto& p : ch.paths) {
        write_value(ps, p.gain.real());
        ps << ',';
        write_value(ps, p.gain.imag());
        ps << ',';
        write_value(ps, p.aod);
        ps << ',';
        write_value(ps, p.aoa);
        ps << '\n';
    }
}

ChannelRealization load_channel_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("load_channel_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            vals.push_back(std::stod(cell));
        rows.push_back(std::move(vals));
    }
    if (rows.empty() || rows.front().size() % 2 != 0)
        throw std::runtime_error("load_channel_csv: malformed matrix file " + path);
    ChannelRealization ch;
    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index nt = static_cast<Eigen::Index>(rows.front().size() / 2);
    ch.h.resize(nr, nt);
    for (Eigen::Index i = 0; i < nr; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != 2 * nt)
            throw std::runtime_error("load_channel_csv: ragged matrix file " + path);
        for (Eigen::Index j = 0; j < nt; ++j)
            ch.h(i, j) = cxd(rows[i][2 * j], rows[i][2 * j + 1]);
    }

    std::ifstream ps(path + ".paths");
    if (!ps)
        throw std::runtime_error("load_channel_csv: cannot open " + path + ".paths");
    std::getline(ps, line);
    const std::string key = "spacing_over_lambda=";
    if (line.rfind(key, 0) != 0)
        throw std::runtime_error("load_channel_csv: malformed sidecar " + path + ".paths");
    ch.spacing_over_lambda = std::stod(line.substr(key.size()));
    std::getline(ps, line); // column header
    while (std::getline(ps, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ','))
            vals.push_back(std::stod(cell));
        if (vals.size() != 4)
            throw std::runtime_error("load_channel_csv: malformed path row in " + path + ".paths");
        ch.paths.push_back(PathParams{cxd(vals[0], vals[1]), vals[2], vals[3]});
    }
    return ch;
}

} // namespace hybeam
