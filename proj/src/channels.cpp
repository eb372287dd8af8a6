// SPDX-License-Identifier: Apache-2.0
//
// rissim: RIS-assisted link simulation and discrete phase-shift beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rissim/channels.hpp"

#include <cmath>

namespace rissim
{

void ChannelRealization::validate() const
{
    const Eigen::Index m = h_bs.rows();
    const Eigen::Index n = h_bs.cols();
    const Eigen::Index k = h_ris.cols();
    if (h_ris.rows() != m)
        throw std::invalid_argument("ChannelRealization: h_ris rows must equal the unit count");
    if (h_direct.rows() != k || h_direct.cols() != n)
        throw std::invalid_argument("ChannelRealization: h_direct must be K x N");
    if (theta.rows() != m || theta.cols() != m)
        throw std::invalid_argument("ChannelRealization: theta must be M x M");
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            if (i == j) {
                if (std::abs(theta(i, i)) > 1.0 + 1e-12)
                    throw std::invalid_argument("ChannelRealization: |theta_mm| must be <= 1");
            } else if (theta(i, j) != 0.0) {
                throw std::invalid_argument("ChannelRealization: theta must be strictly diagonal");
            }
        }
}

CMatd effective_channel(const ChannelRealization &ch)
{
    ch.validate();
    return ch.h_direct + ch.h_ris.adjoint() * ch.theta * ch.h_bs;
}

Eigen::RowVectorXcd effective_channel_vectorform(const Eigen::RowVectorXcd &h_k, const CVecd &u,
                                                 const CVecd &h_ris_col, const CMatd &h_bs)
{
    const Eigen::Index m = h_bs.rows();
    if (u.size() != m || h_ris_col.size() != m)
        throw std::invalid_argument("effective_channel_vectorform: per-unit vectors must have M entries");
    if (h_k.size() != h_bs.cols())
        throw std::invalid_argument("effective_channel_vectorform: h_k length must equal the BS antenna count");
    return h_k + u.adjoint() * h_ris_col.asDiagonal() * h_bs;
}

double geometric_scale(std::pair<int, int> rx_size, std::pair<int, int> tx_size, std::size_t num_clusters)
{
    if (num_clusters == 0)
        throw std::invalid_argument("geometric_scale: cluster count must be positive");
    const double n_rx = double(rx_size.first) * rx_size.second;
    const double n_tx = double(tx_size.first) * tx_size.second;
    return std::sqrt(n_rx * n_tx / static_cast<double>(num_clusters));
}

CMatd sample_geometric(const ClusterSet &clusters, std::pair<int, int> rx_size, std::pair<int, int> tx_size,
                       double scale)
{
    if (clusters.empty())
        throw std::invalid_argument("sample_geometric: cluster set must be non-empty");
    const Eigen::Index n_rx = static_cast<Eigen::Index>(rx_size.first) * rx_size.second;
    const Eigen::Index n_tx = static_cast<Eigen::Index>(tx_size.first) * tx_size.second;
    CMatd h = CMatd::Zero(n_rx, n_tx);
    for (const PathCluster &p : clusters) {
        const CVecd ar = upa_steering_vector<double>(p.aoa, rx_size.first, rx_size.second);
        const CVecd at = upa_steering_vector<double>(p.aod, tx_size.first, tx_size.second);
        h.noalias() += p.gain * (ar * at.adjoint());
    }
    return scale * h;
}

CMatd sample_rician(const RicianSpec &spec, Rng &rng)
{
    if (spec.k_factor < 0.0)
        throw std::invalid_argument("sample_rician: the K factor must be >= 0");
    if (!spec.los.allFinite())
        throw std::invalid_argument("sample_rician: LOS component must be finite");
    const double k = std::min(spec.k_factor, 1e12);
    const double w_los = std::sqrt(k / (1.0 + k));
    const double w_nlos = std::sqrt(1.0 / (1.0 + k));
    CMatd h(spec.los.rows(), spec.los.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = 0; j < h.cols(); ++j)
            h(i, j) = w_los * spec.los(i, j) + w_nlos * rng.complex_gaussian();
    return h;
}

CMatd hermitian_sqrt(const CMatd &m, double clamp_tol)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("hermitian_sqrt: matrix must be square");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("hermitian_sqrt: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatd> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_sqrt: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < -clamp_tol)
            throw std::invalid_argument("hermitian_sqrt: matrix is not positive semidefinite");
        if (ev[i] < 0.0)
            ev[i] = 0.0;
    }
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

CMatd sample_correlated(const CorrelationSpec &spec, Rng &rng)
{
    const CMatd r_sqrt = hermitian_sqrt(spec.rx_correlation);
    const CMatd t_sqrt = hermitian_sqrt(spec.tx_correlation);
    const Eigen::Index rows = spec.rx_correlation.rows();
    const Eigen::Index cols = spec.tx_correlation.rows();
    CMatd g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            g(i, j) = rng.complex_gaussian();
    CMatd h = r_sqrt * g * t_sqrt;
    if (spec.los.size() != 0) {
        if (spec.los.rows() != rows || spec.los.cols() != cols)
            throw std::invalid_argument("sample_correlated: LOS component has wrong dimensions");
        h += spec.los;
    }
    return h;
}

OnOffEstimate on_off_estimate(const std::function<Complexd(int)> &probe, int num_units, int pilots_per_unit,
                              double noise_sigma, Rng &rng)
{
    if (num_units < 1)
        throw std::invalid_argument("on_off_estimate: unit count must be >= 1");
    if (pilots_per_unit < 1)
        throw std::invalid_argument("on_off_estimate: pilots_per_unit must be >= 1");
    if (noise_sigma < 0.0)
        throw std::invalid_argument("on_off_estimate: noise_sigma must be >= 0");

    auto average_slot = [&](int slot) {
        Complexd acc = 0.0;
        for (int p = 0; p < pilots_per_unit; ++p) {
            Complexd y = probe(slot);
            if (noise_sigma > 0.0)
                y += noise_sigma * rng.complex_gaussian();
            acc += y;
        }
        return acc / static_cast<double>(pilots_per_unit);
    };

    OnOffEstimate est;
    est.direct = average_slot(-1);
    est.cascades.resize(num_units);
    for (int m = 0; m < num_units; ++m)
        est.cascades[m] = average_slot(m) - est.direct;
    return est;
}

} // namespace rissim
