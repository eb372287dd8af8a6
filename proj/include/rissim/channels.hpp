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

#ifndef RISSIM_CHANNELS_HPP
#define RISSIM_CHANNELS_HPP

#include "rissim/geometry.hpp"
#include "rissim/rng.hpp"
#include "rissim/types.hpp"

#include <functional>
#include <vector>

namespace rissim
{

// One draw of the cascaded link. Dimension bookkeeping: M reflecting units,
// N base-station antennas, K users.
//   h_direct : K x N     direct user <-> BS paths
//   h_ris    : M x K     BS/user side channel seen at the panel
//   h_bs     : M x N     panel <-> BS channel
//   theta    : M x M     diagonal reflection matrix, |theta_mm| <= 1
struct ChannelRealization
{
    CMatd h_direct;
    CMatd h_ris;
    CMatd h_bs;
    CMatd theta;

    void validate() const;
};

struct LinkSample
{
    CVecd transmit;   // s, length N
    CVecd received;   // y, length K
    double noise_sigma = 0.0;
};

struct PathCluster
{
    Complexd gain;
    SphericalDirection aoa;
    SphericalDirection aod;
};

using ClusterSet = std::vector<PathCluster>;

struct RicianSpec
{
    double k_factor = 0.0;
    CMatd los;
};

struct CorrelationSpec
{
    CMatd rx_correlation;  // R, Hermitian PSD
    CMatd tx_correlation;  // T, Hermitian PSD
    CMatd los;             // added deterministic component, may be empty for zero
};

// h_direct + h_ris^H * Theta * h_bs, the cascaded effective channel (K x N).
CMatd effective_channel(const ChannelRealization &ch);

// Row form for a single user: h_k + u^H * diag(h_ris_col) * h_bs, where u
// carries the per-unit reflection coefficients. Agrees with effective_channel
// restricted to user k.
Eigen::RowVectorXcd effective_channel_vectorform(const Eigen::RowVectorXcd &h_k, const CVecd &u,
                                                 const CVecd &h_ris_col, const CMatd &h_bs);

// Clustered geometric channel sum_p gain_p * a_r(aoa_p) * a_t(aod_p)^H scaled
// by `scale`. Steering vectors are UPA responses of the given grid sizes.
CMatd sample_geometric(const ClusterSet &clusters, std::pair<int, int> rx_size, std::pair<int, int> tx_size,
                       double scale);

// Prefactor sqrt(N_rx * N_tx / P) matching the geometric model convention.
double geometric_scale(std::pair<int, int> rx_size, std::pair<int, int> tx_size, std::size_t num_clusters);

// sqrt(K/(1+K)) * LOS + sqrt(1/(1+K)) * NLOS with i.i.d. unit-variance complex
// Gaussian NLOS entries. K is capped at 1e12 for the pure-LOS limit.
CMatd sample_rician(const RicianSpec &spec, Rng &rng);

// R^(1/2) * G * T^(1/2) + LOS with G i.i.d. unit complex Gaussian. Matrix
// square roots via Hermitian eigendecomposition; eigenvalues in [-1e-10, 0)
// clamp to zero, anything more negative is rejected.
CMatd sample_correlated(const CorrelationSpec &spec, Rng &rng);

// Hermitian PSD square root with the clamping rule above. Exposed because the
// tests exercise it directly.
CMatd hermitian_sqrt(const CMatd &m, double clamp_tol = 1e-10);

// ON-OFF cascaded channel estimation. The probe evaluates one pilot slot:
// probe(-1) is the all-OFF slot, probe(m) has only unit m ON. The estimator
// adds circularly symmetric measurement noise of std `noise_sigma` per slot,
// averages `pilots_per_unit` pilots per slot, and returns the direct term and
// per-unit cascade differences. Noiseless estimation is exact.
struct OnOffEstimate
{
    Complexd direct;
    CVecd cascades;
};

OnOffEstimate on_off_estimate(const std::function<Complexd(int)> &probe, int num_units, int pilots_per_unit,
                              double noise_sigma, Rng &rng);

} // namespace rissim

#endif
