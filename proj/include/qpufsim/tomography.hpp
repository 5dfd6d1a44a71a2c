// Copyright 2026 The qpufsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>

#include "qpufsim/channel.hpp"
#include "qpufsim/state.hpp"

namespace qpufsim {

enum class ChannelModel { Unitary, Cptp };

/// d^2 - 1 for unitaries, d^4 - d^2 for general channels.
std::uint64_t parameter_count(ChannelModel model, std::size_t n_qubits);

/// ceil(C * P / eps^2).
std::uint64_t sample_complexity(double parameters, double epsilon, double c = 1.0);

struct TomographyOptions {
    std::uint64_t shots = 1000;  // per measurement setting
    std::uint64_t seed = 0;
    /// Read probabilities from the state instead of sampling.
    bool exact = false;
};

inline constexpr std::size_t kStateTomographyMaxQubits = 3;
inline constexpr std::size_t kProcessTomographyMaxQubits = 2;

using StateSource = std::function<DensityMatrix()>;
using ChannelBox = std::function<DensityMatrix(const DensityMatrix&)>;

/// Pauli-basis linear inversion (unprojected; may be non-positive).
ComplexMatrix linear_inversion_estimate(const DensityMatrix& state, const TomographyOptions& options);

/// Frobenius-nearest density matrix: eigenvalues projected onto the simplex.
DensityMatrix project_to_density(const ComplexMatrix& estimate);

DensityMatrix state_tomography(const StateSource& prepare, const TomographyOptions& options);

/// Spanning inputs {|0>, |1>, |+>, |+i>} per qubit, in lexicographic order.
std::vector<DensityMatrix> tomography_inputs(std::size_t n_qubits);

struct ProcessTomographyResult {
    ChoiMatrix raw;        // linear inversion
    ChoiMatrix projected;  // after PSD/TP alternating projections
    std::size_t iterations = 0;
};

ProcessTomographyResult process_tomography_detailed(const ChannelBox& channel, std::size_t n_qubits,
                                                    const TomographyOptions& options);
ChoiMatrix process_tomography(const ChannelBox& channel, std::size_t n_qubits, const TomographyOptions& options);

/// Alternating projections onto PSD and trace-preserving sets.
ChoiMatrix project_cptp(const ChoiMatrix& choi, std::size_t max_iterations = 200, double tolerance = 1e-9,
                        std::size_t* iterations = nullptr);

struct AffineBlochForm {
    RealMatrix m;  // 3x3
    RealVector t;  // 3
};
AffineBlochForm affine_bloch_form(const ChoiMatrix& choi);

/// Unitary nearest to the dominant Kraus operator of the channel.
ComplexMatrix best_fit_unitary(const ChoiMatrix& choi);

double choi_frobenius_distance(const ChoiMatrix& a, const ChoiMatrix& b);

}  // namespace qpufsim
