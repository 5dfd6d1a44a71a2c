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

#include <cmath>
#include <stdexcept>
#include <string>

#include "qpufsim/channel.hpp"

namespace qpufsim {

ReadoutMatrix ReadoutMatrix::from_matrix(RealMatrix r) {
    if (r.rows() != r.cols()) {
        throw std::invalid_argument("readout matrix must be square");
    }
    const std::size_t n = qubits_for_dim(static_cast<std::size_t>(r.rows()));
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            if (!(r(i, j) >= 0.0 && r(i, j) <= 1.0)) {
                throw std::invalid_argument("readout matrix entry outside [0, 1]");
            }
            sum += r(i, j);
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw std::invalid_argument("readout matrix column " + std::to_string(j) + " sums to " +
                                        std::to_string(sum));
        }
    }
    return ReadoutMatrix(n, std::move(r), {});
}

ReadoutMatrix ReadoutMatrix::symmetric_flips(std::span<const double> flip_probabilities) {
    RealMatrix r = RealMatrix::Ones(1, 1);
    for (double e : flip_probabilities) {
        if (!(e >= 0.0 && e <= 1.0)) {
            throw std::invalid_argument("flip probability outside [0, 1]");
        }
        RealMatrix local(2, 2);
        local << 1.0 - e, e, e, 1.0 - e;
        RealMatrix next(r.rows() * 2, r.cols() * 2);
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            for (Eigen::Index j = 0; j < r.cols(); ++j) {
                next.block(2 * i, 2 * j, 2, 2) = r(i, j) * local;
            }
        }
        r = std::move(next);
    }
    return ReadoutMatrix(flip_probabilities.size(), std::move(r),
                         std::vector<double>(flip_probabilities.begin(), flip_probabilities.end()));
}

ReadoutMatrix ReadoutMatrix::identity(std::size_t n_bits) {
    const std::vector<double> zeros(n_bits, 0.0);
    return symmetric_flips(zeros);
}

RealVector apply_readout(const ReadoutMatrix& r, const RealVector& p) {
    if (p.size() != r.matrix().cols()) {
        throw std::invalid_argument("probability vector length " + std::to_string(p.size()) +
                                    " does not match readout matrix");
    }
    if (std::abs(p.sum() - 1.0) > 1e-9) {
        throw std::invalid_argument("probability vector does not sum to 1");
    }
    return r.matrix() * p;
}

}  // namespace qpufsim
