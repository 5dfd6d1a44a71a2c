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

#include "qpufsim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "qpufsim/random.hpp"

namespace qpufsim {

namespace {

ComplexMatrix basis_change(char axis) {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix u(2, 2);
    switch (axis) {
        case 'X': u << s, s, s, -s; break;
        case 'Y': u << s, -kI * s, s, kI * s; break;  // H S^dagger
        default: u = ComplexMatrix::Identity(2, 2);
    }
    return u;
}

std::size_t pow_int(std::size_t base, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= base;
    return r;
}

RealVector sample_frequencies(const RealVector& p, std::uint64_t shots, Rng& rng) {
    std::vector<double> cdf(static_cast<std::size_t>(p.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        acc += std::max(0.0, p(i));
        cdf[static_cast<std::size_t>(i)] = acc;
    }
    RealVector counts = RealVector::Zero(p.size());
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto k = std::min<std::ptrdiff_t>(it - cdf.begin(), p.size() - 1);
        counts(k) += 1.0;
    }
    return counts / static_cast<double>(shots);
}

void check_width(std::size_t n, std::size_t max, const char* what) {
    if (n == 0 || n > max) {
        throw GuardError(std::string(what) + " supports 1.." + std::to_string(max) + " qubits, got " +
                         std::to_string(n));
    }
}

ComplexMatrix psd_part(const ComplexMatrix& m) {
    const HermitianEigen e = hermitian_eigen(m);
    const RealVector clipped = e.values.cwiseMax(0.0);
    return e.vectors * clipped.asDiagonal() * e.vectors.adjoint();
}

}  // namespace

std::uint64_t parameter_count(ChannelModel model, std::size_t n_qubits) {
    if (n_qubits == 0 || n_qubits > 15) {
        throw std::invalid_argument("parameter_count needs 1 <= n <= 15");
    }
    const std::uint64_t d = std::uint64_t{1} << n_qubits;
    return model == ChannelModel::Unitary ? d * d - 1 : d * d * d * d - d * d;
}

std::uint64_t sample_complexity(double parameters, double epsilon, double c) {
    if (!(epsilon > 0.0) || !(c > 0.0) || !(parameters >= 0.0)) {
        throw std::invalid_argument("sample_complexity needs epsilon > 0, C > 0 and P >= 0");
    }
    // Guard against ceil turning an exact product like 1200 into 1201.
    const double raw = c * parameters / (epsilon * epsilon);
    const double rounded = std::round(raw);
    return static_cast<std::uint64_t>(std::abs(raw - rounded) <= 1e-9 * std::max(1.0, raw) ? rounded : std::ceil(raw));
}

ComplexMatrix linear_inversion_estimate(const DensityMatrix& state, const TomographyOptions& opt) {
    const std::size_t n = state.n_qubits();
    check_width(n, kStateTomographyMaxQubits, "state tomography");
    if (!opt.exact && opt.shots == 0) {
        throw std::invalid_argument("finite-shot tomography needs shots > 0");
    }
    const std::size_t n_settings = pow_int(3, n);
    const auto d = static_cast<Eigen::Index>(state.dim());
    static constexpr char axes[3] = {'X', 'Y', 'Z'};

    std::vector<RealVector> freqs(n_settings);
    for (std::size_t s = 0; s < n_settings; ++s) {
        ComplexMatrix u = ComplexMatrix::Identity(1, 1);
        std::size_t code = s;
        std::string label(n, 'Z');
        for (std::size_t q = n; q-- > 0;) {
            label[q] = axes[code % 3];
            code /= 3;
        }
        for (std::size_t q = 0; q < n; ++q) u = kron(u, basis_change(label[q]));
        const ComplexMatrix rotated = u * state.matrix() * u.adjoint();
        const RealVector p = rotated.diagonal().real();
        if (opt.exact) {
            freqs[s] = p;
        } else {
            Rng rng(hash64(opt.seed, "tomo-setting", s));
            freqs[s] = sample_frequencies(p, opt.shots, rng);
        }
    }

    ComplexMatrix est = ComplexMatrix::Zero(d, d);
    const std::size_t n_paulis = pow_int(4, n);
    static constexpr Pauli paulis[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
    for (std::size_t p = 0; p < n_paulis; ++p) {
        std::vector<Pauli> string(n);
        std::size_t code = p;
        for (std::size_t q = n; q-- > 0;) {
            string[q] = paulis[code % 4];
            code /= 4;
        }
        std::size_t setting = 0;
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t axis = string[q] == Pauli::X ? 0 : string[q] == Pauli::Y ? 1 : 2;
            setting = setting * 3 + axis;
        }
        double expectation = 0.0;
        const RealVector& f = freqs[setting];
        for (Eigen::Index k = 0; k < d; ++k) {
            int sign = 1;
            for (std::size_t q = 0; q < n; ++q) {
                if (string[q] != Pauli::I && ((static_cast<std::size_t>(k) >> (n - 1 - q)) & 1U)) sign = -sign;
            }
            expectation += sign * f(k);
        }
        ComplexMatrix pm = ComplexMatrix::Identity(1, 1);
        for (std::size_t q = 0; q < n; ++q) pm = kron(pm, pauli_matrix(string[q]));
        est += (expectation / static_cast<double>(d)) * pm;
    }
    return est;
}

DensityMatrix project_to_density(const ComplexMatrix& estimate) {
    const ComplexMatrix h = 0.5 * (estimate + estimate.adjoint());
    const HermitianEigen e = hermitian_eigen(h);
    const RealVector w = project_to_simplex(e.values);
    return DensityMatrix::unchecked(e.vectors * w.asDiagonal() * e.vectors.adjoint());
}

DensityMatrix state_tomography(const StateSource& prepare, const TomographyOptions& options) {
    return project_to_density(linear_inversion_estimate(prepare(), options));
}

std::vector<DensityMatrix> tomography_inputs(std::size_t n_qubits) {
    check_width(n_qubits, kProcessTomographyMaxQubits, "process tomography");
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<ComplexVector> single(4, ComplexVector::Zero(2));
    single[0](0) = 1.0;
    single[1](1) = 1.0;
    single[2] << s, s;
    single[3] << s, kI * s;
    std::vector<DensityMatrix> out;
    const std::size_t count = pow_int(4, n_qubits);
    for (std::size_t k = 0; k < count; ++k) {
        ComplexVector v = ComplexVector::Ones(1);
        std::size_t code = k;
        std::vector<std::size_t> digits(n_qubits);
        for (std::size_t q = n_qubits; q-- > 0;) {
            digits[q] = code % 4;
            code /= 4;
        }
        for (std::size_t q = 0; q < n_qubits; ++q) v = kron(v, single[digits[q]]);
        out.push_back(DensityMatrix::unchecked(v * v.adjoint()));
    }
    return out;
}

ChoiMatrix project_cptp(const ChoiMatrix& choi, std::size_t max_iterations, double tolerance, std::size_t* iterations) {
    const auto d = static_cast<Eigen::Index>(choi.dim);
    ComplexMatrix j = 0.5 * (choi.J + choi.J.adjoint());
    std::size_t it = 0;
    while (it < max_iterations) {
        ++it;
        ComplexMatrix next = psd_part(j);
        ComplexMatrix marginal = ComplexMatrix::Zero(d, d);
        for (Eigen::Index a = 0; a < d; ++a) marginal += next.block(a * d, a * d, d, d);
        const ComplexMatrix excess = (marginal - ComplexMatrix::Identity(d, d)) / static_cast<double>(d);
        for (Eigen::Index a = 0; a < d; ++a) next.block(a * d, a * d, d, d) -= excess;
        const double moved = (next - j).norm();
        j = std::move(next);
        if (moved < tolerance) break;
    }
    if (iterations) *iterations = it;
    return {choi.dim, j};
}

ProcessTomographyResult process_tomography_detailed(const ChannelBox& channel, std::size_t n_qubits,
                                                    const TomographyOptions& options) {
    const auto inputs = tomography_inputs(n_qubits);
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(n_qubits));
    const Eigen::Index dd = d * d;
    ComplexMatrix a(dd, dd), s(dd, dd);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        TomographyOptions o = options;
        o.seed = hash64(options.seed, "tomo-input", k);
        const DensityMatrix out = channel(inputs[k]);
        if (out.dim() != static_cast<std::size_t>(d)) {
            throw std::invalid_argument("channel changed the system dimension");
        }
        const ComplexMatrix est = linear_inversion_estimate(out, o);
        a.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const ComplexVector>(inputs[k].matrix().data(), dd);
        s.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const ComplexVector>(est.data(), dd);
    }
    const ComplexMatrix m = s * a.fullPivLu().inverse();
    ProcessTomographyResult r;
    r.raw.dim = static_cast<std::size_t>(d);
    r.raw.J = ComplexMatrix::Zero(dd, dd);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index jj = 0; jj < d; ++jj) {
            const ComplexVector col = m.col(i + jj * d);
            for (Eigen::Index row = 0; row < d; ++row) {
                for (Eigen::Index c = 0; c < d; ++c) {
                    r.raw.J(row * d + i, c * d + jj) = col(row + c * d);
                }
            }
        }
    }
    r.projected = project_cptp(r.raw, 200, 1e-9, &r.iterations);
    return r;
}

ChoiMatrix process_tomography(const ChannelBox& channel, std::size_t n_qubits, const TomographyOptions& options) {
    return process_tomography_detailed(channel, n_qubits, options).projected;
}

AffineBlochForm affine_bloch_form(const ChoiMatrix& choi) {
    if (choi.dim != 2) {
        throw std::invalid_argument("affine Bloch form is defined for single-qubit channels");
    }
    static constexpr Pauli paulis[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
    RealMatrix r(4, 4);
    for (int b = 0; b < 4; ++b) {
        const ComplexMatrix out = apply_choi(choi, pauli_matrix(paulis[b]));
        for (int a = 0; a < 4; ++a) {
            r(a, b) = 0.5 * (pauli_matrix(paulis[a]) * out).trace().real();
        }
    }
    return {r.block(1, 1, 3, 3), r.block(1, 0, 3, 1)};
}

ComplexMatrix best_fit_unitary(const ChoiMatrix& choi) {
    const auto d = static_cast<Eigen::Index>(choi.dim);
    const HermitianEigen e = hermitian_eigen(0.5 * (choi.J + choi.J.adjoint()));
    Eigen::Index top = 0;
    e.values.maxCoeff(&top);
    const ComplexVector v = e.vectors.col(top);
    ComplexMatrix k(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index i = 0; i < d; ++i) k(a, i) = v(a * d + i);
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

double choi_frobenius_distance(const ChoiMatrix& a, const ChoiMatrix& b) {
    if (a.dim != b.dim) {
        throw std::invalid_argument("Choi matrices have different dimensions");
    }
    return (a.J - b.J).norm();
}

}  // namespace qpufsim
