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

#include "qpufsim/kernels.hpp"

#include <complex>
#include <stdexcept>
#include <string>

namespace qpufsim {

namespace {

void check_square(const ComplexMatrix& m, std::size_t n_qubits) {
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(n_qubits));
    if (m.rows() != d || m.cols() != d) {
        throw std::invalid_argument("operator dimension does not match " + std::to_string(n_qubits) + " qubits");
    }
}

void check_local(const ComplexMatrix& a, std::size_t k, std::size_t power) {
    const auto ld = static_cast<Eigen::Index>(std::size_t{1} << (k * power));
    if (a.rows() != ld || a.cols() != ld) {
        throw std::invalid_argument("local matrix dimension does not match support size");
    }
}

std::size_t bit_of(std::size_t q, std::size_t n_qubits) {
    if (q >= n_qubits) {
        throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_qubits) +
                                " qubits");
    }
    return std::size_t{1} << (n_qubits - 1 - q);
}

// Single-qubit fast paths. Pairs (i, i | bit) with i & bit == 0.

void left_1q(ComplexMatrix& m, const ComplexMatrix& a, std::size_t bit) {
    const Complex a00 = a(0, 0), a01 = a(0, 1), a10 = a(1, 0), a11 = a(1, 1);
    const std::size_t d = static_cast<std::size_t>(m.rows());
    Complex* data = m.data();
    for (std::size_t j = 0; j < d; ++j) {
        Complex* col = data + j * d;
        for (std::size_t i = 0; i < d; ++i) {
            if (i & bit) continue;
            const Complex x = col[i], y = col[i | bit];
            col[i] = a00 * x + a01 * y;
            col[i | bit] = a10 * x + a11 * y;
        }
    }
}

void right_adjoint_1q(ComplexMatrix& m, const ComplexMatrix& a, std::size_t bit) {
    // (m A^dagger)(:, x) = sum_y m(:, y) conj(A(x, y))
    const Complex c00 = std::conj(a(0, 0)), c01 = std::conj(a(0, 1)), c10 = std::conj(a(1, 0)),
                  c11 = std::conj(a(1, 1));
    const std::size_t d = static_cast<std::size_t>(m.rows());
    Complex* data = m.data();
    for (std::size_t j = 0; j < d; ++j) {
        if (j & bit) continue;
        Complex* u = data + j * d;
        Complex* v = data + (j | bit) * d;
        for (std::size_t i = 0; i < d; ++i) {
            const Complex x = u[i], y = v[i];
            u[i] = c00 * x + c01 * y;
            v[i] = c10 * x + c11 * y;
        }
    }
}

void superop_1q(ComplexMatrix& rho, const ComplexMatrix& s, std::size_t bit) {
    Complex k[16];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) k[r * 4 + c] = s(r, c);
    }
    const std::size_t d = static_cast<std::size_t>(rho.rows());
    Complex* data = rho.data();
    for (std::size_t j = 0; j < d; ++j) {
        if (j & bit) continue;
        Complex* c0 = data + j * d;
        Complex* c1 = data + (j | bit) * d;
        for (std::size_t i = 0; i < d; ++i) {
            if (i & bit) continue;
            const std::size_t i1 = i | bit;
            // row-major vec of the local block: (00, 01, 10, 11) = (c0[i], c1[i], c0[i1], c1[i1])
            const Complex x0 = c0[i], x1 = c1[i], x2 = c0[i1], x3 = c1[i1];
            c0[i] = k[0] * x0 + k[1] * x1 + k[2] * x2 + k[3] * x3;
            c1[i] = k[4] * x0 + k[5] * x1 + k[6] * x2 + k[7] * x3;
            c0[i1] = k[8] * x0 + k[9] * x1 + k[10] * x2 + k[11] * x3;
            c1[i1] = k[12] * x0 + k[13] * x1 + k[14] * x2 + k[15] * x3;
        }
    }
}

}  // namespace

LocalIndex local_index(std::span<const std::size_t> qubits, std::size_t n_qubits) {
    const std::size_t k = qubits.size();
    const std::size_t d = dim_for_qubits(n_qubits);
    std::size_t mask = 0;
    for (std::size_t q : qubits) {
        if (q >= n_qubits) {
            throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_qubits) +
                                    " qubits");
        }
        const std::size_t bit = std::size_t{1} << (n_qubits - 1 - q);
        if (mask & bit) {
            throw std::invalid_argument("repeated qubit in support");
        }
        mask |= bit;
    }
    LocalIndex idx;
    idx.offsets.assign(std::size_t{1} << k, 0);
    for (std::size_t a = 0; a < idx.offsets.size(); ++a) {
        for (std::size_t j = 0; j < k; ++j) {
            if ((a >> (k - 1 - j)) & 1) {
                idx.offsets[a] |= std::size_t{1} << (n_qubits - 1 - qubits[j]);
            }
        }
    }
    idx.bases.reserve(d >> k);
    for (std::size_t b = 0; b < d; ++b) {
        if ((b & mask) == 0) {
            idx.bases.push_back(b);
        }
    }
    return idx;
}

void apply_left(ComplexMatrix& m, const ComplexMatrix& a, std::span<const std::size_t> qubits, std::size_t n_qubits) {
    check_square(m, n_qubits);
    check_local(a, qubits.size(), 1);
    if (qubits.size() == 1) {
        left_1q(m, a, bit_of(qubits[0], n_qubits));
        return;
    }
    const LocalIndex idx = local_index(qubits, n_qubits);
    const std::size_t ld = idx.offsets.size();
    const std::size_t d = static_cast<std::size_t>(m.rows());
    std::vector<Complex> buf(ld);
    Complex* data = m.data();
    for (std::size_t j = 0; j < d; ++j) {
        Complex* col = data + j * d;
        for (std::size_t base : idx.bases) {
            for (std::size_t x = 0; x < ld; ++x) {
                buf[x] = col[base | idx.offsets[x]];
            }
            for (std::size_t x = 0; x < ld; ++x) {
                Complex acc = 0.0;
                for (std::size_t y = 0; y < ld; ++y) {
                    acc += a(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) * buf[y];
                }
                col[base | idx.offsets[x]] = acc;
            }
        }
    }
}

void apply_right_adjoint(ComplexMatrix& m, const ComplexMatrix& a, std::span<const std::size_t> qubits,
                         std::size_t n_qubits) {
    check_square(m, n_qubits);
    check_local(a, qubits.size(), 1);
    if (qubits.size() == 1) {
        right_adjoint_1q(m, a, bit_of(qubits[0], n_qubits));
        return;
    }
    const LocalIndex idx = local_index(qubits, n_qubits);
    const std::size_t ld = idx.offsets.size();
    const auto d = m.rows();
    const ComplexMatrix ac = a.conjugate();
    ComplexMatrix cols(d, static_cast<Eigen::Index>(ld));
    for (std::size_t base : idx.bases) {
        for (std::size_t y = 0; y < ld; ++y) {
            cols.col(static_cast<Eigen::Index>(y)) = m.col(static_cast<Eigen::Index>(base | idx.offsets[y]));
        }
        // (m A^dagger)(:, x) = sum_y m(:, y) conj(A(x, y))
        for (std::size_t x = 0; x < ld; ++x) {
            auto target = m.col(static_cast<Eigen::Index>(base | idx.offsets[x]));
            target.setZero();
            for (std::size_t y = 0; y < ld; ++y) {
                const Complex c = ac(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
                if (c != Complex(0.0, 0.0)) {
                    target += c * cols.col(static_cast<Eigen::Index>(y));
                }
            }
        }
    }
}

void conjugate(ComplexMatrix& rho, const ComplexMatrix& u, std::span<const std::size_t> qubits, std::size_t n_qubits) {
    apply_left(rho, u, qubits, n_qubits);
    apply_right_adjoint(rho, u, qubits, n_qubits);
}

void apply_superop(ComplexMatrix& rho, const ComplexMatrix& superop, std::span<const std::size_t> qubits,
                   std::size_t n_qubits) {
    check_square(rho, n_qubits);
    check_local(superop, qubits.size(), 2);
    if (qubits.size() == 1) {
        superop_1q(rho, superop, bit_of(qubits[0], n_qubits));
        return;
    }
    const LocalIndex idx = local_index(qubits, n_qubits);
    const std::size_t ld = idx.offsets.size();
    const std::size_t ld2 = ld * ld;
    const std::size_t d = static_cast<std::size_t>(rho.rows());
    Complex* data = rho.data();
    std::vector<Complex> in(ld2);
    std::vector<Complex> out(ld2);
    std::vector<Complex*> colptr(ld);
    for (std::size_t bc : idx.bases) {
        for (std::size_t b = 0; b < ld; ++b) {
            colptr[b] = data + (bc | idx.offsets[b]) * d;
        }
        for (std::size_t br : idx.bases) {
            for (std::size_t a = 0; a < ld; ++a) {
                const std::size_t row = br | idx.offsets[a];
                for (std::size_t b = 0; b < ld; ++b) {
                    in[a * ld + b] = colptr[b][row];
                }
            }
            for (std::size_t r = 0; r < ld2; ++r) {
                Complex acc = 0.0;
                for (std::size_t s = 0; s < ld2; ++s) {
                    acc += superop(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) * in[s];
                }
                out[r] = acc;
            }
            for (std::size_t a = 0; a < ld; ++a) {
                const std::size_t row = br | idx.offsets[a];
                for (std::size_t b = 0; b < ld; ++b) {
                    colptr[b][row] = out[a * ld + b];
                }
            }
        }
    }
}

void apply_to_vector(ComplexVector& psi, const ComplexMatrix& u, std::span<const std::size_t> qubits,
                     std::size_t n_qubits) {
    if (static_cast<std::size_t>(psi.size()) != dim_for_qubits(n_qubits)) {
        throw std::invalid_argument("state vector length does not match qubit count");
    }
    check_local(u, qubits.size(), 1);
    const LocalIndex idx = local_index(qubits, n_qubits);
    const std::size_t ld = idx.offsets.size();
    std::vector<Complex> buf(ld);
    for (std::size_t base : idx.bases) {
        for (std::size_t x = 0; x < ld; ++x) {
            buf[x] = psi(static_cast<Eigen::Index>(base | idx.offsets[x]));
        }
        for (std::size_t x = 0; x < ld; ++x) {
            Complex acc = 0.0;
            for (std::size_t y = 0; y < ld; ++y) {
                acc += u(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) * buf[y];
            }
            psi(static_cast<Eigen::Index>(base | idx.offsets[x])) = acc;
        }
    }
}

ComplexMatrix kraus_superop(const std::vector<ComplexMatrix>& ops) {
    if (ops.empty()) {
        throw std::invalid_argument("empty Kraus set");
    }
    const auto rows = ops.front().rows() * ops.front().rows();
    const auto cols = ops.front().cols() * ops.front().cols();
    ComplexMatrix s = ComplexMatrix::Zero(rows, cols);
    for (const auto& k : ops) {
        s += kron(k, k.conjugate());
    }
    return s;
}

void dephase(ComplexMatrix& rho, std::span<const std::size_t> qubits, std::size_t n_qubits) {
    check_square(rho, n_qubits);
    std::size_t mask = 0;
    for (std::size_t q : qubits) {
        if (q >= n_qubits) {
            throw std::out_of_range("qubit index out of range");
        }
        mask |= std::size_t{1} << (n_qubits - 1 - q);
    }
    const std::size_t d = static_cast<std::size_t>(rho.rows());
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            if (((i ^ j) & mask) != 0) {
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.0;
            }
        }
    }
}

void project(ComplexMatrix& rho, std::span<const std::size_t> qubits, std::size_t outcome, std::size_t n_qubits) {
    check_square(rho, n_qubits);
    const std::size_t k = qubits.size();
    std::size_t mask = 0;
    std::size_t pattern = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (qubits[j] >= n_qubits) {
            throw std::out_of_range("qubit index out of range");
        }
        const std::size_t bit = std::size_t{1} << (n_qubits - 1 - qubits[j]);
        mask |= bit;
        if ((outcome >> (k - 1 - j)) & 1) {
            pattern |= bit;
        }
    }
    const std::size_t d = static_cast<std::size_t>(rho.rows());
    for (std::size_t j = 0; j < d; ++j) {
        const bool col_ok = (j & mask) == pattern;
        for (std::size_t i = 0; i < d; ++i) {
            if (!col_ok || (i & mask) != pattern) {
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.0;
            }
        }
    }
}

}  // namespace qpufsim
