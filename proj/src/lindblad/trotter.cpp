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

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "qpufsim/kernels.hpp"
#include "qpufsim/lindblad.hpp"

namespace qpufsim {

namespace {

ComplexMatrix frame_rotation(Pauli p) {
    ComplexMatrix v(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    switch (p) {
        case Pauli::X:
            v << s, s, s, -s;
            break;
        case Pauli::Y:
            v << s, s, kI * s, -kI * s;
            break;
        default:
            v = ComplexMatrix::Identity(2, 2);
    }
    return v;
}

/// rho <- V^dagger rho V (to_frame) or V rho V^dagger, V = v tensored over all qubits.
void change_frame(ComplexMatrix& m, Pauli from, Pauli to, std::size_t n) {
    if (from == Pauli::I) from = Pauli::Z;
    if (to == Pauli::I) to = Pauli::Z;
    if (from == to) {
        return;
    }
    const ComplexMatrix u = frame_rotation(to).adjoint() * frame_rotation(from);
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t qs[1] = {q};
        conjugate(m, u, qs, n);
    }
}

double max_off_diagonal(const ComplexMatrix& m) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i != j) {
                worst = std::max(worst, std::abs(m(i, j)));
            }
        }
    }
    return worst;
}

/// Diagonal of `op` in the frame, if `op` is diagonal there.
std::optional<ComplexVector> diagonal_in_frame(const ComplexMatrix& op, Pauli frame, std::size_t n) {
    ComplexMatrix m = op;
    change_frame(m, Pauli::Z, frame, n);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (max_off_diagonal(m) > 1e-12 * scale) {
        return std::nullopt;
    }
    return ComplexVector(m.diagonal());
}

struct Factor {
    enum class Kind { Identity, Local, Diagonal, Unitary, DenseSuperop, Taylor };
    Kind kind = Kind::Identity;
    std::vector<std::size_t> support;
    ComplexMatrix matrix;  // local superop, elementwise weights, unitary, or dense superop
    std::array<ComplexMatrix, 2> local_in_frame;  // local superop seen from the X and Y frames
    Pauli frame = Pauli::Z;
    double dt = 0.0;
    const LindbladGenerator* gen = nullptr;
};

bool is_zero(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff() == 0.0; }

ComplexMatrix apply_liouvillian(const LindbladGenerator& gen, const ComplexMatrix& heff, const ComplexMatrix& rho) {
    ComplexMatrix out = -kI * (heff * rho - rho * heff.adjoint());
    for (const auto& j : gen.jumps()) {
        out.noalias() += j.op * rho * j.op.adjoint();
    }
    return out;
}

void taylor_apply(const LindbladGenerator& gen, double dt, ComplexMatrix& rho) {
    const ComplexMatrix heff = effective_hamiltonian(gen);
    auto one_norm = [](const ComplexMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); };
    double bound = 2.0 * one_norm(heff);
    for (const auto& j : gen.jumps()) {
        bound += one_norm(j.op) * one_norm(j.op);
    }
    const std::size_t substeps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dt * bound / 0.5)));
    const double h = dt / static_cast<double>(substeps);
    for (std::size_t s = 0; s < substeps; ++s) {
        ComplexMatrix term = rho;
        ComplexMatrix acc = rho;
        for (int k = 1; k < 60; ++k) {
            term = apply_liouvillian(gen, heff, term) * (h / k);
            acc += term;
            if (term.cwiseAbs().maxCoeff() < 1e-17) {
                break;
            }
        }
        rho = std::move(acc);
    }
}

Factor build_factor(const TrotterPiece& piece, double dt, std::size_t n) {
    Factor f;
    f.dt = dt;
    const LindbladGenerator& g = piece.generator;
    if (!piece.support.empty()) {
        if (piece.support.size() > 3) {
            throw GuardError("local Trotter pieces are limited to 3 qubits");
        }
        f.kind = Factor::Kind::Local;
        f.support = piece.support;
        f.matrix = expm(dt * liouvillian_dense(g));
        for (Pauli frame : {Pauli::X, Pauli::Y}) {
            // row-major vec: vec(U r U^dagger) = (U kron conj(U)) vec(r)
            ComplexMatrix u = ComplexMatrix::Identity(1, 1);
            for (std::size_t k = 0; k < piece.support.size(); ++k) u = kron(u, frame_rotation(frame).adjoint());
            const ComplexMatrix t = kron(u, u.conjugate());
            const ComplexMatrix t_inv = kron(ComplexMatrix(u.adjoint()), ComplexMatrix(u.transpose()));
            f.local_in_frame[frame == Pauli::X ? 0 : 1] = t * f.matrix * t_inv;
        }
        return f;
    }
    if (g.jumps().empty() && is_zero(g.hamiltonian())) {
        return f;
    }
    for (Pauli frame : {Pauli::Z, Pauli::X, Pauli::Y}) {
        const auto h = diagonal_in_frame(g.hamiltonian(), frame, n);
        if (!h) {
            continue;
        }
        std::vector<ComplexVector> ls;
        bool ok = true;
        for (const auto& j : g.jumps()) {
            auto l = diagonal_in_frame(j.op, frame, n);
            if (!l) {
                ok = false;
                break;
            }
            ls.push_back(std::move(*l));
        }
        if (!ok) {
            continue;
        }
        const auto d = static_cast<Eigen::Index>(g.dim());
        f.kind = Factor::Kind::Diagonal;
        f.frame = frame;
        f.matrix.resize(d, d);
        for (Eigen::Index b = 0; b < d; ++b) {
            for (Eigen::Index a = 0; a < d; ++a) {
                Complex rate = -kI * ((*h)(a) - std::conj((*h)(b)));
                for (const auto& l : ls) {
                    rate += l(a) * std::conj(l(b)) - 0.5 * std::norm(l(a)) - 0.5 * std::norm(l(b));
                }
                f.matrix(a, b) = std::exp(dt * rate);
            }
        }
        return f;
    }
    if (g.jumps().empty()) {
        f.kind = Factor::Kind::Unitary;
        f.matrix = hamiltonian_propagator(g.hamiltonian(), dt);
        return f;
    }
    if (g.dim() <= 16) {
        f.kind = Factor::Kind::DenseSuperop;
        f.matrix = expm(dt * liouvillian_dense(g));
        return f;
    }
    f.kind = Factor::Kind::Taylor;
    f.gen = &g;
    return f;
}

/// `frame` is the basis rho is currently held in. Diagonal factors move it; local
/// factors work in any frame; everything else needs Z.
void apply_factor(const Factor& f, ComplexMatrix& rho, std::size_t n, Pauli& frame) {
    if (f.kind == Factor::Kind::Identity) {
        return;
    }
    if (f.kind == Factor::Kind::Diagonal) {
        change_frame(rho, frame, f.frame, n);
        frame = f.frame;
        rho.array() *= f.matrix.array();
        return;
    }
    if (f.kind == Factor::Kind::Local) {
        const ComplexMatrix& m = frame == Pauli::X ? f.local_in_frame[0] : frame == Pauli::Y ? f.local_in_frame[1] : f.matrix;
        apply_superop(rho, m, f.support, n);
        return;
    }
    change_frame(rho, frame, Pauli::Z, n);
    frame = Pauli::Z;
    switch (f.kind) {
        case Factor::Kind::Unitary:
            rho = f.matrix * rho * f.matrix.adjoint();
            return;
        case Factor::Kind::DenseSuperop:
            rho = unvec_rows(f.matrix * vec_rows(rho), static_cast<std::size_t>(rho.rows()));
            return;
        case Factor::Kind::Taylor:
            taylor_apply(*f.gen, f.dt, rho);
            return;
        default:
            return;
    }
}

}  // namespace

struct TrotterPropagator::Impl {
    std::vector<TrotterPiece> pieces;
    std::vector<std::pair<std::size_t, double>> sequence;  // (piece, time)
    std::map<std::pair<std::size_t, double>, Factor> factors;
};

TrotterPropagator::TrotterPropagator(std::size_t n_qubits, std::vector<TrotterPiece> pieces, TrotterPlan plan)
    : n_qubits_(n_qubits), impl_(std::make_unique<Impl>()) {
    if (plan.order != 1 && plan.order != 2) {
        throw std::invalid_argument("Trotter order must be 1 or 2");
    }
    if (plan.r < 1 || !(plan.t >= 0.0)) {
        throw std::invalid_argument("Trotter plan needs r >= 1 and t >= 0");
    }
    for (const auto& p : pieces) {
        const std::size_t expect = p.support.empty() ? n_qubits : p.support.size();
        if (p.generator.n_qubits() != expect) {
            throw std::invalid_argument("Trotter piece width does not match its support");
        }
        for (std::size_t q : p.support) {
            if (q >= n_qubits) {
                throw std::out_of_range("Trotter piece support outside register");
            }
        }
    }
    impl_->pieces = std::move(pieces);
    const std::size_t k = impl_->pieces.size();
    const double dt = plan.t / static_cast<double>(plan.r);
    std::vector<std::pair<std::size_t, double>> raw;
    for (std::size_t s = 0; s < plan.r && k > 0; ++s) {
        if (plan.order == 1 || k == 1) {
            for (std::size_t p = 0; p < k; ++p) raw.emplace_back(p, dt);
        } else {
            for (std::size_t p = 0; p + 1 < k; ++p) raw.emplace_back(p, dt / 2);
            raw.emplace_back(k - 1, dt);
            for (std::size_t p = k - 1; p-- > 0;) raw.emplace_back(p, dt / 2);
        }
    }
    for (const auto& e : raw) {
        if (!impl_->sequence.empty() && impl_->sequence.back().first == e.first) {
            impl_->sequence.back().second += e.second;
        } else {
            impl_->sequence.push_back(e);
        }
    }
    for (const auto& e : impl_->sequence) {
        if (!impl_->factors.count(e)) {
            impl_->factors.emplace(e, build_factor(impl_->pieces[e.first], e.second, n_qubits_));
        }
    }
}

TrotterPropagator::~TrotterPropagator() = default;
TrotterPropagator::TrotterPropagator(TrotterPropagator&&) noexcept = default;
TrotterPropagator& TrotterPropagator::operator=(TrotterPropagator&&) noexcept = default;

void TrotterPropagator::apply(ComplexMatrix& rho) const {
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(n_qubits_));
    if (rho.rows() != d || rho.cols() != d) {
        throw std::invalid_argument("state dimension does not match propagator");
    }
    Pauli frame = Pauli::Z;
    for (const auto& e : impl_->sequence) {
        apply_factor(impl_->factors.at(e), rho, n_qubits_, frame);
    }
    change_frame(rho, frame, Pauli::Z, n_qubits_);
}

DensityMatrix TrotterPropagator::apply(const DensityMatrix& rho) const {
    ComplexMatrix m = rho.matrix();
    apply(m);
    return DensityMatrix::unchecked(std::move(m));
}

namespace {

/// Piece holding the given jumps, evolved locally when their support hints
/// cover at most three qubits.
TrotterPiece jump_piece(const LindbladGenerator& gen, const std::vector<std::size_t>& indices) {
    const std::size_t n = gen.n_qubits();
    std::vector<std::size_t> support;
    bool local = true;
    for (std::size_t i : indices) {
        const auto& j = gen.jumps().at(i);
        if (j.support.empty()) {
            local = false;
            break;
        }
        for (std::size_t q : j.support) {
            if (std::find(support.begin(), support.end(), q) == support.end()) support.push_back(q);
        }
    }
    local = local && support.size() <= 3;
    if (local) {
        std::sort(support.begin(), support.end());
        const std::size_t k = support.size();
        std::vector<JumpOperator> js;
        for (std::size_t i : indices) {
            const auto& src = gen.jumps()[i];
            std::vector<std::size_t> pos;
            for (std::size_t q : src.support) {
                pos.push_back(static_cast<std::size_t>(std::find(support.begin(), support.end(), q) - support.begin()));
            }
            JumpOperator j;
            j.op = embed_operator(src.local, pos, k);
            j.rate = src.rate;
            j.label = src.label;
            js.push_back(std::move(j));
        }
        const auto ld = static_cast<Eigen::Index>(std::size_t{1} << k);
        return {support, LindbladGenerator(k, ComplexMatrix::Zero(ld, ld), std::move(js))};
    }
    std::vector<JumpOperator> js;
    for (std::size_t i : indices) {
        js.push_back(gen.jumps()[i]);
    }
    const auto d = static_cast<Eigen::Index>(gen.dim());
    return {{}, LindbladGenerator(n, ComplexMatrix::Zero(d, d), std::move(js))};
}

}  // namespace

std::vector<TrotterPiece> grouped_split(const LindbladGenerator& gen, const std::vector<std::vector<std::size_t>>& groups) {
    std::vector<int> used(gen.jumps().size(), 0);
    for (const auto& g : groups) {
        for (std::size_t i : g) {
            if (i >= used.size()) {
                throw std::out_of_range("jump index " + std::to_string(i) + " out of range");
            }
            ++used[i];
        }
    }
    if (std::any_of(used.begin(), used.end(), [](int c) { return c != 1; })) {
        throw std::invalid_argument("jump grouping must partition the jump list");
    }
    std::vector<TrotterPiece> pieces;
    if (!is_zero(gen.hamiltonian())) {
        pieces.push_back({{}, LindbladGenerator(gen.n_qubits(), gen.hamiltonian())});
    }
    for (const auto& g : groups) {
        if (!g.empty()) {
            pieces.push_back(jump_piece(gen, g));
        }
    }
    return pieces;
}

std::vector<TrotterPiece> default_split(const LindbladGenerator& gen) {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < gen.jumps().size(); ++i) {
        groups.push_back({i});
    }
    return grouped_split(gen, groups);
}

DensityMatrix evolve_trotter(const LindbladGenerator& gen, const DensityMatrix& rho0, const TrotterPlan& plan) {
    if (rho0.dim() != gen.dim()) {
        throw std::invalid_argument("state dimension does not match generator");
    }
    return TrotterPropagator(gen.n_qubits(), default_split(gen), plan).apply(rho0);
}

DensityMatrix evolve_trotter(const LindbladGenerator& gen, const DensityMatrix& rho0, const TrotterPlan& plan,
                             const std::vector<std::vector<std::size_t>>& grouping) {
    if (rho0.dim() != gen.dim()) {
        throw std::invalid_argument("state dimension does not match generator");
    }
    return TrotterPropagator(gen.n_qubits(), grouped_split(gen, grouping), plan).apply(rho0);
}

}  // namespace qpufsim
