// Copyright 2026 The dhq Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Dense complex linear algebra for finite-dimensional closed systems:
 * state vectors, projectors, Hamiltonians and unitary evolution.
 *
 * Units: hbar = 1, so energies are inverse times.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dhq/errors.hpp"

namespace dhq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Absolute max-norm tolerance for algebraic identities (P = P^dagger,
/// P^2 = P, completeness, reconstruction residuals).
inline constexpr double kTolAlg = 1e-10;

/// Normalization tolerance for state vectors flagged as normalized.
inline constexpr double kTolNorm = 1e-12;

/// Largest entry magnitude, the max-norm used for every tolerance check.
[[nodiscard]] double max_abs(const ComplexMatrix &m);
[[nodiscard]] double max_abs(const ComplexVector &v);
[[nodiscard]] bool all_finite(const ComplexMatrix &m);

/// Kronecker product a (x) b.
[[nodiscard]] ComplexMatrix kron(const ComplexMatrix &a,
                                 const ComplexMatrix &b);

class StateVector {
  public:
    /// Unnormalized vector (branch state vectors carry no norm requirement).
    explicit StateVector(ComplexVector amplitudes);

    /// Throws ValidationError("state.normalized") unless |v| = 1 within 1e-12.
    static StateVector normalized(ComplexVector amplitudes);

    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    [[nodiscard]] const ComplexVector &amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] bool is_normalized() const noexcept { return normalized_; }
    [[nodiscard]] double squared_norm() const {
        return amplitudes_.squaredNorm();
    }

  private:
    ComplexVector amplitudes_;
    bool normalized_ = false;
};

/// Orthogonal projector of the form P_local (x) I_trailing.
///
/// Most projectors are plain dense matrices (trailing dimension 1). The
/// tensor form lets alternatives that only follow a subsystem act on very
/// large spaces without materializing the full matrix.
class Projector {
  public:
    /// Validates Hermiticity, idempotency and integral trace at kTolAlg.
    Projector(ComplexMatrix local, std::string name,
              std::size_t trailing_dim = 1);

    [[nodiscard]] const ComplexMatrix &local() const noexcept {
        return local_;
    }
    [[nodiscard]] std::size_t local_dim() const noexcept {
        return static_cast<std::size_t>(local_.rows());
    }
    [[nodiscard]] std::size_t trailing_dim() const noexcept {
        return trailing_;
    }
    [[nodiscard]] std::size_t dim() const noexcept {
        return local_dim() * trailing_;
    }
    [[nodiscard]] std::size_t rank() const noexcept { return rank_; }
    [[nodiscard]] const std::string &name() const noexcept { return name_; }

    /// Full dense matrix. Only sensible for modest dimensions.
    [[nodiscard]] ComplexMatrix matrix() const;

    /// P v without forming the full matrix.
    [[nodiscard]] ComplexVector apply(const ComplexVector &v) const;

    [[nodiscard]] Projector renamed(std::string name) const;

  private:
    ComplexMatrix local_;
    std::size_t trailing_;
    std::size_t rank_ = 0;
    std::string name_;
};

/// Identity projector on a space of the given dimension.
[[nodiscard]] Projector identity_projector(std::size_t dim,
                                           std::string name = "I");

/// Projector onto span(vectors). Throws DimensionMismatch or DegenerateSpan.
[[nodiscard]] Projector projector_from_span(std::span<const ComplexVector> vectors,
                                            std::string name,
                                            std::size_t trailing_dim = 1);

/// I - P, keeping P's tensor layout. Named "notX" for X (and X for "notX").
[[nodiscard]] Projector complement(const Projector &p);

/// Max-norm of [P, Q].
[[nodiscard]] double commutator_norm(const Projector &p, const Projector &q);

/// Product P Q of two commuting projectors, itself a projector. The
/// caller must have checked commutation.
[[nodiscard]] ComplexMatrix projector_product(const Projector &p,
                                              const Projector &q,
                                              std::size_t *trailing_out);

struct EigenDecomposition {
    Eigen::VectorXd values;  ///< ascending
    ComplexMatrix vectors;   ///< unitary; column k belongs to values[k]
};

/// Eigendecomposition of a Hermitian matrix with a deterministic phase and
/// ordering convention: eigenvalues ascending, each eigenvector rotated so
/// its largest-magnitude component (first one on ties) is real positive,
/// near-degenerate clusters ordered by that component's index.
/// Throws NotHermitian.
[[nodiscard]] EigenDecomposition hermitian_eig(const ComplexMatrix &h);

/// Hamiltonian made of commuting pieces conditioned on a control system:
///
///   H = sum_c |c><c| (x) sum_k h_{c,k}
///
/// where h_{c,k} is a 2x2 Hermitian generator acting on environment qubit k
/// (qubit 0 is the most significant bit of the environment index). Basis
/// index = c * 2^n + environment bits.
struct ConditionalQubitTerms {
    std::size_t control_dim = 0;
    std::size_t env_qubits = 0;
    std::vector<std::vector<Eigen::Matrix2cd>> generators;  ///< [c][k]
};

/// Time-independent Hamiltonian, either dense or in conditional-qubit form.
class Hamiltonian {
  public:
    /// Dense Hermitian matrix. Throws NotHermitian.
    explicit Hamiltonian(const ComplexMatrix &matrix);

    static Hamiltonian zero(std::size_t dim);
    static Hamiltonian conditional_qubits(ConditionalQubitTerms terms);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] bool is_zero() const noexcept { return zero_; }
    [[nodiscard]] bool is_dense() const noexcept { return !structured_; }
    [[nodiscard]] const ConditionalQubitTerms *structured() const noexcept {
        return structured_.get();
    }

    /// Dense matrix (assembled on demand for the structured form).
    [[nodiscard]] ComplexMatrix matrix() const;

    /// Eigendecomposition of the dense form, computed once.
    [[nodiscard]] const EigenDecomposition &eigen() const;

    /// e^{-iHt} v.
    [[nodiscard]] ComplexVector propagate(const ComplexVector &v,
                                          double t) const;

    /// e^{-iHt} as a dense matrix.
    [[nodiscard]] ComplexMatrix propagator(double t) const;

    /// Same operator within tol (max-norm on the dense form, or structural
    /// comparison when both are structured).
    [[nodiscard]] bool same_as(const Hamiltonian &other,
                               double tol = kTolAlg) const;

  private:
    Hamiltonian() = default;

    std::size_t dim_ = 0;
    bool zero_ = false;
    struct EigenCache;

    std::shared_ptr<const ComplexMatrix> dense_;
    std::shared_ptr<const ConditionalQubitTerms> structured_;
    std::shared_ptr<EigenCache> eigen_;
};

/// Heisenberg picture evolution e^{+iHt} P e^{-iHt}. The result is a dense
/// projector carrying P's name. Throws DimensionMismatch.
[[nodiscard]] Projector evolve_heisenberg(const Projector &p,
                                          const Hamiltonian &h, double t);

} // namespace dhq
