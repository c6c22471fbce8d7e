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
#include "dhq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dhq {

namespace {

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

double hermiticity_defect(const ComplexMatrix &m) {
    return max_abs(ComplexMatrix(m - m.adjoint()));
}

// exp(-i t h) for a 2x2 Hermitian generator.
Eigen::Matrix2cd qubit_propagator(const Eigen::Matrix2cd &h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    const Eigen::Vector2d &w = es.eigenvalues();
    Eigen::Vector2cd phases;
    for (int k = 0; k < 2; ++k) {
        phases[k] = std::polar(1.0, -w[k] * t);
    }
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

} // namespace

double max_abs(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const ComplexVector &v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix &m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) ||
                !std::isfinite(m(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(ComplexVector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) {
        throw ValidationError("state.dimension", "state vector is empty");
    }
    if (!all_finite(amplitudes_)) {
        throw ValidationError("state.finite",
                              "state vector has non-finite entries");
    }
}

StateVector StateVector::normalized(ComplexVector amplitudes) {
    StateVector s(std::move(amplitudes));
    const double n = s.amplitudes_.norm();
    if (std::abs(n - 1.0) > kTolNorm) {
        throw ValidationError("state.normalized",
                              "state vector norm is " + fmt_double(n) +
                                  ", expected 1");
    }
    s.normalized_ = true;
    return s;
}

// ---------------------------------------------------------------------------
// Projector

Projector::Projector(ComplexMatrix local, std::string name,
                     std::size_t trailing_dim)
    : local_(std::move(local)), trailing_(trailing_dim), name_(std::move(name)) {
    if (local_.rows() == 0 || local_.rows() != local_.cols()) {
        throw ValidationError("projector.square",
                              "projector '" + name_ + "' is not square");
    }
    if (trailing_ == 0) {
        throw ValidationError("projector.layout",
                              "projector '" + name_ +
                                  "' has zero trailing dimension");
    }
    if (!all_finite(local_)) {
        throw ValidationError("projector.finite",
                              "projector '" + name_ + "' has non-finite entries");
    }
    const double herm = hermiticity_defect(local_);
    if (herm > kTolAlg) {
        throw ValidationError("projector.hermitian",
                              "projector '" + name_ + "' violates P = P^dagger by " +
                                  fmt_double(herm));
    }
    const double idem = max_abs(ComplexMatrix(local_ * local_ - local_));
    if (idem > kTolAlg) {
        throw ValidationError("projector.idempotent",
                              "projector '" + name_ + "' violates P^2 = P by " +
                                  fmt_double(idem));
    }
    const double tr = local_.trace().real();
    const double r = std::round(tr);
    if (std::abs(tr - r) > kTolAlg) {
        throw ValidationError("projector.rank",
                              "projector '" + name_ + "' has non-integral trace " +
                                  fmt_double(tr));
    }
    rank_ = static_cast<std::size_t>(r) * trailing_;
}

ComplexMatrix Projector::matrix() const {
    if (trailing_ == 1) {
        return local_;
    }
    return kron(local_, ComplexMatrix::Identity(static_cast<Eigen::Index>(trailing_),
                                                static_cast<Eigen::Index>(trailing_)));
}

ComplexVector Projector::apply(const ComplexVector &v) const {
    if (static_cast<std::size_t>(v.size()) != dim()) {
        throw DimensionMismatch("projector '" + name_ + "' has dimension " +
                                std::to_string(dim()) + ", vector has " +
                                std::to_string(v.size()));
    }
    if (trailing_ == 1) {
        return local_ * v;
    }
    const auto t = static_cast<Eigen::Index>(trailing_);
    const auto d = static_cast<Eigen::Index>(local_dim());
    // v[i * t + j] viewed as column-major (t x d): M(j, i).
    Eigen::Map<const ComplexMatrix> in(v.data(), t, d);
    ComplexVector out(v.size());
    Eigen::Map<ComplexMatrix> res(out.data(), t, d);
    res.noalias() = in * local_.transpose();
    return out;
}

Projector Projector::renamed(std::string name) const {
    Projector p = *this;
    p.name_ = std::move(name);
    return p;
}

Projector identity_projector(std::size_t dim, std::string name) {
    const auto n = static_cast<Eigen::Index>(dim);
    return Projector(ComplexMatrix::Identity(n, n), std::move(name));
}

Projector projector_from_span(std::span<const ComplexVector> vectors,
                              std::string name, std::size_t trailing_dim) {
    if (vectors.empty()) {
        throw DegenerateSpan("projector '" + name + "': empty spanning set");
    }
    const Eigen::Index d = vectors.front().size();
    std::vector<ComplexVector> basis;
    basis.reserve(vectors.size());
    for (const auto &v : vectors) {
        if (v.size() != d) {
            throw DimensionMismatch("projector '" + name +
                                    "': spanning vectors differ in dimension");
        }
        const double scale = v.norm();
        ComplexVector w = v;
        // Two passes of modified Gram-Schmidt.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &b : basis) {
                w -= b.dot(w) * b;
            }
        }
        const double residual = w.norm();
        if (!(scale > 0.0) || residual <= kTolAlg * std::max(1.0, scale)) {
            throw DegenerateSpan("projector '" + name +
                                 "': spanning vectors are linearly dependent");
        }
        basis.push_back(w / residual);
    }
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    for (const auto &b : basis) {
        p += b * b.adjoint();
    }
    return Projector(std::move(p), std::move(name), trailing_dim);
}

Projector complement(const Projector &p) {
    const auto n = static_cast<Eigen::Index>(p.local_dim());
    std::string name = p.name().rfind("not", 0) == 0 && p.name().size() > 3
                           ? p.name().substr(3)
                           : "not" + p.name();
    return Projector(ComplexMatrix::Identity(n, n) - p.local(), std::move(name),
                     p.trailing_dim());
}

double commutator_norm(const Projector &p, const Projector &q) {
    if (p.dim() != q.dim()) {
        throw DimensionMismatch("commutator of projectors with dimensions " +
                                std::to_string(p.dim()) + " and " +
                                std::to_string(q.dim()));
    }
    if (p.trailing_dim() == q.trailing_dim()) {
        return max_abs(ComplexMatrix(p.local() * q.local() - q.local() * p.local()));
    }
    const ComplexMatrix a = p.matrix();
    const ComplexMatrix b = q.matrix();
    return max_abs(ComplexMatrix(a * b - b * a));
}

ComplexMatrix projector_product(const Projector &p, const Projector &q,
                                std::size_t *trailing_out) {
    if (p.dim() != q.dim()) {
        throw DimensionMismatch("product of projectors with dimensions " +
                                std::to_string(p.dim()) + " and " +
                                std::to_string(q.dim()));
    }
    if (p.trailing_dim() == q.trailing_dim()) {
        if (trailing_out != nullptr) {
            *trailing_out = p.trailing_dim();
        }
        return p.local() * q.local();
    }
    if (trailing_out != nullptr) {
        *trailing_out = 1;
    }
    return p.matrix() * q.matrix();
}

// ---------------------------------------------------------------------------
// Eigendecomposition

EigenDecomposition hermitian_eig(const ComplexMatrix &h) {
    if (h.rows() != h.cols()) {
        throw DimensionMismatch("hermitian_eig: matrix is not square");
    }
    if (!all_finite(h)) {
        throw NotHermitian("hermitian_eig: non-finite entries", INFINITY);
    }
    const double herm = hermiticity_defect(h);
    if (herm > kTolAlg) {
        throw NotHermitian("matrix violates H = H^dagger by " + fmt_double(herm),
                           herm);
    }
    const auto n = h.rows();
    EigenDecomposition out;
    if (n == 0) {
        return out;
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw NotHermitian("hermitian_eig: eigensolver did not converge", herm);
    }
    ComplexMatrix vecs = es.eigenvectors();
    const Eigen::VectorXd &vals = es.eigenvalues();

    std::vector<Eigen::Index> pivot(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        auto col = vecs.col(k);
        Eigen::Index best = 0;
        double best_mag = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mag = std::abs(col[i]);
            if (mag > best_mag + 1e-12) {
                best = i;
                best_mag = mag;
            }
        }
        col *= std::conj(col[best]) / std::abs(col[best]);
        col[best] = Complex(std::abs(col[best]), 0.0);
        pivot[static_cast<std::size_t>(k)] = best;
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    // Values arrive ascending; reorder only inside near-degenerate clusters.
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() &&
               vals[static_cast<Eigen::Index>(end)] -
                       vals[static_cast<Eigen::Index>(end - 1)] <=
                   kTolAlg) {
            ++end;
        }
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](Eigen::Index a, Eigen::Index b) {
                             return pivot[static_cast<std::size_t>(a)] <
                                    pivot[static_cast<std::size_t>(b)];
                         });
        start = end;
    }

    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values[k] = vals[src];
        out.vectors.col(k) = vecs.col(src);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hamiltonian

struct Hamiltonian::EigenCache {
    std::once_flag once;
    EigenDecomposition value;
};

Hamiltonian::Hamiltonian(const ComplexMatrix &matrix) {
    if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
        throw DimensionMismatch("Hamiltonian must be a non-empty square matrix");
    }
    eigen_ = std::make_shared<EigenCache>();
    // Decompose eagerly: validates Hermiticity and fills the cache.
    std::call_once(eigen_->once,
                   [&] { eigen_->value = hermitian_eig(matrix); });
    dim_ = static_cast<std::size_t>(matrix.rows());
    zero_ = max_abs(matrix) == 0.0;
    dense_ = std::make_shared<const ComplexMatrix>(matrix);
}

Hamiltonian Hamiltonian::zero(std::size_t dim) {
    if (dim == 0) {
        throw DimensionMismatch("Hamiltonian dimension must be positive");
    }
    Hamiltonian h;
    h.dim_ = dim;
    h.zero_ = true;
    h.eigen_ = std::make_shared<EigenCache>();
    return h;
}

Hamiltonian Hamiltonian::conditional_qubits(ConditionalQubitTerms terms) {
    if (terms.control_dim == 0) {
        throw DimensionMismatch("conditional Hamiltonian needs a control system");
    }
    if (terms.env_qubits > 24) {
        throw DimensionMismatch("conditional Hamiltonian: more than 24 qubits");
    }
    if (terms.generators.size() != terms.control_dim) {
        throw DimensionMismatch("conditional Hamiltonian: one generator list per "
                                "control state required");
    }
    bool all_zero = true;
    for (const auto &row : terms.generators) {
        if (row.size() != terms.env_qubits) {
            throw DimensionMismatch("conditional Hamiltonian: one generator per "
                                    "environment qubit required");
        }
        for (const auto &g : row) {
            const double herm = max_abs(ComplexMatrix(g - g.adjoint()));
            if (herm > kTolAlg || !all_finite(ComplexMatrix(g))) {
                throw NotHermitian("conditional Hamiltonian generator violates "
                                   "h = h^dagger by " + fmt_double(herm),
                                   herm);
            }
            all_zero = all_zero && max_abs(ComplexMatrix(g)) == 0.0;
        }
    }
    Hamiltonian h;
    h.dim_ = terms.control_dim << terms.env_qubits;
    h.zero_ = all_zero;
    h.structured_ = std::make_shared<const ConditionalQubitTerms>(std::move(terms));
    h.eigen_ = std::make_shared<EigenCache>();
    return h;
}

ComplexMatrix Hamiltonian::matrix() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    if (dense_) {
        return *dense_;
    }
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    if (!structured_) {
        return out;
    }
    const auto &s = *structured_;
    const std::size_t env_dim = std::size_t{1} << s.env_qubits;
    for (std::size_t c = 0; c < s.control_dim; ++c) {
        ComplexMatrix block = ComplexMatrix::Zero(static_cast<Eigen::Index>(env_dim),
                                                  static_cast<Eigen::Index>(env_dim));
        for (std::size_t k = 0; k < s.env_qubits; ++k) {
            const auto left = static_cast<Eigen::Index>(std::size_t{1} << k);
            const auto right =
                static_cast<Eigen::Index>(std::size_t{1} << (s.env_qubits - 1 - k));
            block += kron(kron(ComplexMatrix::Identity(left, left),
                               ComplexMatrix(s.generators[c][k])),
                          ComplexMatrix::Identity(right, right));
        }
        const auto off = static_cast<Eigen::Index>(c * env_dim);
        out.block(off, off, block.rows(), block.cols()) = block;
    }
    return out;
}

const EigenDecomposition &Hamiltonian::eigen() const {
    std::call_once(eigen_->once,
                   [this] { eigen_->value = hermitian_eig(matrix()); });
    return eigen_->value;
}

ComplexVector Hamiltonian::propagate(const ComplexVector &v, double t) const {
    if (static_cast<std::size_t>(v.size()) != dim_) {
        throw DimensionMismatch("propagate: Hamiltonian dimension " +
                                std::to_string(dim_) + ", vector " +
                                std::to_string(v.size()));
    }
    if (zero_ || t == 0.0) {
        return v;
    }
    if (structured_) {
        const auto &s = *structured_;
        const std::size_t env_dim = std::size_t{1} << s.env_qubits;
        ComplexVector out = v;
        for (std::size_t c = 0; c < s.control_dim; ++c) {
            Complex *slice = out.data() + c * env_dim;
            for (std::size_t k = 0; k < s.env_qubits; ++k) {
                const Eigen::Matrix2cd g = qubit_propagator(s.generators[c][k], t);
                const std::size_t stride = std::size_t{1} << (s.env_qubits - 1 - k);
                for (std::size_t base = 0; base < env_dim; base += 2 * stride) {
                    for (std::size_t off = 0; off < stride; ++off) {
                        Complex &a0 = slice[base + off];
                        Complex &a1 = slice[base + off + stride];
                        const Complex x0 = a0;
                        const Complex x1 = a1;
                        a0 = g(0, 0) * x0 + g(0, 1) * x1;
                        a1 = g(1, 0) * x0 + g(1, 1) * x1;
                    }
                }
            }
        }
        return out;
    }
    const auto &e = eigen();
    ComplexVector coeff = e.vectors.adjoint() * v;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) {
        coeff[k] *= std::polar(1.0, -e.values[k] * t);
    }
    return e.vectors * coeff;
}

ComplexMatrix Hamiltonian::propagator(double t) const {
    const auto n = static_cast<Eigen::Index>(dim_);
    if (zero_ || t == 0.0) {
        return ComplexMatrix::Identity(n, n);
    }
    if (structured_) {
        ComplexMatrix out(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            out.col(j) = propagate(ComplexVector::Unit(n, j), t);
        }
        return out;
    }
    const auto &e = eigen();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        phases[k] = std::polar(1.0, -e.values[k] * t);
    }
    return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

bool Hamiltonian::same_as(const Hamiltonian &other, double tol) const {
    if (dim_ != other.dim_) {
        return false;
    }
    if (zero_ && other.zero_) {
        return true;
    }
    if (structured_ && other.structured_) {
        const auto &a = *structured_;
        const auto &b = *other.structured_;
        if (a.control_dim != b.control_dim || a.env_qubits != b.env_qubits) {
            return false;
        }
        for (std::size_t c = 0; c < a.control_dim; ++c) {
            for (std::size_t k = 0; k < a.env_qubits; ++k) {
                if (max_abs(ComplexMatrix(a.generators[c][k] - b.generators[c][k])) >
                    tol) {
                    return false;
                }
            }
        }
        return true;
    }
    return max_abs(ComplexMatrix(matrix() - other.matrix())) <= tol;
}

Projector evolve_heisenberg(const Projector &p, const Hamiltonian &h, double t) {
    if (p.dim() != h.dim()) {
        throw DimensionMismatch("evolve_heisenberg: projector dimension " +
                                std::to_string(p.dim()) + ", Hamiltonian " +
                                std::to_string(h.dim()));
    }
    if (h.is_zero() || t == 0.0) {
        return p;
    }
    const ComplexMatrix u = h.propagator(t);
    return Projector(u.adjoint() * p.matrix() * u, p.name());
}

} // namespace dhq
