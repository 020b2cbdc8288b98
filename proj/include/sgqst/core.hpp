// Copyright 2026 The sgqst Authors
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

/// \file core.hpp
/// Complex vector and density-matrix value types, plus the handful of
/// linear-algebra predicates (Born expectation, Hermitian eigendecomposition,
/// PSD square root) that the rest of the library is built on.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgqst {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Unit-norm and unit-trace tolerance.
inline constexpr double kNormTolerance = 1e-10;
/// Hermiticity / PSD / reconstruction tolerance.
inline constexpr double kSpectralTolerance = 1e-8;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a value that must be a physical state is not one.
class InvalidStateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline void require_same_dim(std::ptrdiff_t a, std::ptrdiff_t b, const char *what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionError(os.str());
    }
}

inline double hermitian_defect(const CMatrix &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline CMatrix hermitian_part(const CMatrix &m) {
    return 0.5 * (m + m.adjoint());
}

/// Rotates the global phase so the first component with magnitude above
/// `eps` is real and positive.
inline void canonicalize_phase(CVector &v, double eps = 1e-12) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > eps) {
            v *= std::conj(v[i]) / mag;
            v[i] = Complex(v[i].real(), 0.0);
            return;
        }
    }
}

} // namespace detail

/// Unconstrained finite complex vector (perturbations, gradients, raw draws).
class RawVector {
public:
    RawVector() = default;
    explicit RawVector(CVector entries) : entries_(std::move(entries)) {
        if (!entries_.allFinite()) {
            throw std::invalid_argument("RawVector: non-finite entry");
        }
    }

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(entries_.size()); }
    [[nodiscard]] const CVector &entries() const { return entries_; }
    [[nodiscard]] Complex operator[](std::size_t i) const { return entries_[static_cast<Eigen::Index>(i)]; }
    [[nodiscard]] double norm() const { return entries_.norm(); }

    friend RawVector operator*(double s, const RawVector &v) { return RawVector(s * v.entries_); }
    friend RawVector operator-(const RawVector &v) { return RawVector(-v.entries_); }

private:
    CVector entries_;
};

/// Unit-norm complex vector of dimension >= 2.
class StateVector {
public:
    /// Normalizes `v`; returns nullopt when its norm is below `min_norm`.
    static std::optional<StateVector> try_normalized(const CVector &v, double min_norm = 1e-12) {
        if (v.size() < 2) {
            throw DimensionError("StateVector: dimension must be at least 2");
        }
        if (!v.allFinite()) {
            return std::nullopt;
        }
        const double n = v.norm();
        if (!(n >= min_norm)) {
            return std::nullopt;
        }
        return StateVector(v / n);
    }

    static StateVector normalized(const CVector &v) {
        auto s = try_normalized(v);
        if (!s) {
            throw std::invalid_argument("StateVector: cannot normalize a zero vector");
        }
        return *std::move(s);
    }

    /// Computational basis vector |index>.
    static StateVector basis(std::size_t d, std::size_t index) {
        if (index >= d) {
            throw std::out_of_range("StateVector::basis: index out of range");
        }
        CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
        v[static_cast<Eigen::Index>(index)] = 1.0;
        return normalized(v);
    }

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    [[nodiscard]] const CVector &amplitudes() const { return amps_; }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

    /// Same ray with the first significant component made real positive.
    [[nodiscard]] StateVector canonical() const {
        CVector v = amps_;
        detail::canonicalize_phase(v);
        return StateVector(std::move(v));
    }

    /// |v><v|
    [[nodiscard]] CMatrix projector() const { return amps_ * amps_.adjoint(); }

private:
    explicit StateVector(CVector v) : amps_(std::move(v)) {}
    CVector amps_;
};

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner_product(const StateVector &a, const StateVector &b) {
    detail::require_same_dim(a.amplitudes().size(), b.amplitudes().size(), "inner_product");
    return a.amplitudes().dot(b.amplitudes());
}

inline double overlap(const StateVector &a, const StateVector &b) {
    return std::norm(inner_product(a, b));
}

/// Eigenpairs in descending eigenvalue order with orthonormal eigenvectors.
struct Spectrum {
    std::vector<double> values;
    std::vector<StateVector> vectors;

    [[nodiscard]] std::size_t size() const { return values.size(); }

    /// sum_i values[i] |v_i><v_i|
    [[nodiscard]] CMatrix reconstruct(std::size_t d) const {
        const auto n = static_cast<Eigen::Index>(d);
        CMatrix m = CMatrix::Zero(n, n);
        for (std::size_t i = 0; i < values.size(); ++i) {
            m += values[i] * vectors[i].projector();
        }
        return m;
    }
};

/// Full eigendecomposition of a Hermitian matrix, eigenvalues descending and
/// eigenvector phases canonicalized.
inline Spectrum hermitian_eig(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("hermitian_eig: matrix is not square");
    }
    if (m.rows() < 2) {
        throw DimensionError("hermitian_eig: dimension must be at least 2");
    }
    const double defect = detail::hermitian_defect(m);
    if (!(defect <= kSpectralTolerance)) {
        std::ostringstream os;
        os << "hermitian_eig: matrix is not Hermitian (defect " << defect << ")";
        throw std::invalid_argument(os.str());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(detail::hermitian_part(m));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigensolver did not converge");
    }
    const auto n = m.rows();
    Spectrum s;
    s.values.reserve(static_cast<std::size_t>(n));
    s.vectors.reserve(static_cast<std::size_t>(n));
    // Eigen returns ascending order.
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        s.values.push_back(solver.eigenvalues()[i]);
        s.vectors.push_back(StateVector::normalized(solver.eigenvectors().col(i)).canonical());
    }
    return s;
}

/// Square root of a Hermitian PSD matrix; eigenvalues below zero are clamped.
inline CMatrix psd_sqrt(const CMatrix &m) {
    const Spectrum s = hermitian_eig(m);
    const auto n = m.rows();
    CMatrix root = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < s.size(); ++i) {
        root += std::sqrt(std::max(s.values[i], 0.0)) * s.vectors[i].projector();
    }
    return root;
}

/// One violated density-matrix predicate.
struct DensityViolation {
    enum class Kind { NotSquare, NonFinite, NotHermitian, Trace, NotPsd };
    Kind kind;
    /// Size of the violation: Hermitian defect, |tr - 1|, or -lambda_min.
    double magnitude;
    /// Offending value: the trace for Trace, the minimum eigenvalue for NotPsd.
    double value;
};

inline const char *to_string(DensityViolation::Kind k) {
    switch (k) {
    case DensityViolation::Kind::NotSquare: return "not-square";
    case DensityViolation::Kind::NonFinite: return "non-finite";
    case DensityViolation::Kind::NotHermitian: return "not-hermitian";
    case DensityViolation::Kind::Trace: return "trace";
    case DensityViolation::Kind::NotPsd: return "not-psd";
    }
    return "unknown";
}

class DensityMatrix;

struct DensityValidation {
    std::vector<DensityViolation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] bool has(DensityViolation::Kind k) const {
        return std::any_of(violations.begin(), violations.end(),
                           [k](const DensityViolation &v) { return v.kind == k; });
    }
    [[nodiscard]] std::string describe() const {
        std::ostringstream os;
        for (const auto &v : violations) {
            os << to_string(v.kind) << " (magnitude " << v.magnitude;
            if (v.kind == DensityViolation::Kind::Trace) os << ", trace " << v.value;
            if (v.kind == DensityViolation::Kind::NotPsd) os << ", min eigenvalue " << v.value;
            os << "); ";
        }
        return os.str();
    }
};

/// Checks Hermiticity, unit trace and positivity without constructing a state.
inline DensityValidation check_density(const CMatrix &m) {
    using Kind = DensityViolation::Kind;
    DensityValidation report;
    if (m.rows() != m.cols() || m.rows() < 2) {
        report.violations.push_back({Kind::NotSquare, 0.0, static_cast<double>(m.rows())});
        return report;
    }
    if (!m.allFinite()) {
        report.violations.push_back({Kind::NonFinite, 0.0, 0.0});
        return report;
    }
    const double defect = detail::hermitian_defect(m);
    if (defect > kSpectralTolerance) {
        report.violations.push_back({Kind::NotHermitian, defect, defect});
    }
    const Complex tr = m.trace();
    const double trace_err = std::abs(tr - Complex(1.0, 0.0));
    if (trace_err > kNormTolerance) {
        report.violations.push_back({Kind::Trace, trace_err, tr.real()});
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(detail::hermitian_part(m), Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kSpectralTolerance) {
        report.violations.push_back({Kind::NotPsd, -min_eig, min_eig});
    }
    return report;
}

/// Hermitian, PSD, unit-trace matrix of dimension >= 2.
class DensityMatrix {
public:
    /// Throws InvalidStateError describing every violated predicate.
    static DensityMatrix from_matrix(const CMatrix &m) {
        const DensityValidation report = check_density(m);
        if (!report.ok()) {
            throw InvalidStateError("invalid density matrix: " + report.describe());
        }
        return DensityMatrix(detail::hermitian_part(m));
    }

    static DensityMatrix pure(const StateVector &psi) { return DensityMatrix(psi.projector()); }

    static DensityMatrix maximally_mixed(std::size_t d) {
        if (d < 2) throw DimensionError("maximally_mixed: dimension must be at least 2");
        const auto n = static_cast<Eigen::Index>(d);
        return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(d));
    }

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] const CMatrix &matrix() const { return m_; }

private:
    explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
    CMatrix m_;
};

/// Either a valid DensityMatrix or the list of violated predicates.
struct ValidatedDensity {
    std::optional<DensityMatrix> state;
    DensityValidation report;
};

inline ValidatedDensity validate_density(const CMatrix &m) {
    ValidatedDensity out;
    out.report = check_density(m);
    if (out.report.ok()) {
        out.state = DensityMatrix::from_matrix(m);
    }
    return out;
}

inline Spectrum hermitian_eig(const DensityMatrix &rho) { return hermitian_eig(rho.matrix()); }
inline CMatrix psd_sqrt(const DensityMatrix &rho) { return psd_sqrt(rho.matrix()); }

/// Born-rule probability <phi|rho|phi>.
inline double expectation(const DensityMatrix &rho, const StateVector &phi) {
    detail::require_same_dim(static_cast<std::ptrdiff_t>(rho.dim()),
                             static_cast<std::ptrdiff_t>(phi.dim()), "expectation");
    const CVector &v = phi.amplitudes();
    const double p = v.dot(rho.matrix() * v).real();
    if (p < -kSpectralTolerance || p > 1.0 + kSpectralTolerance || !std::isfinite(p)) {
        std::ostringstream os;
        os << "expectation: value " << p << " outside [0, 1]";
        throw InvalidStateError(os.str());
    }
    return std::clamp(p, 0.0, 1.0);
}

} // namespace sgqst
