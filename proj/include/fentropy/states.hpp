#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "format.hpp"
#include "linalg.hpp"
#include "majorization.hpp"
#include "rng.hpp"

namespace fentropy::states {

using linalg::ComplexMatrix;
using linalg::EigenDecomposition;
using linalg::HermitianMatrix;

class DensityMatrix;
DensityMatrix validate_density(const HermitianMatrix& m);
DensityMatrix from_probabilities(const majorization::ProbabilityVector& p);

// A validated quantum state: Hermitian, positive semidefinite, unit
// trace, dim >= 2. The descending clamped spectrum is cached at
// construction; every entropy below reads it instead of re-decomposing.
class DensityMatrix {
 public:
    // Trace may deviate from 1 by up to this much before rejection;
    // deviations above kCleanTol are repaired by rescaling.
    static constexpr double kRejectTol = 1e-8;
    static constexpr double kCleanTol = 1e-10;

    int dim() const { return mat_.dim(); }
    const HermitianMatrix& matrix() const { return mat_; }

    // Eigenvalues sorted descending, clamped to [0, 1]-ish: tiny
    // negatives are zeroed, sum is within kCleanTol of 1.
    const std::vector<double>& spectrum() const { return spectrum_; }

    // Spectrum renormalized to an exact simplex point.
    majorization::ProbabilityVector spectral_probabilities() const {
        std::vector<double> p = spectrum_;
        double sum = 0.0;
        for (double x : p) sum += x;
        for (double& x : p) x /= sum;
        return majorization::ProbabilityVector(std::move(p));
    }

 private:
    DensityMatrix(HermitianMatrix m, std::vector<double> spec)
        : mat_(std::move(m)), spectrum_(std::move(spec)) {}

    HermitianMatrix mat_;
    std::vector<double> spectrum_;

    friend DensityMatrix validate_density(const HermitianMatrix&);
    friend DensityMatrix from_probabilities(const majorization::ProbabilityVector&);
};

// Checks the density-matrix invariants, repairing what is attributable
// to rounding: trace off by (kCleanTol, kRejectTol] is rescaled away,
// eigenvalues in [-kRejectTol, 0) are clamped to zero (with the matrix
// rebuilt from the clamped spectrum when the dirt exceeds kCleanTol).
inline DensityMatrix validate_density(const HermitianMatrix& m) {
    if (m.dim() < 2)
        throw DimensionError("density matrix needs dim >= 2, got " +
                             std::to_string(m.dim()));
    HermitianMatrix work = m;
    const double tr = work.trace();
    if (std::abs(tr - 1.0) > DensityMatrix::kRejectTol)
        throw ValidationError("trace is " + format_real(tr) +
                              ", further than 1e-8 from 1");
    if (std::abs(tr - 1.0) > DensityMatrix::kCleanTol)
        work = linalg::scale(1.0 / tr, work);

    EigenDecomposition eig = linalg::eigh(work);
    const double lambda_min = eig.values.back();
    if (lambda_min < -DensityMatrix::kRejectTol)
        throw ValidationError("matrix is not positive semidefinite: smallest "
                              "eigenvalue is " + format_real(lambda_min));
    std::vector<double> spec = eig.values;
    for (double& x : spec) x = std::max(0.0, x);
    if (lambda_min < -DensityMatrix::kCleanTol) {
        // Noticeable negative dust: rebuild the operator from the
        // clamped, renormalized spectrum so the invariants hold exactly.
        double sum = 0.0;
        for (double x : spec) sum += x;
        for (double& x : spec) x /= sum;
        work = linalg::outer_sum(spec, eig.vectors);
    }
    return DensityMatrix(std::move(work), std::move(spec));
}

// Diagonal embedding of a classical distribution.
inline DensityMatrix from_probabilities(const majorization::ProbabilityVector& p) {
    if (p.size() < 2)
        throw DimensionError("density matrix needs dim >= 2, got " +
                             std::to_string(p.size()));
    return DensityMatrix(HermitianMatrix::diagonal(p.entries()),
                         majorization::decreasing_rearrangement(p.entries()));
}

// G G' / tr(G G') for a Ginibre matrix G of i.i.d. standard complex
// Gaussians: Hilbert-Schmidt-uniform random state, full rank a.s.
inline DensityMatrix random_density(int d, Rng& rng) {
    if (d < 2)
        throw DimensionError("density matrix needs dim >= 2, got " +
                             std::to_string(d));
    ComplexMatrix g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = Complex(re, im);
        }
    std::vector<Complex> gg(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            Complex z = 0.0;
            for (int k = 0; k < d; ++k) z += g(r, k) * std::conj(g(c, k));
            gg[static_cast<std::size_t>(r) * d + c] = z;
        }
    HermitianMatrix h = HermitianMatrix::hermitized(d, gg);
    h = linalg::scale(1.0 / h.trace(), h);
    return validate_density(h);
}

inline DensityMatrix random_density(int d, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(d, rng);
}

// T(rho, sigma) = (1/2) tr |rho - sigma|, in [0, 1]. Exactly symmetric
// in its arguments (see trace_abs_half).
inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim())
        throw DimensionError("trace_distance: dimensions disagree (" +
                             std::to_string(rho.dim()) + " vs " +
                             std::to_string(sigma.dim()) + ")");
    const double t = linalg::trace_abs_half(
        linalg::subtract(rho.matrix(), sigma.matrix()));
    return std::min(1.0, t);
}

// Orthogonal projector: Hermitian with P^2 = P within 1e-9 per entry.
class Projector {
 public:
    static constexpr double kIdempotencyTol = 1e-9;

    explicit Projector(HermitianMatrix m) : mat_(std::move(m)) {
        const ComplexMatrix p = linalg::to_complex(mat_);
        const ComplexMatrix p2 = linalg::matmul(p, p);
        for (int i = 0; i < mat_.dim(); ++i)
            for (int j = 0; j < mat_.dim(); ++j)
                if (std::abs(p2(i, j) - p(i, j)) > kIdempotencyTol)
                    throw ValidationError(
                        "matrix is not idempotent: (P^2 - P)(" +
                        std::to_string(i) + "," + std::to_string(j) +
                        ") has magnitude " +
                        format_real(std::abs(p2(i, j) - p(i, j))));
    }

    int dim() const { return mat_.dim(); }
    int rank() const { return static_cast<int>(std::lround(mat_.trace())); }
    const HermitianMatrix& matrix() const { return mat_; }

 private:
    HermitianMatrix mat_;
};

// The maximizer of tr(P (rho - sigma)) over orthogonal projectors: the
// projector onto the span of eigenvectors of rho - sigma with positive
// eigenvalues. Returns it with its achieved value, which equals the
// trace distance up to eigensolver noise.
inline std::pair<Projector, double> optimal_projector(const DensityMatrix& rho,
                                                      const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim())
        throw DimensionError("optimal_projector: dimensions disagree (" +
                             std::to_string(rho.dim()) + " vs " +
                             std::to_string(sigma.dim()) + ")");
    const HermitianMatrix diff = linalg::subtract(rho.matrix(), sigma.matrix());
    const EigenDecomposition eig = linalg::eigh(diff);
    std::vector<double> w(eig.values.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = eig.values[i] > 0.0 ? 1.0 : 0.0;
    HermitianMatrix p = linalg::outer_sum(w, eig.vectors);
    const double value = linalg::trace_product(p, diff);
    return {Projector(std::move(p)), value};
}

namespace detail {

// Twice-iterated modified Gram-Schmidt on the columns; two passes keep
// orthogonality at working precision.
inline void orthonormalize_columns(ComplexMatrix& z) {
    for (int j = 0; j < z.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < j; ++i) {
                Complex dot = 0.0;
                for (int r = 0; r < z.rows(); ++r)
                    dot += std::conj(z(r, i)) * z(r, j);
                for (int r = 0; r < z.rows(); ++r) z(r, j) -= dot * z(r, i);
            }
        double norm2 = 0.0;
        for (int r = 0; r < z.rows(); ++r) norm2 += std::norm(z(r, j));
        if (norm2 <= 1e-24)
            throw NumericalError("orthonormalization hit a degenerate column");
        const double inv = 1.0 / std::sqrt(norm2);
        for (int r = 0; r < z.rows(); ++r) z(r, j) *= inv;
    }
}

inline ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = Complex(re, im);
        }
    return g;
}

}  // namespace detail

// Haar-ish random unitary: orthonormalized Ginibre matrix. Distribution
// details are irrelevant here; tests only need a generic basis change.
inline ComplexMatrix random_unitary(int d, Rng& rng) {
    if (d < 1) throw DimensionError("random_unitary needs d >= 1");
    ComplexMatrix z = detail::ginibre(d, d, rng);
    detail::orthonormalize_columns(z);
    return z;
}

// Rank-one state psi psi' for a uniformly random unit vector psi.
inline DensityMatrix random_pure(int d, Rng& rng) {
    if (d < 2)
        throw DimensionError("density matrix needs dim >= 2, got " +
                             std::to_string(d));
    ComplexMatrix psi = detail::ginibre(d, 1, rng);
    detail::orthonormalize_columns(psi);
    return validate_density(linalg::outer_sum({1.0}, psi));
}

// Rank-r projector onto a random r-dimensional subspace.
inline Projector random_projector(int d, int rank, Rng& rng) {
    if (d < 1 || rank < 0 || rank > d)
        throw ParameterError("random_projector needs 0 <= rank <= d");
    if (rank == 0) return Projector(HermitianMatrix::zero(d));
    ComplexMatrix q = detail::ginibre(d, rank, rng);
    detail::orthonormalize_columns(q);
    return Projector(linalg::outer_sum(std::vector<double>(rank, 1.0), q));
}

}  // namespace fentropy::states
