#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "convex.hpp"
#include "errors.hpp"

namespace fentropy {

using Complex = std::complex<double>;

namespace linalg {

// Dense row-major complex matrix, used for eigenvector frames, unitaries
// and isometries. No structural invariants.
class ComplexMatrix {
 public:
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 1 || cols < 1)
            throw DimensionError("matrix dimensions must be positive");
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Complex& operator()(int r, int c) {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }
    Complex operator()(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

 private:
    int rows_, cols_;
    std::vector<Complex> data_;
};

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            out(c, r) = std::conj(m(r, c));
    return out;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions disagree (" +
                             std::to_string(a.cols()) + " vs " +
                             std::to_string(b.rows()) + ")");
    ComplexMatrix out(a.rows(), b.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int k = 0; k < a.cols(); ++k) {
            const Complex ark = a(r, k);
            if (ark == 0.0) continue;
            for (int c = 0; c < b.cols(); ++c) out(r, c) += ark * b(k, c);
        }
    return out;
}

// Hermitian d x d matrix. The raw constructor validates conjugate
// symmetry entrywise; `hermitized` instead repairs it by averaging the
// two triangles, for matrices assembled in floating point.
class HermitianMatrix {
 public:
    static constexpr double kSymmetryTol = 1e-12;

    HermitianMatrix(int dim, std::vector<Complex> entries)
        : dim_(dim), data_(std::move(entries)) {
        check_shape();
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j) {
                const Complex delta = at(i, j) - std::conj(at(j, i));
                if (std::abs(delta) > kSymmetryTol)
                    throw ValidationError(
                        "matrix is not Hermitian: entry (" + std::to_string(i) +
                        "," + std::to_string(j) + ") differs from the conjugate "
                        "of its mirror by " + std::to_string(std::abs(delta)));
            }
    }

    // Adopts (M + M')/2: exactly Hermitian output, no validation error.
    static HermitianMatrix hermitized(int dim, const std::vector<Complex>& entries) {
        if (dim >= 1 && entries.size() != static_cast<std::size_t>(dim) * dim)
            throw DimensionError("entry count does not match dim*dim");
        HermitianMatrix out = zero(dim);
        for (int i = 0; i < dim; ++i) {
            out.data_[idx(dim, i, i)] = entries[idx(dim, i, i)].real();
            for (int j = i + 1; j < dim; ++j) {
                const Complex v = 0.5 * (entries[idx(dim, i, j)] +
                                         std::conj(entries[idx(dim, j, i)]));
                out.data_[idx(dim, i, j)] = v;
                out.data_[idx(dim, j, i)] = std::conj(v);
            }
        }
        return out;
    }

    static HermitianMatrix zero(int dim) {
        return unchecked(dim, std::vector<Complex>(
            static_cast<std::size_t>(dim) * dim));
    }

    static HermitianMatrix identity(int dim) {
        HermitianMatrix m = zero(dim);
        for (int i = 0; i < dim; ++i) m.data_[idx(dim, i, i)] = 1.0;
        return m;
    }

    static HermitianMatrix diagonal(const std::vector<double>& d) {
        HermitianMatrix m = zero(static_cast<int>(d.size()));
        for (int i = 0; i < m.dim_; ++i) m.data_[idx(m.dim_, i, i)] = d[i];
        return m;
    }

    int dim() const { return dim_; }
    Complex operator()(int i, int j) const { return at(i, j); }
    const std::vector<Complex>& entries() const { return data_; }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < dim_; ++i) t += at(i, i).real();
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Complex& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

 private:
    static std::size_t idx(int dim, int i, int j) {
        return static_cast<std::size_t>(i) * dim + j;
    }
    Complex at(int i, int j) const { return data_[idx(dim_, i, j)]; }
    void check_shape() const {
        if (dim_ < 1) throw DimensionError("dim must be >= 1");
        if (data_.size() != static_cast<std::size_t>(dim_) * dim_)
            throw DimensionError("entry count does not match dim*dim");
    }
    static HermitianMatrix unchecked(int dim, std::vector<Complex> entries) {
        HermitianMatrix m;
        m.dim_ = dim;
        m.data_ = std::move(entries);
        m.check_shape();
        return m;
    }
    HermitianMatrix() : dim_(0) {}

    int dim_;
    std::vector<Complex> data_;

    friend HermitianMatrix combine_upper(const HermitianMatrix&,
                                         const HermitianMatrix&,
                                         double, double);
    friend HermitianMatrix outer_sum(const std::vector<double>&,
                                     const ComplexMatrix&);
};

// ca*A + cb*B computed on the upper triangle and mirrored, so the result
// is exactly Hermitian and negation-symmetric: combine(A,B,1,-1) is the
// exact entrywise negation of combine(B,A,1,-1).
inline HermitianMatrix combine_upper(const HermitianMatrix& a,
                                     const HermitianMatrix& b,
                                     double ca, double cb) {
    if (a.dim() != b.dim())
        throw DimensionError("matrix dimensions disagree (" +
                             std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()) + ")");
    const int n = a.dim();
    HermitianMatrix out = HermitianMatrix::zero(n);
    for (int i = 0; i < n; ++i) {
        out.data_[HermitianMatrix::idx(n, i, i)] =
            ca * a(i, i).real() + cb * b(i, i).real();
        for (int j = i + 1; j < n; ++j) {
            const Complex v = ca * a(i, j) + cb * b(i, j);
            out.data_[HermitianMatrix::idx(n, i, j)] = v;
            out.data_[HermitianMatrix::idx(n, j, i)] = std::conj(v);
        }
    }
    return out;
}

inline HermitianMatrix add(const HermitianMatrix& a, const HermitianMatrix& b) {
    return combine_upper(a, b, 1.0, 1.0);
}
inline HermitianMatrix subtract(const HermitianMatrix& a, const HermitianMatrix& b) {
    return combine_upper(a, b, 1.0, -1.0);
}
inline HermitianMatrix scale(double c, const HermitianMatrix& a) {
    return combine_upper(a, a, c, 0.0);
}

// Re tr(A B); equals tr(A B) exactly when both are Hermitian.
inline double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionError("matrix dimensions disagree");
    double t = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            t += (a(i, j) * b(j, i)).real();
    return t;
}

inline ComplexMatrix to_complex(const HermitianMatrix& h) {
    ComplexMatrix m(h.dim(), h.dim());
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j) m(i, j) = h(i, j);
    return m;
}

// U H U' for square U (a basis change when U is unitary).
inline HermitianMatrix conjugate_by(const ComplexMatrix& u, const HermitianMatrix& h) {
    const ComplexMatrix t = matmul(matmul(u, to_complex(h)), adjoint(u));
    std::vector<Complex> entries(static_cast<std::size_t>(h.dim()) * h.dim());
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j)
            entries[static_cast<std::size_t>(i) * h.dim() + j] = t(i, j);
    return HermitianMatrix::hermitized(h.dim(), entries);
}

// Sum_i w_i v_i v_i' from the columns of V. Exactly Hermitian.
inline HermitianMatrix outer_sum(const std::vector<double>& w,
                                 const ComplexMatrix& v) {
    const int n = v.rows();
    HermitianMatrix out = HermitianMatrix::zero(n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k)
            diag += w[k] * std::norm(v(i, static_cast<int>(k)));
        out.data_[HermitianMatrix::idx(n, i, i)] = diag;
        for (int j = i + 1; j < n; ++j) {
            Complex z = 0.0;
            for (std::size_t k = 0; k < w.size(); ++k)
                z += w[k] * (v(i, static_cast<int>(k)) *
                             std::conj(v(j, static_cast<int>(k))));
            out.data_[HermitianMatrix::idx(n, i, j)] = z;
            out.data_[HermitianMatrix::idx(n, j, i)] = std::conj(z);
        }
    }
    return out;
}

// Spectral data of a Hermitian matrix: eigenvalues sorted descending,
// eigenvector i in column i of `vectors`.
struct EigenDecomposition {
    std::vector<double> values;
    ComplexMatrix vectors;
};

// Cyclic Jacobi eigensolver for complex Hermitian matrices. Converges
// when the off-diagonal Frobenius mass drops below 1e-14 * ||H||_F;
// throws after 100 sweeps instead of returning a wrong answer.
//
// The iteration is negation-symmetric: eigh(-H) walks through the exact
// entrywise negation of every iterate of eigh(H), so |spectrum| sets
// match exactly. trace_abs_half relies on this for exact symmetry of
// the trace distance.
inline EigenDecomposition eigh(const HermitianMatrix& h) {
    const int n = h.dim();
    // Work on (H + H')/2: exactly Hermitian, so only rotations below.
    std::vector<Complex> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        a[static_cast<std::size_t>(i) * n + i] = h(i, i).real();
        for (int j = i + 1; j < n; ++j) {
            const Complex v = 0.5 * (h(i, j) + std::conj(h(j, i)));
            a[static_cast<std::size_t>(i) * n + j] = v;
            a[static_cast<std::size_t>(j) * n + i] = std::conj(v);
        }
    }
    auto at = [&](int i, int j) -> Complex& {
        return a[static_cast<std::size_t>(i) * n + j];
    };

    ComplexMatrix vecs = ComplexMatrix::identity(n);
    double fro2 = 0.0;
    for (const Complex& z : a) fro2 += std::norm(z);
    const double thresh2 = 1e-28 * fro2;  // (1e-14 * ||H||_F)^2

    bool converged = false;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off2 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off2 += 2.0 * std::norm(at(i, j));
        if (off2 <= thresh2) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const Complex b = at(p, q);
                const double ab = std::abs(b);
                if (ab == 0.0) continue;
                const double app = at(p, p).real();
                const double aqq = at(q, q).real();
                // Unitary U: columns p,q get [[c, s], [-conj(s), c]]
                // with s = sigma * b/|b|; t = sigma/c zeroes A'(p,q).
                const Complex u = b / ab;
                const double tau = (aqq - app) / (2.0 * ab);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::hypot(tau, 1.0));
                const double c = 1.0 / std::hypot(1.0, t);
                const double sigma = t * c;
                const Complex s = sigma * u;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const Complex akp = at(k, p);
                    const Complex akq = at(k, q);
                    const Complex nkp = c * akp - std::conj(s) * akq;
                    const Complex nkq = s * akp + c * akq;
                    at(k, p) = nkp;
                    at(p, k) = std::conj(nkp);
                    at(k, q) = nkq;
                    at(q, k) = std::conj(nkq);
                }
                at(p, p) = app * (c * c) + aqq * (sigma * sigma) -
                           2.0 * (c * sigma) * ab;
                at(q, q) = app * (sigma * sigma) + aqq * (c * c) +
                           2.0 * (c * sigma) * ab;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    const Complex vkp = vecs(k, p);
                    const Complex vkq = vecs(k, q);
                    vecs(k, p) = c * vkp - std::conj(s) * vkq;
                    vecs(k, q) = s * vkp + c * vkq;
                }
            }
    }
    if (!converged)
        throw NumericalError("eigh did not converge within 100 sweeps "
                             "(dim " + std::to_string(n) + ")");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return at(i, i).real() > at(j, j).real();
    });
    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (int c = 0; c < n; ++c) {
        out.values[c] = at(order[c], order[c]).real();
        for (int r = 0; r < n; ++r) out.vectors(r, c) = vecs(r, order[c]);
    }
    return out;
}

// Sum f(lambda_i) P_i over the spectral decomposition of H. Eigenvalues
// within the clamp tolerance of a domain endpoint are pulled inside by
// f itself; anything further out propagates a domain error.
inline HermitianMatrix apply_function(const HermitianMatrix& h,
                                      const entropy::ConvexFunction& f) {
    const EigenDecomposition eig = eigh(h);
    std::vector<double> fv(eig.values.size());
    for (std::size_t i = 0; i < fv.size(); ++i) fv[i] = f(eig.values[i]);
    return outer_sum(fv, eig.vectors);
}

// (1/2) Sum |lambda_i(H)|. The absolute eigenvalues are summed in sorted
// order, so the value depends only on the |spectrum| multiset; combined
// with the negation symmetry of eigh this makes trace_abs_half(A - B)
// exactly equal to trace_abs_half(B - A).
//
// For traceless H this equals Sum max(0, lambda_i); both forms are
// computed and checked against the identity pos - half = tr(H)/2,
// which reduces to direct agreement within 1e-10 for traceless input.
inline double trace_abs_half(const HermitianMatrix& h) {
    const EigenDecomposition eig = eigh(h);
    std::vector<double> mags(eig.values.size());
    double sum = 0.0;
    double pos = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) {
        mags[i] = std::abs(eig.values[i]);
        sum += eig.values[i];
        pos += std::max(0.0, eig.values[i]);
    }
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double half = 0.0;
    for (double m : mags) half += m;
    half *= 0.5;
    if (std::abs(pos - half - 0.5 * sum) > 1e-10)
        throw NumericalError(
            "trace_abs_half: half-sum " + std::to_string(half) +
            " and positive-part sum " + std::to_string(pos) +
            " are inconsistent");
    return half;
}

}  // namespace linalg
}  // namespace fentropy
