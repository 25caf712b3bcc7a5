#pragma once

// Dense complex linear algebra for the small systems that show up in the
// coupled-coil model: at most (K+3)x(K+3) with K a handful of receivers.
// Everything is value-semantic; no operation mutates its arguments.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mibf::linalg {

using Complex = std::complex<double>;

class CVector {
public:
    CVector() = default;
    explicit CVector(std::size_t n, Complex fill = {}) : data_(n, fill) {}
    CVector(std::initializer_list<Complex> values) : data_(values) {}
    explicit CVector(std::vector<Complex> values) : data_(std::move(values)) {}

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    Complex& operator[](std::size_t i) { return data_[i]; }
    const Complex& operator[](std::size_t i) const { return data_[i]; }

    std::span<Complex> values() noexcept { return data_; }
    std::span<const Complex> values() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    CVector& operator+=(const CVector& rhs);
    CVector& operator-=(const CVector& rhs);
    CVector& operator*=(Complex s);

    bool operator==(const CVector&) const = default;

private:
    std::vector<Complex> data_;
};

CVector operator+(CVector lhs, const CVector& rhs);
CVector operator-(CVector lhs, const CVector& rhs);
CVector operator*(Complex s, CVector v);

/// Row-major dense complex matrix. Zero-sized dimensions are allowed so a
/// scene without receivers can still be expressed as 0xK / 3x0 blocks.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols, Complex fill = {})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const Complex> diag);
    static CMatrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    CMatrix adjoint() const;
    CMatrix transpose() const;

    CMatrix& operator+=(const CMatrix& rhs);
    CMatrix& operator-=(const CMatrix& rhs);
    CMatrix& operator*=(Complex s);

    bool operator==(const CMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

CMatrix operator+(CMatrix lhs, const CMatrix& rhs);
CMatrix operator-(CMatrix lhs, const CMatrix& rhs);
CMatrix operator*(Complex s, CMatrix m);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, const CVector& x);

double norm2(const CVector& v);
double frobenius_norm(const CMatrix& m);
/// Hermitian inner product x^H y.
Complex dot(const CVector& x, const CVector& y);
/// x^H M x.
Complex quadratic_form(const CMatrix& m, const CVector& x);
bool all_finite(const CVector& v);
bool all_finite(const CMatrix& m);

/// Rotates `v` by a unit phase so that its first largest-magnitude entry is
/// real and nonnegative. Entries within 1e-12 (relative) of the maximum count
/// as ties and the lowest index wins.
CVector canonical_phase(CVector v);
CVector normalized(CVector v);

/// Partial-pivoted LU factorization, reusable across right-hand sides.
class LuDecomposition {
public:
    /// Relative pivot threshold, scaled by the largest row 2-norm after each
    /// row is equilibrated by a power of two.
    static constexpr double kPivotTolerance = 1e-13;

    explicit LuDecomposition(const CMatrix& a);

    std::size_t size() const noexcept { return lu_.rows(); }
    CVector solve(const CVector& b) const;
    CMatrix solve(const CMatrix& b) const;
    CMatrix inverse() const;

private:
    CMatrix lu_;
    std::vector<std::size_t> perm_;
    std::vector<double> row_scale_;
};

CVector solve(const CMatrix& a, const CVector& b);
CMatrix invert(const CMatrix& a);

struct EigenPair {
    double value = 0.0;
    CVector vector;
};

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Pairs come back sorted by descending eigenvalue; ties keep the order of
/// the rotated basis so results are reproducible.
std::vector<EigenPair> hermitian_eigen(const CMatrix& h);

/// Largest eigenpair of a Hermitian matrix. The input is checked against
/// ||H - H^H||_F <= 1e-9 ||H||_F and symmetrized before decomposition.
EigenPair hermitian_max_eigpair(const CMatrix& h);

/// Maximizer of u^H D u / u^H (M^H M) u, found through the substitution
/// x = M u: the top eigenvector of M^-H D M^-1 is mapped back by u = M^-1 x.
/// Returned unit-norm with the canonical phase applied.
CVector generalized_max_eigvec(const CMatrix& d, const CMatrix& m);

} // namespace mibf::linalg
