#include "mibf/linalg.hpp"

#include "mibf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mibf::linalg {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string(op) + ": shape mismatch");
    }
}

void require_square(const CMatrix& a, const char* op) {
    if (!a.is_square()) {
        throw DimensionMismatch(std::string(op) + ": matrix must be square");
    }
}

} // namespace

CVector& CVector::operator+=(const CVector& rhs) {
    if (size() != rhs.size()) throw DimensionMismatch("vector +: size mismatch");
    for (std::size_t i = 0; i < size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

CVector& CVector::operator-=(const CVector& rhs) {
    if (size() != rhs.size()) throw DimensionMismatch("vector -: size mismatch");
    for (std::size_t i = 0; i < size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

CVector& CVector::operator*=(Complex s) {
    for (auto& x : data_) x *= s;
    return *this;
}

CVector operator+(CVector lhs, const CVector& rhs) { return lhs += rhs; }
CVector operator-(CVector lhs, const CVector& rhs) { return lhs -= rhs; }
CVector operator*(Complex s, CVector v) { return v *= s; }

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionMismatch("CMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
    CMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> diag) {
    CMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
    return t;
}

CMatrix CMatrix::transpose() const {
    CMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& rhs) {
    require_same_shape(*this, rhs, "matrix +");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& rhs) {
    require_same_shape(*this, rhs, "matrix -");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
    for (auto& x : data_) x *= s;
    return *this;
}

CMatrix operator+(CMatrix lhs, const CMatrix& rhs) { return lhs += rhs; }
CMatrix operator-(CMatrix lhs, const CMatrix& rhs) { return lhs -= rhs; }
CMatrix operator*(Complex s, CMatrix m) { return m *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix *: inner dimension mismatch");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

CVector operator*(const CMatrix& a, const CVector& x) {
    if (a.cols() != x.size()) throw DimensionMismatch("matrix-vector *: size mismatch");
    CVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex acc{};
        for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
        out[i] = acc;
    }
    return out;
}

double norm2(const CVector& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

double frobenius_norm(const CMatrix& m) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& x : m.row(r)) s += std::norm(x);
    return std::sqrt(s);
}

Complex dot(const CVector& x, const CVector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("dot: size mismatch");
    Complex acc{};
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

Complex quadratic_form(const CMatrix& m, const CVector& x) { return dot(x, m * x); }

bool all_finite(const CVector& v) {
    return std::all_of(v.begin(), v.end(), [](Complex z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

bool all_finite(const CMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& z : m.row(r))
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

CVector canonical_phase(CVector v) {
    if (v.empty()) return v;
    double max_mag = 0.0;
    for (const auto& x : v) max_mag = std::max(max_mag, std::abs(x));
    if (max_mag == 0.0) return v;
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= max_mag * (1.0 - 1e-12)) {
            pivot = i;
            break;
        }
    }
    const Complex phase = std::conj(v[pivot]) / std::abs(v[pivot]);
    v *= phase;
    v[pivot] = std::abs(v[pivot]);
    return v;
}

CVector normalized(CVector v) {
    const double n = norm2(v);
    if (n == 0.0) return v;
    v *= 1.0 / n;
    return v;
}

LuDecomposition::LuDecomposition(const CMatrix& a) : lu_(a), perm_(a.rows()) {
    require_square(a, "LU");
    const std::size_t n = a.rows();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    // Rows are equilibrated by powers of two (exact) before pivoting, so a
    // diagonally rescaled matrix such as diag(s) * A is judged like A itself.
    row_scale_.assign(n, 1.0);
    double max_row_norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (const auto& x : a.row(r)) s += std::norm(x);
        s = std::sqrt(s);
        if (s == 0.0) throw SingularMatrix("LU: zero row " + std::to_string(r));
        int exponent = 0;
        std::frexp(s, &exponent);
        row_scale_[r] = std::ldexp(1.0, -exponent);
        for (std::size_t c = 0; c < n; ++c) lu_(r, c) *= row_scale_[r];
        max_row_norm = std::max(max_row_norm, s * row_scale_[r]);
    }
    const double threshold = kPivotTolerance * max_row_norm;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double mag = std::abs(lu_(i, k));
            if (mag > best) {
                best = mag;
                p = i;
            }
        }
        if (!(best > threshold)) {
            throw SingularMatrix("LU: pivot " + std::to_string(best) + " below threshold at column " +
                                 std::to_string(k));
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
        }
        const Complex pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex factor = lu_(i, k) / pivot;
            lu_(i, k) = factor;
            if (factor == Complex{}) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
        }
    }
}

CVector LuDecomposition::solve(const CVector& b) const {
    const std::size_t n = size();
    if (b.size() != n) throw DimensionMismatch("LU solve: size mismatch");
    CVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = b[perm_[i]] * row_scale_[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
        x[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
        Complex acc = x[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[j];
        x[i] = acc / lu_(i, i);
    }
    return x;
}

CMatrix LuDecomposition::solve(const CMatrix& b) const {
    if (b.rows() != size()) throw DimensionMismatch("LU solve: row mismatch");
    CMatrix out(b.rows(), b.cols());
    CVector col(b.rows());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t r = 0; r < b.rows(); ++r) col[r] = b(r, c);
        const CVector x = solve(col);
        for (std::size_t r = 0; r < b.rows(); ++r) out(r, c) = x[r];
    }
    return out;
}

CMatrix LuDecomposition::inverse() const { return solve(CMatrix::identity(size())); }

CVector solve(const CMatrix& a, const CVector& b) { return LuDecomposition(a).solve(b); }

CMatrix invert(const CMatrix& a) { return LuDecomposition(a).inverse(); }

namespace {

constexpr double kHermitianTolerance = 1e-9;
constexpr int kMaxJacobiSweeps = 100;

double off_diagonal_norm(const CMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (i != j) s += std::norm(h(i, j));
    return std::sqrt(s);
}

// Annihilates h(p, q) with the unitary U = diag(1, e^{-ia}) * [[c, s], [-s, c]]
// acting on the (p, q) plane, where h(p, q) = |h| e^{ia}. The phase factor
// makes the pivot real so the classic real Jacobi angle applies.
void jacobi_rotate(CMatrix& h, CMatrix& v, std::size_t p, std::size_t q) {
    const Complex hpq = h(p, q);
    const double mag = std::abs(hpq);
    if (mag == 0.0) return;
    const Complex phase = std::conj(hpq) / mag;
    const double app = h(p, p).real();
    const double aqq = h(q, q).real();

    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const Complex upp = c;
    const Complex upq = s;
    const Complex uqp = -s * phase;
    const Complex uqq = c * phase;

    const std::size_t n = h.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex hkp = h(k, p);
        const Complex hkq = h(k, q);
        h(k, p) = hkp * upp + hkq * uqp;
        h(k, q) = hkp * upq + hkq * uqq;
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * upp + vkq * uqp;
        v(k, q) = vkp * upq + vkq * uqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex hpk = h(p, k);
        const Complex hqk = h(q, k);
        h(p, k) = std::conj(upp) * hpk + std::conj(uqp) * hqk;
        h(q, k) = std::conj(upq) * hpk + std::conj(uqq) * hqk;
    }
    h(p, q) = 0.0;
    h(q, p) = 0.0;
    h(p, p) = h(p, p).real();
    h(q, q) = h(q, q).real();
}

} // namespace

std::vector<EigenPair> hermitian_eigen(const CMatrix& input) {
    require_square(input, "hermitian_eigen");
    const double scale = frobenius_norm(input);
    const CMatrix skew = input - input.adjoint();
    if (frobenius_norm(skew) > kHermitianTolerance * scale) {
        throw NotHermitian("hermitian_eigen: ||H - H^H||_F exceeds tolerance");
    }

    const std::size_t n = input.rows();
    CMatrix h = 0.5 * (input + input.adjoint());
    CMatrix v = CMatrix::identity(n);

    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        if (off_diagonal_norm(h) <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(h, v, p, q);
    }

    std::vector<EigenPair> pairs(n);
    for (std::size_t i = 0; i < n; ++i) {
        pairs[i].value = h(i, i).real();
        CVector col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = v(r, i);
        pairs[i].vector = canonical_phase(normalized(std::move(col)));
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const EigenPair& a, const EigenPair& b) { return a.value > b.value; });
    return pairs;
}

EigenPair hermitian_max_eigpair(const CMatrix& h) {
    if (h.rows() == 0) throw DimensionMismatch("hermitian_max_eigpair: empty matrix");
    auto pairs = hermitian_eigen(h);
    // Near-ties resolve to the lowest rotated-basis index, which stable_sort kept in order.
    return std::move(pairs.front());
}

CVector generalized_max_eigvec(const CMatrix& d, const CMatrix& m) {
    require_square(m, "generalized_max_eigvec");
    if (d.rows() != m.rows() || !d.is_square()) {
        throw DimensionMismatch("generalized_max_eigvec: D and M must be the same size");
    }
    const CMatrix m_inv = invert(m);
    const CMatrix reduced = m_inv.adjoint() * d * m_inv;
    const EigenPair top = hermitian_max_eigpair(reduced);
    return canonical_phase(normalized(m_inv * top.vector));
}

} // namespace mibf::linalg
