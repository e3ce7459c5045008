#include "weylcap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace weylcap {

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) {
            const Complex aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < dim_; ++j) m(i, j) += aik * rhs(k, j);
        }
    return m;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    ComplexMatrix m(dim_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - rhs.a_[i];
    return m;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& x : a_) x *= s;
    return *this;
}

CVector ComplexMatrix::apply(const CVector& v) const {
    CVector r(dim_);
    for (int i = 0; i < dim_; ++i) {
        Complex acc = 0.0;
        for (int j = 0; j < dim_; ++j) acc += (*this)(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
}

double ComplexMatrix::off_diagonal_norm() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            if (i != j) s += std::norm((*this)(i, j));
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& rhs) const {
    double m = 0.0;
    for (size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - rhs.a_[i]));
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
    const ComplexMatrix p = adjoint() * (*this);
    return p.max_abs_diff(identity(dim_)) <= tol;
}

void ComplexMatrix::add_scaled_outer(double w, const CVector& u) {
    for (int i = 0; i < dim_; ++i) {
        (*this)(i, i) += w * std::norm(u[i]);
        for (int j = i + 1; j < dim_; ++j) {
            const Complex x = w * u[i] * std::conj(u[j]);
            (*this)(i, j) += x;
            (*this)(j, i) += std::conj(x);
        }
    }
}

ComplexMatrix ComplexMatrix::conjugate_by(const ComplexMatrix& basis) const {
    return basis.adjoint() * (*this * basis);
}

Complex inner(const CVector& a, const CVector& b) {
    Complex s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm(const CVector& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

void normalize(CVector& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    for (auto& x : v) x /= n;
}

namespace {

// One cyclic sweep of two-sided Jacobi rotations; rotates a in place and
// accumulates the rotations into v when v is non-null.
void jacobi_sweep(ComplexMatrix& a, ComplexMatrix* v) {
    const int d = a.dim();
    for (int p = 0; p < d; ++p) {
        for (int q = p + 1; q < d; ++q) {
            const Complex apq = a(p, q);
            const double r = std::abs(apq);
            if (r == 0.0) continue;
            const Complex phase = apq / r;  // e^{i phi}
            const double app = a(p, p).real();
            const double aqq = a(q, q).real();
            // tan(2 theta) = 2|a_pq| / (a_pp - a_qq), smaller-angle root.
            double t;
            if (app == aqq) {
                t = 1.0;
            } else {
                const double tau = (app - aqq) / (2.0 * r);
                t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
            }
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;

            a(p, p) = app * c * c + 2.0 * r * c * s + aqq * s * s;
            a(q, q) = app * s * s - 2.0 * r * c * s + aqq * c * c;
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            for (int k = 0; k < d; ++k) {
                if (k == p || k == q) continue;
                const Complex akp = a(k, p);
                const Complex akq = a(k, q);
                a(k, p) = c * akp + s * std::conj(phase) * akq;
                a(k, q) = -s * phase * akp + c * akq;
                a(p, k) = std::conj(a(k, p));
                a(q, k) = std::conj(a(k, q));
            }
            if (v == nullptr) continue;
            for (int k = 0; k < d; ++k) {
                const Complex vkp = (*v)(k, p);
                const Complex vkq = (*v)(k, q);
                (*v)(k, p) = c * vkp + s * std::conj(phase) * vkq;
                (*v)(k, q) = -s * phase * vkp + c * vkq;
            }
        }
    }
}

void jacobi_diagonalize(ComplexMatrix& work, ComplexMatrix* v) {
    if (!work.is_hermitian(1e-12))
        throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian");
    constexpr double kOffTol = 1e-12;
    constexpr int kMaxSweeps = 100;
    int sweeps = 0;
    while (work.off_diagonal_norm() > kOffTol) {
        if (++sweeps > kMaxSweeps)
            throw std::runtime_error("hermitian_eigensystem: Jacobi iteration did not converge");
        jacobi_sweep(work, v);
    }
}

}  // namespace

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& a) {
    const int d = a.dim();
    ComplexMatrix work = a;
    ComplexMatrix v = ComplexMatrix::identity(d);
    jacobi_diagonalize(work, &v);

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return work(i, i).real() < work(j, j).real(); });

    HermitianEigensystem es;
    es.eigenvalues.resize(d);
    es.eigenvectors = ComplexMatrix(d);
    for (int j = 0; j < d; ++j) {
        es.eigenvalues[j] = work(order[j], order[j]).real();
        for (int i = 0; i < d; ++i) es.eigenvectors(i, j) = v(i, order[j]);
    }
    return es;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
    const int d = a.dim();
    ComplexMatrix work = a;
    jacobi_diagonalize(work, nullptr);
    std::vector<double> ev(d);
    for (int i = 0; i < d; ++i) ev[i] = work(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

double shannon_entropy_bits(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

bool is_prime(int d) {
    if (d < 2) return false;
    for (int k = 2; k * k <= d; ++k)
        if (d % k == 0) return false;
    return true;
}

}  // namespace weylcap
