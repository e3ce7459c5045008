#pragma once

#include <complex>
#include <span>
#include <vector>

namespace weylcap {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Dense d x d complex matrix, row-major. Dimensions stay small (channel
// dimension d, typically 2..12), so everything is O(d^3) at worst and no
// external linear-algebra backend is used.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }

    Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix& operator*=(Complex s);

    CVector apply(const CVector& v) const;

    Complex trace() const;
    double frobenius_norm() const;
    double off_diagonal_norm() const;
    double max_abs() const;
    double max_abs_diff(const ComplexMatrix& rhs) const;
    bool is_hermitian(double tol) const;
    bool is_unitary(double tol) const;

    // M += w * u u^dagger. Fills both triangles so the result stays exactly
    // Hermitian in floating point.
    void add_scaled_outer(double w, const CVector& u);

    // B^dagger * M * B, with B's columns an orthonormal basis.
    ComplexMatrix conjugate_by(const ComplexMatrix& basis) const;

    std::span<const Complex> data() const { return a_; }

private:
    int dim_ = 0;
    CVector a_;
};

Complex inner(const CVector& a, const CVector& b);  // <a|b> = sum conj(a_i) b_i
double norm(const CVector& v);
void normalize(CVector& v);

struct HermitianEigensystem {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column i pairs with eigenvalues[i]
};

// Cyclic Jacobi rotations on a Hermitian matrix, swept until the
// off-diagonal Frobenius norm drops below 1e-12. Converges unconditionally
// for Hermitian input; throws std::invalid_argument otherwise.
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& a);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

// Shannon entropy in bits with the 0 log 0 = 0 convention.
double shannon_entropy_bits(std::span<const double> probs);

bool is_prime(int d);

}  // namespace weylcap
