#pragma once

#include <compare>

#include "weylcap/linalg.hpp"

namespace weylcap {

// Label (n, m) of a Weyl operator: phase exponent n, cyclic shift m.
struct WeylIndex {
    int n = 0;
    int m = 0;
    friend auto operator<=>(const WeylIndex&, const WeylIndex&) = default;
};

struct WeylOrder {
    int order = 1;     // smallest q > 0 with W^q proportional to identity
    Complex phase{1.0, 0.0};  // W^order = phase * I
};

struct WeylSpectrum {
    std::vector<Complex> eigenvalues;  // length d, with multiplicity
    ComplexMatrix eigenvectors;        // column i pairs with eigenvalues[i]
    int order = 1;
    Complex phase{1.0, 0.0};
    bool degenerate = false;  // order < d, so the eigenbasis is not unique
};

// exp(2*pi*i * exponent / d). Exponents may be half-integral, so the phase
// is always taken through the angle, never by powering a primitive root.
Complex root_of_unity(int d, double exponent);

void validate_index(WeylIndex idx, int d);

ComplexMatrix weyl_operator(WeylIndex idx, int d);

// Closed form of W_nm^q: entry (k, (k+q*m) mod d) carries phase
// omega^{n*(q*k + m*q*(q-1)/2)}; the exponent is always an integer.
ComplexMatrix weyl_power(WeylIndex idx, int d, long long q);

WeylOrder weyl_order(WeylIndex idx, int d);

// Full eigenvalue multiset: d/order distinct values, each with multiplicity
// gcd(n, m, d).
std::vector<Complex> weyl_eigenvalues(WeylIndex idx, int d);

// Canonical orthonormal eigenbasis built from the shift cycles of m:
// cycles ordered by smallest element, eigenvalues within a cycle ordered by
// their s-exponent ascending.
WeylSpectrum weyl_eigenbasis(WeylIndex idx, int d);

// W rho W^dagger in O(d^2), using the generalized-permutation structure.
ComplexMatrix weyl_conjugate(WeylIndex idx, const ComplexMatrix& rho);

}  // namespace weylcap
