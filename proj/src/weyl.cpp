#include "weylcap/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace weylcap {

Complex root_of_unity(int d, double exponent) {
    const double angle = 2.0 * std::numbers::pi * exponent / d;
    return {std::cos(angle), std::sin(angle)};
}

void validate_index(WeylIndex idx, int d) {
    if (d < 2) throw std::invalid_argument("dimension must be at least 2");
    if (idx.n < 0 || idx.n >= d || idx.m < 0 || idx.m >= d)
        throw std::out_of_range("Weyl index components must lie in [0, d-1]");
}

ComplexMatrix weyl_operator(WeylIndex idx, int d) {
    validate_index(idx, d);
    ComplexMatrix w(d);
    for (int k = 0; k < d; ++k)
        w(k, (k + idx.m) % d) = root_of_unity(d, static_cast<double>(k * idx.n % d));
    return w;
}

ComplexMatrix weyl_power(WeylIndex idx, int d, long long q) {
    validate_index(idx, d);
    if (q < 0) throw std::invalid_argument("power must be nonnegative");
    // q*(q-1) is even, so the division is exact; reduce mod d afterwards.
    const long long half = q * (q - 1) / 2 % d;
    ComplexMatrix w(d);
    for (int k = 0; k < d; ++k) {
        const long long e = (q % d * k + half * idx.m) % d * idx.n % d;
        w(k, static_cast<int>((k + q % d * idx.m) % d)) = root_of_unity(d, static_cast<double>(e));
    }
    return w;
}

WeylOrder weyl_order(WeylIndex idx, int d) {
    validate_index(idx, d);
    const int g = std::gcd(std::gcd(idx.n, idx.m), d);  // gcd(0, 0, d) = d
    WeylOrder r;
    r.order = d / g;
    // Phase from the power formula at q = order: the k-dependent part drops
    // out because order * n is a multiple of d.
    const long long l = r.order;
    const long long e = l * (l - 1) / 2 % d * idx.m % d * idx.n % d;
    r.phase = root_of_unity(d, static_cast<double>(e));
    return r;
}

std::vector<Complex> weyl_eigenvalues(WeylIndex idx, int d) {
    validate_index(idx, d);
    const int g = std::gcd(std::gcd(idx.n, idx.m), d);
    const int l = d / g;
    const double base = idx.m * idx.n * (d - 1) / 2.0;  // may be half-integral
    std::vector<Complex> ev;
    ev.reserve(d);
    for (int t = 0; t < l; ++t) {
        const Complex lam = root_of_unity(d, base + t * g);
        for (int rep = 0; rep < g; ++rep) ev.push_back(lam);
    }
    return ev;
}

namespace {

// s-exponent of an eigenvalue relative to the base phase mn(d-1)/2, reduced
// to {0..d-1}. Integral for genuine eigenvalues; rounding absorbs the
// floating-point angle.
int s_exponent(Complex lambda, WeylIndex idx, int d) {
    const double base = idx.m * idx.n * (d - 1) / 2.0;
    double s = d * std::arg(lambda) / (2.0 * std::numbers::pi) - base;
    s = std::fmod(s, d);
    if (s < -0.5) s += d;
    int si = static_cast<int>(std::lround(s)) % d;
    if (si < 0) si += d;
    return si;
}

}  // namespace

WeylSpectrum weyl_eigenbasis(WeylIndex idx, int d) {
    validate_index(idx, d);
    const int gm = std::gcd(idx.m, d);  // gcd(0, d) = d: m = 0 gives singleton cycles
    const int len = d / gm;
    const auto ord = weyl_order(idx, d);

    WeylSpectrum spec;
    spec.order = ord.order;
    spec.phase = ord.phase;
    spec.degenerate = ord.order < d;
    spec.eigenvalues.resize(d);
    spec.eigenvectors = ComplexMatrix(d);

    int col = 0;
    for (int a = 0; a < gm; ++a) {
        // Walking the cycle a -> a+m -> ... closes after len steps with
        // accumulated phase omega^{-n * sum(cycle)}; eigenvalues are the
        // len-th roots of omega^{E}.
        const long long cycle_sum = static_cast<long long>(len) * a +
                                    static_cast<long long>(idx.m) * len * (len - 1) / 2;
        const int e = static_cast<int>(static_cast<long long>(idx.n) * cycle_sum % d);

        struct Branch {
            Complex lambda;
            int s;
        };
        std::vector<Branch> branches(len);
        for (int t = 0; t < len; ++t) {
            const Complex lam = root_of_unity(d * len, static_cast<double>(e) + t * d);
            branches[t] = {lam, s_exponent(lam, idx, d)};
        }
        std::sort(branches.begin(), branches.end(),
                  [](const Branch& x, const Branch& y) { return x.s < y.s; });

        const double amp = 1.0 / std::sqrt(static_cast<double>(len));
        for (const auto& br : branches) {
            spec.eigenvalues[col] = br.lambda;
            CVector v(d, Complex{0.0, 0.0});
            v[a] = amp;
            int k = a;
            for (int step = 0; step + 1 < len; ++step) {
                const int next = (k + idx.m) % d;
                v[next] = br.lambda * root_of_unity(d, static_cast<double>((d - k * idx.n % d) % d)) * v[k];
                k = next;
            }
            for (int i = 0; i < d; ++i) spec.eigenvectors(i, col) = v[i];
            ++col;
        }
    }
    return spec;
}

ComplexMatrix weyl_conjugate(WeylIndex idx, const ComplexMatrix& rho) {
    const int d = rho.dim();
    validate_index(idx, d);
    ComplexMatrix out(d);
    for (int i = 0; i < d; ++i) {
        const Complex wi = root_of_unity(d, static_cast<double>(i * idx.n % d));
        for (int j = 0; j < d; ++j) {
            const Complex wj = root_of_unity(d, static_cast<double>(j * idx.n % d));
            out(i, j) = wi * std::conj(wj) * rho((i + idx.m) % d, (j + idx.m) % d);
        }
    }
    return out;
}

}  // namespace weylcap
