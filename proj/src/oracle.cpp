#include "weylcap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "weylcap/rng.hpp"

namespace weylcap {

namespace {

double entropy_of_spectrum(const std::vector<double>& ev, bool reject_negative) {
    double h = 0.0;
    for (double lam : ev) {
        if (lam < -1e-10 && reject_negative)
            throw std::invalid_argument("state has an eigenvalue below -1e-10");
        if (lam <= 1e-14) continue;
        if (lam > 1.0) lam = 1.0;
        h -= lam * std::log2(lam);
    }
    return h;
}

}  // namespace

double von_neumann_entropy(const DensityMatrix& rho) {
    return entropy_of_spectrum(hermitian_eigenvalues(rho.mat()), true);
}

double output_entropy_pure(const ChannelDistribution& p, const CVector& psi) {
    const int d = p.dim();
    if (static_cast<int>(psi.size()) != d)
        throw std::invalid_argument("state dimension does not match the channel");
    CVector v = psi;
    normalize(v);
    ComplexMatrix out(d);
    CVector w(d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) {
            const double weight = p.at({n, m});
            if (weight == 0.0) continue;
            // (W_nm v)[k] = omega^{kn} v[(k+m) mod d], one pass per operator.
            for (int k = 0; k < d; ++k)
                w[k] = root_of_unity(d, static_cast<double>(k * n % d)) * v[(k + m) % d];
            out.add_scaled_outer(weight, w);
        }
    return entropy_of_spectrum(hermitian_eigenvalues(out), false);
}

namespace {

struct NmResult {
    std::vector<double> x;
    double value;
    bool converged;
};

// Nelder-Mead simplex descent. Deterministic: ties in the vertex ordering
// break on vertex index.
template <typename F>
NmResult nelder_mead(const F& f, const std::vector<double>& x0, double step, int max_iters,
                     double tol) {
    const size_t n = x0.size();
    std::vector<std::vector<double>> pt(n + 1, x0);
    std::vector<double> val(n + 1);
    for (size_t i = 0; i < n; ++i) pt[i + 1][i] += step;
    for (size_t i = 0; i <= n; ++i) val[i] = f(pt[i]);

    std::vector<size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    const auto sort_vertices = [&] {
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return val[a] != val[b] ? val[a] < val[b] : a < b;
        });
    };

    bool converged = false;
    for (int it = 0; it < max_iters; ++it) {
        sort_vertices();
        const size_t best = order[0];
        const size_t worst = order[n];
        if (val[worst] - val[best] < tol) {
            converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (size_t r = 0; r < n; ++r)
            for (size_t i = 0; i < n; ++i) centroid[i] += pt[order[r]][i] / n;

        std::vector<double> xr(n);
        for (size_t i = 0; i < n; ++i) xr[i] = 2.0 * centroid[i] - pt[worst][i];
        const double fr = f(xr);

        if (fr < val[best]) {
            std::vector<double> xe(n);
            for (size_t i = 0; i < n; ++i) xe[i] = 3.0 * centroid[i] - 2.0 * pt[worst][i];
            const double fe = f(xe);
            if (fe < fr) {
                pt[worst] = std::move(xe);
                val[worst] = fe;
            } else {
                pt[worst] = std::move(xr);
                val[worst] = fr;
            }
        } else if (fr < val[order[n - 1]]) {
            pt[worst] = std::move(xr);
            val[worst] = fr;
        } else {
            // Contract toward the better of the reflected and worst points.
            std::vector<double> xc(n);
            if (fr < val[worst]) {
                for (size_t i = 0; i < n; ++i) xc[i] = 0.5 * (centroid[i] + xr[i]);
            } else {
                for (size_t i = 0; i < n; ++i) xc[i] = 0.5 * (centroid[i] + pt[worst][i]);
            }
            const double fc = f(xc);
            if (fc < std::min(fr, val[worst])) {
                pt[worst] = std::move(xc);
                val[worst] = fc;
            } else {
                const size_t keep = order[0];
                for (size_t r = 0; r <= n; ++r) {
                    if (r == keep) continue;
                    for (size_t i = 0; i < n; ++i) pt[r][i] = 0.5 * (pt[r][i] + pt[keep][i]);
                    val[r] = f(pt[r]);
                }
            }
        }
    }
    sort_vertices();
    return {pt[order[0]], val[order[0]], converged};
}

CVector params_to_state(const std::vector<double>& x) {
    CVector v(x.size() / 2);
    for (size_t k = 0; k < v.size(); ++k) v[k] = {x[2 * k], x[2 * k + 1]};
    return v;
}

std::vector<double> state_to_params(const CVector& v) {
    std::vector<double> x(2 * v.size());
    for (size_t k = 0; k < v.size(); ++k) {
        x[2 * k] = v[k].real();
        x[2 * k + 1] = v[k].imag();
    }
    return x;
}

double standard_normal(std::mt19937_64& g) {
    const double u1 = 1.0 - uniform_unit(g);  // (0, 1]
    const double u2 = uniform_unit(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double binary_entropy(double x) {
    double h = 0.0;
    if (x > 1e-14 && x < 1.0) h -= x * std::log2(x);
    const double y = 1.0 - x;
    if (y > 1e-14 && y < 1.0) h -= y * std::log2(y);
    return h;
}

}  // namespace

OracleResult min_output_entropy(const ChannelDistribution& p, const OptimizerConfig& cfg) {
    if (cfg.restarts < 1 || cfg.max_iters < 1 || cfg.tol <= 0.0)
        throw std::invalid_argument("optimizer configuration out of range");
    const int d = p.dim();
    const double worst_case = std::log2(static_cast<double>(d));

    const auto objective = [&](const std::vector<double>& x) {
        CVector v = params_to_state(x);
        if (norm(v) < 1e-8) return worst_case + 1.0;  // keep the simplex off the origin
        return output_entropy_pure(p, v);
    };

    // Eigenstates of every Weyl operator, deduplicated up to global phase.
    // Proportional index pairs share an eigenbasis, so duplicates are common.
    std::vector<CVector> starts;
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) {
            const WeylSpectrum spec = weyl_eigenbasis({n, m}, d);
            for (int col = 0; col < d; ++col) {
                CVector v(d);
                for (int i = 0; i < d; ++i) v[i] = spec.eigenvectors(i, col);
                const bool dup = std::any_of(starts.begin(), starts.end(), [&](const CVector& u) {
                    return std::abs(inner(u, v)) > 1.0 - 1e-9;
                });
                if (!dup) starts.push_back(std::move(v));
            }
        }

    std::mt19937_64 g(cfg.seed);
    for (int r = 0; r < cfg.restarts; ++r) {
        CVector v(d);
        for (int i = 0; i < d; ++i) v[i] = {standard_normal(g), standard_normal(g)};
        normalize(v);
        starts.push_back(std::move(v));
    }

    double best_val = worst_case + 2.0;
    std::vector<double> best_x;
    bool best_converged = false;
    for (const CVector& s : starts) {
        const NmResult r = nelder_mead(objective, state_to_params(s), 0.25, cfg.max_iters, cfg.tol);
        if (r.value < best_val) {
            best_val = r.value;
            best_x = r.x;
            best_converged = r.converged;
        }
    }

    const double s_min = std::clamp(best_val, 0.0, worst_case);
    CVector best_state = params_to_state(best_x);
    normalize(best_state);
    return {worst_case - s_min, s_min, DensityMatrix::pure(best_state), best_converged};
}

std::vector<Complex> unitary_eigenvalues(const ComplexMatrix& u) {
    const int d = u.dim();
    if (!u.is_unitary(1e-10)) throw std::invalid_argument("matrix is not unitary");
    const Complex z{std::cos(0.5), std::sin(0.5)};
    ComplexMatrix h(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) h(i, j) = 0.5 * (z * u(i, j) + std::conj(z * u(j, i)));
    const HermitianEigensystem es = hermitian_eigensystem(h);
    std::vector<Complex> ev(d);
    CVector v(d);
    for (int col = 0; col < d; ++col) {
        for (int i = 0; i < d; ++i) v[i] = es.eigenvectors(i, col);
        ev[col] = inner(v, u.apply(v));
    }
    return ev;
}

namespace {

// Action of a qubit channel on the parameters (a, b) of [[a, b], [b*, 1-a]]:
// a' = A a + B (1-a); Re b' = alpha Re b, Im b' = beta Im b.
struct QubitChannelCoefficients {
    double A, B, alpha, beta;

    explicit QubitChannelCoefficients(const ChannelDistribution& p) {
        if (p.dim() != 2) throw std::invalid_argument("Bloch grid search needs d = 2");
        const double p00 = p.at({0, 0}), p01 = p.at({0, 1});
        const double p10 = p.at({1, 0}), p11 = p.at({1, 1});
        A = p00 + p10;
        B = p01 + p11;
        alpha = (p00 - p10) + (p01 - p11);
        beta = (p00 - p10) - (p01 - p11);
    }

    double output_entropy(double theta, double phi) const {
        const double ct = std::cos(0.5 * theta), st = std::sin(0.5 * theta);
        const double a = ct * ct;
        const double br = ct * st * std::cos(phi), bi = -ct * st * std::sin(phi);
        const double a_out = A * a + B * (1.0 - a);
        const double br_out = alpha * br, bi_out = beta * bi;
        const double dev =
            std::sqrt((a_out - 0.5) * (a_out - 0.5) + br_out * br_out + bi_out * bi_out);
        return binary_entropy(0.5 + dev);
    }
};

}  // namespace

BlochGridResult bloch_grid_search(const ChannelDistribution& p, int resolution) {
    if (resolution < 1) throw std::invalid_argument("grid resolution must be positive");
    const QubitChannelCoefficients ch(p);
    BlochGridResult best{2.0, 0.0, 0.0};
    for (int i = 0; i <= resolution; ++i) {
        const double theta = std::numbers::pi * i / resolution;
        for (int j = 0; j < 2 * resolution; ++j) {
            const double phi = std::numbers::pi * j / resolution;
            const double s = ch.output_entropy(theta, phi);
            if (s < best.s_min) best = {s, theta, phi};
        }
    }
    return best;
}

double bloch_grid_entropy_min(const ChannelDistribution& p, int resolution) {
    return bloch_grid_search(p, resolution).s_min;
}

double bloch_refined_entropy_min(const ChannelDistribution& p, int resolution) {
    const QubitChannelCoefficients ch(p);
    const BlochGridResult coarse = bloch_grid_search(p, resolution);
    const auto objective = [&](const std::vector<double>& x) {
        return ch.output_entropy(x[0], x[1]);
    };
    const double step = std::numbers::pi / resolution;
    const NmResult r =
        nelder_mead(objective, {coarse.theta, coarse.phi}, step, 500, 1e-14);
    return std::min(coarse.s_min, r.value);
}

}  // namespace weylcap
