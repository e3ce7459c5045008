#pragma once

#include <cstdint>

#include "weylcap/channel.hpp"

namespace weylcap {

struct OptimizerConfig {
    int restarts = 32;       // random starts on top of the eigenstate warm starts
    int max_iters = 2000;    // simplex iterations per start
    double tol = 1e-10;      // objective spread below which a start is converged
    std::uint64_t seed = 0;
};

struct OracleResult {
    double chi_opt;            // log2(d) - s_min
    double s_min;              // best output entropy found, bits
    DensityMatrix argmin_state;
    bool converged;            // the winning start terminated on tol, not on max_iters
};

// -sum lambda log2 lambda over the spectrum; eigenvalues below 1e-14 are
// treated as exact zeros, anything below -1e-10 is rejected.
double von_neumann_entropy(const DensityMatrix& rho);

// S(N(|psi><psi|)) without building a DensityMatrix; psi need not be
// normalized. The hot path shared by the optimizer and the bounds code.
double output_entropy_pure(const ChannelDistribution& p, const CVector& psi);

// Direct minimum-output-entropy search over pure states: every eigenstate
// of every Weyl operator is refined by simplex descent, plus cfg.restarts
// random starts. Deterministic in cfg.seed. Starting from the eigenstates
// guarantees chi_opt never falls below the eigenstate-restricted bound.
OracleResult min_output_entropy(const ChannelDistribution& p, const OptimizerConfig& cfg);

// Numerical eigenvalues of a unitary: diagonalize the Hermitian part of
// e^{i*0.5} U (0.5 rad is an irrational fraction of pi, so distinct unitary
// eigenvalues never collapse onto one Hermitian eigenvalue) and take
// Rayleigh quotients of U on its eigenvectors.
std::vector<Complex> unitary_eigenvalues(const ComplexMatrix& u);

struct BlochGridResult {
    double s_min;
    double theta;
    double phi;
};

// Exhaustive scan over pure qubit states (cos(t/2), e^{i phi} sin(t/2)) on
// a (resolution+1) x (2*resolution) grid. Doubling the resolution nests the
// grid, so the minimum is nonincreasing under refinement. d = 2 only.
BlochGridResult bloch_grid_search(const ChannelDistribution& p, int resolution);
double bloch_grid_entropy_min(const ChannelDistribution& p, int resolution);

// Grid scan followed by simplex polish of the best cell.
double bloch_refined_entropy_min(const ChannelDistribution& p, int resolution);

}  // namespace weylcap
