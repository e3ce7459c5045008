#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylcap/weyl.hpp"

namespace weylcap {

// Structural problem with a channel description (bad JSON, missing fields,
// wrong array length). Distinct from std::invalid_argument, which covers
// well-formed descriptions with out-of-range values.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Probability vector p over the d^2 Weyl indices, n-major: p_nm at n*d + m.
// Inputs within 1e-9 of a valid distribution are renormalized; anything
// worse is rejected.
class ChannelDistribution {
public:
    ChannelDistribution(int d, std::vector<double> probs);

    int dim() const { return d_; }
    const std::vector<double>& probs() const { return p_; }
    double at(WeylIndex idx) const { return p_[static_cast<size_t>(idx.n) * d_ + idx.m]; }

private:
    int d_;
    std::vector<double> p_;
};

class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);  // checks Hermiticity and unit trace

    static DensityMatrix pure(const CVector& psi);  // |psi><psi| / <psi|psi>
    static DensityMatrix maximally_mixed(int d);

    int dim() const { return mat_.dim(); }
    const ComplexMatrix& mat() const { return mat_; }

private:
    ComplexMatrix mat_;
};

// Circulant transition matrix of the classical symmetric channel a Weyl
// channel simulates on the eigenbasis of W_nm. Prime d only.
class TransitionMatrix {
public:
    TransitionMatrix(int d, WeylIndex source, std::vector<double> class_sums);

    int dim() const { return d_; }
    WeylIndex source_index() const { return source_; }
    double operator()(int r, int c) const { return class_sums_[((r - c) % d_ + d_) % d_]; }
    std::vector<double> row(int r) const;
    const std::vector<double>& first_row_pattern() const { return class_sums_; }

private:
    int d_;
    WeylIndex source_;
    std::vector<double> class_sums_;  // entry k = T(k, 0); rows are cyclic shifts
};

DensityMatrix apply_channel(const ChannelDistribution& p, const DensityMatrix& rho);

TransitionMatrix transition_matrix(const ChannelDistribution& p, WeylIndex idx);

ChannelDistribution depolarizing_channel(int d, double mu);
ChannelDistribution depolarizing_like_one(int d, double xi, WeylIndex idx);
ChannelDistribution depolarizing_like_two(int d, double eta, double kappa, WeylIndex idx_a,
                                          WeylIndex idx_b);

// Uniform on the probability simplex (normalized exponential samples),
// deterministic in the seed.
ChannelDistribution sample_random_channel(int d, std::uint64_t seed);

// Accepts {"d": d, "p": [d*d floats]} or {"d": d, "kind": "depolarizing",
// "mu": x} and the depolarizing_like_one / depolarizing_like_two analogues
// (fields xi, n, m / eta, kappa, n_a, m_a, n_b, m_b).
ChannelDistribution channel_from_json(const std::string& text);
std::string channel_to_json(const ChannelDistribution& p);

}  // namespace weylcap
