#include "weylcap/channel.hpp"

#include <cmath>
#include <numeric>

#include "json.hpp"
#include "weylcap/rng.hpp"

namespace weylcap {

namespace {
constexpr double kDistributionTol = 1e-9;
}

ChannelDistribution::ChannelDistribution(int d, std::vector<double> probs)
    : d_(d), p_(std::move(probs)) {
    if (d_ < 2) throw std::invalid_argument("channel dimension must be at least 2");
    if (p_.size() != static_cast<size_t>(d_) * d_)
        throw std::invalid_argument("probability vector must have d*d entries");
    double sum = 0.0;
    for (auto& x : p_) {
        if (x < -kDistributionTol)
            throw std::invalid_argument("probability entries must be nonnegative");
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (std::abs(sum - 1.0) > kDistributionTol)
        throw std::invalid_argument("probabilities must sum to 1");
    for (auto& x : p_) x /= sum;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
    if (!mat_.is_hermitian(1e-12))
        throw std::invalid_argument("density matrix must be Hermitian");
    if (std::abs(mat_.trace() - Complex{1.0, 0.0}) > 1e-12)
        throw std::invalid_argument("density matrix must have unit trace");
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
    CVector v = psi;
    normalize(v);
    ComplexMatrix m(static_cast<int>(v.size()));
    m.add_scaled_outer(1.0, v);
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0 / d;
    return DensityMatrix(std::move(m));
}

TransitionMatrix::TransitionMatrix(int d, WeylIndex source, std::vector<double> class_sums)
    : d_(d), source_(source), class_sums_(std::move(class_sums)) {
    if (class_sums_.size() != static_cast<size_t>(d_))
        throw std::invalid_argument("transition matrix needs d class sums");
}

std::vector<double> TransitionMatrix::row(int r) const {
    std::vector<double> out(d_);
    for (int c = 0; c < d_; ++c) out[c] = (*this)(r, c);
    return out;
}

DensityMatrix apply_channel(const ChannelDistribution& p, const DensityMatrix& rho) {
    const int d = p.dim();
    if (rho.dim() != d) throw std::invalid_argument("channel and state dimensions differ");
    ComplexMatrix out(d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) {
            const double w = p.at({n, m});
            if (w == 0.0) continue;
            const ComplexMatrix term = weyl_conjugate({n, m}, rho.mat());
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) out(i, j) += w * term(i, j);
        }
    return DensityMatrix(std::move(out));
}

TransitionMatrix transition_matrix(const ChannelDistribution& p, WeylIndex idx) {
    const int d = p.dim();
    validate_index(idx, d);
    if (!is_prime(d))
        throw std::domain_error("transition matrix is only defined for prime dimension");
    if (idx.n == 0 && idx.m == 0)
        throw std::invalid_argument("transition matrix needs (n, m) != (0, 0)");
    std::vector<double> sums(d, 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const int key = ((idx.m * i - idx.n * j) % d + d) % d;
            sums[key] += p.at({i, j});
        }
    return TransitionMatrix(d, idx, std::move(sums));
}

ChannelDistribution depolarizing_channel(int d, double mu) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in [0, 1]");
    if (d < 2) throw std::invalid_argument("channel dimension must be at least 2");
    std::vector<double> p(static_cast<size_t>(d) * d, mu / (d * d));
    p[0] += 1.0 - mu;
    return {d, std::move(p)};
}

ChannelDistribution depolarizing_like_one(int d, double xi, WeylIndex idx) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in [0, 1]");
    validate_index(idx, d);
    std::vector<double> p(static_cast<size_t>(d) * d, xi / (d * d));
    p[static_cast<size_t>(idx.n) * d + idx.m] += 1.0 - xi;
    return {d, std::move(p)};
}

ChannelDistribution depolarizing_like_two(int d, double eta, double kappa, WeylIndex idx_a,
                                          WeylIndex idx_b) {
    if (!(eta >= 0.0 && eta <= 1.0 && kappa >= 0.0 && kappa <= 1.0))
        throw std::invalid_argument("eta and kappa must lie in [0, 1]");
    const double s = eta + kappa;
    if (!(s >= 1.0 && s <= 2.0)) throw std::invalid_argument("eta + kappa must lie in [1, 2]");
    validate_index(idx_a, d);
    validate_index(idx_b, d);
    if (idx_a == idx_b) throw std::invalid_argument("the two singled-out indices must differ");
    std::vector<double> p(static_cast<size_t>(d) * d, (s - 1.0) / (d * d));
    p[static_cast<size_t>(idx_a.n) * d + idx_a.m] += 1.0 - eta;
    p[static_cast<size_t>(idx_b.n) * d + idx_b.m] += 1.0 - kappa;
    return {d, std::move(p)};
}

ChannelDistribution sample_random_channel(int d, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("channel dimension must be at least 2");
    std::mt19937_64 g(seed);
    std::vector<double> p(static_cast<size_t>(d) * d);
    for (auto& x : p) x = exponential_unit(g);
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= sum;
    return {d, std::move(p)};
}

namespace {

using nlohmann::json;

int require_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ParseError(std::string("channel JSON needs integer field \"") + key + "\"");
    return j[key].get<int>();
}

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ParseError(std::string("channel JSON needs numeric field \"") + key + "\"");
    return j[key].get<double>();
}

}  // namespace

ChannelDistribution channel_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("channel JSON is unparseable: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("channel JSON must be an object");
    if (j.contains("d") && !j["d"].is_number_integer())
        throw ParseError("channel JSON field \"d\" must be an integer");
    const int d = require_int(j, "d");
    if (d < 2) throw ParseError("channel JSON needs d >= 2");

    if (j.contains("p") && j.contains("kind"))
        throw ParseError("channel JSON must give either \"p\" or \"kind\", not both");

    if (j.contains("p")) {
        const auto& arr = j["p"];
        if (!arr.is_array() || arr.size() != static_cast<size_t>(d) * d)
            throw ParseError("channel JSON field \"p\" must be an array of d*d numbers");
        std::vector<double> p;
        p.reserve(arr.size());
        for (const auto& x : arr) {
            if (!x.is_number()) throw ParseError("channel JSON field \"p\" must be numeric");
            p.push_back(x.get<double>());
        }
        return {d, std::move(p)};
    }

    if (!j.contains("kind") || !j["kind"].is_string())
        throw ParseError("channel JSON needs \"p\" or a string field \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "depolarizing") return depolarizing_channel(d, require_number(j, "mu"));
    if (kind == "depolarizing_like_one")
        return depolarizing_like_one(d, require_number(j, "xi"),
                                     {require_int(j, "n"), require_int(j, "m")});
    if (kind == "depolarizing_like_two")
        return depolarizing_like_two(d, require_number(j, "eta"), require_number(j, "kappa"),
                                     {require_int(j, "n_a"), require_int(j, "m_a")},
                                     {require_int(j, "n_b"), require_int(j, "m_b")});
    throw ParseError("unknown channel kind \"" + kind + "\"");
}

std::string channel_to_json(const ChannelDistribution& p) {
    json j;
    j["d"] = p.dim();
    j["p"] = p.probs();
    return j.dump();
}

}  // namespace weylcap
