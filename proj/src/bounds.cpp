#include "weylcap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "weylcap/oracle.hpp"

namespace weylcap {

namespace {

// Guard against -1e-16 style dips in quantities that are nonnegative by
// construction.
double snap_nonnegative(double x) {
    return (x < 0.0 && x > -1e-12) ? 0.0 : x;
}

std::vector<int> residue_classes(int d, WeylIndex idx) {
    std::vector<int> key(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            key[static_cast<size_t>(i) * d + j] = ((idx.m * i - idx.n * j) % d + d) % d;
    return key;
}

}  // namespace

ZetaVector zeta(const ChannelDistribution& p) {
    const int d = p.dim();
    std::vector<double> sorted = p.probs();
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    ZetaVector z;
    z.values.resize(d);
    for (int i = 0; i < d; ++i)
        z.values[i] = std::accumulate(sorted.begin() + static_cast<size_t>(i) * d,
                                      sorted.begin() + static_cast<size_t>(i + 1) * d, 0.0);
    return z;
}

double upper_bound(const ChannelDistribution& p) {
    const ZetaVector z = zeta(p);
    return snap_nonnegative(std::log2(static_cast<double>(p.dim())) -
                            shannon_entropy_bits(z.values));
}

LowerBound lower_bound_via_rows(const ChannelDistribution& p) {
    const int d = p.dim();
    if (!is_prime(d))
        throw std::domain_error("transition-row lower bound needs prime dimension");
    double min_entropy = std::numeric_limits<double>::infinity();
    WeylIndex argmin;
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) {
            if (n == 0 && m == 0) continue;
            const TransitionMatrix t = transition_matrix(p, {n, m});
            const double h = shannon_entropy_bits(t.first_row_pattern());
            // Scalar multiples of one index permute the class sums, so their
            // entropies tie up to summation order; the margin keeps the
            // lexicographically smallest of them.
            if (h < min_entropy - 1e-12) {
                min_entropy = h;
                argmin = {n, m};
            }
        }
    return {snap_nonnegative(std::log2(static_cast<double>(d)) - min_entropy), argmin};
}

LowerBound lower_bound_via_states(const ChannelDistribution& p) {
    const int d = p.dim();
    double min_entropy = std::numeric_limits<double>::infinity();
    WeylIndex argmin;
    CVector psi(d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) {
            if (n == 0 && m == 0) continue;
            const WeylSpectrum spec = weyl_eigenbasis({n, m}, d);
            for (int col = 0; col < d; ++col) {
                for (int i = 0; i < d; ++i) psi[i] = spec.eigenvectors(i, col);
                const double h = output_entropy_pure(p, psi);
                // Margin keeps the argmin at the lexicographically smallest
                // index when scalar multiples of one operator tie up to
                // rounding (they share eigenvectors, so the tie is exact).
                if (h < min_entropy - 1e-12) {
                    min_entropy = h;
                    argmin = {n, m};
                }
            }
        }
    return {snap_nonnegative(std::log2(static_cast<double>(d)) - min_entropy), argmin};
}

LowerBound lower_bound(const ChannelDistribution& p) {
    return is_prime(p.dim()) ? lower_bound_via_rows(p) : lower_bound_via_states(p);
}

DSet dset_from_sorted(const ChannelDistribution& p) {
    const int d = p.dim();
    const auto& probs = p.probs();
    std::vector<int> order(probs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return probs[a] != probs[b] ? probs[a] > probs[b] : a < b;
    });

    DSet dset;
    dset.groups.resize(d);
    for (int g = 0; g < d; ++g) {
        dset.groups[g].reserve(d);
        for (int r = 0; r < d; ++r) {
            const int k = order[static_cast<size_t>(g) * d + r];
            dset.groups[g].push_back({k / d, k % d});
        }
    }
    for (int g = 1; g < d; ++g) {
        const size_t cut = static_cast<size_t>(g) * d;
        if (probs[order[cut - 1]] == probs[order[cut]]) dset.tie_straddles_boundary = true;
    }
    return dset;
}

std::optional<DSetWitness> is_achievable(const DSet& dset, int d) {
    const size_t total = static_cast<size_t>(d) * d;
    std::vector<char> seen(total, 0);
    if (dset.groups.size() != static_cast<size_t>(d))
        throw std::invalid_argument("d-set must have d groups");
    for (const auto& group : dset.groups) {
        if (group.size() != static_cast<size_t>(d))
            throw std::invalid_argument("every d-set group must have d indices");
        for (const WeylIndex idx : group) {
            validate_index(idx, d);
            char& flag = seen[static_cast<size_t>(idx.n) * d + idx.m];
            if (flag) throw std::invalid_argument("d-set groups must be disjoint");
            flag = 1;
        }
    }

    // m-major scan; proportional index pairs induce the same class partition
    // and the first hit is reported.
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            if (n == 0 && m == 0) continue;
            const std::vector<int> key = residue_classes(d, {n, m});
            std::vector<int> group_key(d, -1);
            std::vector<char> used(d, 0);
            bool ok = true;
            for (int g = 0; g < d && ok; ++g) {
                for (const WeylIndex idx : dset.groups[g]) {
                    const int k = key[static_cast<size_t>(idx.n) * d + idx.m];
                    if (group_key[g] < 0) {
                        group_key[g] = k;
                    } else if (group_key[g] != k) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    if (used[group_key[g]]) ok = false;
                    used[group_key[g]] = 1;
                }
            }
            if (ok) return DSetWitness{{n, m}, std::move(group_key)};
        }
    return std::nullopt;
}

namespace {

// Tie-robust achievability: scan (n, m) m-major for a residue partition
// whose d classes (each of size d) can be chained with min(C_j) >=
// max(C_{j+1}) on p-values. Equivalent to: some nonincreasing sort of p
// yields a d-set realized by these classes.
std::optional<DSetWitness> separable_witness(const ChannelDistribution& p) {
    const int d = p.dim();
    const auto& probs = p.probs();
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            if (n == 0 && m == 0) continue;
            const std::vector<int> key = residue_classes(d, {n, m});
            std::vector<int> count(d, 0);
            std::vector<double> lo(d, std::numeric_limits<double>::infinity());
            std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
            for (size_t k = 0; k < probs.size(); ++k) {
                const int c = key[k];
                ++count[c];
                lo[c] = std::min(lo[c], probs[k]);
                hi[c] = std::max(hi[c], probs[k]);
            }
            // Classes of the wrong size cannot form d-set groups (possible
            // only for composite d).
            if (std::any_of(count.begin(), count.end(), [&](int c) { return c != d; })) continue;

            std::vector<int> classes(d);
            std::iota(classes.begin(), classes.end(), 0);
            std::sort(classes.begin(), classes.end(), [&](int a, int b) {
                return hi[a] != hi[b] ? hi[a] > hi[b] : (lo[a] != lo[b] ? lo[a] > lo[b] : a < b);
            });
            bool ok = true;
            for (int g = 0; g + 1 < d && ok; ++g)
                if (lo[classes[g]] < hi[classes[g + 1]]) ok = false;
            if (ok) return DSetWitness{{n, m}, std::move(classes)};
        }
    return std::nullopt;
}

}  // namespace

BoundReport coincidence_test(const ChannelDistribution& p) {
    const int d = p.dim();
    BoundReport report;
    report.d = d;
    const LowerBound lb = lower_bound(p);
    report.chi_lb = lb.chi_lb;
    report.argmin = lb.argmin;
    report.chi_ub = upper_bound(p);
    report.dset = dset_from_sorted(p);

    auto witness = separable_witness(p);
    report.dset.achievable = witness.has_value();
    report.dset.witness = std::move(witness);

    report.coincide = is_prime(d) ? report.dset.achievable
                                  : std::abs(report.chi_ub - report.chi_lb) <= 1e-9;
    if (report.coincide) report.exact_capacity = report.chi_lb;
    return report;
}

std::string count_dsets(int d) {
    if (d < 2) throw std::invalid_argument("d-sets need dimension at least 2");
    using boost::multiprecision::cpp_int;
    const auto binomial = [](int n, int k) {
        cpp_int r = 1;
        for (int i = 1; i <= k; ++i) {
            r *= n - k + i;
            r /= i;  // exact at every step: r is C(n-k+i, i) here
        }
        return r;
    };
    cpp_int total = 1;
    for (int i = 0; i < d; ++i) total *= binomial(d * d - i * d, d);
    for (int i = 2; i <= d; ++i) total /= i;
    return total.str();
}

double uniform_tail_capacity(int d, double zeta0) {
    const double tail = (1.0 - zeta0) / (d - 1);
    double h = 0.0;
    if (zeta0 > 1e-14) h -= zeta0 * std::log2(zeta0);
    if (tail > 1e-14) h -= (1.0 - zeta0) * std::log2(tail);
    return snap_nonnegative(std::log2(static_cast<double>(d)) - h);
}

double depolarizing_holevo_capacity(int d, double mu) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in [0, 1]");
    return uniform_tail_capacity(d, 1.0 - mu + mu / d);
}

std::string bound_report_to_json(const BoundReport& report, std::optional<double> chi_opt) {
    nlohmann::json j;
    j["chi_lb"] = report.chi_lb;
    j["chi_ub"] = report.chi_ub;
    j["argmin_n"] = report.argmin.n;
    j["argmin_m"] = report.argmin.m;
    j["coincide"] = report.coincide;
    j["exact_capacity"] =
        report.exact_capacity ? nlohmann::json(*report.exact_capacity) : nlohmann::json(nullptr);
    j["dset_achievable"] = report.dset.achievable;
    j["witness_n"] =
        report.dset.witness ? nlohmann::json(report.dset.witness->idx.n) : nlohmann::json(nullptr);
    j["witness_m"] =
        report.dset.witness ? nlohmann::json(report.dset.witness->idx.m) : nlohmann::json(nullptr);
    if (chi_opt) j["chi_opt"] = *chi_opt;
    return j.dump();
}

}  // namespace weylcap
