#pragma once

#include <optional>
#include <string>

#include "weylcap/channel.hpp"

namespace weylcap {

// Block sums of the descending-sorted probability vector; nonincreasing by
// construction and summing to 1.
struct ZetaVector {
    std::vector<double> values;
};

struct DSetWitness {
    WeylIndex idx;               // residue classes of (m*i - n*j) mod d realize the groups
    std::vector<int> class_keys;  // residue k_i of group i
};

struct DSet {
    std::vector<std::vector<WeylIndex>> groups;  // d disjoint groups of d indices
    bool tie_straddles_boundary = false;  // equal p-values cross a group cut, so the
                                          // grouping is one of several valid sorts
    bool achievable = false;
    std::optional<DSetWitness> witness;
};

struct LowerBound {
    double chi_lb = 0.0;
    WeylIndex argmin;  // lexicographically smallest minimizer
};

struct BoundReport {
    int d = 0;
    double chi_lb = 0.0;
    double chi_ub = 0.0;
    WeylIndex argmin;
    bool coincide = false;
    std::optional<double> exact_capacity;
    DSet dset;
};

ZetaVector zeta(const ChannelDistribution& p);

double upper_bound(const ChannelDistribution& p);

// log2(d) minus the smallest transition-row entropy (prime d only).
LowerBound lower_bound_via_rows(const ChannelDistribution& p);

// log2(d) minus the smallest output entropy over the canonical eigenstates
// of every Weyl operator. Works for any d; agrees with the row path when d
// is prime.
LowerBound lower_bound_via_states(const ChannelDistribution& p);

// Dispatches to the row path for prime d, the eigenstate path otherwise.
LowerBound lower_bound(const ChannelDistribution& p);

// Indices of p sorted by value descending (ties by index ascending), cut
// into consecutive groups of d.
DSet dset_from_sorted(const ChannelDistribution& p);

// First (n, m), scanning m-major, whose residue classes reproduce the
// groups exactly, each group one class, classes pairwise distinct.
std::optional<DSetWitness> is_achievable(const DSet& dset, int d);

// Full report: both bounds, the sorted d-set, a tie-robust achievability
// verdict, and the coincidence decision (structural for prime d, numeric
// for composite d).
BoundReport coincidence_test(const ChannelDistribution& p);

// Number of distinct d-sets, as a decimal string (exceeds 64 bits quickly).
std::string count_dsets(int d);

// log2(d) - H(zeta) for zeta = (zeta0, t, ..., t) with a uniform tail.
double uniform_tail_capacity(int d, double zeta0);

// Closed-form Holevo capacity of the depolarizing channel.
double depolarizing_holevo_capacity(int d, double mu);

std::string bound_report_to_json(const BoundReport& report,
                                 std::optional<double> chi_opt = std::nullopt);

}  // namespace weylcap
