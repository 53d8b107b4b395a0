#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pvl/groups.hpp"
#include "pvl/rational.hpp"

namespace pvl {

// A finite ground set with a labeled family of subsets. Ground elements
// and member sets are sorted element codes; measures are normalized
// counting on the ground set.
struct SetSystem {
    struct Member {
        std::string label;
        std::vector<std::uint64_t> elems;  // sorted, unique, subset of ground
    };

    std::vector<std::uint64_t> ground;  // sorted, unique
    std::vector<Member> family;
    bool translation_closed = false;

    void validate() const;
    Rat member_measure(std::size_t i) const;
};

// All coset balls of the quotient: for every depth 0 <= g <= level, the
// fibers of reduction onto the level-g quotient. Closed under left
// translation by construction.
SetSystem ball_coset_system(const FiniteQuotient& q);

// Checks the translation_closed claim by translating every member by
// every group element and looking the image up in the family.
bool verify_translation_closed(const FiniteQuotient& q, const SetSystem& s);

struct VcResult {
    int value = 0;
    bool at_least = false;  // a shattered set of size `value` exists; search stopped there

    std::string to_string() const;
    bool operator==(const VcResult&) const = default;
};

// Exact largest shattered subset size, by depth-first extension of
// shattered prefixes (a subset of a shattered set is shattered, so
// pruning at the first non-shattered prefix is safe). cap <= 12.
VcResult vc_dimension(const SetSystem& s, int cap = 12);

// Number of distinct traces the family cuts on `points`.
std::size_t shatter_count(const SetSystem& s, const std::vector<std::uint64_t>& points);

// Sum of C(n, i) for i = 0..k, exact.
BigInt sauer_shelah_bound(int k, std::uint64_t n_points);

// Fraction of the sample lying in `set_elems`, with multiplicity.
Rat average(const std::vector<std::uint64_t>& sample, const std::vector<std::uint64_t>& set_elems);

// Max over the family of |Av(a, D) - Av(b, D)|; 0 for an empty family.
Rat discrepancy(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                const SetSystem& s);

struct NetRequest {
    int k = 1;
    Rat epsilon;
    Rat delta;  // epsilon/2 unless explicitly overridden

    static NetRequest standard(int k, const Rat& epsilon);
    void validate() const;
};

// Least N with 1/(N eps^2) < 1 - delta and
// 4 * (sum_{i<=k} C(N,i)) * exp(-N delta^2 / 8) < delta.
// A float log-space search locates the crossing; the returned value is
// certified minimal by exact rational arithmetic.
std::uint64_t net_size(const NetRequest& req);

// Exact certification that both inequalities hold at N.
bool net_size_inequalities_hold(std::uint64_t n, const NetRequest& req);

// Certified comparison exp(q) > r for positive rationals, by Taylor
// partial sums with an explicit tail bound.
bool exp_greater_than(const Rat& q, const Rat& r);

// Labels of family members with measure > epsilon missed by the sample.
// An empty result certifies the sample as an epsilon-net.
std::vector<std::string> verify_net(const SetSystem& s, const Rat& epsilon,
                                    const std::vector<std::uint64_t>& sample);

struct TrialRow {
    std::uint64_t trial = 0;
    std::uint64_t n_draws = 0;
    std::uint64_t missed_count = 0;
    Rat max_discrepancy;  // f_N(a, b) for the trial's paired samples
};

struct NetReport {
    std::uint64_t n_draws = 0;
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> sample;  // first trial's draws
    std::vector<std::string> missed;    // union across trials, sorted
    std::vector<TrialRow> rows;
    Rat failure_rate;             // trials with missed nonempty / trials
    Rat discrepancy_exceed_rate;  // trials with f_N > delta / trials
};

struct NetExperimentOptions {
    std::optional<std::uint64_t> sample_size_override;
    std::optional<std::vector<std::uint64_t>> forced_sample;  // test hook
    unsigned workers = 1;
    bool with_discrepancy = true;
};

// `trials` independent experiments; trial t draws from streams
// derive_seed(derive_seed(seed, t), 0) and (..., 1). Results are
// identical for any worker count.
NetReport net_experiment(const FiniteQuotient& q, const SetSystem& s, const NetRequest& req,
                         std::uint64_t trials, std::uint64_t seed,
                         const NetExperimentOptions& opts = {});

}  // namespace pvl
