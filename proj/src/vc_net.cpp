#include "pvl/vc_net.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace pvl {

void SetSystem::validate() const {
    if (!std::is_sorted(ground.begin(), ground.end()) ||
        std::adjacent_find(ground.begin(), ground.end()) != ground.end()) {
        throw std::invalid_argument("ground must be sorted and unique");
    }
    std::unordered_set<std::string> labels;
    for (const auto& m : family) {
        if (!labels.insert(m.label).second) {
            throw std::invalid_argument("duplicate label: " + m.label);
        }
        if (!std::is_sorted(m.elems.begin(), m.elems.end()) ||
            std::adjacent_find(m.elems.begin(), m.elems.end()) != m.elems.end()) {
            throw std::invalid_argument("member elements must be sorted and unique");
        }
        if (!std::includes(ground.begin(), ground.end(), m.elems.begin(), m.elems.end())) {
            throw std::invalid_argument("member not contained in ground");
        }
    }
}

Rat SetSystem::member_measure(std::size_t i) const {
    if (ground.empty()) throw std::invalid_argument("empty ground set");
    return Rat(BigInt(family[i].elems.size()), BigInt(ground.size()));
}

SetSystem ball_coset_system(const FiniteQuotient& q) {
    SetSystem s;
    s.ground = q.elements();
    s.translation_closed = true;
    for (int g = 0; g <= q.level(); ++g) {
        // Fibers of the reduction onto level g; level below the kind's
        // minimum collapses to the full carrier.
        std::map<std::uint64_t, std::vector<std::uint64_t>> fibers;
        std::uint64_t mod = 1;
        for (int i = 0; i < g; ++i) mod *= static_cast<std::uint64_t>(q.p());
        for (std::uint64_t code : q.elements()) {
            ResiduePoint r = q.decode(code);
            std::uint64_t key = 0, mult = 1;
            for (std::uint64_t c : r) {
                key += (c % mod) * mult;
                mult *= mod;
            }
            fibers[key].push_back(code);
        }
        for (auto& [key, elems] : fibers) {
            std::sort(elems.begin(), elems.end());
            s.family.push_back({"ball_g" + std::to_string(g) + "_c" + std::to_string(key),
                                std::move(elems)});
        }
    }
    s.validate();
    return s;
}

bool verify_translation_closed(const FiniteQuotient& q, const SetSystem& s) {
    std::set<std::vector<std::uint64_t>> members;
    for (const auto& m : s.family) members.insert(m.elems);
    for (const auto& m : s.family) {
        for (std::uint64_t g : q.elements()) {
            std::vector<std::uint64_t> image;
            image.reserve(m.elems.size());
            for (std::uint64_t e : m.elems) image.push_back(q.op(g, e));
            std::sort(image.begin(), image.end());
            if (!members.count(image)) return false;
        }
    }
    return true;
}

std::string VcResult::to_string() const {
    if (at_least) return "AtLeast(" + std::to_string(value) + ")";
    return std::to_string(value);
}

namespace {

bool masks_shatter(const std::vector<std::uint16_t>& masks, int t) {
    std::vector<bool> seen(std::size_t{1} << t, false);
    std::size_t distinct = 0;
    for (std::uint16_t m : masks) {
        if (!seen[m]) {
            seen[m] = true;
            if (++distinct == (std::size_t{1} << t)) return true;
        }
    }
    return false;
}

struct VcSearch {
    const std::vector<std::vector<bool>>& membership;  // [member][ground index]
    std::size_t ground_size;
    int cap;
    int best = 0;
    bool hit_cap = false;

    void dfs(std::size_t start, const std::vector<std::uint16_t>& masks, int depth) {
        best = std::max(best, depth);
        if (depth == cap) {
            hit_cap = true;
            return;
        }
        std::vector<std::uint16_t> next(masks.size());
        for (std::size_t e = start; e < ground_size; ++e) {
            for (std::size_t i = 0; i < masks.size(); ++i) {
                next[i] = static_cast<std::uint16_t>(masks[i] |
                                                     (membership[i][e] ? (1u << depth) : 0u));
            }
            if (masks_shatter(next, depth + 1)) {
                dfs(e + 1, next, depth + 1);
                if (hit_cap) return;
            }
        }
    }
};

}  // namespace

VcResult vc_dimension(const SetSystem& s, int cap) {
    if (cap < 1 || cap > 12) throw std::invalid_argument("cap must be in [1, 12]");
    s.validate();
    if (s.family.empty() || s.ground.empty()) return {0, false};

    std::vector<std::vector<bool>> membership(s.family.size(),
                                              std::vector<bool>(s.ground.size(), false));
    for (std::size_t i = 0; i < s.family.size(); ++i) {
        for (std::uint64_t e : s.family[i].elems) {
            auto it = std::lower_bound(s.ground.begin(), s.ground.end(), e);
            membership[i][static_cast<std::size_t>(it - s.ground.begin())] = true;
        }
    }
    VcSearch search{membership, s.ground.size(), cap};
    std::vector<std::uint16_t> root(s.family.size(), 0);
    search.dfs(0, root, 0);
    return {search.best, search.hit_cap};
}

std::size_t shatter_count(const SetSystem& s, const std::vector<std::uint64_t>& points) {
    for (std::uint64_t x : points) {
        if (!std::binary_search(s.ground.begin(), s.ground.end(), x)) {
            throw std::invalid_argument("point not in ground set");
        }
    }
    std::set<std::vector<bool>> traces;
    for (const auto& m : s.family) {
        std::vector<bool> trace(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            trace[i] = std::binary_search(m.elems.begin(), m.elems.end(), points[i]);
        }
        traces.insert(std::move(trace));
    }
    return traces.size();
}

BigInt sauer_shelah_bound(int k, std::uint64_t n_points) {
    if (k < 0) throw std::invalid_argument("k must be >= 0");
    BigInt total = 0, binom = 1;
    for (int i = 0; i <= k; ++i) {
        if (static_cast<std::uint64_t>(i) > n_points) break;
        total += binom;
        binom = binom * (n_points - static_cast<std::uint64_t>(i)) / (i + 1);
    }
    return total;
}

Rat average(const std::vector<std::uint64_t>& sample,
            const std::vector<std::uint64_t>& set_elems) {
    if (sample.empty()) throw std::invalid_argument("empty sample");
    std::size_t hits = 0;
    for (std::uint64_t x : sample) {
        if (std::binary_search(set_elems.begin(), set_elems.end(), x)) ++hits;
    }
    return Rat(BigInt(hits), BigInt(sample.size()));
}

Rat discrepancy(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                const SetSystem& s) {
    if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
    if (a.empty()) throw std::invalid_argument("empty sample");
    Rat worst = 0;
    for (const auto& m : s.family) {
        Rat d = average(a, m.elems) - average(b, m.elems);
        if (d < 0) d = -d;
        if (d > worst) worst = d;
    }
    return worst;
}

NetRequest NetRequest::standard(int k, const Rat& epsilon) {
    NetRequest r{k, epsilon, epsilon / 2};
    r.validate();
    return r;
}

void NetRequest::validate() const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must be in (0, 1)");
    if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must be in (0, 1)");
}

bool exp_greater_than(const Rat& q, const Rat& r) {
    if (q <= 0 || r <= 0) throw std::invalid_argument("arguments must be positive");
    Rat partial = 1, term = 1;
    std::uint64_t j = 0;
    const Rat two_q = q * 2;
    for (;;) {
        if (partial > r) return true;
        ++j;
        term = term * q / j;
        partial += term;
        if (Rat(j) >= two_q) {
            Rat next = term * q / (j + 1);
            if (partial + next * 2 <= r) return false;
        }
    }
}

bool net_size_inequalities_hold(std::uint64_t n, const NetRequest& req) {
    req.validate();
    if (n == 0) return false;
    const Rat eps = req.epsilon, delta = req.delta;
    if (!(Rat(1) < Rat(n) * eps * eps * (Rat(1) - delta))) return false;
    Rat q = Rat(n) * delta * delta / 8;
    Rat r = Rat(4) * Rat(sauer_shelah_bound(req.k, n)) / delta;
    return exp_greater_than(q, r);
}

std::uint64_t net_size(const NetRequest& req) {
    req.validate();
    const double eps = rational_to_double(req.epsilon);
    const double delta = rational_to_double(req.delta);
    const int k = req.k;

    auto float_holds = [&](std::uint64_t n) {
        double log_s = 0;
        double binom = 1, total = 1;
        for (int i = 1; i <= k && static_cast<std::uint64_t>(i) <= n; ++i) {
            binom = binom * static_cast<double>(n - static_cast<std::uint64_t>(i) + 1) / i;
            total += binom;
        }
        log_s = std::log(total);
        bool first = 1.0 / (static_cast<double>(n) * eps * eps) < 1.0 - delta - 1e-9;
        double lhs = std::log(4.0) + log_s - static_cast<double>(n) * delta * delta / 8.0;
        return first && lhs < std::log(delta) - 1e-9;
    };

    std::uint64_t hi = 1;
    while (!float_holds(hi)) hi *= 2;
    std::uint64_t lo = hi / 2;
    while (lo + 1 < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (float_holds(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // The float pass is advisory; walk to the exact minimum.
    std::uint64_t n = hi;
    while (n > 1 && net_size_inequalities_hold(n - 1, req)) --n;
    while (!net_size_inequalities_hold(n, req)) ++n;
    return n;
}

std::vector<std::string> verify_net(const SetSystem& s, const Rat& epsilon,
                                    const std::vector<std::uint64_t>& sample) {
    s.validate();
    std::unordered_set<std::uint64_t> in_sample(sample.begin(), sample.end());
    std::vector<std::string> missed;
    for (std::size_t i = 0; i < s.family.size(); ++i) {
        if (!(s.member_measure(i) > epsilon)) continue;
        bool hit = false;
        for (std::uint64_t e : s.family[i].elems) {
            if (in_sample.count(e)) {
                hit = true;
                break;
            }
        }
        if (!hit) missed.push_back(s.family[i].label);
    }
    std::sort(missed.begin(), missed.end());
    return missed;
}

NetReport net_experiment(const FiniteQuotient& q, const SetSystem& s, const NetRequest& req,
                         std::uint64_t trials, std::uint64_t seed,
                         const NetExperimentOptions& opts) {
    s.validate();
    std::uint64_t n_draws;
    if (opts.forced_sample) {
        n_draws = opts.forced_sample->size();
    } else if (opts.sample_size_override) {
        n_draws = *opts.sample_size_override;
    } else {
        n_draws = net_size(req);
    }
    if (n_draws == 0) throw std::invalid_argument("sample size must be >= 1");

    NetReport report;
    report.n_draws = n_draws;
    report.trials = trials;
    report.rows.resize(trials);

    std::vector<std::vector<std::string>> missed_per_trial(trials);
    std::vector<std::vector<std::uint64_t>> first_sample(1);

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            std::uint64_t trial_seed = derive_seed(seed, t);
            std::vector<std::uint64_t> sample;
            if (opts.forced_sample) {
                sample = *opts.forced_sample;
            } else {
                HaarSampler sampler(q, derive_seed(trial_seed, 0));
                sample = sampler.draw_many(n_draws);
            }
            auto missed = verify_net(s, req.epsilon, sample);

            TrialRow row;
            row.trial = t;
            row.n_draws = n_draws;
            row.missed_count = missed.size();
            if (opts.with_discrepancy) {
                HaarSampler sampler_b(q, derive_seed(trial_seed, 1));
                auto paired = sampler_b.draw_many(n_draws);
                row.max_discrepancy = discrepancy(sample, paired, s);
            }
            report.rows[t] = std::move(row);
            missed_per_trial[t] = std::move(missed);
            if (t == 0) first_sample[0] = std::move(sample);
        }
    };

    unsigned workers = std::max(1u, opts.workers);
    if (workers == 1 || trials <= 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        std::uint64_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t begin = w * chunk;
            std::uint64_t end = std::min<std::uint64_t>(begin + chunk, trials);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    report.sample = std::move(first_sample[0]);
    std::uint64_t failures = 0, exceed = 0;
    std::set<std::string> all_missed;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (!missed_per_trial[t].empty()) ++failures;
        all_missed.insert(missed_per_trial[t].begin(), missed_per_trial[t].end());
        if (opts.with_discrepancy && report.rows[t].max_discrepancy > req.delta) ++exceed;
    }
    report.missed.assign(all_missed.begin(), all_missed.end());
    report.failure_rate = trials ? Rat(BigInt(failures), BigInt(trials)) : Rat(0);
    report.discrepancy_exceed_rate = trials ? Rat(BigInt(exceed), BigInt(trials)) : Rat(0);
    return report;
}

}  // namespace pvl
