#pragma once

#include <algorithm>

#include "pvl/definable_sets.hpp"
#include "pvl/rng.hpp"

namespace pvl::test {

// First digit index where the zero-extended points disagree; the padded
// window size when they are the same point.
inline int agree_depth(const ExactPoint& a, const ExactPoint& b) {
    std::size_t q = std::max(a.precision_max(), b.precision_max());
    auto digit = [](const PadicApprox& c, std::size_t j) {
        return j < c.precision() ? c.digits()[j] : 0u;
    };
    int depth = static_cast<int>(q);
    for (std::size_t i = 0; i < a.coords().size(); ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            if (digit(a.coords()[i], j) != digit(b.coords()[i], j)) {
                depth = std::min(depth, static_cast<int>(j));
                break;
            }
        }
    }
    return depth;
}

// Adherence oracle: decides closedness geometrically, ball by ball. A
// puncture x that the set really removes destroys closedness exactly when
// every ball B_gamma(x) still meets the set somewhere away from x.
inline bool oracle_closed(const WindowSet& s) {
    const int m = s.core.level;
    for (const auto& x : s.punctures_removed) {
        if (window_member(s, x)) continue;  // not actually removed

        bool adherent = true;
        int top = std::max(m, static_cast<int>(x.precision_max()));
        for (const auto& y : s.points_added) {
            top = std::max(top, static_cast<int>(y.precision_max()));
        }
        ++top;
        for (int gamma = 0; gamma <= top && adherent; ++gamma) {
            bool meets_core;
            if (gamma <= m) {
                ResiduePoint rx = x.residue_at(gamma);
                meets_core = false;
                std::uint64_t coarse = 1;
                for (int i = 0; i < gamma; ++i) coarse *= static_cast<std::uint64_t>(s.core.p);
                for (const auto& c : s.core.residues) {
                    bool agree = true;
                    for (int i = 0; i < s.core.n; ++i) {
                        if (c[static_cast<std::size_t>(i)] % coarse !=
                            rx[static_cast<std::size_t>(i)]) {
                            agree = false;
                            break;
                        }
                    }
                    if (agree) {
                        meets_core = true;
                        break;
                    }
                }
            } else {
                // Deeper balls sit inside x's own level-m class, which the
                // finitely many punctures cannot exhaust.
                meets_core = s.core.contains(x.residue_at(m));
            }

            bool meets_added = false;
            for (const auto& y : s.points_added) {
                if (!x.same_point(y) && agree_depth(x, y) >= gamma) {
                    meets_added = true;
                    break;
                }
            }
            adherent = meets_core || meets_added;
        }
        if (adherent) return false;
    }
    return true;
}

inline bool oracle_bounded(const WindowSet& s) { return !s.tail; }

inline bool oracle_definably_compact(const WindowSet& s) {
    return oracle_closed(s) && oracle_bounded(s);
}

// D subset of E, through the boolean algebra.
inline bool window_subset(const WindowSet& d, const WindowSet& e) {
    return window_intersect(d, window_complement(e)).content_empty();
}

inline bool window_equal(const WindowSet& a, const WindowSet& b) {
    return window_subset(a, b) && window_subset(b, a);
}

// Random window set over p=3-style small parameters; punctures land in
// core classes, added points in the complement.
inline WindowSet random_window(Mix64& rng, std::int64_t p, int n, int max_level,
                               int max_punctures, bool allow_tail = true) {
    int level = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_level)));
    std::uint64_t mod = 1;
    for (int i = 0; i < level; ++i) mod *= static_cast<std::uint64_t>(p);
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= mod;

    std::vector<ResiduePoint> residues;
    for (std::uint64_t c = 0; c < total; ++c) {
        if (rng.below(2)) continue;
        ResiduePoint r(static_cast<std::size_t>(n));
        std::uint64_t code = c;
        for (auto& v : r) {
            v = code % mod;
            code /= mod;
        }
        residues.push_back(std::move(r));
    }
    std::sort(residues.begin(), residues.end());
    WindowSet s;
    s.scale = static_cast<std::int64_t>(rng.below(2));
    s.core = CylinderSet{p, n, level, std::move(residues)};
    s.tail = allow_tail && rng.below(2) == 0;

    auto random_point_in_class = [&](const ResiduePoint& cls) {
        std::size_t prec = static_cast<std::size_t>(level) + 2 + rng.below(3);
        std::vector<PadicApprox> coords;
        for (int i = 0; i < n; ++i) {
            std::vector<std::uint32_t> digits(prec);
            std::uint64_t c = cls[static_cast<std::size_t>(i)];
            for (int j = 0; j < level; ++j) {
                digits[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(
                    c % static_cast<std::uint64_t>(p));
                c /= static_cast<std::uint64_t>(p);
            }
            for (std::size_t j = static_cast<std::size_t>(level); j < prec; ++j) {
                digits[j] = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(p)));
            }
            coords.emplace_back(p, 0, std::move(digits));
        }
        return ExactPoint(std::move(coords));
    };
    auto random_class = [&](bool inside) -> std::optional<ResiduePoint> {
        std::vector<ResiduePoint> pool;
        ResiduePoint r(static_cast<std::size_t>(n));
        for (std::uint64_t c = 0; c < total; ++c) {
            std::uint64_t code = c;
            for (auto& v : r) {
                v = code % mod;
                code /= mod;
            }
            if (s.core.contains(r) == inside) pool.push_back(r);
        }
        if (pool.empty()) return std::nullopt;
        return pool[rng.below(pool.size())];
    };

    int punctures = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_punctures) + 1));
    for (int i = 0; i < punctures; ++i) {
        // Mostly effective punctures, occasionally a vacuous one.
        bool inside = rng.below(4) != 0;
        if (auto cls = random_class(inside)) {
            s.punctures_removed.push_back(random_point_in_class(*cls));
        }
    }
    int added = static_cast<int>(rng.below(3));
    for (int i = 0; i < added; ++i) {
        if (auto cls = random_class(false)) {
            s.points_added.push_back(random_point_in_class(*cls));
        }
    }
    s.validate();
    return s;
}

}  // namespace pvl::test
