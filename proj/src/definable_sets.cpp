#include "pvl/definable_sets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pvl {

namespace {

std::uint64_t pow_u64_checked(std::int64_t p, int e, const char* what) {
    unsigned __int128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= static_cast<std::uint64_t>(p);
        if (r > UINT64_MAX) throw CapExceeded(what);
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t enumeration_size(std::int64_t p, int n, int level, std::size_t cap,
                               const char* what) {
    unsigned __int128 r = 1;
    for (int i = 0; i < n * level; ++i) {
        r *= static_cast<std::uint64_t>(p);
        if (r > cap) throw CapExceeded(what);
    }
    return static_cast<std::uint64_t>(r);
}

void check_space(const CylinderSet& a, const CylinderSet& b) {
    if (a.p != b.p || a.n != b.n) throw std::invalid_argument("prime/dimension mismatch");
}

std::vector<ResiduePoint> all_residues(std::int64_t p, int n, int level, std::size_t cap) {
    std::uint64_t total = enumeration_size(p, n, level, cap, "residue enumeration cap exceeded");
    std::uint64_t mod = pow_u64_checked(p, level, "residue enumeration cap exceeded");
    std::vector<ResiduePoint> out;
    out.reserve(total);
    ResiduePoint cur(static_cast<std::size_t>(n), 0);
    for (std::uint64_t c = 0; c < total; ++c) {
        out.push_back(cur);
        for (int i = 0; i < n; ++i) {
            if (++cur[static_cast<std::size_t>(i)] < mod) break;
            cur[static_cast<std::size_t>(i)] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

void CylinderSet::validate() const {
    if (p < 2) throw std::invalid_argument("prime must be >= 2");
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (level < 0) throw std::invalid_argument("level must be >= 0");
    std::uint64_t mod = coord_mod();
    for (const auto& r : residues) {
        if (static_cast<int>(r.size()) != n) {
            throw std::invalid_argument("residue tuple has wrong dimension");
        }
        for (std::uint64_t c : r) {
            if (c >= mod) throw std::invalid_argument("residue coordinate out of range");
        }
    }
    if (!std::is_sorted(residues.begin(), residues.end()) ||
        std::adjacent_find(residues.begin(), residues.end()) != residues.end()) {
        throw std::invalid_argument("residues must be sorted and unique");
    }
}

std::uint64_t CylinderSet::coord_mod() const {
    return pow_u64_checked(p, level, "level too deep to enumerate");
}

bool CylinderSet::contains(const ResiduePoint& r) const {
    return std::binary_search(residues.begin(), residues.end(), r);
}

CylinderSet CylinderSet::full(std::int64_t p, int n, int level) {
    CylinderSet d{p, n, level, all_residues(p, n, level, kResidueCap)};
    return d;
}

CylinderSet CylinderSet::none(std::int64_t p, int n, int level) {
    return CylinderSet{p, n, level, {}};
}

Rat measure(const CylinderSet& d) {
    BigInt denom = 1;
    for (int i = 0; i < d.n * d.level; ++i) denom *= d.p;
    return Rat(BigInt(d.residues.size()), denom);
}

CylinderSet refined(const CylinderSet& d, int to_level, std::size_t cap) {
    if (to_level < d.level) throw std::invalid_argument("refinement never coarsens");
    if (to_level == d.level) return d;
    const int delta = to_level - d.level;
    std::uint64_t factor = enumeration_size(d.p, d.n, delta, cap, "residue enumeration cap exceeded");
    if (d.residues.size() * factor > cap) {
        throw CapExceeded("residue enumeration cap exceeded");
    }
    std::uint64_t old_mod = pow_u64_checked(d.p, d.level, "level too deep to enumerate");
    std::uint64_t step_mod = pow_u64_checked(d.p, delta, "level too deep to enumerate");
    (void)pow_u64_checked(d.p, to_level, "level too deep to enumerate");

    std::vector<ResiduePoint> out;
    out.reserve(d.residues.size() * factor);
    ResiduePoint t(static_cast<std::size_t>(d.n), 0);
    for (const auto& r : d.residues) {
        std::fill(t.begin(), t.end(), 0);
        for (std::uint64_t c = 0; c < factor; ++c) {
            ResiduePoint nr(r);
            for (int i = 0; i < d.n; ++i) {
                nr[static_cast<std::size_t>(i)] += old_mod * t[static_cast<std::size_t>(i)];
            }
            out.push_back(std::move(nr));
            for (int i = 0; i < d.n; ++i) {
                if (++t[static_cast<std::size_t>(i)] < step_mod) break;
                t[static_cast<std::size_t>(i)] = 0;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return CylinderSet{d.p, d.n, to_level, std::move(out)};
}

namespace {

std::pair<CylinderSet, CylinderSet> reconcile_levels(const CylinderSet& a, const CylinderSet& b,
                                                     std::size_t cap) {
    check_space(a, b);
    int m = std::max(a.level, b.level);
    return {refined(a, m, cap), refined(b, m, cap)};
}

}  // namespace

CylinderSet cylinder_union(const CylinderSet& a, const CylinderSet& b, std::size_t cap) {
    auto [x, y] = reconcile_levels(a, b, cap);
    std::vector<ResiduePoint> out;
    std::set_union(x.residues.begin(), x.residues.end(), y.residues.begin(), y.residues.end(),
                   std::back_inserter(out));
    return CylinderSet{x.p, x.n, x.level, std::move(out)};
}

CylinderSet cylinder_intersect(const CylinderSet& a, const CylinderSet& b, std::size_t cap) {
    auto [x, y] = reconcile_levels(a, b, cap);
    std::vector<ResiduePoint> out;
    std::set_intersection(x.residues.begin(), x.residues.end(), y.residues.begin(),
                          y.residues.end(), std::back_inserter(out));
    return CylinderSet{x.p, x.n, x.level, std::move(out)};
}

CylinderSet cylinder_complement(const CylinderSet& d, std::size_t cap) {
    auto everything = all_residues(d.p, d.n, d.level, cap);
    std::vector<ResiduePoint> out;
    std::set_difference(everything.begin(), everything.end(), d.residues.begin(),
                        d.residues.end(), std::back_inserter(out));
    return CylinderSet{d.p, d.n, d.level, std::move(out)};
}

bool cylinder_subset(const CylinderSet& a, const CylinderSet& b, std::size_t cap) {
    auto [x, y] = reconcile_levels(a, b, cap);
    return std::includes(y.residues.begin(), y.residues.end(), x.residues.begin(),
                         x.residues.end());
}

ExactPoint::ExactPoint(std::vector<PadicApprox> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("point needs at least one coordinate");
    const std::int64_t p = coords_.front().prime();
    for (auto& c : coords_) {
        if (c.prime() != p) throw std::invalid_argument("prime mismatch");
        if (c.shift() < 0) {
            // p^{|shift|} * u: fold the power into the digits.
            std::size_t up = static_cast<std::size_t>(-c.shift());
            if (c.precision() + up > PadicApprox::kMaxPrecision) {
                throw std::invalid_argument("point precision exceeds cap");
            }
            std::vector<std::uint32_t> d(up, 0);
            d.insert(d.end(), c.digits().begin(), c.digits().end());
            c = PadicApprox(p, 0, std::move(d));
        } else if (c.shift() > 0) {
            std::size_t down = static_cast<std::size_t>(c.shift());
            if (down >= c.precision()) throw std::invalid_argument("point not integral");
            for (std::size_t i = 0; i < down; ++i) {
                if (c.digits()[i] != 0) throw std::invalid_argument("point not integral");
            }
            std::vector<std::uint32_t> d(c.digits().begin() + static_cast<std::ptrdiff_t>(down),
                                         c.digits().end());
            c = PadicApprox(p, 0, std::move(d));
        }
    }
}

std::size_t ExactPoint::precision() const {
    std::size_t q = PadicApprox::kMaxPrecision;
    for (const auto& c : coords_) q = std::min(q, c.precision());
    return q;
}

ResiduePoint ExactPoint::residue_at(int level) const {
    if (level < 0) throw std::invalid_argument("level must be >= 0");
    (void)pow_u64_checked(prime(), level, "level too deep to enumerate");
    ResiduePoint r;
    r.reserve(coords_.size());
    for (const auto& c : coords_) {
        std::uint64_t v = 0;
        for (int i = level; i-- > 0;) {
            std::uint32_t digit = static_cast<std::size_t>(i) < c.precision()
                                      ? c.digits()[static_cast<std::size_t>(i)]
                                      : 0;
            v = v * static_cast<std::uint64_t>(prime()) + digit;
        }
        r.push_back(v);
    }
    return r;
}

ExactPoint ExactPoint::rescaled_up(std::int64_t d) const {
    if (d == 0) return *this;
    if (d < 0) throw std::invalid_argument("rescale must not shrink the window");
    std::vector<PadicApprox> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_) {
        if (c.precision() + static_cast<std::size_t>(d) > PadicApprox::kMaxPrecision) {
            throw std::invalid_argument("point precision exceeds cap");
        }
        std::vector<std::uint32_t> digits(static_cast<std::size_t>(d), 0);
        digits.insert(digits.end(), c.digits().begin(), c.digits().end());
        out.emplace_back(prime(), 0, std::move(digits));
    }
    return ExactPoint(std::move(out));
}

namespace {

std::uint32_t padded_digit(const PadicApprox& c, std::size_t j) {
    return j < c.precision() ? c.digits()[j] : 0;
}

}  // namespace

bool ExactPoint::same_point(const ExactPoint& o) const {
    if (prime() != o.prime() || coords_.size() != o.coords_.size()) return false;
    std::size_t q = std::max(precision_max(), o.precision_max());
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            if (padded_digit(coords_[i], j) != padded_digit(o.coords_[i], j)) return false;
        }
    }
    return true;
}

bool ExactPoint::operator<(const ExactPoint& o) const {
    if (coords_.size() != o.coords_.size()) return coords_.size() < o.coords_.size();
    std::size_t q = std::max(precision_max(), o.precision_max());
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        for (std::size_t j = q; j-- > 0;) {
            std::uint32_t a = padded_digit(coords_[i], j), b = padded_digit(o.coords_[i], j);
            if (a != b) return a < b;
        }
    }
    return false;
}

std::size_t ExactPoint::precision_max() const {
    std::size_t q = 0;
    for (const auto& c : coords_) q = std::max(q, c.precision());
    return q;
}

ExactPoint ExactPoint::padded_to(std::size_t precision) const {
    if (precision > PadicApprox::kMaxPrecision) {
        throw std::invalid_argument("point precision exceeds cap");
    }
    std::vector<PadicApprox> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_) {
        if (c.precision() >= precision) {
            out.push_back(c);
        } else {
            std::vector<std::uint32_t> digits(c.digits());
            digits.resize(precision, 0);
            out.emplace_back(prime(), 0, std::move(digits));
        }
    }
    return ExactPoint(std::move(out));
}

ExactPoint ExactPoint::zero(std::int64_t p, int n, std::size_t precision) {
    std::vector<PadicApprox> coords(static_cast<std::size_t>(n),
                                    PadicApprox::zero(p, precision));
    return ExactPoint(std::move(coords));
}

ExactPoint ExactPoint::from_integers(std::int64_t p, const std::vector<std::int64_t>& coords,
                                     std::size_t precision) {
    std::vector<PadicApprox> out;
    out.reserve(coords.size());
    for (std::int64_t c : coords) {
        out.push_back(PadicApprox::from_integer(p, BigInt(c), precision));
    }
    return ExactPoint(std::move(out));
}

void WindowSet::validate() const {
    if (scale < 0) throw std::invalid_argument("scale must be >= 0");
    core.validate();
    auto check_point = [&](const ExactPoint& x) {
        if (x.prime() != core.p || x.dim() != core.n) {
            throw std::invalid_argument("prime/dimension mismatch");
        }
        if (x.precision() < static_cast<std::size_t>(core.level)) {
            throw std::invalid_argument("point precision below set level");
        }
    };
    for (const auto& x : punctures_removed) check_point(x);
    for (const auto& x : points_added) {
        check_point(x);
        if (core.contains(x.residue_at(core.level))) {
            throw std::invalid_argument("added point lies inside the core");
        }
    }
}

WindowSet WindowSet::from_core(CylinderSet core, std::int64_t scale, bool tail) {
    WindowSet s{scale, std::move(core), {}, {}, tail};
    s.validate();
    return s;
}

bool window_member(const WindowSet& s, const ExactPoint& x) {
    ResiduePoint r = x.residue_at(s.core.level);
    if (s.core.contains(r)) {
        for (const auto& q : s.punctures_removed) {
            if (x.same_point(q)) return false;
        }
        return true;
    }
    for (const auto& a : s.points_added) {
        if (x.same_point(a)) return true;
    }
    return false;
}

namespace {

WindowSet rescale_window(const WindowSet& s, std::int64_t to_scale, std::size_t cap) {
    std::int64_t d = to_scale - s.scale;
    if (d == 0) return s;
    if (d < 0) throw std::invalid_argument("rescale must not shrink the window");

    int new_level = s.core.level + static_cast<int>(d);
    std::uint64_t up = pow_u64_checked(s.core.p, static_cast<int>(d), "level too deep to enumerate");
    (void)pow_u64_checked(s.core.p, new_level, "level too deep to enumerate");

    std::vector<ResiduePoint> residues;
    residues.reserve(s.core.residues.size());
    for (const auto& r : s.core.residues) {
        ResiduePoint nr(r);
        for (auto& c : nr) c *= up;
        residues.push_back(std::move(nr));
    }
    std::sort(residues.begin(), residues.end());
    CylinderSet core{s.core.p, s.core.n, new_level, std::move(residues)};

    if (s.tail) {
        // Points between the old window and the new one now belong to the
        // representable part of the set.
        auto everything = all_residues(s.core.p, s.core.n, new_level, cap);
        std::vector<ResiduePoint> between;
        for (const auto& r : everything) {
            bool inside_old = true;
            for (std::uint64_t c : r) {
                if (c % up != 0) {
                    inside_old = false;
                    break;
                }
            }
            if (!inside_old) between.push_back(r);
        }
        core = cylinder_union(core, CylinderSet{s.core.p, s.core.n, new_level, std::move(between)},
                              cap);
    }

    std::vector<ExactPoint> punct, added;
    for (const auto& x : s.punctures_removed) punct.push_back(x.rescaled_up(d));
    for (const auto& x : s.points_added) added.push_back(x.rescaled_up(d));
    return WindowSet{to_scale, std::move(core), std::move(punct), std::move(added), s.tail};
}

void sort_points(std::vector<ExactPoint>& pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const ExactPoint& a, const ExactPoint& b) { return a.same_point(b); }),
              pts.end());
}

WindowSet combine(const WindowSet& a, const WindowSet* b,
                  const std::function<bool(bool, bool)>& op, std::size_t cap) {
    a.validate();
    std::int64_t scale = a.scale;
    if (b) {
        b->validate();
        if (a.core.p != b->core.p || a.core.n != b->core.n) {
            throw std::invalid_argument("prime/dimension mismatch");
        }
        scale = std::max(a.scale, b->scale);
    }
    WindowSet x = rescale_window(a, scale, cap);
    WindowSet y;
    int level = x.core.level;
    if (b) {
        y = rescale_window(*b, scale, cap);
        level = std::max(level, y.core.level);
        y.core = refined(y.core, level, cap);
    }
    x.core = refined(x.core, level, cap);

    CylinderSet base_core;
    bool base_tail;
    if (b) {
        bool keep_union = op(true, false);  // distinguishes union from intersection
        base_core = keep_union ? cylinder_union(x.core, y.core, cap)
                               : cylinder_intersect(x.core, y.core, cap);
        base_tail = op(x.tail, y.tail);
    } else {
        base_core = cylinder_complement(x.core, cap);
        base_tail = op(x.tail, false);
    }

    std::vector<ExactPoint> candidates;
    auto push_all = [&](const std::vector<ExactPoint>& v) {
        candidates.insert(candidates.end(), v.begin(), v.end());
    };
    push_all(x.punctures_removed);
    push_all(x.points_added);
    if (b) {
        push_all(y.punctures_removed);
        push_all(y.points_added);
    }
    sort_points(candidates);

    std::vector<ExactPoint> punct, added;
    for (const auto& pt : candidates) {
        bool mem = b ? op(window_member(x, pt), window_member(y, pt))
                     : op(window_member(x, pt), false);
        bool base = base_core.contains(pt.residue_at(level));
        // Materialize digits down to the reconciled level so the output
        // keeps the precision >= level invariant.
        if (mem && !base) added.push_back(pt.padded_to(static_cast<std::size_t>(level)));
        if (!mem && base) punct.push_back(pt.padded_to(static_cast<std::size_t>(level)));
    }
    sort_points(punct);
    sort_points(added);

    WindowSet out{scale, std::move(base_core), std::move(punct), std::move(added), base_tail};
    out.validate();
    return out;
}

}  // namespace

WindowSet window_union(const WindowSet& a, const WindowSet& b, std::size_t cap) {
    return combine(a, &b, [](bool u, bool v) { return u || v; }, cap);
}

WindowSet window_intersect(const WindowSet& a, const WindowSet& b, std::size_t cap) {
    return combine(a, &b, [](bool u, bool v) { return u && v; }, cap);
}

WindowSet window_complement(const WindowSet& s, std::size_t cap) {
    return combine(s, nullptr, [](bool u, bool) { return !u; }, cap);
}

bool is_closed(const WindowSet& s) {
    for (const auto& q : s.punctures_removed) {
        if (s.core.contains(q.residue_at(s.core.level))) return false;
    }
    return true;
}

bool is_bounded(const WindowSet& s) { return !s.tail; }

bool is_definably_compact(const WindowSet& s) { return is_closed(s) && is_bounded(s); }

std::vector<std::size_t> compact_locus(const std::vector<WindowSet>& family) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (is_definably_compact(family[i])) out.push_back(i);
    }
    return out;
}

void GammaExhaustion::validate() const {
    if (components.empty()) throw std::invalid_argument("exhaustion needs a component");
    for (const auto& c : components) {
        if (c.center.prime() != p || c.center.dim() != n) {
            throw std::invalid_argument("prime/dimension mismatch");
        }
    }
}

WindowSet GammaExhaustion::level_set(std::int64_t gamma, std::size_t cap) const {
    validate();
    std::optional<WindowSet> acc;
    for (const auto& comp : components) {
        std::int64_t g = gamma + comp.radius_offset;
        WindowSet box;
        if (g >= 0) {
            box = WindowSet::from_core(CylinderSet::full(p, n, 0), g);
        } else {
            int lvl = static_cast<int>(-g);
            CylinderSet core{p, n, lvl, {comp.center.residue_at(lvl)}};
            box = WindowSet::from_core(std::move(core));
        }
        acc = acc ? window_union(*acc, box, cap) : box;
    }
    return *acc;
}

GammaExhaustion GammaExhaustion::standard(std::int64_t p, int n, std::size_t center_precision) {
    GammaExhaustion e{p, n, {Component{ExactPoint::zero(p, n, center_precision), 0}}};
    return e;
}

GammaExhaustion exhaustion_union(const std::vector<GammaExhaustion>& parts) {
    if (parts.empty()) throw std::invalid_argument("exhaustion union needs an argument");
    GammaExhaustion out{parts.front().p, parts.front().n, {}};
    for (const auto& e : parts) {
        e.validate();
        if (e.p != out.p || e.n != out.n) throw std::invalid_argument("prime/dimension mismatch");
        out.components.insert(out.components.end(), e.components.begin(), e.components.end());
    }
    std::sort(out.components.begin(), out.components.end(),
              [](const GammaExhaustion::Component& a, const GammaExhaustion::Component& b) {
                  if (a.radius_offset != b.radius_offset) return a.radius_offset < b.radius_offset;
                  return a.center < b.center;
              });
    out.components.erase(
        std::unique(out.components.begin(), out.components.end(),
                    [](const GammaExhaustion::Component& a, const GammaExhaustion::Component& b) {
                        return a.radius_offset == b.radius_offset && a.center.same_point(b.center);
                    }),
        out.components.end());
    return out;
}

namespace {

int trailing_valuation(std::uint64_t w, std::int64_t p, int level) {
    if (w == 0) return level;
    int v = 0;
    while (w % static_cast<std::uint64_t>(p) == 0) {
        w /= static_cast<std::uint64_t>(p);
        ++v;
    }
    return v;
}

}  // namespace

BoundResult bounded_by(const WindowSet& d, const GammaExhaustion& e) {
    d.validate();
    e.validate();
    if (d.core.p != e.p || d.core.n != e.n) throw std::invalid_argument("prime/dimension mismatch");
    if (d.tail) return BoundResult::unbounded();
    if (d.content_empty()) return BoundResult::empty_set();

    const int m = d.core.level;
    const std::int64_t L = d.scale;
    std::uint64_t mod = d.core.coord_mod();

    // Center coordinates expressed in the set's rescaled frame.
    std::vector<ExactPoint> centers;
    centers.reserve(e.components.size());
    for (const auto& comp : e.components) centers.push_back(comp.center.rescaled_up(L));

    std::int64_t least = INT64_MIN;

    auto fold_components = [&](const std::function<std::int64_t(std::size_t)>& gamma_for_comp) {
        std::int64_t best = INT64_MAX;
        for (std::size_t j = 0; j < e.components.size(); ++j) {
            best = std::min(best, gamma_for_comp(j));
        }
        least = std::max(least, best);
    };

    for (const auto& r : d.core.residues) {
        fold_components([&](std::size_t j) {
            ResiduePoint c = centers[j].residue_at(m);
            int min_val = m;
            for (int i = 0; i < d.core.n; ++i) {
                std::uint64_t w = (r[static_cast<std::size_t>(i)] + mod -
                                   c[static_cast<std::size_t>(i)]) %
                                  mod;
                min_val = std::min(min_val, trailing_valuation(w, d.core.p, m));
            }
            return -static_cast<std::int64_t>(min_val) + L - e.components[j].radius_offset;
        });
    }

    for (const auto& x : d.points_added) {
        fold_components([&](std::size_t j) {
            std::int64_t min_lb = INT64_MAX;
            for (int i = 0; i < d.core.n; ++i) {
                Valuation v = sub(x.coords()[static_cast<std::size_t>(i)],
                                  centers[j].coords()[static_cast<std::size_t>(i)])
                                  .val();
                min_lb = std::min(min_lb, v.lower_bound());
            }
            return -min_lb + L - e.components[j].radius_offset;
        });
    }

    return BoundResult::bounded(least);
}

}  // namespace pvl
