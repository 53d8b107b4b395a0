#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvl/padic.hpp"
#include "pvl/rational.hpp"

namespace pvl {

// Thrown when an operation would enumerate more residues or elements than
// the configured cap allows.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kResidueCap = 1u << 21;

using ResiduePoint = std::vector<std::uint64_t>;

// Preimage of a residue set under coordinatewise reduction Z_p^n -> (Z/p^m)^n.
// level 0 is legal: the single all-zero tuple then denotes the full space.
struct CylinderSet {
    std::int64_t p = 2;
    int n = 1;
    int level = 0;
    std::vector<ResiduePoint> residues;  // sorted, unique, coords < p^level

    void validate() const;
    std::uint64_t coord_mod() const;  // p^level
    bool contains(const ResiduePoint& r) const;
    bool empty() const { return residues.empty(); }

    static CylinderSet full(std::int64_t p, int n, int level);
    static CylinderSet none(std::int64_t p, int n, int level);
};

Rat measure(const CylinderSet& d);

CylinderSet refined(const CylinderSet& d, int to_level, std::size_t cap = kResidueCap);
CylinderSet cylinder_union(const CylinderSet& a, const CylinderSet& b, std::size_t cap = kResidueCap);
CylinderSet cylinder_intersect(const CylinderSet& a, const CylinderSet& b, std::size_t cap = kResidueCap);
CylinderSet cylinder_complement(const CylinderSet& d, std::size_t cap = kResidueCap);
bool cylinder_subset(const CylinderSet& a, const CylinderSet& b, std::size_t cap = kResidueCap);

// An exact point of Z_p^n. Coordinates are stored shift-0; constructing
// from a scalar with positive shift requires the value to be integral.
// A point denotes the zero-extension of its digits, so every stored point
// is a concrete element of Z_p^n and identity is decidable: two points are
// the same exactly when their padded digit strings agree.
class ExactPoint {
public:
    explicit ExactPoint(std::vector<PadicApprox> coords);

    const std::vector<PadicApprox>& coords() const { return coords_; }
    std::int64_t prime() const { return coords_.front().prime(); }
    int dim() const { return static_cast<int>(coords_.size()); }
    std::size_t precision() const;      // min across coordinates
    std::size_t precision_max() const;  // max across coordinates

    // Digits beyond the stored precision read as zero.
    ResiduePoint residue_at(int level) const;
    ExactPoint rescaled_up(std::int64_t d) const;  // multiply coords by p^d
    ExactPoint padded_to(std::size_t precision) const;  // materialize zero digits

    bool same_point(const ExactPoint& o) const;
    bool operator==(const ExactPoint& o) const = default;
    bool operator<(const ExactPoint& o) const;

    static ExactPoint zero(std::int64_t p, int n, std::size_t precision);
    static ExactPoint from_integers(std::int64_t p, const std::vector<std::int64_t>& coords,
                                    std::size_t precision);

private:
    std::vector<PadicApprox> coords_;
};

// A definable subset of Q_p^n in window form: a cylinder core inside the
// window p^{-scale} Z_p^n (stored rescaled to Z_p^n), finitely many exact
// points removed from the core, finitely many added outside it, and an
// optional tail consisting of everything outside the window.
struct WindowSet {
    std::int64_t scale = 0;  // L >= 0
    CylinderSet core;
    std::vector<ExactPoint> punctures_removed;
    std::vector<ExactPoint> points_added;
    bool tail = false;

    void validate() const;
    bool content_empty() const { return core.empty() && points_added.empty() && !tail; }

    static WindowSet from_core(CylinderSet core, std::int64_t scale = 0, bool tail = false);
};

// Membership of an exact point of the (rescaled) window.
bool window_member(const WindowSet& s, const ExactPoint& x);

WindowSet window_union(const WindowSet& a, const WindowSet& b, std::size_t cap = kResidueCap);
WindowSet window_intersect(const WindowSet& a, const WindowSet& b, std::size_t cap = kResidueCap);
WindowSet window_complement(const WindowSet& s, std::size_t cap = kResidueCap);

// A cylinder core is clopen and Z_p^n has no isolated points, so the set
// fails to be closed exactly when a puncture removes an interior point of
// the core. Added isolated points and the tail never hurt.
bool is_closed(const WindowSet& s);
bool is_bounded(const WindowSet& s);
bool is_definably_compact(const WindowSet& s);

std::vector<std::size_t> compact_locus(const std::vector<WindowSet>& family);

// Increasing family gamma -> W_gamma of clopen bounded sets exhausting the
// space. Components are coordinate boxes v(x - c) >= -(gamma + offset);
// the standard family is the single zero-centered box.
struct GammaExhaustion {
    struct Component {
        ExactPoint center;
        std::int64_t radius_offset = 0;
    };

    std::int64_t p = 2;
    int n = 1;
    std::vector<Component> components;

    void validate() const;
    WindowSet level_set(std::int64_t gamma, std::size_t cap = kResidueCap) const;

    static GammaExhaustion standard(std::int64_t p, int n, std::size_t center_precision = 16);
};

GammaExhaustion exhaustion_union(const std::vector<GammaExhaustion>& parts);

struct BoundResult {
    enum class Kind { Bounded, EmptySet, Unbounded };
    Kind kind;
    std::int64_t gamma = 0;  // meaningful only when kind == Bounded

    static BoundResult bounded(std::int64_t g) { return {Kind::Bounded, g}; }
    static BoundResult empty_set() { return {Kind::EmptySet, 0}; }
    static BoundResult unbounded() { return {Kind::Unbounded, 0}; }
};

// Least gamma with D contained in W_gamma, computed per residue class and
// added point from exact coordinate valuations. Valuations of added points
// that are only bounded below are used as bounds, so the result can sit
// above the true least when point precision runs out; containment and
// monotone consistency always hold.
BoundResult bounded_by(const WindowSet& d, const GammaExhaustion& e);

}  // namespace pvl
