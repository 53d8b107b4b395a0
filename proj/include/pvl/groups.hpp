#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pvl/definable_sets.hpp"
#include "pvl/rational.hpp"
#include "pvl/rng.hpp"

namespace pvl {

inline constexpr std::uint64_t kDefaultElementCap = 1'000'000;

enum class GroupKind { Additive, Units, PrincipalUnits, Heisenberg };

std::string kind_name(GroupKind k);
GroupKind kind_from_name(const std::string& name);

// One of four concrete compact groups with carrier inside Z_p^n:
// (Z_p^n, +), the units Z_p^x, the principal units 1 + pZ_p, and the
// 3x3 upper unitriangular group over Z_p as coordinate triples.
// Coordinatewise reduction mod p^m is a group homomorphism on each.
struct GroupScheme {
    GroupKind kind = GroupKind::Additive;
    std::int64_t p = 2;
    int n = 1;  // used by Additive; fixed to 1/1/3 for the others

    int carrier_dim() const;
    void validate() const;
};

// The group reduced mod p^m: an enumerated carrier plus the induced exact
// group structure. Elements are mixed-radix codes over p^m per coordinate.
// Immutable and safe to share across threads.
class FiniteQuotient {
public:
    FiniteQuotient(GroupScheme scheme, int level, std::uint64_t element_cap = kDefaultElementCap);

    const GroupScheme& scheme() const { return scheme_; }
    int level() const { return level_; }
    std::int64_t p() const { return scheme_.p; }
    int dim() const { return scheme_.carrier_dim(); }
    std::uint64_t coord_mod() const { return coord_mod_; }

    const std::vector<std::uint64_t>& elements() const { return elements_; }
    std::uint64_t order() const { return elements_.size(); }

    std::uint64_t op(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t inv(std::uint64_t a) const;
    std::uint64_t id() const;

    std::uint64_t encode(const ResiduePoint& r) const;
    ResiduePoint decode(std::uint64_t code) const;
    bool carrier_contains(std::uint64_t code) const;
    std::size_t index_of(std::uint64_t code) const;

    // pi_{m -> m'}: coordinatewise reduction onto a coarser quotient.
    std::uint64_t reduce_to(const FiniteQuotient& coarser, std::uint64_t code) const;

private:
    GroupScheme scheme_;
    int level_;
    std::uint64_t coord_mod_;
    std::vector<std::uint64_t> elements_;
    std::unordered_map<std::uint64_t, std::size_t> index_;  // only for sparse carriers
    bool dense_ = false;
};

// |D n G| / |G| with D refined to the quotient level; D must sit inside
// the carrier.
Rat haar_measure(const FiniteQuotient& q, const CylinderSet& d);

CylinderSet translate_set(const FiniteQuotient& q, std::uint64_t a, const CylinderSet& d);

std::vector<std::uint64_t> cylinder_to_codes(const FiniteQuotient& q, const CylinderSet& d);
CylinderSet codes_to_cylinder(const FiniteQuotient& q, std::vector<std::uint64_t> codes);

// Uniform draws from the carrier, fully determined by the seed. Stateful;
// derive one per thread via derive_seed.
class HaarSampler {
public:
    HaarSampler(const FiniteQuotient& q, std::uint64_t seed) : q_(&q), rng_(seed) {}

    std::uint64_t draw() { return q_->elements()[rng_.below(q_->order())]; }

    std::vector<std::uint64_t> draw_many(std::size_t count) {
        std::vector<std::uint64_t> out(count);
        for (auto& x : out) x = draw();
        return out;
    }

private:
    const FiniteQuotient* q_;
    Mix64 rng_;
};

}  // namespace pvl
