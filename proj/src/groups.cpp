#include "pvl/groups.hpp"

#include <algorithm>
#include <stdexcept>

namespace pvl {

std::string kind_name(GroupKind k) {
    switch (k) {
        case GroupKind::Additive: return "additive";
        case GroupKind::Units: return "units";
        case GroupKind::PrincipalUnits: return "principal_units";
        case GroupKind::Heisenberg: return "heisenberg";
    }
    throw std::logic_error("unreachable");
}

GroupKind kind_from_name(const std::string& name) {
    if (name == "additive") return GroupKind::Additive;
    if (name == "units") return GroupKind::Units;
    if (name == "principal_units") return GroupKind::PrincipalUnits;
    if (name == "heisenberg") return GroupKind::Heisenberg;
    throw std::invalid_argument("unknown group kind: " + name);
}

int GroupScheme::carrier_dim() const {
    switch (kind) {
        case GroupKind::Additive: return n;
        case GroupKind::Units:
        case GroupKind::PrincipalUnits: return 1;
        case GroupKind::Heisenberg: return 3;
    }
    throw std::logic_error("unreachable");
}

void GroupScheme::validate() const {
    if (p < 2) throw std::invalid_argument("prime must be >= 2");
    if (kind == GroupKind::Additive && (n < 1 || n > 8)) {
        throw std::invalid_argument("additive dimension must be in [1, 8]");
    }
}

namespace {

std::uint64_t pow_u64(std::int64_t p, int e) {
    unsigned __int128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= static_cast<std::uint64_t>(p);
        if (r > UINT64_MAX) throw CapExceeded("cap exceeded");
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % mod);
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t mod) {
    std::int64_t r0 = static_cast<std::int64_t>(mod), r1 = static_cast<std::int64_t>(a % mod);
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw std::domain_error("element not invertible");
    s0 %= static_cast<std::int64_t>(mod);
    if (s0 < 0) s0 += static_cast<std::int64_t>(mod);
    return static_cast<std::uint64_t>(s0);
}

}  // namespace

FiniteQuotient::FiniteQuotient(GroupScheme scheme, int level, std::uint64_t element_cap)
    : scheme_(scheme), level_(level) {
    scheme_.validate();
    const int min_level = scheme_.kind == GroupKind::PrincipalUnits ? 2 : 1;
    if (level_ < min_level) {
        throw std::invalid_argument("level too small for this group kind");
    }
    coord_mod_ = pow_u64(scheme_.p, level_);

    const int dim = scheme_.carrier_dim();
    unsigned __int128 count = 1;
    switch (scheme_.kind) {
        case GroupKind::Additive:
        case GroupKind::Heisenberg:
            for (int i = 0; i < dim; ++i) count *= coord_mod_;
            break;
        case GroupKind::Units:
            count = coord_mod_ - coord_mod_ / static_cast<std::uint64_t>(scheme_.p);
            break;
        case GroupKind::PrincipalUnits:
            count = coord_mod_ / static_cast<std::uint64_t>(scheme_.p);
            break;
    }
    if (count > element_cap) throw CapExceeded("cap exceeded");
    // Codes must fit a single machine word.
    for (int i = 0; i < dim; ++i) (void)pow_u64(scheme_.p, level_ * (i + 1));

    elements_.reserve(static_cast<std::size_t>(count));
    switch (scheme_.kind) {
        case GroupKind::Additive:
        case GroupKind::Heisenberg: {
            std::uint64_t total = 1;
            for (int i = 0; i < dim; ++i) total *= coord_mod_;
            for (std::uint64_t c = 0; c < total; ++c) elements_.push_back(c);
            dense_ = true;
            break;
        }
        case GroupKind::Units: {
            for (std::uint64_t c = 0; c < coord_mod_; ++c) {
                if (c % static_cast<std::uint64_t>(scheme_.p) != 0) elements_.push_back(c);
            }
            break;
        }
        case GroupKind::PrincipalUnits: {
            for (std::uint64_t c = 1; c < coord_mod_; c += static_cast<std::uint64_t>(scheme_.p)) {
                elements_.push_back(c);
            }
            break;
        }
    }
    if (!dense_) {
        index_.reserve(elements_.size());
        for (std::size_t i = 0; i < elements_.size(); ++i) index_[elements_[i]] = i;
    }
}

std::uint64_t FiniteQuotient::op(std::uint64_t a, std::uint64_t b) const {
    switch (scheme_.kind) {
        case GroupKind::Additive: {
            std::uint64_t out = 0, mult = 1;
            for (int i = 0; i < scheme_.n; ++i) {
                std::uint64_t ca = a % coord_mod_, cb = b % coord_mod_;
                a /= coord_mod_;
                b /= coord_mod_;
                out += ((ca + cb) % coord_mod_) * mult;
                mult *= coord_mod_;
            }
            return out;
        }
        case GroupKind::Units:
        case GroupKind::PrincipalUnits:
            return mul_mod(a, b, coord_mod_);
        case GroupKind::Heisenberg: {
            std::uint64_t a1 = a % coord_mod_, a2 = (a / coord_mod_) % coord_mod_,
                          a3 = a / (coord_mod_ * coord_mod_);
            std::uint64_t b1 = b % coord_mod_, b2 = (b / coord_mod_) % coord_mod_,
                          b3 = b / (coord_mod_ * coord_mod_);
            std::uint64_t c1 = (a1 + b1) % coord_mod_;
            std::uint64_t c2 = (a2 + b2) % coord_mod_;
            std::uint64_t c3 = (a3 + b3 + mul_mod(a1, b2, coord_mod_)) % coord_mod_;
            return c1 + c2 * coord_mod_ + c3 * coord_mod_ * coord_mod_;
        }
    }
    throw std::logic_error("unreachable");
}

std::uint64_t FiniteQuotient::inv(std::uint64_t a) const {
    switch (scheme_.kind) {
        case GroupKind::Additive: {
            std::uint64_t out = 0, mult = 1;
            for (int i = 0; i < scheme_.n; ++i) {
                std::uint64_t c = a % coord_mod_;
                a /= coord_mod_;
                out += ((coord_mod_ - c) % coord_mod_) * mult;
                mult *= coord_mod_;
            }
            return out;
        }
        case GroupKind::Units:
        case GroupKind::PrincipalUnits:
            return inv_mod(a, coord_mod_);
        case GroupKind::Heisenberg: {
            std::uint64_t a1 = a % coord_mod_, a2 = (a / coord_mod_) % coord_mod_,
                          a3 = a / (coord_mod_ * coord_mod_);
            std::uint64_t c1 = (coord_mod_ - a1) % coord_mod_;
            std::uint64_t c2 = (coord_mod_ - a2) % coord_mod_;
            std::uint64_t c3 = (coord_mod_ - a3 + mul_mod(a1, a2, coord_mod_)) % coord_mod_;
            return c1 + c2 * coord_mod_ + c3 * coord_mod_ * coord_mod_;
        }
    }
    throw std::logic_error("unreachable");
}

std::uint64_t FiniteQuotient::id() const {
    switch (scheme_.kind) {
        case GroupKind::Additive:
        case GroupKind::Heisenberg: return 0;
        case GroupKind::Units:
        case GroupKind::PrincipalUnits: return 1;
    }
    throw std::logic_error("unreachable");
}

std::uint64_t FiniteQuotient::encode(const ResiduePoint& r) const {
    if (static_cast<int>(r.size()) != dim()) {
        throw std::invalid_argument("residue tuple has wrong dimension");
    }
    std::uint64_t out = 0, mult = 1;
    for (std::uint64_t c : r) {
        if (c >= coord_mod_) throw std::invalid_argument("residue coordinate out of range");
        out += c * mult;
        mult *= coord_mod_;
    }
    return out;
}

ResiduePoint FiniteQuotient::decode(std::uint64_t code) const {
    ResiduePoint r(static_cast<std::size_t>(dim()));
    for (auto& c : r) {
        c = code % coord_mod_;
        code /= coord_mod_;
    }
    return r;
}

bool FiniteQuotient::carrier_contains(std::uint64_t code) const {
    std::uint64_t total = 1;
    for (int i = 0; i < dim(); ++i) total *= coord_mod_;
    if (code >= total) return false;
    switch (scheme_.kind) {
        case GroupKind::Additive:
        case GroupKind::Heisenberg: return true;
        case GroupKind::Units: return code % static_cast<std::uint64_t>(scheme_.p) != 0;
        case GroupKind::PrincipalUnits: return code % static_cast<std::uint64_t>(scheme_.p) == 1;
    }
    throw std::logic_error("unreachable");
}

std::size_t FiniteQuotient::index_of(std::uint64_t code) const {
    if (dense_) return static_cast<std::size_t>(code);
    auto it = index_.find(code);
    if (it == index_.end()) throw std::out_of_range("code not in carrier");
    return it->second;
}

std::uint64_t FiniteQuotient::reduce_to(const FiniteQuotient& coarser, std::uint64_t code) const {
    if (coarser.scheme_.kind != scheme_.kind || coarser.scheme_.p != scheme_.p ||
        coarser.scheme_.n != scheme_.n || coarser.level_ > level_) {
        throw std::invalid_argument("not a coarsening of this quotient");
    }
    ResiduePoint r = decode(code);
    for (auto& c : r) c %= coarser.coord_mod_;
    return coarser.encode(r);
}

std::vector<std::uint64_t> cylinder_to_codes(const FiniteQuotient& q, const CylinderSet& d) {
    d.validate();
    if (d.p != q.p() || d.n != q.dim()) throw std::invalid_argument("prime/dimension mismatch");
    if (d.level > q.level()) {
        throw std::invalid_argument("set level exceeds quotient level");
    }
    CylinderSet at_level = refined(d, q.level());
    std::vector<std::uint64_t> codes;
    codes.reserve(at_level.residues.size());
    for (const auto& r : at_level.residues) {
        std::uint64_t c = q.encode(r);
        if (!q.carrier_contains(c)) throw std::domain_error("set not contained in group");
        codes.push_back(c);
    }
    std::sort(codes.begin(), codes.end());
    return codes;
}

CylinderSet codes_to_cylinder(const FiniteQuotient& q, std::vector<std::uint64_t> codes) {
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    std::vector<ResiduePoint> residues;
    residues.reserve(codes.size());
    for (std::uint64_t c : codes) residues.push_back(q.decode(c));
    std::sort(residues.begin(), residues.end());
    return CylinderSet{q.p(), q.dim(), q.level(), std::move(residues)};
}

Rat haar_measure(const FiniteQuotient& q, const CylinderSet& d) {
    auto codes = cylinder_to_codes(q, d);
    return Rat(BigInt(codes.size()), BigInt(q.order()));
}

CylinderSet translate_set(const FiniteQuotient& q, std::uint64_t a, const CylinderSet& d) {
    if (!q.carrier_contains(a)) throw std::invalid_argument("translate not in carrier");
    auto codes = cylinder_to_codes(q, d);
    for (auto& c : codes) c = q.op(a, c);
    return codes_to_cylinder(q, std::move(codes));
}

}  // namespace pvl
