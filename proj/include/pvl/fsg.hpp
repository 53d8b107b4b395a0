#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pvl/groups.hpp"
#include "pvl/vc_net.hpp"

namespace pvl {

struct CoverCertificate {
    std::vector<std::uint64_t> translates;
    bool covered = false;
    std::optional<std::uint64_t> lower_bound;  // ceil(1/mu(D)); absent for empty D

    std::uint64_t size() const { return translates.size(); }
};

// Greedy max-coverage selection of left translates of D until the carrier
// is covered or max_translates is exhausted. Every element contributes
// exactly |D| candidate translates, so each greedy round removes at least
// a mu(D) fraction of what remains; the certificate therefore satisfies
// size <= lower_bound * (1 + ln |G|).
CoverCertificate greedy_cover(const FiniteQuotient& q, const CylinderSet& d,
                              std::uint64_t max_translates);

struct FsgWitness {
    std::vector<std::uint64_t> net;
    Rat epsilon;
    std::string family_descriptor;
};

struct FsgWitnessResult {
    std::optional<FsgWitness> witness;   // present when no obligated set is missed
    std::vector<std::string> missed;     // offending labels otherwise (caller may reseed)
    std::uint64_t n_draws = 0;
    int vc_dim_used = 0;
    std::uint64_t obligations = 0;       // family members with measure > epsilon
};

// Draws net_size(vc_dim(family), epsilon) Haar samples and checks that
// every member of measure > epsilon is hit. The family must be closed
// under left translation (verified), so a successful net also meets every
// translate g*D of every obligated member. epsilon >= 1 yields a vacuous
// witness with no obligations and no draws.
FsgWitnessResult fsg_witness(const FiniteQuotient& q, const SetSystem& family,
                             const Rat& epsilon, std::uint64_t seed);

struct EasyDirectionReport {
    std::uint64_t outside_size = 0;       // |carrier \ box|
    bool outside_misses_points = false;   // the complement avoids the point set
    CoverCertificate box_cover;           // translates of the box covering the carrier
    std::size_t family_size = 0;
};

// Desk-scale version of the compactness argument: points sit inside a
// bounded box, the complement of the box misses them, and the box itself
// covers the group by finitely many translates.
EasyDirectionReport easy_direction_check(const FiniteQuotient& q, const SetSystem& family,
                                         const std::vector<std::uint64_t>& points,
                                         const CylinderSet& gamma_box);

}  // namespace pvl
