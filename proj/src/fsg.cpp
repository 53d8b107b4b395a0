#include "pvl/fsg.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace pvl {

CoverCertificate greedy_cover(const FiniteQuotient& q, const CylinderSet& d,
                              std::uint64_t max_translates) {
    auto codes = cylinder_to_codes(q, d);
    if (codes.empty()) {
        return CoverCertificate{{}, false, std::nullopt};
    }
    const std::uint64_t order = q.order();
    CoverCertificate cert;
    cert.lower_bound = (order + codes.size() - 1) / codes.size();

    std::vector<std::size_t> member_indices;
    member_indices.reserve(codes.size());
    for (std::uint64_t c : codes) member_indices.push_back(q.index_of(c));

    std::vector<bool> uncovered(order, true);
    std::uint64_t remaining = order;

    while (remaining > 0 && cert.translates.size() < max_translates) {
        std::uint64_t best_a = 0;
        std::uint64_t best_count = 0;
        bool have_best = false;
        for (std::uint64_t a : q.elements()) {
            std::uint64_t count = 0;
            for (std::uint64_t c : codes) {
                if (uncovered[q.index_of(q.op(a, c))]) ++count;
            }
            if (count > best_count) {
                best_count = count;
                best_a = a;
                have_best = true;
            }
        }
        if (!have_best) break;  // unreachable for nonempty D
        cert.translates.push_back(best_a);
        for (std::uint64_t c : codes) {
            std::size_t idx = q.index_of(q.op(best_a, c));
            if (uncovered[idx]) {
                uncovered[idx] = false;
                --remaining;
            }
        }
    }
    cert.covered = remaining == 0;
    return cert;
}

FsgWitnessResult fsg_witness(const FiniteQuotient& q, const SetSystem& family,
                             const Rat& epsilon, std::uint64_t seed) {
    family.validate();
    if (family.ground != q.elements()) {
        throw std::invalid_argument("family ground must be the quotient carrier");
    }
    if (!family.translation_closed || !verify_translation_closed(q, family)) {
        throw std::domain_error("family not translation-closed");
    }

    FsgWitnessResult result;
    for (std::size_t i = 0; i < family.family.size(); ++i) {
        if (family.member_measure(i) > epsilon) ++result.obligations;
    }

    if (epsilon >= 1) {
        // Nothing can have measure above epsilon; the empty net witnesses.
        result.witness = FsgWitness{{}, epsilon, "vacuous"};
        return result;
    }

    VcResult k = vc_dimension(family);
    if (k.at_least) throw std::domain_error("vc dimension exceeds cap");
    result.vc_dim_used = std::max(1, k.value);

    NetRequest req = NetRequest::standard(result.vc_dim_used, epsilon);
    result.n_draws = net_size(req);

    HaarSampler sampler(q, derive_seed(seed, 0));
    auto net = sampler.draw_many(result.n_draws);
    result.missed = verify_net(family, epsilon, net);
    if (result.missed.empty()) {
        result.witness = FsgWitness{std::move(net), epsilon,
                                    "family of " + std::to_string(family.family.size()) +
                                        " sets on " + kind_name(q.scheme().kind)};
    }
    return result;
}

EasyDirectionReport easy_direction_check(const FiniteQuotient& q, const SetSystem& family,
                                         const std::vector<std::uint64_t>& points,
                                         const CylinderSet& gamma_box) {
    family.validate();
    auto box_codes = cylinder_to_codes(q, gamma_box);
    std::unordered_set<std::uint64_t> in_box(box_codes.begin(), box_codes.end());
    for (std::uint64_t x : points) {
        if (!in_box.count(x)) {
            throw std::invalid_argument("points must lie inside the box");
        }
    }

    EasyDirectionReport report;
    report.family_size = family.family.size();

    report.outside_size = q.order() - box_codes.size();
    report.outside_misses_points = true;
    std::unordered_set<std::uint64_t> point_set(points.begin(), points.end());
    for (std::uint64_t e : q.elements()) {
        if (!in_box.count(e) && point_set.count(e)) {
            report.outside_misses_points = false;
            break;
        }
    }

    report.box_cover = greedy_cover(q, gamma_box, q.order());
    return report;
}

}  // namespace pvl
