#pragma once

#include <json.hpp>

#include "pvl/definable_sets.hpp"
#include "pvl/groups.hpp"
#include "pvl/padic.hpp"
#include "pvl/vc_net.hpp"

namespace pvl {

using Json = nlohmann::ordered_json;

// Wire formats. Scalars: {"p":3,"shift":0,"digits":[2,1,0],"precision":3}.
// Points are arrays of scalars, one per coordinate. Window sets are flat:
// {"p":3,"n":1,"scale":0,"level":2,"residues":[[0]],
//  "punctures_removed":[],"points_added":[],"tail":false}.

Json padic_to_json(const PadicApprox& x);
PadicApprox padic_from_json(const Json& j);

Json point_to_json(const ExactPoint& x);
ExactPoint point_from_json(const Json& j);

Json cylinder_to_json(const CylinderSet& d);
CylinderSet cylinder_from_json(const Json& j);

Json window_to_json(const WindowSet& s);
WindowSet window_from_json(const Json& j);

// {"kind":"units","p":3,"level":2}; additive takes an optional "n".
struct QuotientDescriptor {
    GroupScheme scheme;
    int level = 1;
};
Json quotient_descriptor_to_json(const QuotientDescriptor& d);
QuotientDescriptor quotient_descriptor_from_json(const Json& j);

Json set_system_to_json(const SetSystem& s);
SetSystem set_system_from_json(const Json& j);

Json net_report_to_json(const NetReport& r);
std::string net_report_to_csv(const NetReport& r);  // trial,N,missed_count,max_discrepancy

}  // namespace pvl
