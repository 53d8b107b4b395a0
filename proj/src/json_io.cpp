#include "pvl/json_io.hpp"

#include <sstream>

namespace pvl {

namespace {

void require_fields(const Json& j, std::initializer_list<const char*> fields) {
    for (const char* f : fields) {
        if (!j.contains(f)) {
            throw std::invalid_argument(std::string("missing field: ") + f);
        }
    }
}

}  // namespace

Json padic_to_json(const PadicApprox& x) {
    return Json{{"p", x.prime()},
                {"shift", x.shift()},
                {"digits", x.digits()},
                {"precision", x.precision()}};
}

PadicApprox padic_from_json(const Json& j) {
    require_fields(j, {"p", "shift", "digits"});
    auto digits = j.at("digits").get<std::vector<std::uint32_t>>();
    if (j.contains("precision") && j.at("precision").get<std::size_t>() != digits.size()) {
        throw std::invalid_argument("declared precision disagrees with digit count");
    }
    return PadicApprox(j.at("p").get<std::int64_t>(), j.at("shift").get<std::int64_t>(),
                       std::move(digits));
}

Json point_to_json(const ExactPoint& x) {
    Json arr = Json::array();
    for (const auto& c : x.coords()) arr.push_back(padic_to_json(c));
    return arr;
}

ExactPoint point_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("point must be a nonempty array");
    std::vector<PadicApprox> coords;
    coords.reserve(j.size());
    for (const auto& c : j) coords.push_back(padic_from_json(c));
    return ExactPoint(std::move(coords));
}

Json cylinder_to_json(const CylinderSet& d) {
    return Json{{"p", d.p}, {"n", d.n}, {"level", d.level}, {"residues", d.residues}};
}

CylinderSet cylinder_from_json(const Json& j) {
    require_fields(j, {"p", "n", "level", "residues"});
    CylinderSet d{j.at("p").get<std::int64_t>(), j.at("n").get<int>(),
                  j.at("level").get<int>(),
                  j.at("residues").get<std::vector<ResiduePoint>>()};
    std::sort(d.residues.begin(), d.residues.end());
    d.residues.erase(std::unique(d.residues.begin(), d.residues.end()), d.residues.end());
    d.validate();
    return d;
}

Json window_to_json(const WindowSet& s) {
    Json punct = Json::array();
    for (const auto& x : s.punctures_removed) punct.push_back(point_to_json(x));
    Json added = Json::array();
    for (const auto& x : s.points_added) added.push_back(point_to_json(x));
    return Json{{"p", s.core.p},       {"n", s.core.n},
                {"scale", s.scale},    {"level", s.core.level},
                {"residues", s.core.residues},
                {"punctures_removed", punct},
                {"points_added", added},
                {"tail", s.tail}};
}

WindowSet window_from_json(const Json& j) {
    require_fields(j, {"p", "n", "scale", "level", "residues", "tail"});
    WindowSet s;
    s.scale = j.at("scale").get<std::int64_t>();
    s.core = cylinder_from_json(
        Json{{"p", j.at("p")}, {"n", j.at("n")}, {"level", j.at("level")},
             {"residues", j.at("residues")}});
    s.tail = j.at("tail").get<bool>();
    if (j.contains("punctures_removed")) {
        for (const auto& x : j.at("punctures_removed")) {
            s.punctures_removed.push_back(point_from_json(x));
        }
    }
    if (j.contains("points_added")) {
        for (const auto& x : j.at("points_added")) s.points_added.push_back(point_from_json(x));
    }
    s.validate();
    return s;
}

Json quotient_descriptor_to_json(const QuotientDescriptor& d) {
    Json j{{"kind", kind_name(d.scheme.kind)}, {"p", d.scheme.p}, {"level", d.level}};
    if (d.scheme.kind == GroupKind::Additive) j["n"] = d.scheme.n;
    return j;
}

QuotientDescriptor quotient_descriptor_from_json(const Json& j) {
    require_fields(j, {"kind", "p", "level"});
    QuotientDescriptor d;
    d.scheme.kind = kind_from_name(j.at("kind").get<std::string>());
    d.scheme.p = j.at("p").get<std::int64_t>();
    d.scheme.n = j.value("n", 1);
    d.level = j.at("level").get<int>();
    d.scheme.validate();
    return d;
}

Json set_system_to_json(const SetSystem& s) {
    Json family = Json::array();
    for (const auto& m : s.family) {
        family.push_back(Json{{"label", m.label}, {"elems", m.elems}});
    }
    return Json{{"ground", s.ground},
                {"family", family},
                {"translation_closed", s.translation_closed}};
}

SetSystem set_system_from_json(const Json& j) {
    require_fields(j, {"ground", "family"});
    SetSystem s;
    s.ground = j.at("ground").get<std::vector<std::uint64_t>>();
    std::sort(s.ground.begin(), s.ground.end());
    for (const auto& m : j.at("family")) {
        require_fields(m, {"label", "elems"});
        SetSystem::Member member{m.at("label").get<std::string>(),
                                 m.at("elems").get<std::vector<std::uint64_t>>()};
        std::sort(member.elems.begin(), member.elems.end());
        s.family.push_back(std::move(member));
    }
    s.translation_closed = j.value("translation_closed", false);
    s.validate();
    return s;
}

Json net_report_to_json(const NetReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back(Json{{"trial", row.trial},
                            {"n_draws", row.n_draws},
                            {"missed_count", row.missed_count},
                            {"max_discrepancy", rational_to_string(row.max_discrepancy)}});
    }
    return Json{{"schema", 1},
                {"n_draws", r.n_draws},
                {"trials", r.trials},
                {"failure_rate", rational_to_string(r.failure_rate)},
                {"discrepancy_exceed_rate", rational_to_string(r.discrepancy_exceed_rate)},
                {"missed", r.missed},
                {"sample", r.sample},
                {"rows", rows}};
}

std::string net_report_to_csv(const NetReport& r) {
    std::ostringstream out;
    out << "trial,N,missed_count,max_discrepancy\n";
    for (const auto& row : r.rows) {
        out << row.trial << ',' << row.n_draws << ',' << row.missed_count << ','
            << rational_to_string(row.max_discrepancy) << '\n';
    }
    return out.str();
}

}  // namespace pvl
