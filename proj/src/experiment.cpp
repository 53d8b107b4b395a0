#include "pvl/experiment.hpp"

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "pvl/fsg.hpp"

namespace pvl {

namespace {

std::string path_str(const std::string& path, const char* field) {
    return path + "." + field;
}

const Json& step_field(const Json& step, const std::string& path, const char* field) {
    if (!step.contains(field)) {
        throw ConfigError(path_str(path, field) + ": missing");
    }
    return step.at(field);
}

Rat step_rational(const Json& step, const std::string& path, const char* field) {
    const Json& v = step_field(step, path, field);
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
    } catch (const std::invalid_argument&) {
    }
    throw ConfigError(path_str(path, field) + ": expected a rational like \"1/4\"");
}

QuotientDescriptor step_group(const Json& step, const std::string& path) {
    try {
        return quotient_descriptor_from_json(step_field(step, path, "group"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path_str(path, "group") + ": " + e.what());
    }
}

struct StepOutput {
    Json result;
    std::map<std::string, std::string> csvs;
};

StepOutput run_net_size_sweep(const Json& step, const std::string& path) {
    const Json& ks = step_field(step, path, "k");
    const Json& epss = step_field(step, path, "epsilon");
    if (!ks.is_array() || !epss.is_array()) {
        throw ConfigError(path + ": k and epsilon must be arrays");
    }
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "k,epsilon,N\n";
    for (const auto& kj : ks) {
        int k = kj.get<int>();
        for (const auto& ej : epss) {
            Rat eps = ej.is_string() ? parse_rational(ej.get<std::string>())
                                     : Rat(ej.get<std::int64_t>());
            std::uint64_t n = net_size(NetRequest::standard(k, eps));
            rows.push_back(Json{{"k", k}, {"epsilon", rational_to_string(eps)}, {"n", n}});
            csv << k << ',' << rational_to_string(eps) << ',' << n << '\n';
        }
    }
    return {Json{{"rows", rows}}, {{"net_size_sweep", csv.str()}}};
}

StepOutput run_net_experiment_step(const Json& step, const std::string& path,
                                   std::uint64_t step_seed, unsigned workers) {
    QuotientDescriptor d = step_group(step, path);
    FiniteQuotient q(d.scheme, d.level);
    SetSystem family = ball_coset_system(q);
    Rat eps = step_rational(step, path, "epsilon");
    std::uint64_t trials = step_field(step, path, "trials").get<std::uint64_t>();

    int k;
    if (step.contains("k")) {
        k = step.at("k").get<int>();
    } else {
        VcResult vc = vc_dimension(family);
        if (vc.at_least) throw VerificationFailure("vc dimension exceeds cap");
        k = std::max(1, vc.value);
    }
    NetRequest req = NetRequest::standard(k, eps);

    NetExperimentOptions opts;
    opts.workers = workers;
    if (step.contains("sample_size_override")) {
        opts.sample_size_override = step.at("sample_size_override").get<std::uint64_t>();
    }
    NetReport report = net_experiment(q, family, req, trials, step_seed, opts);

    Json summary = net_report_to_json(report);
    summary.erase("sample");
    summary.erase("rows");
    summary["k"] = k;
    summary["group"] = quotient_descriptor_to_json(d);
    return {std::move(summary), {{"net_trials", net_report_to_csv(report)}}};
}

StepOutput run_fsg_witness_step(const Json& step, const std::string& path,
                                std::uint64_t step_seed) {
    QuotientDescriptor d = step_group(step, path);
    FiniteQuotient q(d.scheme, d.level);
    SetSystem family = ball_coset_system(q);
    Rat eps = step_rational(step, path, "epsilon");

    FsgWitnessResult r = fsg_witness(q, family, eps, step_seed);
    Json result{{"group", quotient_descriptor_to_json(d)},
                {"epsilon", rational_to_string(eps)},
                {"witness_found", r.witness.has_value()},
                {"vc_dim", r.vc_dim_used},
                {"n_draws", r.n_draws},
                {"obligations", r.obligations},
                {"missed", r.missed}};
    if (step.value("require_success", false) && !r.witness.has_value()) {
        throw VerificationFailure("fsg witness missed obligated sets");
    }
    return {std::move(result), {}};
}

StepOutput run_cover_study(const Json& step, const std::string& path, std::uint64_t step_seed) {
    QuotientDescriptor d = step_group(step, path);
    FiniteQuotient q(d.scheme, d.level);
    std::uint64_t count = step_field(step, path, "count").get<std::uint64_t>();

    std::ostringstream csv;
    csv << "set,set_size,measure,lower_bound,greedy_k,covered\n";
    Json rows = Json::array();
    std::uint64_t order = q.order();
    const double harmonic_bound = 1.0 + std::log(static_cast<double>(order));

    bool all_ok = true;
    for (std::uint64_t i = 0; i < count; ++i) {
        Mix64 rng(derive_seed(step_seed, i));
        std::uint64_t size = 1 + rng.below(order);
        // Partial Fisher-Yates over element indices.
        std::vector<std::uint64_t> pool(q.elements());
        for (std::uint64_t j = 0; j < size; ++j) {
            std::uint64_t pick = j + rng.below(order - j);
            std::swap(pool[j], pool[pick]);
        }
        pool.resize(size);
        CylinderSet set = codes_to_cylinder(q, std::move(pool));

        CoverCertificate cert = greedy_cover(q, set, order);
        Rat mu = haar_measure(q, set);
        bool within_bound =
            cert.covered &&
            static_cast<double>(cert.size()) <=
                static_cast<double>(*cert.lower_bound) * harmonic_bound + 1e-9;
        all_ok = all_ok && cert.covered && cert.size() >= *cert.lower_bound && within_bound;

        rows.push_back(Json{{"set", i},
                            {"set_size", size},
                            {"measure", rational_to_string(mu)},
                            {"lower_bound", *cert.lower_bound},
                            {"greedy_k", cert.size()},
                            {"covered", cert.covered}});
        csv << i << ',' << size << ',' << rational_to_string(mu) << ',' << *cert.lower_bound
            << ',' << cert.size() << ',' << (cert.covered ? 1 : 0) << '\n';
    }
    Json result{{"group", quotient_descriptor_to_json(d)},
                {"count", count},
                {"all_certificates_ok", all_ok},
                {"rows", rows}};
    return {std::move(result), {{"cover_study", csv.str()}}};
}

StepOutput run_compact_locus_step(const Json& step, const std::string& path) {
    Json sets_json;
    if (step.contains("sets")) {
        sets_json = step.at("sets");
    } else if (step.contains("sets_file")) {
        std::ifstream in(step.at("sets_file").get<std::string>());
        if (!in) throw ConfigError(path_str(path, "sets_file") + ": cannot open");
        in >> sets_json;
    } else {
        throw ConfigError(path + ": needs sets or sets_file");
    }
    if (!sets_json.is_array()) throw ConfigError(path_str(path, "sets") + ": expected array");

    std::vector<WindowSet> family;
    for (const auto& sj : sets_json) family.push_back(window_from_json(sj));
    auto indices = compact_locus(family);

    std::ostringstream csv;
    csv << "index,definably_compact\n";
    for (std::size_t i = 0; i < family.size(); ++i) {
        bool in = std::binary_search(indices.begin(), indices.end(), i);
        csv << i << ',' << (in ? 1 : 0) << '\n';
    }
    return {Json{{"indices", indices}, {"family_size", family.size()}},
            {{"compact_locus", csv.str()}}};
}

}  // namespace

RunConfig parse_config(const Json& j) {
    RunConfig config;
    if (!j.is_object()) throw ConfigError("config: expected an object");
    if (!j.contains("pipeline")) throw ConfigError("pipeline: missing");
    if (!j.at("pipeline").is_array()) throw ConfigError("pipeline: expected array");
    config.pipeline = j.at("pipeline").get<std::vector<Json>>();
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
            throw ConfigError("seed: expected an integer");
        }
        config.seed = j.at("seed").get<std::uint64_t>();
    }
    config.out_dir = j.value("out_dir", std::string{});
    if (j.contains("workers")) {
        config.workers = j.at("workers").get<unsigned>();
        if (config.workers < 1) throw ConfigError("workers: must be >= 1");
    }
    for (std::size_t i = 0; i < config.pipeline.size(); ++i) {
        const std::string path = "pipeline[" + std::to_string(i) + "]";
        if (!config.pipeline[i].is_object()) throw ConfigError(path + ": expected an object");
        if (!config.pipeline[i].contains("op")) throw ConfigError(path + ".op: missing");
    }
    return config;
}

RunOutputs run_experiment(const RunConfig& config) {
    RunOutputs outputs;
    Json steps = Json::array();

    for (std::size_t i = 0; i < config.pipeline.size(); ++i) {
        const Json& step = config.pipeline[i];
        const std::string path = "pipeline[" + std::to_string(i) + "]";
        const std::string op = step.at("op").get<std::string>();
        const std::uint64_t step_seed = derive_seed(config.seed, i);

        StepOutput out;
        if (op == "net_size_sweep") {
            out = run_net_size_sweep(step, path);
        } else if (op == "net_experiment") {
            out = run_net_experiment_step(step, path, step_seed, config.workers);
        } else if (op == "fsg_witness") {
            out = run_fsg_witness_step(step, path, step_seed);
        } else if (op == "cover_study") {
            out = run_cover_study(step, path, step_seed);
        } else if (op == "compact_locus") {
            out = run_compact_locus_step(step, path);
        } else {
            throw ConfigError(path + ".op: unknown op " + op);
        }

        Json entry{{"op", op}};
        entry.update(out.result);
        steps.push_back(std::move(entry));
        for (auto& [name, contents] : out.csvs) {
            outputs.csvs["step" + std::to_string(i) + "_" + name + ".csv"] = std::move(contents);
        }
    }

    outputs.report = Json{{"schema", 1}, {"seed", config.seed}, {"steps", std::move(steps)}};
    return outputs;
}

void write_outputs(const RunOutputs& outputs, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "tables");

    Json report = outputs.report;
    report["generated_at_unix"] = static_cast<std::int64_t>(std::time(nullptr));
    std::ofstream rp(fs::path(out_dir) / "report.json");
    rp << report.dump(2) << '\n';

    for (const auto& [name, contents] : outputs.csvs) {
        std::ofstream f(fs::path(out_dir) / "tables" / name);
        f << contents;
    }
}

}  // namespace pvl
