#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "pvl/experiment.hpp"
#include "pvl/fsg.hpp"

namespace {

using namespace pvl;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerification = 3;
constexpr int kExitCap = 4;

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

struct GroupArgs {
    std::string kind = "additive";
    std::int64_t p = 3;
    int level = 1;
    int n = 1;

    void attach(CLI::App* cmd, bool required = true) {
        cmd->add_option("--kind", kind, "additive | units | principal_units | heisenberg");
        auto* p_opt = cmd->add_option("--p", p, "prime");
        auto* level_opt = cmd->add_option("--level", level, "quotient level m");
        if (required) {
            p_opt->required();
            level_opt->required();
        }
        cmd->add_option("--n", n, "dimension (additive only)");
    }

    FiniteQuotient quotient() const {
        return FiniteQuotient(GroupScheme{kind_from_name(kind), p, n}, level);
    }
    Json descriptor() const {
        return quotient_descriptor_to_json(
            QuotientDescriptor{GroupScheme{kind_from_name(kind), p, n}, level});
    }
};

std::vector<std::uint64_t> parse_sample(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stoull(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

Json cover_to_json(const CoverCertificate& cert) {
    Json j{{"covered", cert.covered}, {"k", cert.size()}, {"translates", cert.translates}};
    if (cert.lower_bound) {
        j["lower_bound"] = *cert.lower_bound;
    } else {
        j["lower_bound"] = nullptr;
    }
    return j;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"exact Haar measure, compactness decisions, and certified "
                 "epsilon-nets on finite quotients of compact p-adic groups"};
    app.require_subcommand(1);

    // measure
    auto* measure_cmd = app.add_subcommand("measure", "measure of a window set");
    std::string measure_file;
    measure_cmd->add_option("--set", measure_file, "window-set JSON file")->required();
    measure_cmd->callback([&] {
        WindowSet s = window_from_json(load_json(measure_file));
        Rat window_measure = measure(s.core);
        Json out{{"window_measure", rational_to_string(window_measure)}};
        if (s.tail) {
            out["ambient_measure"] = "infinite";
        } else {
            BigInt scale_factor = 1;
            for (int i = 0; i < s.core.n; ++i) {
                for (std::int64_t j = 0; j < s.scale; ++j) scale_factor *= s.core.p;
            }
            out["ambient_measure"] = rational_to_string(window_measure * Rat(scale_factor));
        }
        emit(out);
    });

    // compact-check
    auto* check_cmd = app.add_subcommand("compact-check", "closed/bounded/compact decision");
    std::string check_file;
    check_cmd->add_option("--set", check_file, "window-set JSON file")->required();
    check_cmd->callback([&] {
        WindowSet s = window_from_json(load_json(check_file));
        Json out{{"closed", is_closed(s)},
                 {"bounded", is_bounded(s)},
                 {"definably_compact", is_definably_compact(s)}};
        BoundResult b = bounded_by(s, GammaExhaustion::standard(s.core.p, s.core.n));
        switch (b.kind) {
            case BoundResult::Kind::Bounded: out["bounded_by_gamma"] = b.gamma; break;
            case BoundResult::Kind::EmptySet: out["bounded_by_gamma"] = "empty"; break;
            case BoundResult::Kind::Unbounded: out["bounded_by_gamma"] = nullptr; break;
        }
        emit(out);
    });

    // compact-locus
    auto* locus_cmd = app.add_subcommand("compact-locus", "compact members of a family");
    std::string locus_file;
    locus_cmd->add_option("--sets", locus_file, "JSON array of window sets")->required();
    locus_cmd->callback([&] {
        Json arr = load_json(locus_file);
        if (!arr.is_array()) throw ConfigError(locus_file + ": expected an array");
        std::vector<WindowSet> family;
        for (const auto& sj : arr) family.push_back(window_from_json(sj));
        emit(Json{{"indices", compact_locus(family)}});
    });

    // group
    auto* group_cmd = app.add_subcommand("group", "finite quotient operations");
    group_cmd->require_subcommand(1);

    auto* gq = group_cmd->add_subcommand("quotient", "enumerate a quotient");
    GroupArgs gq_args;
    gq_args.attach(gq);
    gq->callback([&] {
        FiniteQuotient q = gq_args.quotient();
        Json out = gq_args.descriptor();
        out["order"] = q.order();
        out["id"] = q.id();
        if (q.order() <= 1000) out["elements"] = q.elements();
        emit(out);
    });

    auto* gs = group_cmd->add_subcommand("sample", "seeded Haar draws");
    GroupArgs gs_args;
    gs_args.attach(gs);
    std::uint64_t gs_seed = 0, gs_count = 1;
    gs->add_option("--seed", gs_seed, "master seed")->required();
    gs->add_option("--count", gs_count, "number of draws")->required();
    gs->callback([&] {
        FiniteQuotient q = gs_args.quotient();
        HaarSampler sampler(q, gs_seed);
        emit(Json{{"group", gs_args.descriptor()}, {"draws", sampler.draw_many(gs_count)}});
    });

    auto* gm = group_cmd->add_subcommand("measure", "haar measure of a cylinder set");
    GroupArgs gm_args;
    gm_args.attach(gm);
    std::string gm_file;
    gm->add_option("--set", gm_file, "cylinder-set JSON file")->required();
    gm->callback([&] {
        FiniteQuotient q = gm_args.quotient();
        CylinderSet d = cylinder_from_json(load_json(gm_file));
        emit(Json{{"measure", rational_to_string(haar_measure(q, d))}});
    });

    // vc
    auto* vc_cmd = app.add_subcommand("vc", "vc dimension");
    vc_cmd->require_subcommand(1);
    auto* vc_dim_cmd = vc_cmd->add_subcommand("dim", "vc dimension of a set system");
    std::string vc_system_file;
    GroupArgs vc_args;
    int vc_cap = 12;
    vc_dim_cmd->add_option("--system", vc_system_file, "set-system JSON file");
    vc_args.attach(vc_dim_cmd, /*required=*/false);
    vc_dim_cmd->add_option("--cap", vc_cap, "search cap (<= 12)");
    vc_dim_cmd->callback([&] {
        if (vc_system_file.empty() && vc_dim_cmd->count("--p") == 0) {
            throw ConfigError("vc dim needs --system or a group (--kind/--p/--level)");
        }
        SetSystem s = vc_system_file.empty()
                          ? ball_coset_system(vc_args.quotient())
                          : set_system_from_json(load_json(vc_system_file));
        VcResult r = vc_dimension(s, vc_cap);
        Json out{{"vc_dimension", r.at_least ? Json(r.to_string()) : Json(r.value)},
                 {"family_size", s.family.size()},
                 {"ground_size", s.ground.size()}};
        emit(out);
    });

    // net
    auto* net_cmd = app.add_subcommand("net", "epsilon-net machinery");
    net_cmd->require_subcommand(1);

    auto* ns = net_cmd->add_subcommand("size", "certified sample complexity");
    int ns_k = 1;
    std::string ns_eps, ns_delta;
    ns->add_option("--k", ns_k, "vc dimension bound")->required();
    ns->add_option("--epsilon", ns_eps, "epsilon, e.g. 1/4")->required();
    ns->add_option("--delta", ns_delta, "override delta (default epsilon/2)");
    ns->callback([&] {
        NetRequest req = NetRequest::standard(ns_k, parse_rational(ns_eps));
        if (!ns_delta.empty()) {
            req.delta = parse_rational(ns_delta);
            req.validate();
        }
        emit(Json{{"k", ns_k},
                  {"epsilon", rational_to_string(req.epsilon)},
                  {"delta", rational_to_string(req.delta)},
                  {"n", net_size(req)}});
    });

    auto* nv = net_cmd->add_subcommand("verify", "check a sample against a family");
    std::string nv_system, nv_eps, nv_sample;
    nv->add_option("--system", nv_system, "set-system JSON file")->required();
    nv->add_option("--epsilon", nv_eps, "epsilon")->required();
    nv->add_option("--sample", nv_sample, "comma-separated element codes")->required();
    nv->callback([&] {
        SetSystem s = set_system_from_json(load_json(nv_system));
        auto missed = verify_net(s, parse_rational(nv_eps), parse_sample(nv_sample));
        emit(Json{{"missed", missed}});
        if (!missed.empty()) throw VerificationFailure("sample is not an epsilon-net");
    });

    auto* ne = net_cmd->add_subcommand("experiment", "seeded randomized net trials");
    GroupArgs ne_args;
    ne_args.attach(ne);
    std::string ne_eps, ne_out, ne_csv;
    std::uint64_t ne_trials = 100, ne_seed = 0, ne_override = 0;
    unsigned ne_workers = 1;
    int ne_k = 0;
    ne->add_option("--epsilon", ne_eps, "epsilon")->required();
    ne->add_option("--trials", ne_trials, "number of trials")->required();
    ne->add_option("--seed", ne_seed, "master seed")->required();
    ne->add_option("--k", ne_k, "vc bound override (default: measured)");
    ne->add_option("--sample-size", ne_override, "sample size override");
    ne->add_option("--workers", ne_workers, "worker threads");
    ne->add_option("--out", ne_out, "write the report JSON here");
    ne->add_option("--csv", ne_csv, "write per-trial rows here");
    ne->callback([&] {
        FiniteQuotient q = ne_args.quotient();
        SetSystem fam = ball_coset_system(q);
        int k = ne_k;
        if (k == 0) {
            VcResult vc = vc_dimension(fam);
            if (vc.at_least) throw VerificationFailure("vc dimension exceeds cap");
            k = std::max(1, vc.value);
        }
        NetRequest req = NetRequest::standard(k, parse_rational(ne_eps));
        NetExperimentOptions opts;
        opts.workers = ne_workers;
        if (ne_override > 0) opts.sample_size_override = ne_override;
        NetReport report = net_experiment(q, fam, req, ne_trials, ne_seed, opts);
        Json out = net_report_to_json(report);
        out["group"] = ne_args.descriptor();
        out["k"] = k;
        if (!ne_out.empty()) {
            std::ofstream f(ne_out);
            f << out.dump(2) << '\n';
        } else {
            Json summary = out;
            summary.erase("sample");
            summary.erase("rows");
            emit(summary);
        }
        if (!ne_csv.empty()) {
            std::ofstream f(ne_csv);
            f << net_report_to_csv(report);
        }
    });

    // cover
    auto* cover_cmd = app.add_subcommand("cover", "greedy translate cover");
    GroupArgs cover_args;
    cover_args.attach(cover_cmd);
    std::string cover_file;
    std::uint64_t cover_max = 0;
    cover_cmd->add_option("--set", cover_file, "cylinder-set JSON file")->required();
    cover_cmd->add_option("--max", cover_max, "translate budget (default |G|)");
    cover_cmd->callback([&] {
        FiniteQuotient q = cover_args.quotient();
        CylinderSet d = cylinder_from_json(load_json(cover_file));
        CoverCertificate cert = greedy_cover(q, d, cover_max ? cover_max : q.order());
        Json out = cover_to_json(cert);
        out["measure"] = rational_to_string(haar_measure(q, d));
        emit(out);
        if (!cert.covered) throw VerificationFailure("cover budget exhausted");
    });

    // fsg
    auto* fsg_cmd = app.add_subcommand("fsg", "finite-satisfiability witness");
    GroupArgs fsg_args;
    fsg_args.attach(fsg_cmd);
    std::string fsg_eps;
    std::uint64_t fsg_seed = 0;
    fsg_cmd->add_option("--epsilon", fsg_eps, "epsilon")->required();
    fsg_cmd->add_option("--seed", fsg_seed, "master seed")->required();
    fsg_cmd->callback([&] {
        FiniteQuotient q = fsg_args.quotient();
        SetSystem fam = ball_coset_system(q);
        FsgWitnessResult r = fsg_witness(q, fam, parse_rational(fsg_eps), fsg_seed);
        Json out{{"group", fsg_args.descriptor()},
                 {"witness_found", r.witness.has_value()},
                 {"vc_dim", r.vc_dim_used},
                 {"n_draws", r.n_draws},
                 {"obligations", r.obligations},
                 {"missed", r.missed}};
        emit(out);
        if (!r.witness.has_value()) throw VerificationFailure("witness missed obligated sets");
    });

    // run
    auto* run_cmd = app.add_subcommand("run", "execute a pipeline config");
    std::string run_config_file;
    run_cmd->add_option("--config", run_config_file, "pipeline config JSON")->required();
    run_cmd->callback([&] {
        RunConfig config = parse_config(load_json(run_config_file));
        RunOutputs outputs = run_experiment(config);
        if (config.out_dir.empty()) {
            emit(outputs.report);
        } else {
            write_outputs(outputs, config.out_dir);
            std::cout << "report written to " << config.out_dir << "/report.json\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;  // keep --help at 0
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failure: " << e.what() << '\n';
        return kExitVerification;
    } catch (const CapExceeded& e) {
        std::cerr << "resource cap: " << e.what() << '\n';
        return kExitCap;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
