#pragma once

#include <map>
#include <string>

#include "pvl/json_io.hpp"

namespace pvl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A batch run: {"pipeline":[...],"seed":42,"out_dir":"...","workers":1}.
// Supported ops: net_size_sweep, net_experiment, fsg_witness, cover_study,
// compact_locus. All randomness flows from the master seed through the
// seed-derivation rule, step i drawing from stream i.
struct RunConfig {
    std::vector<Json> pipeline;
    std::uint64_t seed = 0;
    std::string out_dir;
    unsigned workers = 1;
};

RunConfig parse_config(const Json& j);

struct RunOutputs {
    Json report;                               // {"schema":1,...}; no timestamp
    std::map<std::string, std::string> csvs;   // tables/<name>.csv -> contents
};

RunOutputs run_experiment(const RunConfig& config);

// Writes report.json (with a generated_at_unix field appended) and the
// CSV tables under out_dir.
void write_outputs(const RunOutputs& outputs, const std::string& out_dir);

}  // namespace pvl
