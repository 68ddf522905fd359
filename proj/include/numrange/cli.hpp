#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "numrange/io.hpp"

namespace numrange {

struct RunConfig {
    std::string command;  ///< range, classify, verify, witness, probe or gallery
    std::optional<std::string> matrix_path;
    std::optional<std::string> gallery;
    std::optional<Json> operator_spec;  ///< inline operator object from a config file
    std::optional<double> refine_tol;
    std::optional<std::size_t> angle_budget;
    std::optional<double> eps_min_rel;
    std::optional<double> abs_tol;
    std::uint64_t seed = 0;
    std::string out = ".";
    std::optional<cplx> alpha;
    std::size_t depth = 20;
    std::vector<cplx> targets;
    std::vector<CVector> f_family;
    std::string gallery_arg = "list";  ///< `gallery` subcommand: "list" or a spec to export
};

/// Fills the fields present in a flat JSON config. Unknown keys are errors.
void apply_config_json(RunConfig& cfg, const Json& j);

/// "re,im" or anything parse_complex accepts.
cplx parse_point(const std::string& text);

/// Runs one pipeline and writes its artifacts into cfg.out. Returns 0 when
/// no checker failed and 1 otherwise; configuration and input problems
/// return 2. Progress and errors go to `log`, gallery listings to `out`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace numrange
