#include <iostream>

#include <CLI11.hpp>

#include "numrange/cli.hpp"

using namespace numrange;

int main(int argc, char** argv) {
    CLI::App app{"Numerical range boundaries: atlas, classification, spectral checks and witness sequences"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, matrix, gallery, alpha, out;
    double refine_tol = 0.0, eps_min_rel = 0.0, abs_tol = 0.0;
    std::size_t budget = 0, depth = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> targets;

    struct Flags {
        CLI::Option *config, *matrix, *gallery, *refine, *budget, *seed, *out, *alpha, *depth, *eps, *abs, *target;
    };
    std::vector<std::pair<CLI::App*, Flags>> subs;
    auto add = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        Flags f{};
        f.config = s->add_option("--config", config_path, "flat JSON config; flags override it");
        f.matrix = s->add_option("--matrix", matrix, "matrix JSON file");
        f.gallery = s->add_option("--gallery", gallery, "gallery operator NAME[:params]");
        f.refine = s->add_option("--refine-tol", refine_tol, "atlas refinement tolerance, relative to the diameter");
        f.budget = s->add_option("--angle-budget", budget, "maximum number of support samples");
        f.seed = s->add_option("--seed", seed, "seed for random operators, recorded in every artifact");
        f.out = s->add_option("--out", out, "output directory");
        f.alpha = s->add_option("--alpha", alpha, "witness anchor RE,IM");
        f.depth = s->add_option("--depth", depth, "number of witness steps eps_n = 2^-n");
        f.eps = s->add_option("--eps-min", eps_min_rel, "lower end of the classification scale window, relative");
        f.abs = s->add_option("--abs-tol", abs_tol, "absolute pass threshold for spectral checks");
        f.target = s->add_option("--target", targets, "boundary target RE,IM (repeatable)");
        subs.emplace_back(s, f);
        return s;
    };
    add("range", "compute the boundary atlas");
    add("classify", "classify boundary points");
    add("verify", "classify and run the spectral checks");
    add("witness", "build and replay a witness sequence at a boundary point");
    add("probe", "follow a non-round point along growing discretizations");
    CLI::App* gal = app.add_subcommand("gallery", "list gallery operators or export one as matrix JSON");
    std::string gallery_arg = "list";
    gal->add_option("what", gallery_arg, "'list' or an operator spec");
    gal->add_option("--seed", seed, "seed for random operators");
    gal->add_option("--out", out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gal->parsed()) {
            cfg.command = "gallery";
            cfg.gallery_arg = gallery_arg;
            if (gal->count("--seed")) cfg.seed = seed;
            if (gal->count("--out")) cfg.out = out;
            return run(cfg, std::cout, std::cerr);
        }
        for (const auto& [s, f] : subs) {
            if (!s->parsed()) continue;
            cfg.command = s->get_name();
            if (f.config->count()) apply_config_json(cfg, Json::parse(read_text(config_path)));
            // a flag naming an operator replaces whatever source the config gave
            if (f.matrix->count() || f.gallery->count()) {
                cfg.matrix_path.reset();
                cfg.gallery.reset();
                cfg.operator_spec.reset();
            }
            if (f.matrix->count()) cfg.matrix_path = matrix;
            if (f.gallery->count()) cfg.gallery = gallery;
            if (f.refine->count()) cfg.refine_tol = refine_tol;
            if (f.budget->count()) cfg.angle_budget = budget;
            if (f.seed->count()) cfg.seed = seed;
            if (f.out->count()) cfg.out = out;
            if (f.alpha->count()) cfg.alpha = parse_point(alpha);
            if (f.depth->count()) cfg.depth = depth;
            if (f.eps->count()) cfg.eps_min_rel = eps_min_rel;
            if (f.abs->count()) cfg.abs_tol = abs_tol;
            if (f.target->count()) {
                cfg.targets.clear();
                for (const auto& t : targets) cfg.targets.push_back(parse_point(t));
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return run(cfg, std::cout, std::cerr);
}
