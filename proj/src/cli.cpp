#include <filesystem>
#include <ostream>

#include "numrange/cli.hpp"
#include "numrange/gallery.hpp"
#include "numrange/linalg.hpp"

namespace numrange {
namespace {

// gallery operators whose checks go beyond the generic ones
struct Flavour {
    enum class Kind { Generic, Harmonic, Bump, Gaussian, Jordan } kind = Kind::Generic;
    cplx coefficient;
    double depth = 1.0;
};

Flavour flavour_of(const RunConfig& cfg) {
    Flavour f;
    if (cfg.gallery) {
        const std::string& g = *cfg.gallery;
        const auto colon = g.find(':');
        const std::string name = g.substr(0, colon);
        std::string first = colon == std::string::npos ? "" : g.substr(colon + 1);
        const auto comma = first.find(',');
        const std::string rest = comma == std::string::npos ? "" : first.substr(comma + 1);
        first = first.substr(0, comma);
        if (name == "harmonic") f = {Flavour::Kind::Harmonic, parse_complex(first)};
        if (name == "bump") f = {Flavour::Kind::Bump, parse_complex(first)};
        if (name == "gaussian") f = {Flavour::Kind::Gaussian, parse_complex(first), std::stod(rest.substr(0, rest.find(',')))};
        if (name == "jordan") f.kind = Flavour::Kind::Jordan;
    } else if (cfg.operator_spec && cfg.operator_spec->value("operator", "") == "schrodinger1d") {
        const Json& p = cfg.operator_spec->at("potential");
        const std::string kind = p.value("kind", "");
        auto coef = [&](const char* key) {
            const Json& c = p.at(key);
            return c.is_array() ? cplx(c[0].get<double>(), c[1].get<double>()) : parse_complex(c.get<std::string>());
        };
        if (kind == "harmonic") f = {Flavour::Kind::Harmonic, coef("c")};
        if (kind == "bump" || kind == "bump_scaled") f = {Flavour::Kind::Bump, coef("s")};
        if (kind == "gaussian") f = {Flavour::Kind::Gaussian, coef("c"), p.value("depth", 1.0)};
    }
    return f;
}

ComplexMatrix load_operator(const RunConfig& cfg) {
    const int sources = int(cfg.matrix_path.has_value()) + int(cfg.gallery.has_value()) + int(cfg.operator_spec.has_value());
    if (sources != 1) throw Error(ErrorKind::BadParameter, "give exactly one operator source (--matrix or --gallery)");
    if (cfg.matrix_path) return read_matrix(*cfg.matrix_path);
    if (cfg.gallery) return gallery_matrix(*cfg.gallery, cfg.seed);
    return gallery_from_json(*cfg.operator_spec, cfg.seed);
}

std::string source_name(const RunConfig& cfg) {
    if (cfg.matrix_path) return std::filesystem::path(*cfg.matrix_path).filename().string();
    if (cfg.gallery) return *cfg.gallery;
    return cfg.operator_spec->dump();
}

BoundaryOptions boundary_options(const RunConfig& cfg) {
    BoundaryOptions o;
    if (cfg.refine_tol) o.refine_tol = *cfg.refine_tol;
    if (cfg.angle_budget) o.angle_budget = *cfg.angle_budget;
    return o;
}

ClassifyOptions classify_options(const RunConfig& cfg, const Flavour& fl) {
    ClassifyOptions o;
    // the grid dominates the diameter of the bump discretization, so the
    // default window would start below the discretization floor
    if (fl.kind == Flavour::Kind::Bump) o.eps_min_rel = 1e-5;
    if (cfg.eps_min_rel) o.eps_min_rel = *cfg.eps_min_rel;
    return o;
}

VerifyOptions verify_options(const RunConfig& cfg, const Flavour& fl) {
    VerifyOptions o;
    o.seed = cfg.seed;
    if (fl.kind == Flavour::Kind::Bump) o.abs_tol = 0.01;
    if (cfg.abs_tol) o.abs_tol = *cfg.abs_tol;
    return o;
}

Json envelope(const RunConfig& cfg, const char* key, Json body) {
    return Json{{"source", source_name(cfg)}, {"seed", cfg.seed}, {key, std::move(body)}};
}

std::vector<cplx> eigen_overlay(const ComplexMatrix& a) {
    if (a.dim() > 400) return {};
    return eigenvalues(a);
}

class Pipeline {
public:
    Pipeline(const RunConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log), flavour_(flavour_of(cfg)) {}

    int run() {
        if (cfg_.command == "range") return range();
        if (cfg_.command == "classify") return classify(false);
        if (cfg_.command == "verify") return classify(true);
        if (cfg_.command == "witness") return witness();
        if (cfg_.command == "probe") return probe();
        throw Error(ErrorKind::BadParameter, "unknown command '" + cfg_.command + "'");
    }

private:
    void load() {
        a_ = load_operator(cfg_);
        log_ << cfg_.command << ": operator " << source_name(cfg_) << ", dim " << a_.dim() << '\n';
    }

    void build_atlas() {
        oracle_.emplace(a_);
        atlas_ = compute_boundary(*oracle_, boundary_options(cfg_));
        log_ << cfg_.command << ": atlas with " << atlas_.samples.size() << " support samples, gap "
             << atlas_.achieved_gap / atlas_.scale << " of the diameter"
             << (atlas_.budget_exhausted ? " (budget exhausted)" : "") << '\n';
    }

    void write(const std::string& name, const std::string& text) {
        const auto path = std::filesystem::path(cfg_.out) / name;
        write_text(path.string(), text);
        log_ << cfg_.command << ": wrote " << path.string() << '\n';
    }

    void write_atlas(const std::vector<PointClassification>* classes) {
        write("atlas.csv", atlas_csv(atlas_));
        Json j = atlas_json(atlas_, classes);
        j["source"] = source_name(cfg_);
        j["seed"] = cfg_.seed;
        write("atlas.json", dump(j));
        write("plot.svg", boundary_svg(atlas_, classes ? *classes : std::vector<PointClassification>{},
                                       eigen_overlay(a_), source_name(cfg_)));
    }

    int range() {
        load();
        build_atlas();
        write_atlas(nullptr);
        return 0;
    }

    std::vector<cplx> targets() const {
        std::vector<cplx> t = default_targets(atlas_, ClassifyOptions{}.default_spread);
        if (flavour_.kind == Flavour::Kind::Bump) t.push_back(0.0);
        for (const cplx z : cfg_.targets) t.push_back(z);
        return t;
    }

    int classify(bool verify) {
        load();
        build_atlas();
        const ClassifyOptions copts = classify_options(cfg_, flavour_);
        const auto classes = classify_boundary(*oracle_, atlas_, targets(), copts);
        log_ << cfg_.command << ": classified " << classes.size() << " boundary points\n";
        write_atlas(&classes);
        write("classes.json", dump(envelope(cfg_, "classifications", classes_json(classes))));
        if (!verify) return 0;

        const VerifyOptions vopts = verify_options(cfg_, flavour_);
        std::vector<TheoremReport> reports = corner_eigenvalue_check(a_, classes, vopts);
        for (const cplx z : cfg_.targets) reports.push_back(spectrum_membership_check(a_, z, vopts));
        if (flavour_.kind == Flavour::Kind::Harmonic) reports.push_back(harmonic_hyperbola_check(atlas_, flavour_.coefficient));
        if (flavour_.kind == Flavour::Kind::Bump) {
            reports.push_back(sector_containment_check(atlas_, flavour_.coefficient));
            // the corner at 0: nearest classified point
            const PointClassification* best = nullptr;
            for (const auto& c : classes)
                if (!c.error && (!best || std::abs(c.point) < std::abs(best->point))) best = &c;
            if (best) {
                TheoremReport r = spectrum_membership_check(a_, best->point, vopts, best->cls.infinite_curvature());
                r.theorem_id = "corner_spectrum";
                reports.push_back(std::move(r));
            }
        }
        if (a_.dim() <= 200) {
            // eigenvalues that sit on the boundary must have normal eigenvectors
            for (const auto& ep : eig_general(a_)) {
                try {
                    reports.push_back(boundary_eigen_normality_check(a_, ep.value, ep.vector, atlas_, vopts));
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::PointNotOnBoundary && e.kind() != ErrorKind::NotAnEigenpair) throw;
                }
            }
        }
        for (auto& r : reports) r.seed = cfg_.seed;
        write("theorems.json", dump(envelope(cfg_, "reports", theorems_json(reports))));
        return summarize(reports);
    }

    int summarize(const std::vector<TheoremReport>& reports) {
        std::size_t pass = 0, fail = 0, inc = 0;
        for (const auto& r : reports) {
            if (r.verdict == Verdict::Pass) ++pass;
            if (r.verdict == Verdict::Fail) ++fail;
            if (r.verdict == Verdict::Inconclusive) ++inc;
            if (r.verdict == Verdict::Fail)
                log_ << cfg_.command << ": FAIL " << r.theorem_id << " at " << r.point << ": " << r.diagnostics << '\n';
        }
        log_ << cfg_.command << ": " << pass << " pass, " << fail << " fail, " << inc << " inconclusive\n";
        return fail ? 1 : 0;
    }

    int witness() {
        if (!cfg_.alpha) throw Error(ErrorKind::BadParameter, "witness needs --alpha RE,IM");
        load();
        ComplexMatrix an = a_;
        if (!cfg_.targets.empty()) {
            build_atlas();
            const Normalized nz = normalize_at(a_, cfg_.targets.front(), atlas_, classify_options(cfg_, flavour_));
            log_ << "witness: normalized at " << nz.record.original_point << " with a = " << nz.record.a << '\n';
            an = nz.matrix;
        }
        const WitnessSequence ws = build_witness_sequence(an, *cfg_.alpha, default_eps_schedule(cfg_.depth));
        const std::vector<CVector> f = cfg_.f_family.empty() ? std::vector<CVector>{default_f(an)} : cfg_.f_family;
        double r = 0.0;
        const auto v = scaled_family(an, ws, f, &r);
        WitnessReport rep = replay_inequalities(an, ws, v);
        rep.scale_r = r;
        rep.seed = cfg_.seed;
        const DecayProbe probe = au_n_decay_probe(an, ws);
        Json j = witness_json(ws, rep, probe);
        j["source"] = source_name(cfg_);
        write("witness.json", dump(j));
        log_ << "witness: " << rep.rows.size() << " rows, all estimates " << (rep.all_hold() ? "hold" : "DO NOT hold")
             << ", ||A u_n|| exponent " << probe.exponent << '\n';
        return rep.all_hold() ? 0 : 1;
    }

    int probe() {
        std::vector<ComplexMatrix> family;
        switch (flavour_.kind) {
            case Flavour::Kind::Harmonic:
            case Flavour::Kind::Bump:
            case Flavour::Kind::Gaussian: {
                PotentialSpec v = flavour_.kind == Flavour::Kind::Harmonic ? harmonic_potential(flavour_.coefficient)
                                  : flavour_.kind == Flavour::Kind::Bump
                                      ? bump_potential(flavour_.coefficient)
                                      : gaussian_potential(flavour_.coefficient, flavour_.depth);
                // growing box at fixed mesh width
                for (const auto& g : {GridSpec{10.0, 100}, GridSpec{20.0, 200}, GridSpec{40.0, 400}})
                    family.push_back(schrodinger_1d(v, g));
                break;
            }
            case Flavour::Kind::Jordan:
                for (const std::size_t n : {2, 4, 8, 16}) family.push_back(jordan_block(n, 0.0));
                break;
            default:
                throw Error(ErrorKind::BadParameter, "probe needs a harmonic, bump, gaussian or jordan gallery operator");
        }
        log_ << "probe: " << family.size() << " discretizations\n";
        ProbeOptions popts;
        popts.classify = classify_options(cfg_, flavour_);
        popts.boundary = boundary_options(cfg_);
        const cplx target = cfg_.targets.empty() ? cplx{} : cfg_.targets.front();
        std::vector<TheoremReport> reports = discretization_sequence_probe(family, target, popts);
        for (auto& r : reports) r.seed = cfg_.seed;
        write("theorems.json", dump(envelope(cfg_, "reports", theorems_json(reports))));
        return summarize(reports);
    }

    const RunConfig& cfg_;
    std::ostream& log_;
    Flavour flavour_;
    ComplexMatrix a_;
    std::optional<SupportOracle> oracle_;
    BoundaryAtlas atlas_;
};

int gallery_command(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    if (cfg.gallery_arg == "list") {
        for (const auto& e : gallery_entries()) out << e.name << (e.params.empty() ? "" : ":" + e.params) << "  " << e.description << '\n';
        return 0;
    }
    const ComplexMatrix a = gallery_matrix(cfg.gallery_arg, cfg.seed);
    const auto path = std::filesystem::path(cfg.out) / "matrix.json";
    write_text(path.string(), dump(matrix_to_json(a)));
    log << "gallery: wrote " << path.string() << " (dim " << a.dim() << ")\n";
    return 0;
}

CVector vector_from(const Json& j) {
    CVector v;
    for (const auto& e : j) {
        if (e.is_array()) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        else v.emplace_back(e.get<double>(), 0.0);
    }
    return v;
}

}  // namespace

cplx parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return parse_complex(text);
    try {
        std::size_t used = 0;
        const std::string re = text.substr(0, comma), im = text.substr(comma + 1);
        const double x = std::stod(re, &used);
        if (used != re.size()) throw std::invalid_argument(re);
        const double y = std::stod(im, &used);
        if (used != im.size()) throw std::invalid_argument(im);
        return {x, y};
    } catch (const std::exception&) {
        throw Error(ErrorKind::BadParameter, "cannot read point '" + text + "', expected RE,IM");
    }
}

void apply_config_json(RunConfig& cfg, const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::BadParameter, "config must be a JSON object");
    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "matrix") cfg.matrix_path = val.get<std::string>();
            else if (key == "gallery") cfg.gallery = val.get<std::string>();
            else if (key == "operator") cfg.operator_spec = val;
            else if (key == "refine_tol") cfg.refine_tol = val.get<double>();
            else if (key == "angle_budget") cfg.angle_budget = val.get<std::size_t>();
            else if (key == "eps_min_rel") cfg.eps_min_rel = val.get<double>();
            else if (key == "abs_tol") cfg.abs_tol = val.get<double>();
            else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
            else if (key == "out") cfg.out = val.get<std::string>();
            else if (key == "alpha") cfg.alpha = val.is_array() ? cplx(val[0].get<double>(), val[1].get<double>()) : parse_point(val.get<std::string>());
            else if (key == "depth") cfg.depth = val.get<std::size_t>();
            else if (key == "targets") {
                cfg.targets.clear();
                for (const auto& t : val)
                    cfg.targets.push_back(t.is_array() ? cplx(t[0].get<double>(), t[1].get<double>()) : parse_point(t.get<std::string>()));
            } else if (key == "f") {
                cfg.f_family.clear();
                for (const auto& v : val) cfg.f_family.push_back(vector_from(v));
            } else throw Error(ErrorKind::BadParameter, "unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::BadParameter, std::string("config: ") + e.what());
    }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    try {
        if (cfg.command == "gallery") return gallery_command(cfg, out, log);
        if (cfg.depth == 0) throw Error(ErrorKind::BadParameter, "depth must be positive");
        std::filesystem::create_directories(cfg.out);
        Pipeline p(cfg, log);
        return p.run();
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        log << "error: bad number " << e.what() << '\n';
        return 2;
    }
}

}  // namespace numrange
