#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "numrange/gallery.hpp"
#include "numrange/io.hpp"

namespace numrange {
namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string short_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

cplx complex_from(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_string()) return parse_complex(j.get<std::string>());
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
    throw Error(ErrorKind::BadParameter, "cannot read a complex number from " + j.dump());
}

const char* kind_colour(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::Round: return "#2b8cbe";
        case BoundaryKind::InfiniteUpperCurvatureOnly: return "#fdae61";
        case BoundaryKind::UnilateralInfinite: return "#f46d43";
        case BoundaryKind::Corner: return "#d7191c";
        case BoundaryKind::FlatInterior: return "#1a9641";
    }
    return "#000000";
}

}  // namespace

ComplexMatrix matrix_from_json(const Json& j) {
    try {
        if (!j.is_object() || !j.contains("dim") || !j.contains("re"))
            throw Error(ErrorKind::BadParameter, "matrix JSON needs \"dim\" and \"re\"");
        const auto n = j.at("dim").get<std::size_t>();
        if (n == 0) throw Error(ErrorKind::BadParameter, "matrix dimension must be positive");
        const Json& re = j.at("re");
        const Json* im = j.contains("im") ? &j.at("im") : nullptr;
        auto check = [&](const Json& m, const char* what) {
            if (!m.is_array() || m.size() != n)
                throw Error(ErrorKind::BadParameter, std::string("\"") + what + "\" must have dim rows");
            for (const auto& row : m)
                if (!row.is_array() || row.size() != n)
                    throw Error(ErrorKind::BadParameter, std::string("\"") + what + "\" must have dim columns");
        };
        check(re, "re");
        if (im) check(*im, "im");
        ComplexMatrix a(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                a(r, c) = {re[r][c].get<double>(), im ? (*im)[r][c].get<double>() : 0.0};
        if (!a.is_finite()) throw Error(ErrorKind::BadParameter, "matrix has non-finite entries");
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::BadParameter, std::string("malformed matrix JSON: ") + e.what());
    }
}

Json matrix_to_json(const ComplexMatrix& a) {
    Json re = Json::array(), im = Json::array();
    for (std::size_t r = 0; r < a.dim(); ++r) {
        Json rr = Json::array(), ri = Json::array();
        for (std::size_t c = 0; c < a.dim(); ++c) {
            rr.push_back(a(r, c).real());
            ri.push_back(a(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return Json{{"dim", a.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix read_matrix(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::BadParameter, path + ": " + e.what());
    }
    if (j.contains("dim")) return matrix_from_json(j);
    return gallery_from_json(j);
}

ComplexMatrix gallery_from_json(const Json& j, std::uint64_t seed) {
    try {
        if (j.contains("gallery")) return gallery_matrix(j.at("gallery").get<std::string>(), seed);
        const std::string op = j.value("operator", "");
        if (op == "jordan") return jordan_block(j.at("n").get<std::size_t>(), complex_from(j.value("lambda", Json(0.0))));
        if (op == "normal" || op == "diag") {
            std::vector<cplx> eigs;
            for (const auto& e : j.at("eigs")) eigs.push_back(complex_from(e));
            return normal_from_eigs(eigs);
        }
        if (op == "random") return random_dense(j.value("seed", seed), j.at("n").get<std::size_t>());
        if (op == "random_normal") return random_normal(j.value("seed", seed), j.at("n").get<std::size_t>());
        if (op == "schrodinger1d") {
            const Json& p = j.at("potential");
            const std::string kind = p.at("kind").get<std::string>();
            GridSpec grid;
            PotentialSpec v;
            if (kind == "harmonic") {
                v = harmonic_potential(complex_from(p.at("c")));
            } else if (kind == "bump_scaled" || kind == "bump") {
                v = bump_potential(complex_from(p.at("s")));
                grid = {40.0, 1200};
            } else if (kind == "gaussian") {
                v = gaussian_potential(complex_from(p.at("c")), p.value("depth", 1.0));
                grid = {40.0, 1200};
            } else if (kind == "custom") {
                std::vector<double> xs = p.at("x").get<std::vector<double>>();
                std::vector<cplx> vals;
                for (const auto& e : p.at("v")) vals.push_back(complex_from(e));
                v = custom_potential(std::move(xs), std::move(vals));
            } else {
                throw Error(ErrorKind::BadParameter, "unknown potential kind '" + kind + "'");
            }
            if (j.contains("grid")) {
                grid.L = j["grid"].value("L", grid.L);
                grid.N = j["grid"].value("N", grid.N);
            }
            return schrodinger_1d(v, grid);
        }
        throw Error(ErrorKind::BadParameter, "unknown operator '" + op + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::BadParameter, std::string("malformed operator JSON: ") + e.what());
    }
}

Json complex_json(cplx z) { return Json{{"re", number_json(z.real())}, {"im", number_json(z.imag())}}; }

Json number_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string atlas_csv(const BoundaryAtlas& atlas) {
    std::string out = "theta,h,re,im,multiplicity\n";
    for (const auto& s : atlas.samples) {
        const cplx p = s.point();
        out += num(s.theta) + ',' + num(s.h) + ',' + num(p.real()) + ',' + num(p.imag()) + ',' +
               std::to_string(s.multiplicity) + '\n';
    }
    return out;
}

Json atlas_json(const BoundaryAtlas& atlas, const std::vector<PointClassification>* classes) {
    Json j;
    j["scale"] = atlas.scale;
    j["refine_tol"] = atlas.refine_tol;
    j["achieved_gap"] = atlas.achieved_gap;
    j["budget_exhausted"] = atlas.budget_exhausted;
    j["samples"] = atlas.samples.size();
    Json v = Json::array();
    for (const cplx z : atlas.vertices) v.push_back(Json::array({z.real(), z.imag()}));
    j["vertices"] = std::move(v);
    Json e = Json::array();
    for (const auto& ed : atlas.edges) e.push_back({{"a", complex_json(ed.a)}, {"b", complex_json(ed.b)}, {"theta", ed.theta}});
    j["edges"] = std::move(e);
    Json c = Json::array();
    for (const auto& cc : atlas.corner_candidates)
        c.push_back({{"point", complex_json(cc.point)}, {"theta1", cc.theta1}, {"theta2", cc.theta2}});
    j["corner_candidates"] = std::move(c);
    if (classes) j["classifications"] = classes_json(*classes);
    return j;
}

Json classification_json(const PointClassification& c) {
    Json j;
    j["target"] = complex_json(c.target);
    j["point"] = complex_json(c.point);
    if (c.error) {
        j["error"] = to_string(*c.error);
        j["diagnostics"] = c.diagnostics;
        return j;
    }
    j["kind"] = to_string(c.cls.kind);
    switch (c.cls.kind) {
        case BoundaryKind::Round: j["gamma"] = number_json(c.cls.gamma); break;
        case BoundaryKind::UnilateralInfinite: j["side"] = to_string(c.cls.side); break;
        case BoundaryKind::Corner:
            j["cone_width"] = c.cls.cone_width;
            j["strict_corner"] = c.strict_corner;
            break;
        default: break;
    }
    j["normal_angle"] = c.normal_angle;
    j["cone"] = Json::array({c.cone_lo, c.cone_hi});
    j["ambiguous"] = c.ambiguous;
    if (c.estimate) {
        auto side = [](const SideEstimate& s) {
            return Json{{"gamma_u", number_json(s.gamma_u)}, {"gamma_l", number_json(s.gamma_l)},
                        {"beta", number_json(s.beta)},       {"beta_u", number_json(s.beta_u)},
                        {"beta_l", number_json(s.beta_l)},   {"gamma_median", number_json(s.gamma_median)},
                        {"samples", s.samples}};
        };
        j["estimate"] = {{"plus", side(c.estimate->plus)},
                         {"minus", side(c.estimate->minus)},
                         {"eps_min", c.estimate->eps_min},
                         {"eps_max", c.estimate->eps_max}};
    }
    if (!c.diagnostics.empty()) j["diagnostics"] = c.diagnostics;
    return j;
}

Json classes_json(const std::vector<PointClassification>& classes) {
    Json a = Json::array();
    for (const auto& c : classes) a.push_back(classification_json(c));
    return a;
}

Json theorem_json(const TheoremReport& r) {
    return Json{{"theorem_id", r.theorem_id},
                {"point", complex_json(r.point)},
                {"verdict", to_string(r.verdict)},
                {"margin", number_json(r.margin)},
                {"diagnostics", r.diagnostics},
                {"seed", r.seed}};
}

Json theorems_json(const std::vector<TheoremReport>& reports) {
    Json a = Json::array();
    for (const auto& r : reports) a.push_back(theorem_json(r));
    return a;
}

Json witness_json(const WitnessSequence& ws, const WitnessReport& rep, const DecayProbe& probe) {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"n", r.n},
                        {"eps", r.eps},
                        {"residual", r.residual},
                        {"c_n", r.c_n},
                        {"avu", complex_json(r.avu)},
                        {"auv", complex_json(r.auv)},
                        {"w_norm", r.w_norm},
                        {"aww", complex_json(r.aww)},
                        {"lemma42_lo", r.lemma42_lo},
                        {"lemma42_hi", r.lemma42_hi},
                        {"lemma43_margin", r.lemma43_margin},
                        {"lemma44_margin", r.lemma44_margin},
                        {"lemma44_mixed_margin", r.lemma44_mixed_margin},
                        {"re_pos", r.re_pos},
                        {"lemma45_margin", r.lemma45_margin},
                        {"mixed_re", r.mixed_re}});
    }
    Json au = Json::array();
    for (std::size_t n = 0; n < probe.au_norms.size(); ++n) au.push_back({{"eps", probe.eps[n]}, {"au_norm", probe.au_norms[n]}});
    return Json{{"alpha", complex_json(ws.alpha)},
                {"seed", rep.seed},
                {"scale_r", rep.scale_r},
                {"all_hold", rep.all_hold()},
                {"worst",
                 {{"lemma42", number_json(rep.worst_lemma42)},
                  {"lemma43", number_json(rep.worst_lemma43)},
                  {"lemma44", number_json(rep.worst_lemma44)},
                  {"lemma44_mixed", number_json(rep.worst_lemma44_mixed)},
                  {"lemma45", number_json(rep.worst_lemma45)},
                  {"min_re_pos", number_json(rep.min_re_pos)}}},
                {"lemma46_slope", rep.lemma46_slope},
                {"rows", std::move(rows)},
                {"au_decay", {{"exponent", probe.exponent}, {"fitted", probe.fitted}, {"values", std::move(au)}}}};
}

std::string boundary_svg(const BoundaryAtlas& atlas, const std::vector<PointClassification>& classes,
                         const std::vector<cplx>& eigenvalues, const std::string& title) {
    double x0 = kInfinity, x1 = -kInfinity, y0 = kInfinity, y1 = -kInfinity;
    auto grow = [&](cplx z) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    };
    for (const cplx z : atlas.vertices) grow(z);
    for (const cplx z : eigenvalues) grow(z);
    const double span = std::max({x1 - x0, y1 - y0, 1e-12});
    const double pad = 0.08 * span;
    x0 -= pad;
    x1 += pad;
    y0 -= pad;
    y1 += pad;
    const double size = 640.0;
    const double k = size / std::max(x1 - x0, y1 - y0);
    auto px = [&](cplx z) { return short_num((z.real() - x0) * k); };
    auto py = [&](cplx z) { return short_num((y1 - z.imag()) * k); };
    const std::string w = short_num((x1 - x0) * k), h = short_num((y1 - y0) * k);

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << ' ' << h << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (x0 < 0.0 && x1 > 0.0) s << "<line x1=\"" << px(0.0) << "\" y1=\"0\" x2=\"" << px(0.0) << "\" y2=\"" << h << "\" stroke=\"#ccc\"/>\n";
    if (y0 < 0.0 && y1 > 0.0) s << "<line x1=\"0\" y1=\"" << py(0.0) << "\" x2=\"" << w << "\" y2=\"" << py(0.0) << "\" stroke=\"#ccc\"/>\n";
    s << "<polygon fill=\"#e8f1f8\" stroke=\"#08306b\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < atlas.vertices.size(); ++i) s << (i ? " " : "") << px(atlas.vertices[i]) << ',' << py(atlas.vertices[i]);
    s << "\"/>\n";
    for (const cplx z : eigenvalues) {
        const double cx = (z.real() - x0) * k, cy = (y1 - z.imag()) * k;
        s << "<path d=\"M" << short_num(cx - 4) << ' ' << short_num(cy - 4) << " L" << short_num(cx + 4) << ' '
          << short_num(cy + 4) << " M" << short_num(cx - 4) << ' ' << short_num(cy + 4) << " L" << short_num(cx + 4)
          << ' ' << short_num(cy - 4) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    for (const auto& c : classes) {
        const char* colour = c.error ? "#777777" : kind_colour(c.cls.kind);
        s << "<circle cx=\"" << px(c.point) << "\" cy=\"" << py(c.point) << "\" r=\"5\" fill=\"" << colour
          << "\" fill-opacity=\"0.85\"><title>" << (c.error ? to_string(*c.error) : to_string(c.cls.kind))
          << "</title></circle>\n";
    }
    s << "<text x=\"8\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">" << title << "</text>\n";
    int row = 0;
    for (const auto kind : {BoundaryKind::Round, BoundaryKind::Corner, BoundaryKind::UnilateralInfinite,
                            BoundaryKind::InfiniteUpperCurvatureOnly, BoundaryKind::FlatInterior}) {
        const int y = 36 + 16 * row++;
        s << "<circle cx=\"14\" cy=\"" << y - 4 << "\" r=\"4\" fill=\"" << kind_colour(kind) << "\"/>"
          << "<text x=\"24\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"11\">" << to_string(kind)
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
    f << text;
    if (!f) throw Error(ErrorKind::Io, "write to " + path + " failed");
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace numrange
