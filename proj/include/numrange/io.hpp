#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "numrange/numerical_range.hpp"
#include "numrange/spectral.hpp"
#include "numrange/witness.hpp"

namespace numrange {

using Json = nlohmann::ordered_json;

/// {"dim": n, "re": [[...]], "im": [[...]]}, row-major. "im" may be omitted.
ComplexMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const ComplexMatrix& a);
ComplexMatrix read_matrix(const std::string& path);

/// Operator description as found in config files, e.g.
/// {"operator":"schrodinger1d","potential":{"kind":"bump_scaled","s":[1,1]},"grid":{"L":40,"N":1200}}.
/// Also accepts {"operator":"jordan","n":2}, {"operator":"normal","eigs":[[0,0],[1,0]]},
/// {"operator":"random","n":8} and {"gallery":"harmonic:1+1i"}.
ComplexMatrix gallery_from_json(const Json& j, std::uint64_t seed = 0);

Json complex_json(cplx z);
/// Non-finite numbers become null.
Json number_json(double x);

/// theta,h,re,im,multiplicity with one row per support sample
std::string atlas_csv(const BoundaryAtlas& atlas);
Json atlas_json(const BoundaryAtlas& atlas, const std::vector<PointClassification>* classes = nullptr);
Json classification_json(const PointClassification& c);
Json classes_json(const std::vector<PointClassification>& classes);
Json theorem_json(const TheoremReport& r);
Json theorems_json(const std::vector<TheoremReport>& reports);
Json witness_json(const WitnessSequence& ws, const WitnessReport& rep, const DecayProbe& probe);

/// Boundary polyline, classified points colour-coded by kind, eigenvalues as crosses.
std::string boundary_svg(const BoundaryAtlas& atlas, const std::vector<PointClassification>& classes,
                         const std::vector<cplx>& eigenvalues, const std::string& title);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);
/// Throws Io on failure.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace numrange
