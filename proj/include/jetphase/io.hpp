#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "jetphase/distribution.hpp"
#include "jetphase/filtered_exp.hpp"
#include "jetphase/foi.hpp"
#include "jetphase/jet.hpp"
#include "jetphase/matrix.hpp"
#include "jetphase/operator.hpp"
#include "jetphase/star.hpp"

namespace jetphase::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text, reporting syntax errors as ParseError.
Json parse_text(const std::string& text, const std::string& origin);
/// Reads and parses a file.
Json read_file(const std::string& path);

Json to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);

Json to_json(const Jet& f);
Jet jet_from_json(const Json& j);

Json to_json(const FormalOperator& a);
FormalOperator operator_from_json(const Json& j);

Json to_json(const PointDistribution& l);
PointDistribution distribution_from_json(const Json& j);

Json to_json(const ScalarMatrix& m);
ScalarMatrix matrix_from_json(const Json& j);

Json to_json(const PhaseDensityPair& p);
PhaseDensityPair pair_from_json(const Json& j);

Json to_json(const StarProduct& s);
/// Accepts {"num_vars", "C": [...]} or the shortcut {"moyal_pi": [[...]]}; the shortcut
/// is expanded through order `n_max`.
StarProduct star_from_json(const Json& j, int n_max);

/// {"num_vars", "components": [jets]} or a bare array of jets.
Json to_json(const std::vector<Jet>& components);
std::vector<Jet> components_from_json(const Json& j);

Json to_json(const Factorization& f);

} // namespace jetphase::io
