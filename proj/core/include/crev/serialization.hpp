#pragma once

#include "crev/classification.hpp"
#include "crev/common.hpp"
#include "crev/numerics.hpp"
#include "crev/reversibility.hpp"
#include "crev/spectral.hpp"

#include <nlohmann/json.hpp>

namespace crev::io {

// Key order is insertion order so emitted documents are stable.
using json = nlohmann::ordered_json;

// Complex numbers are always [re, im].
json to_json(Complex z);
Complex complex_from_json(const json& j);

// {"n": n, "entries": [[re, im], ...]} row-major; square matrices only.
json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

// Ascending coefficients as [[re, im], ...].
json to_json(const numerics::Polynomial& p);
numerics::Polynomial polynomial_from_json(const json& j);

json to_json(const Tolerances& t);
Tolerances tolerances_from_json(const json& j);

json to_json(const spectral::SpectralData& s);
spectral::SpectralData spectral_from_json(const json& j);

json to_json(const reversibility::PairingResult& p);
reversibility::PairingResult pairing_from_json(const json& j);

json to_json(const reversibility::SymmetryWitness& w);
reversibility::SymmetryWitness witness_from_json(const json& j);

json to_json(const classification::LoxodromyProfile& p);
classification::LoxodromyProfile profile_from_json(const json& j);

json to_json(const classification::Sl4Trace& t);
classification::Sl4Trace sl4_from_json(const json& j);

json to_json(const classification::ClassificationReport& r);
classification::ClassificationReport classification_from_json(const json& j);

}  // namespace crev::io
