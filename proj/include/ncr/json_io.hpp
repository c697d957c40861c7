#pragma once

#include <string>

#include <json.hpp>

#include "ncr/ellipticity.hpp"
#include "ncr/expr.hpp"
#include "ncr/pencil.hpp"
#include "ncr/positivity.hpp"
#include "ncr/realization.hpp"

namespace ncr::io {

using Json = nlohmann::ordered_json;

/// Row-major nested arrays; entries are numbers (R) or [re, im] pairs (C).
Json to_json(const Mat& m, Field f);
Json to_json(const Vec& v, Field f);
Mat matrix_from_json(const Json& j, Field f);
Vec vector_from_json(const Json& j, Field f);

Json to_json(const LinearPencil& l);
LinearPencil pencil_from_json(const Json& j);

/// { "field", "g", "n", "X": [X_1, ..., X_g] }
Json to_json(const MatrixPoint& x);
MatrixPoint point_from_json(const Json& j);

/// { "c", "b", "pencil", "center" }
Json to_json(const Realization& r);
Realization realization_from_json(const Json& j);

Json to_json(const EllipticityCertificate& c, Field f);
Json to_json(const EquivalencePlan& p);
Json to_json(const SohsCertificate& c);

/// Parses text, mapping syntax errors to InputError.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace ncr::io
