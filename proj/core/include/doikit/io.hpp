#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "doikit/funcspace.hpp"
#include "doikit/matrix.hpp"

namespace doikit::io {

/// {"rows": n, "cols": m, "re": [...], "im": [...]}, row-major. Doubles are
/// written in shortest round-trip form, so reading back is bit-exact.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// {"terms": [{"a": .., "b": .., "re": .., "im": ..}, ...]}
nlohmann::json trig_to_json(const TrigPoly2D& f);
TrigPoly2D trig_from_json(const nlohmann::json& j);

/// {"kind": "power", "alpha": α} | {"kind": "capped_linear"} |
/// {"kind": "table", "samples": [[t, ω], ...]}
nlohmann::json modulus_to_json(const ModulusOfContinuity& omega);
ModulusOfContinuity modulus_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

ComplexMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);
TrigPoly2D read_trig_file(const std::filesystem::path& path);
void write_trig_file(const std::filesystem::path& path, const TrigPoly2D& f);

}  // namespace doikit::io
