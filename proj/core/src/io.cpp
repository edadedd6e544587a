#include "doikit/io.hpp"

#include <fstream>
#include <sstream>

#include "doikit/error.hpp"

namespace doikit::io {
namespace {

using nlohmann::json;

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(Errc::ParseError, std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(Errc::ParseError, std::string("missing array field '") + key + "'");
  }
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw Error(Errc::ParseError, std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t count(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
    throw Error(Errc::ParseError, std::string("missing count field '") + key + "'");
  }
  return j.at(key).get<std::size_t>();
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (const auto& z : m.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "matrix must be a JSON object");
  const std::size_t rows = count(j, "rows");
  const std::size_t cols = count(j, "cols");
  const std::vector<double> re = number_array(j, "re");
  const std::vector<double> im = number_array(j, "im");
  if (re.size() != rows * cols || im.size() != rows * cols) {
    throw Error(Errc::ParseError, "entry count does not match rows*cols");
  }
  std::vector<Complex> entries(rows * cols);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = Complex(re[k], im[k]);
  return ComplexMatrix(rows, cols, std::move(entries));
}

json trig_to_json(const TrigPoly2D& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    terms.push_back({{"a", t.nu.a}, {"b", t.nu.b}, {"re", t.coef.real()}, {"im", t.coef.imag()}});
  }
  return json{{"terms", std::move(terms)}};
}

TrigPoly2D trig_from_json(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array()) {
    throw Error(Errc::ParseError, "trig polynomial needs a 'terms' array");
  }
  std::vector<TrigTerm> terms;
  for (const auto& t : j.at("terms")) {
    if (!t.is_object()) throw Error(Errc::ParseError, "trig term must be an object");
    terms.push_back({{number(t, "a"), number(t, "b")}, Complex(number(t, "re"), number(t, "im"))});
  }
  return TrigPoly2D(std::move(terms));
}

json modulus_to_json(const ModulusOfContinuity& omega) {
  switch (omega.kind()) {
    case ModulusOfContinuity::Kind::Power:
      return json{{"kind", "power"}, {"alpha", *omega.power_exponent()}};
    case ModulusOfContinuity::Kind::CappedLinear:
      return json{{"kind", "capped_linear"}};
    case ModulusOfContinuity::Kind::Table: {
      json samples = json::array();
      for (const auto& [t, w] : omega.samples()) samples.push_back(json::array({t, w}));
      return json{{"kind", "table"}, {"samples", std::move(samples)}};
    }
    case ModulusOfContinuity::Kind::Custom:
      break;
  }
  throw Error(Errc::InvalidModulus, "custom moduli have no file representation");
}

ModulusOfContinuity modulus_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw Error(Errc::ParseError, "modulus needs a 'kind' string");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") return ModulusOfContinuity::power(number(j, "alpha"));
  if (kind == "capped_linear") return ModulusOfContinuity::capped_linear();
  if (kind == "table") {
    if (!j.contains("samples") || !j.at("samples").is_array()) {
      throw Error(Errc::ParseError, "table modulus needs 'samples'");
    }
    std::vector<std::pair<double, double>> samples;
    for (const auto& s : j.at("samples")) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
        throw Error(Errc::ParseError, "table samples are [t, ω] pairs");
      }
      samples.emplace_back(s[0].get<double>(), s[1].get<double>());
    }
    return ModulusOfContinuity::table(std::move(samples));
  }
  throw Error(Errc::ParseError, "unknown modulus kind '" + kind + "'");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  return matrix_from_json(read_json_file(path));
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
  write_text_file(path, matrix_to_json(m).dump() + "\n");
}

TrigPoly2D read_trig_file(const std::filesystem::path& path) { return trig_from_json(read_json_file(path)); }

void write_trig_file(const std::filesystem::path& path, const TrigPoly2D& f) {
  write_text_file(path, trig_to_json(f).dump() + "\n");
}

}  // namespace doikit::io
