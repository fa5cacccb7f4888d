#include "nls1d/nonlinearity.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "nls1d/format.hpp"

namespace nls1d {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, const std::string& field) {
  const std::string buf(trim(text));
  if (buf.empty()) throw InputError(field + ": missing value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (errno != 0 || end != buf.c_str() + buf.size() || !std::isfinite(v))
    throw InputError(field + ": '" + buf + "' is not a finite number");
  return v;
}

int parse_sign(std::string_view text, const std::string& field) {
  const auto t = trim(text);
  if (t == "-" ) return -1;
  if (t == "+") return 1;
  const double v = parse_real(t, field);
  if (v != -1.0 && v != 0.0 && v != 1.0) throw InputError(field + ": sign must be -1, 0 or +1");
  return static_cast<int>(v);
}

}  // namespace

Nonlinearity parse_inline_terms(std::string_view text) {
  std::vector<PowerTerm> terms;
  std::size_t index = 0;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const std::string where = "terms[" + std::to_string(index) + "]";
    if (item.empty()) throw InputError(where + ": empty term");
    const auto star1 = item.find('*');
    const auto star2 = star1 == std::string_view::npos ? star1 : item.find('*', star1 + 1);
    if (star2 == std::string_view::npos || item.find('*', star2 + 1) != std::string_view::npos)
      throw InputError(where + ": expected sign*coeff*exponent, got '" + std::string(item) + "'");
    PowerTerm t;
    t.sign = parse_sign(item.substr(0, star1), where + ".sign");
    t.coeff = parse_real(item.substr(star1 + 1, star2 - star1 - 1), where + ".coeff");
    t.exponent = parse_real(item.substr(star2 + 1), where + ".exponent");
    terms.push_back(t);
    ++index;
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Nonlinearity(std::move(terms));
}

Nonlinearity parse_json_terms(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("spec: malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array())
    throw InputError("spec: expected an object with a \"terms\" array");
  std::vector<PowerTerm> terms;
  std::size_t index = 0;
  for (const auto& item : doc["terms"]) {
    const std::string where = "terms[" + std::to_string(index++) + "]";
    if (!item.is_object()) throw InputError(where + ": expected an object");
    for (const char* key : {"sign", "coeff", "exponent"}) {
      if (!item.contains(key) || !item[key].is_number())
        throw InputError(where + "." + key + ": missing or not a number");
    }
    PowerTerm t;
    const double sign = item["sign"].get<double>();
    if (sign != -1.0 && sign != 0.0 && sign != 1.0)
      throw InputError(where + ".sign: sign must be -1, 0 or +1");
    t.sign = static_cast<int>(sign);
    t.coeff = item["coeff"].get<double>();
    t.exponent = item["exponent"].get<double>();
    terms.push_back(t);
  }
  return Nonlinearity(std::move(terms));
}

Nonlinearity parse_nonlinearity(std::string_view text) {
  const auto t = trim(text);
  if (!t.empty() && t.front() == '{') return parse_json_terms(t);
  return parse_inline_terms(t);
}

std::string to_inline(const Nonlinearity& nl) {
  std::string out;
  for (const auto& t : nl.terms()) {
    if (!out.empty()) out += ',';
    out += t.sign > 0 ? "+1*" : "-1*";
    out += format_real(t.coeff);
    out += '*';
    out += format_real(t.exponent);
  }
  return out;
}

std::string to_json(const Nonlinearity& nl) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : nl.terms())
    terms.push_back({{"sign", t.sign}, {"coeff", t.coeff}, {"exponent", t.exponent}});
  return nlohmann::json{{"terms", terms}}.dump();
}

}  // namespace nls1d
