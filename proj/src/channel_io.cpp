#include "noncoh/channel_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "noncoh/errors.hpp"

namespace noncoh {
namespace {

using json = nlohmann::json;

double number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw SpecError(std::string("channel document is missing \"") + key + "\"");
  }
  if (!j.at(key).is_number()) throw SpecError(std::string("\"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

std::vector<double> numbers(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw SpecError(std::string("\"") + key + "\" must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) throw SpecError(std::string("\"") + key + "\" must hold numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

const json& array_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty()) {
    throw SpecError(std::string("\"") + key + "\" must be a nonempty array");
  }
  return j.at(key);
}

std::string kind_of(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw SpecError("channel document needs a string \"kind\"");
  }
  return j.at("kind").get<std::string>();
}

ScalarFadingSpec scalar(const json& j) {
  const std::string kind = kind_of(j);
  if (kind == "memoryless") return ScalarFadingSpec::memoryless(number(j, "scale", 1.0));
  if (kind == "gauss_markov") {
    return ScalarFadingSpec::gauss_markov(number(j, "a"), number(j, "scale", 1.0));
  }
  if (kind == "bandlimited_flat") {
    return ScalarFadingSpec::bandlimited_flat(number(j, "omega0"), number(j, "scale", 1.0));
  }
  if (kind == "sequence") {
    std::vector<std::complex<double>> r;
    for (const auto& x : array_field(j, "r")) {
      if (x.is_number()) {
        r.emplace_back(x.get<double>(), 0.0);
      } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
        r.emplace_back(x[0].get<double>(), x[1].get<double>());
      } else {
        throw SpecError("\"r\" entries must be numbers or [re, im] pairs");
      }
    }
    return ScalarFadingSpec::from_sequence(std::move(r));
  }
  if (kind == "psd_table") return ScalarFadingSpec::from_psd_table(numbers(j, "omega"), numbers(j, "s"));
  throw SpecError("unknown scalar channel kind \"" + kind + "\"");
}

ChannelSpec any(const json& j) {
  const std::string kind = kind_of(j);
  if (kind == "mimo") {
    const json& entries = array_field(j, "entries");
    if (j.contains("alpha")) {
      std::vector<ScalarFadingSpec> base;
      for (const auto& e : entries) base.push_back(scalar(e));
      return MimoFadingSpec::transmit_separable(numbers(j, "alpha"), std::move(base));
    }
    std::vector<std::vector<ScalarFadingSpec>> rows;
    for (const auto& row : entries) {
      if (!row.is_array()) throw SpecError("\"entries\" must be an array of rows");
      std::vector<ScalarFadingSpec> laws;
      for (const auto& e : row) laws.push_back(scalar(e));
      rows.push_back(std::move(laws));
    }
    return MimoFadingSpec::from_entries(std::move(rows));
  }
  if (kind == "delay_spread") {
    const json& taps = array_field(j, "taps");
    if (j.contains("alpha")) {
      if (taps.size() != 1) throw SpecError("a delay-separable document carries exactly one base law");
      return DelaySpreadSpec::delay_separable(numbers(j, "alpha"), scalar(taps[0]));
    }
    std::vector<ScalarFadingSpec> laws;
    for (const auto& e : taps) laws.push_back(scalar(e));
    return DelaySpreadSpec::from_taps(std::move(laws));
  }
  return scalar(j);
}

}  // namespace

ChannelSpec parse_channel(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("channel document is not valid JSON: ") + e.what());
  }
  return any(j);
}

ChannelSpec load_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open channel file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel(buf.str());
}

std::string to_json(const ScalarFadingSpec& spec) {
  json j;
  switch (spec.repr()) {
    case ScalarFadingSpec::Repr::parametric:
      switch (spec.family()) {
        case Family::memoryless: j = {{"kind", "memoryless"}}; break;
        case Family::gauss_markov: j = {{"kind", "gauss_markov"}, {"a", spec.parameter()}}; break;
        case Family::bandlimited_flat:
          j = {{"kind", "bandlimited_flat"}, {"omega0", spec.parameter()}};
          break;
      }
      j["scale"] = spec.r0();
      break;
    case ScalarFadingSpec::Repr::sequence: {
      j["kind"] = "sequence";
      json r = json::array();
      for (const auto& z : spec.sequence()) r.push_back({z.real(), z.imag()});
      j["r"] = r;
      break;
    }
    case ScalarFadingSpec::Repr::psd_table:
      j["kind"] = "psd_table";
      j["omega"] = std::vector<double>(spec.table_omega().begin(), spec.table_omega().end());
      j["s"] = std::vector<double>(spec.table_values().begin(), spec.table_values().end());
      break;
  }
  return j.dump();
}

}  // namespace noncoh
