#pragma once

// JSON for SystemSpec (schema beurling.system_spec.v1), run manifests and fit
// reports. Needs nlohmann/json on the include path.

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "beurling/analysis.hpp"
#include "beurling/pipeline.hpp"

namespace beurling {

inline constexpr const char* kSpecSchema = "beurling.system_spec.v1";
inline constexpr const char* kManifestSchema = "beurling.run_manifest.v1";
inline constexpr const char* kVersion = "1.0.0";

using json = nlohmann::json;

namespace detail {

/// Upper-half-plane entries [re, im, m]; conjugates are added.
inline ComplexMultiset multiset_from_json(const json& j) {
  std::vector<ComplexMultiset::Entry> half;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) throw DomainError("spec: multiset entries are [re, im, m?]");
    const double im = e[1].get<double>();
    if (im < 0) throw DomainError("spec: give only entries with im >= 0; conjugates are implied");
    half.push_back({cplx(e[0].get<double>(), im), e.size() == 3 ? e[2].get<int>() : 1});
  }
  return ComplexMultiset::symmetric(half);
}

inline json multiset_to_json(const ComplexMultiset& m) {
  json a = json::array();
  for (const auto& e : m.entries())
    if (e.value.imag() >= 0) a.push_back({e.value.real(), e.value.imag(), e.multiplicity});
  return a;
}

inline double finite_or_null(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace detail

inline SystemSpec spec_from_json(const json& j) {
  if (j.value("schema", std::string(kSpecSchema)) != kSpecSchema) throw DomainError("spec: unknown schema");
  SystemSpec s;
  const auto fam = j.at("family").get<std::string>();
  s.x_max = j.value("xmax", 1e6);
  if (j.contains("seeds")) s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (fam == "prescription") {
    s.family = Family::Prescription;
    const auto& p = j.at("prescription");
    s.prescription.S = detail::multiset_from_json(p.value("S", json::array()));
    s.prescription.R = detail::multiset_from_json(p.value("R", json::array()));
    s.prescription.delta = p.value("delta", 0.25);
    if (p.contains("M") && !(p["M"].is_string() && p["M"] == "auto")) s.prescription.M = p["M"].get<int>();
  } else if (fam == "oscillatory") {
    s.family = Family::Oscillatory;
    const auto& o = j.at("oscillatory");
    const double alpha = o.at("alpha").get<double>(), beta = o.at("beta").get<double>();
    if (o.contains("tau")) {
      s.oscillatory.alpha = alpha;
      s.oscillatory.beta = beta;
      s.oscillatory.tau = o.at("tau").get<std::vector<double>>();
      s.oscillatory.delta = o.at("delta").get<std::vector<double>>();
      s.oscillatory.nu = o.at("nu").get<std::vector<double>>();
      if (o.value("adjust", true)) s.oscillatory.adjust_to_lattice();
    } else {
      s.oscillatory = OscillatorySpec::desk(alpha, beta, o.value("blocks", 6), o.value("tau1", 20.0));
    }
  } else if (fam == "subtractive") {
    s.family = Family::Subtractive;
    const auto& t = j.at("subtractive");
    s.subtractive.alpha = t.at("alpha").get<double>();
    s.subtractive.beta = t.at("beta").get<double>();
    s.subtractive.error_measure = t.value("error_measure", true);
  } else {
    throw DomainError("spec: unknown family '" + fam + "'");
  }
  s.prescription.x_max = s.oscillatory.x_max = s.x_max;
  s.validate();
  return s;
}

/// Canonical form; hashing this gives the config hash.
inline json spec_to_json(const SystemSpec& s) {
  json j{{"schema", kSpecSchema}, {"family", to_string(s.family)}, {"xmax", s.x_max}, {"seeds", s.seeds}};
  switch (s.family) {
    case Family::Prescription: {
      json p{{"S", detail::multiset_to_json(s.prescription.S)},
             {"R", detail::multiset_to_json(s.prescription.R)},
             {"delta", s.prescription.delta}};
      p["M"] = s.prescription.M ? json(*s.prescription.M) : json("auto");
      j["prescription"] = p;
      break;
    }
    case Family::Oscillatory:
      j["oscillatory"] = {{"alpha", s.oscillatory.alpha}, {"beta", s.oscillatory.beta}, {"tau", s.oscillatory.tau},
                          {"delta", s.oscillatory.delta}, {"nu", s.oscillatory.nu},      {"adjust", false}};
      break;
    case Family::Subtractive:
      j["subtractive"] = {{"alpha", s.subtractive.alpha},
                          {"beta", s.subtractive.beta},
                          {"error_measure", s.subtractive.error_measure}};
      break;
  }
  return j;
}

/// 64-bit FNV-1a, hex.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string config_hash(const SystemSpec& s) { return fnv1a_hex(spec_to_json(s).dump()); }

/// Non-finite numbers become strings so the document stays valid JSON.
inline json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline json manifest_json(const RunReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", number(c.value)}, {"lo", number(c.lo)}, {"hi", number(c.hi)},
                      {"passed", c.passed}});
  json seeds = json::array();
  for (const auto& s : r.seeds) {
    json v = json::object();
    for (const auto& [k, x] : s.values) v[k] = number(x);
    seeds.push_back({{"seed", s.seed}, {"primes", s.primes}, {"values", v}});
  }
  json cons = json::object();
  for (const auto& [k, x] : r.construction) cons[k] = number(x);
  json files = json::array();
  for (const auto& [name, _] : r.files) files.push_back(name);
  return {{"schema", kManifestSchema}, {"version", kVersion},  {"config_hash", config_hash(r.spec)},
          {"spec", spec_to_json(r.spec)}, {"construction", cons}, {"seeds", seeds},
          {"checks", checks},            {"files", files},       {"passed", r.passed()}};
}

inline json fit_json(const ResidualFit& f) {
  return {{"exponent", number(f.exponent)},
          {"stderr", number(f.stderr_exponent)},
          {"window", {f.window_lo, f.window_hi}},
          {"n_points", f.n_points}};
}

inline json mellin_json(const MellinValue& m) {
  return {{"s", {m.s.real(), m.s.imag()}},
          {"value", {m.value.real(), m.value.imag()}},
          {"truncation_bound", number(m.truncation_bound)}};
}

}  // namespace beurling
