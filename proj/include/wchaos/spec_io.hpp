// On-disk kernel specification documents. A spec is a JSON object
//
//   { "dim": 3,
//     "components": [
//       { "name": "F1", "order": 2,
//         "coeffs": [ { "idx": [0,0], "value": 1.0 }, ... ] } ] }
//
// with coefficients given at sorted index tuples (the canonical
// representative convention of SymmetricKernel, which keeps multiplicity
// bookkeeping out of the file format).
#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wchaos/chaos.hpp"
#include "wchaos/report.hpp"
#include "wchaos/tensor.hpp"

namespace wchaos {

struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

struct KernelSpecComponent {
  std::string name;
  int order = 1;
  std::vector<std::pair<std::vector<int>, double>> coeffs;

  bool operator==(const KernelSpecComponent&) const = default;
};

struct KernelSpecDocument {
  int dim = 1;
  std::vector<KernelSpecComponent> components;

  bool operator==(const KernelSpecDocument&) const = default;
};

inline KernelSpecDocument parse_spec_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("spec root must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw SpecError("spec needs an integer \"dim\"");
  KernelSpecDocument doc;
  doc.dim = j["dim"].get<int>();
  if (doc.dim < 1) throw SpecError("\"dim\" must be positive");
  if (!j.contains("components") || !j["components"].is_array() || j["components"].empty())
    throw SpecError("spec needs a nonempty \"components\" array");

  for (const auto& jc : j["components"]) {
    if (!jc.is_object()) throw SpecError("component entries must be objects");
    KernelSpecComponent comp;
    comp.name = jc.contains("name") && jc["name"].is_string() ? jc["name"].get<std::string>()
                                                              : std::string();
    if (comp.name.empty()) throw SpecError("component needs a \"name\" string");
    if (!jc.contains("order") || !jc["order"].is_number_integer())
      throw SpecError("component \"" + comp.name + "\" needs an integer \"order\"");
    comp.order = jc["order"].get<int>();
    if (comp.order < 1) throw SpecError("component \"" + comp.name + "\": order must be >= 1");
    if (!jc.contains("coeffs") || !jc["coeffs"].is_array())
      throw SpecError("component \"" + comp.name + "\" needs a \"coeffs\" array");

    for (const auto& jco : jc["coeffs"]) {
      if (!jco.is_object() || !jco.contains("idx") || !jco.contains("value") ||
          !jco["idx"].is_array() || !jco["value"].is_number())
        throw SpecError("component \"" + comp.name + "\": coeffs entries need idx/value");
      std::vector<int> idx;
      for (const auto& je : jco["idx"]) {
        if (!je.is_number_integer())
          throw SpecError("component \"" + comp.name + "\": idx entries must be integers");
        idx.push_back(je.get<int>());
      }
      if (static_cast<int>(idx.size()) != comp.order)
        throw SpecError("component \"" + comp.name + "\": idx length must equal order");
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= doc.dim)
          throw SpecError("component \"" + comp.name + "\": idx entry out of range");
        if (k > 0 && idx[k] < idx[k - 1])
          throw SpecError("component \"" + comp.name + "\": idx must be sorted non-decreasing");
      }
      const double value = jco["value"].get<double>();
      if (!std::isfinite(value))
        throw SpecError("component \"" + comp.name + "\": value must be finite");
      for (const auto& [prev, v] : comp.coeffs) {
        (void)v;
        if (prev == idx)
          throw SpecError("component \"" + comp.name + "\": duplicate idx tuple");
      }
      comp.coeffs.emplace_back(std::move(idx), value);
    }
    doc.components.push_back(std::move(comp));
  }
  return doc;
}

inline KernelSpecDocument load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

inline std::string serialize_spec(const KernelSpecDocument& doc) {
  JsonWriter w;
  w.begin_object();
  w.key("dim").value(doc.dim);
  w.key("components").begin_array();
  for (const auto& comp : doc.components) {
    w.begin_object();
    w.key("name").value(comp.name);
    w.key("order").value(comp.order);
    w.key("coeffs").begin_array();
    for (const auto& [idx, value] : comp.coeffs) {
      w.begin_object();
      w.key("idx").begin_array();
      for (int e : idx) w.value(e);
      w.end_array();
      w.key("value").value(value);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

inline ChaosVector to_chaos_vector(const KernelSpecDocument& doc) {
  std::vector<SymmetricKernel> kernels;
  kernels.reserve(doc.components.size());
  for (const auto& comp : doc.components) {
    SymmetricKernel k(doc.dim, comp.order);
    for (const auto& [idx, value] : comp.coeffs) k.set(idx, value);
    if (k.is_zero())
      throw SpecError("component \"" + comp.name + "\" is identically zero");
    kernels.push_back(std::move(k));
  }
  return ChaosVector::pure(kernels);
}

}  // namespace wchaos
