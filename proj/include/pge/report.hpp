#pragma once

#include <cstddef>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pge/error.hpp"

namespace pge {

struct EvalReport {
  std::optional<double> pip;             // PIP(E, F) against the centralised embedding
  std::optional<double> pip_normalized;  // pip / |V|
  std::optional<double> bound;
  bool bound_in_theory = false;  // two non-overlapping parts and a spectral backend
  std::vector<double> spectrum;  // leading singular values of the signal matrix
  std::map<std::string, double> extrinsic;  // micro_f1, macro_f1, roc, ap, ...
  std::vector<std::string> skipped_labels;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    if (pip) j["pip"] = *pip;
    if (pip_normalized) j["pip_normalized"] = *pip_normalized;
    if (bound) {
      j["bound"] = *bound;
      j["bound_in_theory"] = bound_in_theory;
    }
    if (!spectrum.empty()) j["spectrum"] = spectrum;
    for (const auto& [k, v] : extrinsic) j[k] = v;
    if (!skipped_labels.empty()) j["skipped_labels"] = skipped_labels;
    j["warnings"] = warnings;
    return j;
  }

  // Flat "key = value" lines.
  void write_text(std::ostream& out) const {
    out << std::setprecision(10);
    if (pip) out << "pip = " << *pip << '\n';
    if (pip_normalized) out << "pip_normalized = " << *pip_normalized << '\n';
    if (bound) {
      out << "bound = " << *bound << '\n';
      out << "bound_in_theory = " << (bound_in_theory ? "true" : "false") << '\n';
    }
    if (!spectrum.empty()) {
      out << "spectrum =";
      for (double s : spectrum) out << ' ' << s;
      out << '\n';
    }
    for (const auto& [k, v] : extrinsic) out << k << " = " << v << '\n';
    if (!skipped_labels.empty()) {
      out << "skipped_labels =";
      for (const auto& l : skipped_labels) out << ' ' << l;
      out << '\n';
    }
    for (const auto& w : warnings) out << "warning = " << w << '\n';
  }

  std::string text() const {
    std::ostringstream s;
    write_text(s);
    return s.str();
  }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace pge
