#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rsmooth/analysis.hpp"

namespace rsmooth {

// Strict key = value run description. Values keep their original spelling so
// a manifest round-trips through serialization unchanged; unknown keys are
// rejected at parse time.
struct RunManifest {
  std::vector<std::pair<std::string, std::string>> entries;

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_num(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::vector<double> get_list(const std::string& key) const;  // comma separated
  void set(const std::string& key, const std::string& value);
  void set_num(const std::string& key, double value);
};

const std::vector<std::string>& manifest_known_keys();

RunManifest parse_manifest_text(const std::string& text);
RunManifest load_manifest(const std::string& path);
std::string serialize_manifest(const RunManifest& m);

// Extracts the manifest embedded in an output file header (the lines between
// manifest-begin and manifest-end).
RunManifest manifest_from_output(const std::string& file_text);

// Builds the instance a manifest describes (instance = psi|chain|drori|
// coordwise|hinge|periodic|tricky|quadbump).
ProblemInstance instance_from_manifest(const RunManifest& m);
ProblemParams params_from_manifest(const RunManifest& m);
OptimizerConfig optimizer_from_manifest(const RunManifest& m);
StepSizeFn stepsize_from_manifest(const RunManifest& m);

// Two-column (or grouped) plain-text series; fitted-slope annotation rows are
// prefixed '#'. x_axis must name the sweep axis and y_axis must be t_eps.
void emit_plot_data(std::ostream& out, const SweepResult& result, const std::string& x_axis,
                    const std::string& y_axis, const std::vector<std::string>& header_lines);

}  // namespace rsmooth
