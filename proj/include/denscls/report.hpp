#pragma once

#include "denscls/cv.hpp"

#include <string>
#include <utility>
#include <vector>

namespace denscls {

/// Resolved run settings echoed verbatim into every output for
/// provenance, in insertion order.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Machine-readable report of a cross-validation run. Deterministic for a
/// given result: numbers serialize at full precision, keys are sorted, and
/// nothing environment-dependent (timings, paths, dates) is included. The
/// two-decimal percent strings shown by the text report are embedded so
/// both renderings agree on every displayed number.
std::string render_cv_json(const CvResult& result, const std::string& model_name,
                           const ConfigEcho& config, const std::string& tool_version);

/// Human-readable report: a benchmark-style table row
/// "| <model> | <accuracy>% | <f1>% |" with two decimals, the per-fold
/// breakdown, the resolved configuration, and wall-clock timings (which
/// stay out of the machine-readable report).
std::string render_cv_text(const CvResult& result, const std::string& model_name,
                           const ConfigEcho& config, const std::string& tool_version,
                           double total_seconds);

/// Fold assignments as CSV: row_index,fold.
std::string render_fold_csv(const FoldPlan& plan);

}  // namespace denscls
