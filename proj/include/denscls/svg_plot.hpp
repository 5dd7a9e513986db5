#pragma once

#include "denscls/classifier.hpp"
#include "denscls/dataset.hpp"

#include <string>

namespace denscls {

/// Rectangular evaluation grid in data coordinates; cells are step-sized
/// squares centered on the grid points.
struct GridSpec {
    double xmin = -4.0, xmax = 4.0;
    double ymin = -4.0, ymax = 4.0;
    double step = 0.05;
};

/// Renders the classifier's decision regions over the grid as a standalone
/// SVG: one color per class, green for rejected (Unclassified) cells, the
/// dataset's points overlaid, and a legend. Contiguous same-label cells in
/// each row merge into single rectangles. Requires a 2-D model; the
/// dataset may be empty (no points drawn).
std::string render_regions_svg(const GenerativeClassifier& model, const Dataset& points,
                               const GridSpec& grid, bool use_threshold);

void write_regions_svg(const std::string& path, const GenerativeClassifier& model,
                       const Dataset& points, const GridSpec& grid, bool use_threshold);

}  // namespace denscls
