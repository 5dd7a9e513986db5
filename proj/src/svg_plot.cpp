#include "denscls/svg_plot.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace denscls {

namespace {

// Region fills per class index (cycled), their stronger point strokes, and
// the reserved rejection color.
constexpr const char* kRegionFills[] = {"#aec7e8", "#ffbb78", "#c5b0d5",
                                        "#f7b6d2", "#dbdb8d", "#9edae5"};
constexpr const char* kPointFills[] = {"#1f77b4", "#ff7f0e", "#9467bd",
                                       "#e377c2", "#bcbd22", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof(kRegionFills) / sizeof(kRegionFills[0]);
constexpr const char* kUnclassifiedFill = "#59a14f";  // green

std::string fixed(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

}  // namespace

std::string render_regions_svg(const GenerativeClassifier& model, const Dataset& points,
                               const GridSpec& grid, bool use_threshold) {
    if (model.d != 2)
        throw DimensionMismatch("render_regions_svg: needs a 2-D model, got d=" +
                                std::to_string(model.d));
    if (!(grid.step > 0.0) || !(grid.xmax > grid.xmin) || !(grid.ymax > grid.ymin))
        throw std::invalid_argument("render_regions_svg: degenerate grid");
    if (points.n() > 0 && points.dim() != 2)
        throw DimensionMismatch("render_regions_svg: points must be 2-D");

    const auto nx = static_cast<Index>(std::floor((grid.xmax - grid.xmin) / grid.step)) + 1;
    const auto ny = static_cast<Index>(std::floor((grid.ymax - grid.ymin) / grid.step)) + 1;

    constexpr double kPlotSize = 600.0, kMargin = 40.0, kLegendWidth = 150.0;
    const double width = kPlotSize + 2 * kMargin + kLegendWidth;
    const double height = kPlotSize + 2 * kMargin;
    const double scale_x = kPlotSize / (grid.xmax - grid.xmin);
    const double scale_y = kPlotSize / (grid.ymax - grid.ymin);
    const auto px = [&](double x) { return kMargin + (x - grid.xmin) * scale_x; };
    const auto py = [&](double y) { return kMargin + (grid.ymax - y) * scale_y; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // Predicted label index per grid cell, -1 for Unclassified. One batch
    // per row keeps memory flat for fine grids.
    bool any_unclassified = false;
    svg << "<g stroke=\"none\">\n";
    for (Index row = 0; row < ny; ++row) {
        const double y = grid.ymin + static_cast<double>(row) * grid.step;
        Matrix batch(nx, 2);
        for (Index col = 0; col < nx; ++col) {
            batch(col, 0) = grid.xmin + static_cast<double>(col) * grid.step;
            batch(col, 1) = y;
        }
        const auto predictions = predict_batch(model, batch, use_threshold);

        const auto label_index = [&](Index col) -> int {
            const auto& label = predictions[static_cast<std::size_t>(col)].label;
            if (!label) return -1;
            return static_cast<int>(model.prior.index_of(*label));
        };

        // Merge runs of the same label into one rectangle.
        const double top = py(y + grid.step / 2.0);
        const double cell_height = grid.step * scale_y;
        Index run_start = 0;
        for (Index col = 1; col <= nx; ++col) {
            if (col < nx && label_index(col) == label_index(run_start)) continue;
            const int label = label_index(run_start);
            if (label == -1) any_unclassified = true;
            const char* fill = label == -1
                                   ? kUnclassifiedFill
                                   : kRegionFills[static_cast<std::size_t>(label) % kPaletteSize];
            const double left = px(grid.xmin + static_cast<double>(run_start) * grid.step -
                                   grid.step / 2.0);
            const double run_width = static_cast<double>(col - run_start) * grid.step * scale_x;
            svg << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\""
                << fixed(run_width) << "\" height=\"" << fixed(cell_height) << "\" fill=\""
                << fill << "\"/>\n";
            run_start = col;
        }
    }
    svg << "</g>\n";

    // Overlaid data points, colored by their labels.
    svg << "<g stroke=\"#333333\" stroke-width=\"0.5\">\n";
    for (Index i = 0; i < points.n(); ++i) {
        const double x = points.features(i, 0), y = points.features(i, 1);
        if (x < grid.xmin || x > grid.xmax || y < grid.ymin || y > grid.ymax) continue;
        const Index label = model.prior.index_of(points.labels[static_cast<std::size_t>(i)]);
        const char* fill = label >= 0
                               ? kPointFills[static_cast<std::size_t>(label) % kPaletteSize]
                               : "#666666";
        svg << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y))
            << "\" r=\"2.5\" fill=\"" << fill << "\"/>\n";
    }
    svg << "</g>\n";

    // Frame and corner coordinates.
    svg << "<rect x=\"" << fixed(kMargin) << "\" y=\"" << fixed(kMargin) << "\" width=\""
        << fixed(kPlotSize) << "\" height=\"" << fixed(kPlotSize)
        << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << fixed(kMargin) << "\" y=\"" << fixed(height - kMargin / 2.5)
        << "\" font-size=\"12\">" << fixed(grid.xmin) << "</text>\n";
    svg << "<text x=\"" << fixed(kMargin + kPlotSize - 24.0) << "\" y=\""
        << fixed(height - kMargin / 2.5) << "\" font-size=\"12\">" << fixed(grid.xmax)
        << "</text>\n";
    svg << "<text x=\"8\" y=\"" << fixed(kMargin + kPlotSize) << "\" font-size=\"12\">"
        << fixed(grid.ymin) << "</text>\n";
    svg << "<text x=\"8\" y=\"" << fixed(kMargin + 10.0) << "\" font-size=\"12\">"
        << fixed(grid.ymax) << "</text>\n";

    // Legend.
    double legend_y = kMargin + 10.0;
    const double legend_x = kMargin + kPlotSize + 20.0;
    for (int c = 0; c < model.prior.num_classes(); ++c) {
        svg << "<rect x=\"" << fixed(legend_x) << "\" y=\"" << fixed(legend_y - 10.0)
            << "\" width=\"12\" height=\"12\" fill=\""
            << kRegionFills[static_cast<std::size_t>(c) % kPaletteSize] << "\"/>\n";
        svg << "<text x=\"" << fixed(legend_x + 18.0) << "\" y=\"" << fixed(legend_y)
            << "\" font-size=\"13\">class " << model.prior.labels[static_cast<std::size_t>(c)]
            << "</text>\n";
        legend_y += 20.0;
    }
    if (any_unclassified) {
        svg << "<rect x=\"" << fixed(legend_x) << "\" y=\"" << fixed(legend_y - 10.0)
            << "\" width=\"12\" height=\"12\" fill=\"" << kUnclassifiedFill << "\"/>\n";
        svg << "<text x=\"" << fixed(legend_x + 18.0) << "\" y=\"" << fixed(legend_y)
            << "\" font-size=\"13\">unclassified</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

void write_regions_svg(const std::string& path, const GenerativeClassifier& model,
                       const Dataset& points, const GridSpec& grid, bool use_threshold) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << render_regions_svg(model, points, grid, use_threshold);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace denscls
