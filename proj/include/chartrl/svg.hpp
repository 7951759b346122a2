#pragma once

#include <string>

#include "chartrl/dsl.hpp"

namespace chartrl {

/// Renders a chart spec as a standalone SVG 1.1 document. Pure function of
/// the spec: identical specs produce byte-identical output. Title and axis
/// labels, when present, each become one text element tagged with a class
/// attribute ("title", "xlabel", "ylabel").
std::string render_svg(const ChartSpec& spec);

}  // namespace chartrl
