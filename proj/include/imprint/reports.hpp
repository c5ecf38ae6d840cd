#pragma once

// Human- and machine-readable renderings of measure reports: the per-report
// CSV, the combined summary CSV, and the grouped-bar SVG chart.

#include <string>
#include <vector>

#include "imprint/maxent_ipf.hpp"

namespace imprint::report {

// "quantity,value" rows with six decimals.
std::string measures_csv(const MeasureReport& report);

struct SetMeasures {
  std::string name;
  double i = 0.0;
  double mu_star = 0.0;
  double r = 0.0;
};

// "set,i,neg_mu_star,r" with six decimals.
std::string summary_csv(const std::vector<SetMeasures>& sets);

// One pair of bars per set: interaction information I and -mu*. Bars are the
// only <rect> elements in the document (class "bar").
std::string grouped_bar_svg(const std::vector<SetMeasures>& sets, const std::string& title);

std::string xml_escape(const std::string& text);

}  // namespace imprint::report
