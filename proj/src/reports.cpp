#include "imprint/reports.hpp"

#include <algorithm>
#include <cmath>

#include "imprint/detail/text.hpp"

namespace imprint::report {

using detail::format_fixed;

std::string measures_csv(const MeasureReport& r) {
  std::string out = "quantity,value\n";
  auto row = [&out](const std::string& name, double v) { out += detail::csv_escape(name) + "," + format_fixed(v) + "\n"; };
  for (const auto& axis : r.axes) row("H(" + axis + ")", r.entropies.at(axis));
  for (const auto& [pair, h] : r.pair_entropies) row("H(" + pair + ")", h);
  row("H(joint)", r.joint_entropy);
  row("mu_star", r.mu_star);
  row("q", r.q);
  row("i", r.i);
  row("r", r.r);
  row("r_krippendorff", r.r_krippendorff);
  row("ipf_max_margin_error", r.ipf_max_margin_error);
  out += "ipf_iterations," + std::to_string(r.ipf_iterations) + "\n";
  out += std::string("ipf_converged,") + (r.ipf_converged ? "true" : "false") + "\n";
  return out;
}

std::string summary_csv(const std::vector<SetMeasures>& sets) {
  std::string out = "set,i,neg_mu_star,r\n";
  for (const auto& s : sets) {
    out += detail::csv_escape(s.name) + "," + format_fixed(s.i) + "," + format_fixed(-s.mu_star) + "," +
           format_fixed(s.r) + "\n";
  }
  return out;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

namespace {

std::string num(double v) { return format_fixed(v, 2); }

}  // namespace

std::string grouped_bar_svg(const std::vector<SetMeasures>& sets, const std::string& title) {
  constexpr double kLeft = 70, kRight = 20, kTop = 50, kBottom = 80, kPlotHeight = 300;
  constexpr double kGroupWidth = 90, kBarWidth = 30;
  const double plot_width = std::max<double>(1, sets.size()) * kGroupWidth;
  const double width = kLeft + plot_width + kRight;
  const double height = kTop + kPlotHeight + kBottom;

  double lo = 0.0, hi = 0.0;
  for (const auto& s : sets) {
    lo = std::min({lo, s.i, -s.mu_star});
    hi = std::max({hi, s.i, -s.mu_star});
  }
  if (hi - lo <= 0.0) hi = 1.0;
  const double pad = 0.05 * (hi - lo);
  if (hi > 0.0) hi += pad;
  if (lo < 0.0) lo -= pad;
  auto y_of = [&](double v) { return kTop + (hi - v) / (hi - lo) * kPlotHeight; };
  const double y0 = y_of(0.0);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "  <title>" + xml_escape(title) + "</title>\n";
  svg += "  <text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         xml_escape(title) + "</text>\n";

  // Axes, zero line and a few gridline labels.
  svg += "  <line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
         num(kTop + kPlotHeight) + "\" stroke=\"black\"/>\n";
  svg += "  <line x1=\"" + num(kLeft) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(kLeft + plot_width) + "\" y2=\"" +
         num(y0) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    svg += "  <text x=\"" + num(kLeft - 6) + "\" y=\"" + num(y_of(v) + 4) + "\" text-anchor=\"end\">" +
           format_fixed(v, 3) + "</text>\n";
  }
  svg += "  <text x=\"16\" y=\"" + num(kTop + kPlotHeight / 2) + "\" transform=\"rotate(-90 16 " +
         num(kTop + kPlotHeight / 2) + ")\" text-anchor=\"middle\">bits</text>\n";

  for (std::size_t g = 0; g < sets.size(); ++g) {
    const auto& s = sets[g];
    const double gx = kLeft + g * kGroupWidth + (kGroupWidth - 2 * kBarWidth) / 2;
    const double values[2] = {s.i, -s.mu_star};
    const char* classes[2] = {"bar bar-i", "bar bar-neg-mu-star"};
    const char* fills[2] = {"#4878a8", "#d98b3a"};
    for (int b = 0; b < 2; ++b) {
      const double top = std::min(y_of(values[b]), y0);
      const double h = std::abs(y_of(values[b]) - y0);
      svg += "  <rect class=\"" + std::string(classes[b]) + "\" x=\"" + num(gx + b * kBarWidth) + "\" y=\"" +
             num(top) + "\" width=\"" + num(kBarWidth) + "\" height=\"" + num(h) + "\" fill=\"" + fills[b] +
             "\"><title>" + xml_escape(s.name) + (b == 0 ? " I = " : " -mu* = ") + format_fixed(values[b]) +
             "</title></rect>\n";
    }
    svg += "  <text x=\"" + num(gx + kBarWidth) + "\" y=\"" + num(kTop + kPlotHeight + 18) +
           "\" text-anchor=\"middle\">" + xml_escape(s.name) + "</text>\n";
  }

  const double ly = height - 24;
  svg += "  <circle cx=\"" + num(kLeft + 6) + "\" cy=\"" + num(ly - 4) + "\" r=\"6\" fill=\"#4878a8\"/>\n";
  svg += "  <text x=\"" + num(kLeft + 16) + "\" y=\"" + num(ly) + "\">I (interaction information against the pairwise fit)</text>\n";
  svg += "  <circle cx=\"" + num(kLeft + 6) + "\" cy=\"" + num(ly + 12) + "\" r=\"6\" fill=\"#d98b3a\"/>\n";
  svg += "  <text x=\"" + num(kLeft + 16) + "\" y=\"" + num(ly + 16) + "\">-mu* (= Q)</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace imprint::report
