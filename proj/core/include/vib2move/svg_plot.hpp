#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vib2move/planner.hpp"
#include "vib2move/scenario.hpp"
#include "vib2move/se2.hpp"
#include "vib2move/sim_harness.hpp"
#include "vib2move/slide_integrator.hpp"

namespace vib2move {

/// Minimal SVG writer. Coordinates are pixels with y pointing down; numbers
/// are printed with two decimals so output is stable across runs.
class SvgDocument {
 public:
  SvgDocument(double width, double height);

  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none", double opacity = 1.0);
  void line(Vec2 a, Vec2 b, std::string_view stroke, double width = 1.0,
            std::string_view dash = "");
  void polyline(const std::vector<Vec2>& points, std::string_view stroke, double width = 1.0,
                std::string_view dash = "");
  void polygon(const std::vector<Vec2>& points, std::string_view fill, std::string_view stroke,
               double opacity = 1.0);
  void circle(Vec2 center, double r, std::string_view fill, std::string_view stroke = "none",
              double stroke_width = 1.0);
  void text(Vec2 at, std::string_view content, double size = 12.0,
            std::string_view anchor = "start", std::string_view fill = "#222");

  [[nodiscard]] std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

/// Axis-aligned data range.
struct Bounds {
  Vec2 lo{1e300, 1e300};
  Vec2 hi{-1e300, -1e300};

  void include(Vec2 p) noexcept;
  /// Grows each side by `fraction` of the span (or by `fraction` itself when
  /// the span is zero).
  void pad(double fraction) noexcept;
  [[nodiscard]] bool empty() const noexcept { return lo.x > hi.x; }
};

/// Maps data coordinates (y up) into a pixel rectangle of a document.
class PlotArea {
 public:
  PlotArea(double left, double top, double width, double height, Bounds data,
           bool equal_aspect = false);

  [[nodiscard]] Vec2 map(Vec2 data) const noexcept;
  [[nodiscard]] const Bounds& data() const noexcept { return data_; }
  /// Frame, ticks with labels, axis titles and an optional plot title.
  void axes(SvgDocument& doc, std::string_view x_label, std::string_view y_label,
            std::string_view title = "") const;

 private:
  double left_, top_, width_, height_;
  Bounds data_;
};

/// Object CoM path in the world frame (mm) over one pulse, colored by motion
/// class, with the object outline at the start and end of the pulse.
std::string plot_pulse(const Trajectory& trajectory, const ObjectModel& obj,
                       const ContactPatch& patch);

/// Finger path in the object frame colored by planner stage, next to the
/// relative orientation and finger command over the action sequence with the
/// stages shaded.
std::string plot_plan(const PlanResult& result, const Scenario& s);

/// Final position and orientation errors of every trial, grouped by object,
/// with each object's RMSE marked.
std::string plot_error_distribution(const MetricsReport& report);

}  // namespace vib2move
