#include "vib2move/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace vib2move {
namespace {

constexpr double kMm = 1000.0;
constexpr double kDeg = 180.0 / kPi;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-9 ? 0.0 : v);
  return buf;
}

// Tick spacing of 1, 2 or 5 times a power of ten, giving about `target` ticks.
double tick_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

constexpr const char* kStageColor[] = {"#5b9bd5", "#4caf50", "#e0609a"};
constexpr const char* kStageShade[] = {"#dcebf7", "#def2de", "#fbe1ec"};

const char* stage_color(Stage s) { return kStageColor[static_cast<int>(s) - 1]; }
const char* stage_shade(Stage s) { return kStageShade[static_cast<int>(s) - 1]; }

std::vector<Vec2> footprint(const PoseSE2& object_w, const ObjectModel& obj) {
  const Vec2 h = 0.5 * obj.extents;
  std::vector<Vec2> pts;
  for (Vec2 c : {Vec2{-h.x, -h.y}, Vec2{h.x, -h.y}, Vec2{h.x, h.y}, Vec2{-h.x, h.y}}) {
    pts.push_back(kMm * object_w.transform_point(c));
  }
  return pts;
}

std::vector<Vec2> mapped(const PlotArea& area, const std::vector<Vec2>& pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (Vec2 p : pts) out.push_back(area.map(p));
  return out;
}

void legend(SvgDocument& doc, Vec2 at, const std::vector<std::pair<std::string, std::string>>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Vec2 p{at.x, at.y + 16.0 * static_cast<double>(i)};
    doc.line(p, {p.x + 18.0, p.y}, items[i].second, 3.0);
    doc.text({p.x + 24.0, p.y + 4.0}, items[i].first, 11.0);
  }
}

}  // namespace

SvgDocument::SvgDocument(double width, double height) : width_(width), height_(height) {}

void SvgDocument::rect(double x, double y, double w, double h, std::string_view fill,
                       std::string_view stroke, double opacity) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
           num(h) + "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"";
  if (opacity < 1.0) body_ += " fill-opacity=\"" + num(opacity) + "\"";
  body_ += "/>\n";
}

void SvgDocument::line(Vec2 a, Vec2 b, std::string_view stroke, double width,
                       std::string_view dash) {
  body_ += "<line x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" + num(b.x) + "\" y2=\"" +
           num(b.y) + "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + num(width) +
           "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + std::string(dash) + "\"";
  body_ += "/>\n";
}

void SvgDocument::polyline(const std::vector<Vec2>& points, std::string_view stroke,
                           double width, std::string_view dash) {
  if (points.empty()) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" +
           num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + std::string(dash) + "\"";
  body_ += " points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ += ' ';
    body_ += num(points[i].x) + "," + num(points[i].y);
  }
  body_ += "\"/>\n";
}

void SvgDocument::polygon(const std::vector<Vec2>& points, std::string_view fill,
                          std::string_view stroke, double opacity) {
  body_ += "<polygon fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"";
  if (opacity < 1.0) body_ += " fill-opacity=\"" + num(opacity) + "\"";
  body_ += " points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ += ' ';
    body_ += num(points[i].x) + "," + num(points[i].y);
  }
  body_ += "\"/>\n";
}

void SvgDocument::circle(Vec2 center, double r, std::string_view fill, std::string_view stroke,
                         double stroke_width) {
  body_ += "<circle cx=\"" + num(center.x) + "\" cy=\"" + num(center.y) + "\" r=\"" + num(r) +
           "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
}

void SvgDocument::text(Vec2 at, std::string_view content, double size, std::string_view anchor,
                       std::string_view fill) {
  body_ += "<text x=\"" + num(at.x) + "\" y=\"" + num(at.y) + "\" font-size=\"" + num(size) +
           "\" text-anchor=\"" + std::string(anchor) + "\" fill=\"" + std::string(fill) + "\">" +
           escape(content) + "</text>\n";
}

std::string SvgDocument::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
         num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
         "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         body_ + "</svg>\n";
}

void Bounds::include(Vec2 p) noexcept {
  lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
  hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
}

void Bounds::pad(double fraction) noexcept {
  if (empty()) {
    lo = {-1.0, -1.0};
    hi = {1.0, 1.0};
    return;
  }
  const double dx = hi.x > lo.x ? fraction * (hi.x - lo.x) : std::max(fraction, 1e-9);
  const double dy = hi.y > lo.y ? fraction * (hi.y - lo.y) : std::max(fraction, 1e-9);
  lo = {lo.x - dx, lo.y - dy};
  hi = {hi.x + dx, hi.y + dy};
}

PlotArea::PlotArea(double left, double top, double width, double height, Bounds data,
                   bool equal_aspect)
    : left_(left), top_(top), width_(width), height_(height), data_(data) {
  if (data_.empty()) data_.pad(0.0);
  if (equal_aspect) {
    // Widen whichever axis is short so one data unit is square on screen.
    const double sx = (data_.hi.x - data_.lo.x) / width_;
    const double sy = (data_.hi.y - data_.lo.y) / height_;
    const double s = std::max(sx, sy);
    const Vec2 mid = 0.5 * (data_.lo + data_.hi);
    data_.lo = {mid.x - 0.5 * s * width_, mid.y - 0.5 * s * height_};
    data_.hi = {mid.x + 0.5 * s * width_, mid.y + 0.5 * s * height_};
  }
}

Vec2 PlotArea::map(Vec2 d) const noexcept {
  const double u = (d.x - data_.lo.x) / (data_.hi.x - data_.lo.x);
  const double v = (d.y - data_.lo.y) / (data_.hi.y - data_.lo.y);
  return {left_ + u * width_, top_ + (1.0 - v) * height_};
}

void PlotArea::axes(SvgDocument& doc, std::string_view x_label, std::string_view y_label,
                    std::string_view title) const {
  doc.rect(left_, top_, width_, height_, "none", "#444");
  const double xs = tick_step(data_.hi.x - data_.lo.x, 6);
  for (double t = std::ceil(data_.lo.x / xs) * xs; t <= data_.hi.x + 1e-9 * xs; t += xs) {
    const Vec2 p = map({t, data_.lo.y});
    doc.line(p, {p.x, p.y + 4.0}, "#444");
    doc.text({p.x, p.y + 16.0}, label(t), 10.0, "middle");
  }
  const double ys = tick_step(data_.hi.y - data_.lo.y, 6);
  for (double t = std::ceil(data_.lo.y / ys) * ys; t <= data_.hi.y + 1e-9 * ys; t += ys) {
    const Vec2 p = map({data_.lo.x, t});
    doc.line(p, {p.x - 4.0, p.y}, "#444");
    doc.text({p.x - 6.0, p.y + 3.5}, label(t), 10.0, "end");
  }
  doc.text({left_ + 0.5 * width_, top_ + height_ + 34.0}, x_label, 12.0, "middle");
  doc.text({left_ - 44.0, top_ - 8.0}, y_label, 12.0, "start");
  if (!title.empty()) doc.text({left_ + 0.5 * width_, top_ - 22.0}, title, 14.0, "middle");
}

std::string plot_pulse(const Trajectory& trajectory, const ObjectModel& obj,
                       const ContactPatch& patch) {
  SvgDocument doc(640, 560);
  if (trajectory.empty()) {
    doc.text({320, 280}, "empty trajectory", 14.0, "middle");
    return doc.str();
  }
  const PoseSE2& first = trajectory.front().object_w;
  const PoseSE2& last = trajectory.back().object_w;
  const PoseSE2& finger = trajectory.front().finger_w;

  Bounds b;
  std::vector<Vec2> com;
  for (const auto& r : trajectory) com.push_back(kMm * com_world(r.object_w, obj));
  for (Vec2 p : com) b.include(p);
  for (Vec2 p : footprint(first, obj)) b.include(p);
  for (Vec2 p : footprint(last, obj)) b.include(p);
  b.pad(0.05);
  const PlotArea area(70, 50, 520, 440, b, true);

  doc.polygon(mapped(area, footprint(first, obj)), "#eeeeee", "#999999");
  doc.polygon(mapped(area, footprint(last, obj)), "#d8d8d8", "#555555", 0.6);

  // One segment per step, colored by the motion class at its start.
  for (std::size_t i = 0; i + 1 < com.size(); ++i) {
    const bool rot = trajectory[i].motion == MotionClass::kNearRotational;
    doc.line(area.map(com[i]), area.map(com[i + 1]), rot ? "#e377c2" : "#17becf", 2.5);
  }
  doc.circle(area.map(com.front()), 4.0, "white", "#333");
  doc.circle(area.map(com.back()), 4.0, "#333");

  const Vec2 pc = kMm * pressure_center_world(finger, patch);
  const Vec2 edge = area.map(pc + Vec2{kMm * patch.r0, 0.0});
  doc.circle(area.map(pc), std::abs(edge.x - area.map(pc).x), "none", "#333", 1.0);
  doc.circle(area.map(pc), 3.0, "#d62728");

  area.axes(doc, "world x (mm)", "world y (mm)", "Object CoM path over one pulse");
  legend(doc, {90, 70}, {{"near-rotational", "#e377c2"}, {"translational", "#17becf"}});
  return doc.str();
}

std::string plot_plan(const PlanResult& result, const Scenario& s) {
  SvgDocument doc(1180, 560);
  const ObjectModel& obj = s.object;

  // Left: the finger path in the object frame.
  Bounds b;
  const std::vector<Vec2> outline = footprint(PoseSE2::identity(), obj);
  for (Vec2 p : outline) b.include(p);
  b.pad(0.08);
  const PlotArea left(70, 50, 440, 440, b, true);
  doc.polygon(mapped(left, outline), "#f4f4f4", "#777");

  const Vec2 com = kMm * obj.com_offset;
  doc.line(left.map(com + Vec2{-4, 0}), left.map(com + Vec2{4, 0}), "#333", 1.5);
  doc.line(left.map(com + Vec2{0, -4}), left.map(com + Vec2{0, 4}), "#333", 1.5);

  const Vec2 goal = kMm * s.goal_relative.translation();
  const double r_px =
      std::abs(left.map(goal + Vec2{kMm * s.planner.r_error, 0}).x - left.map(goal).x);
  doc.circle(left.map(goal), r_px, "none", "#d62728", 1.0);
  const Vec2 heading{std::cos(s.goal_relative.theta()), std::sin(s.goal_relative.theta())};
  doc.line(left.map(goal), left.map(goal + 10.0 * heading), "#d62728", 2.0);

  Vec2 prev = kMm * s.initial_relative.translation();
  doc.circle(left.map(prev), 4.0, "white", "#333");
  for (const auto& a : result.actions) {
    const Vec2 p = kMm * a.true_relative.translation();
    if (p == prev) continue;
    doc.line(left.map(prev), left.map(p), stage_color(a.stage), 2.5);
    prev = p;
  }
  doc.circle(left.map(prev), 4.0, "#333");
  left.axes(doc, "object x (mm)", "object y (mm)", "Finger path in the object frame");
  legend(doc, {88, 70},
         {{"centering", kStageColor[0]}, {"positioning", kStageColor[1]},
          {"orientation", kStageColor[2]}});

  // Right: orientation history over the action index.
  Bounds h;
  h.include({0.0, s.initial_relative.theta() * kDeg});
  h.include({0.0, s.goal_relative.theta() * kDeg});
  const double n = static_cast<double>(std::max<std::size_t>(result.actions.size(), 1));
  h.include({n, s.initial_finger_theta * kDeg});
  for (const auto& a : result.actions) {
    h.include({static_cast<double>(a.index), a.true_relative.theta() * kDeg});
    h.include({static_cast<double>(a.index), a.finger_theta * kDeg});
  }
  h.pad(0.06);
  h.lo.x = 0.0;
  h.hi.x = n;
  const PlotArea right(640, 50, 500, 440, h);

  std::size_t start = 0;
  for (std::size_t i = 1; i <= result.actions.size(); ++i) {
    if (i < result.actions.size() && result.actions[i].stage == result.actions[start].stage) {
      continue;
    }
    const Vec2 a = right.map({static_cast<double>(start), h.hi.y});
    const Vec2 z = right.map({static_cast<double>(i), h.lo.y});
    doc.rect(a.x, a.y, z.x - a.x, z.y - a.y, stage_shade(result.actions[start].stage));
    start = i;
  }
  const Vec2 g0 = right.map({0.0, s.goal_relative.theta() * kDeg});
  const Vec2 g1 = right.map({n, s.goal_relative.theta() * kDeg});
  doc.line(g0, g1, "#d62728", 1.0, "5,4");

  std::vector<Vec2> rel{right.map({0.0, s.initial_relative.theta() * kDeg})};
  std::vector<Vec2> cmd{right.map({0.0, s.initial_finger_theta * kDeg})};
  for (const auto& a : result.actions) {
    const double x = static_cast<double>(a.index + 1);
    rel.push_back(right.map({x, a.true_relative.theta() * kDeg}));
    cmd.push_back(right.map({x, a.finger_theta * kDeg}));
  }
  doc.polyline(cmd, "#ff7f0e", 1.5);
  doc.polyline(rel, "#1f4e79", 2.0);
  right.axes(doc, "action index", "angle (deg)", "Orientation over the action sequence");
  legend(doc, {660, 70},
         {{"finger-in-object angle", "#1f4e79"}, {"finger orientation", "#ff7f0e"},
          {"goal angle", "#d62728"}});
  return doc.str();
}

std::string plot_error_distribution(const MetricsReport& report) {
  SvgDocument doc(1100, 520);
  std::map<std::string, std::size_t> column;
  for (const auto& m : report.per_object) column.emplace(m.object, column.size());
  const double n_obj = static_cast<double>(std::max<std::size_t>(column.size(), 1));

  const auto panel = [&](double left, bool angular) {
    const double unit = angular ? kDeg : kMm;
    Bounds b;
    b.include({-0.5, 0.0});
    b.include({n_obj - 0.5, 0.0});
    for (const auto& t : report.trials) {
      if (t.success) b.include({0.0, (angular ? t.angle_error : t.pos_error) * unit});
    }
    for (const auto& m : report.per_object) {
      const double r = (angular ? m.rmse_angle : m.rmse_pos) * unit;
      if (std::isfinite(r)) b.include({0.0, r});
    }
    b.hi.y *= 1.1;
    if (b.hi.y <= 0.0) b.hi.y = 1.0;
    const PlotArea area(left, 50, 420, 380, b);

    for (const auto& t : report.trials) {
      const auto it = column.find(t.object);
      if (!t.success || it == column.end()) continue;
      // Spread the dots sideways by trial index; no randomness in plots.
      const double jitter = 0.3 * (static_cast<double>(t.trial % 17) / 16.0 - 0.5);
      const double v = (angular ? t.angle_error : t.pos_error) * unit;
      doc.circle(area.map({static_cast<double>(it->second) + jitter, v}), 3.0, "#1f77b4", "none");
    }
    for (const auto& m : report.per_object) {
      const double x = static_cast<double>(column.at(m.object));
      const double r = (angular ? m.rmse_angle : m.rmse_pos) * unit;
      if (std::isfinite(r)) doc.line(area.map({x - 0.35, r}), area.map({x + 0.35, r}), "#d62728", 2.0);
      doc.text(area.map({x, b.lo.y}) + Vec2{0, 30}, m.object, 10.0, "middle");
    }
    area.axes(doc, "", angular ? "orientation error (deg)" : "position error (mm)",
              angular ? "Final orientation error" : "Final position error");
  };
  panel(80, false);
  panel(620, true);
  legend(doc, {100, 470}, {{"RMSE per object (successful trials)", "#d62728"}});
  return doc.str();
}

}  // namespace vib2move
