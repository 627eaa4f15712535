#include "vib2move/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vib2move/errors.hpp"

namespace vib2move {
namespace {

using Json = nlohmann::ordered_json;

enum class Unit { kNone, kMillimeter, kDegree, kGram };

double from_file(double v, Unit u) {
  switch (u) {
    case Unit::kMillimeter:
    case Unit::kGram:
      return v / 1000.0;
    case Unit::kDegree:
      return v * kPi / 180.0;
    case Unit::kNone:
      break;
  }
  return v;
}

// A file value that reads back as exactly `si`. The 12-digit rounding wins
// when it survives the trip, so 0.09 kg is written as 90 rather than
// 90.00000000000001.
double to_file(double si, Unit u) {
  if (u == Unit::kNone || !std::isfinite(si)) return si;
  const double v = u == Unit::kDegree ? si * 180.0 / kPi : si * 1000.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double rounded = std::strtod(buf, nullptr);
  if (from_file(rounded, u) == si) return rounded;
  if (from_file(v, u) == si) return v;
  double lo = v;
  double hi = v;
  for (int i = 0; i < 16; ++i) {
    lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
    hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
    if (from_file(lo, u) == si) return lo;
    if (from_file(hi, u) == si) return hi;
  }
  return v;
}

class Reader {
 public:
  Reader(const Json& j, std::string path, std::string_view source)
      : j_(j), path_(std::move(path)), source_(source) {
    if (!j_.is_object()) fail("", "expected a JSON object");
  }

  void text(const char* key, std::string& out) {
    if (const Json* v = take(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }

  void number(const char* key, double& out, Unit u = Unit::kNone) {
    if (const Json* v = take(key)) out = from_file(as_number(*v, key), u);
  }

  template <typename Int>
  void integer(const char* key, Int& out) {
    if (const Json* v = take(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      if constexpr (std::is_unsigned_v<Int>) {
        if (!v->is_number_unsigned()) fail(key, "expected a non-negative integer");
        out = v->get<Int>();
      } else {
        const auto wide = v->get<long long>();
        if (wide < std::numeric_limits<Int>::min() || wide > std::numeric_limits<Int>::max()) {
          fail(key, "integer out of range");
        }
        out = static_cast<Int>(wide);
      }
    }
  }

  void vec2(const char* key, Vec2& out, Unit u) {
    if (const Json* v = take(key)) {
      if (!v->is_array() || v->size() != 2) fail(key, "expected an array of two numbers");
      out = {from_file(as_number((*v)[0], key), u), from_file(as_number((*v)[1], key), u)};
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <typename Fn>
  void block(const char* key, Fn&& fn) {
    if (const Json* v = take(key)) {
      Reader child(*v, qualified(key), source_);
      fn(child);
      child.finish();
    }
  }

  /// Raw access for values with a shape of their own (e.g. lists).
  const Json* raw(const char* key) { return take(key); }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) fail(item.key().c_str(), "unknown key");
    }
  }

  [[noreturn]] void fail(const char* key, const std::string& what) const {
    const std::string where = key[0] != '\0' ? qualified(key) : (path_.empty() ? "<root>" : path_);
    throw Error(ErrorCode::kParse, std::string(source_) + ": " + where + ": " + what);
  }

  [[nodiscard]] const std::string& path() const noexcept { return path_; }
  [[nodiscard]] std::string_view source() const noexcept { return source_; }

 private:
  const Json* take(const char* key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double as_number(const Json& v, const char* key) const {
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  std::string qualified(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  const Json& j_;
  std::string path_;
  std::string_view source_;
  std::set<std::string> used_;
};

class Writer {
 public:
  void text(const char* key, const std::string& v) { j_[key] = v; }
  void number(const char* key, double v, Unit u = Unit::kNone) { j_[key] = to_file(v, u); }
  template <typename Int>
  void integer(const char* key, Int v) {
    j_[key] = v;
  }
  void vec2(const char* key, Vec2 v, Unit u) { j_[key] = Json::array({to_file(v.x, u), to_file(v.y, u)}); }
  template <typename Fn>
  void block(const char* key, Fn&& fn) {
    Writer child;
    fn(child);
    j_[key] = std::move(child.j_);
  }

  Json j_ = Json::object();
};

// One field list drives both reading and writing, so the two cannot drift.

template <typename V>
void fields(V& v, ObjectModel& o) {
  v.number("mass_g", o.mass, Unit::kGram);
  v.vec2("extents_mm", o.extents, Unit::kMillimeter);
  v.vec2("com_offset_mm", o.com_offset, Unit::kMillimeter);
  v.number("gravity_mps2", o.gravity);
}

template <typename V>
void fields(V& v, ContactPatch& p) {
  v.number("r0_mm", p.r0, Unit::kMillimeter);
  v.number("c", p.c);
  v.vec2("pressure_center_offset_mm", p.pressure_center_offset, Unit::kMillimeter);
}

template <typename V>
void fields(V& v, PoseSE2& p) {
  double x = p.x();
  double y = p.y();
  double theta = p.theta();
  v.number("x_mm", x, Unit::kMillimeter);
  v.number("y_mm", y, Unit::kMillimeter);
  v.number("theta_deg", theta, Unit::kDegree);
  p = PoseSE2{x, y, theta};
}

template <typename V>
void fields(V& v, NoiseModel& n) {
  v.number("pos_sigma_mm", n.pos_sigma, Unit::kMillimeter);
  v.number("angle_sigma_deg", n.angle_sigma, Unit::kDegree);
  v.integer("seed", n.seed);
}

template <typename V>
void fields(V& v, PerturbationModel& p) {
  v.number("pressure_bias_sigma_mm", p.pressure_bias_sigma, Unit::kMillimeter);
  v.number("radius_jitter_sigma_mm", p.radius_jitter_sigma, Unit::kMillimeter);
}

template <typename V>
void fields(V& v, IntegratorConfig& c) {
  v.number("characteristic_length_mm", c.characteristic_length, Unit::kMillimeter);
  v.number("rotation_threshold", c.rotation_threshold);
  v.number("rest_tolerance_mm", c.rest_tolerance, Unit::kMillimeter);
}

template <typename V>
void fields(V& v, PlannerConfig& c) {
  constexpr Unit mm = Unit::kMillimeter;
  constexpr Unit deg = Unit::kDegree;
  v.number("r_error_mm", c.r_error, mm);
  v.number("r_theta_error_deg", c.r_theta_error, deg);
  v.number("centering_tolerance_mm", c.centering_tolerance, mm);
  v.number("positioning_tolerance_mm", c.positioning_tolerance, mm);
  v.integer("centering_candidates", c.centering_candidates);
  v.number("centering_max_tilt_deg", c.centering_max_tilt, deg);
  v.number("centering_orientation_weight_mm_per_rad", c.centering_orientation_weight, mm);
  v.block("pi_gains", [&](auto& g) {
    g.number("kp", c.pi_gains.kp);
    g.number("ki", c.pi_gains.ki);
  });
  v.integer("max_actions_per_stage", c.max_actions_per_stage);
  v.number("lever_angle_stage3_deg", c.lever_angle_stage3, deg);
  v.number("min_lever_angle_deg", c.min_lever_angle, deg);
  v.number("finger_theta_min_deg", c.finger_theta_min, deg);
  v.number("finger_theta_max_deg", c.finger_theta_max, deg);
  v.number("belief_sigma_mm", c.belief_sigma, mm);
  v.number("pulse_ds", c.pulse_ds);
  v.integer("max_pulse_steps", c.max_pulse_steps);
  v.number("max_pulse_translation_mm", c.max_pulse_translation, mm);
  v.number("max_pulse_rotation_deg", c.max_pulse_rotation, deg);
  v.integer("max_refinement_passes", c.max_refinement_passes);
  v.number("estimator_angle_weight_mm_per_rad", c.estimator_angle_weight, mm);
  v.number("pressure_center_prior_sigma_mm", c.pressure_center_prior_sigma, mm);
  v.number("posterior_tempering", c.posterior_tempering);
  v.block("integrator", [&](auto& i) { fields(i, c.integrator); });
}

template <typename V>
void fields(V& v, Scenario& s) {
  v.text("name", s.name);
  v.block("object", [&](auto& b) { fields(b, s.object); });
  v.block("patch", [&](auto& b) { fields(b, s.patch); });
  v.block("initial_relative", [&](auto& b) { fields(b, s.initial_relative); });
  v.block("goal_relative", [&](auto& b) { fields(b, s.goal_relative); });
  v.number("initial_finger_theta_deg", s.initial_finger_theta, Unit::kDegree);
  v.block("noise", [&](auto& b) { fields(b, s.noise); });
  v.block("perturbation", [&](auto& b) { fields(b, s.perturbation); });
  v.block("planner", [&](auto& b) { fields(b, s.planner); });
}

template <typename V>
void fields(V& v, GoalSampler& g) {
  v.number("max_translation_mm", g.max_translation, Unit::kMillimeter);
  v.number("max_rotation_deg", g.max_rotation, Unit::kDegree);
  v.number("footprint_margin_mm", g.footprint_margin, Unit::kMillimeter);
  v.number("orientation_margin_deg", g.orientation_margin, Unit::kDegree);
  v.integer("max_attempts", g.max_attempts);
}

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << source << ":" << line << ":" << column << ": malformed JSON (" << e.what() << ")";
    throw Error(ErrorCode::kParse, msg.str());
  }
}

// Drops entries equal to the library default. Some default angles have no
// degree value that converts back to exactly the same double, so leaving
// them out is what keeps parse(write(s)) == s.
Json prune_defaults(const Json& value, const Json& defaults) {
  Json out = Json::object();
  for (const auto& [key, v] : value.items()) {
    const auto it = defaults.find(key);
    if (it == defaults.end()) {
      out[key] = v;
    } else if (v.is_object()) {
      Json child = prune_defaults(v, *it);
      if (!child.empty()) out[key] = std::move(child);
    } else if (v != *it) {
      out[key] = v;
    }
  }
  return out;
}

Scenario read_scenario(const Json& j, std::string_view source) {
  Scenario s;
  Reader r(j, "", source);
  fields(r, s);
  r.finish();
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(source) + ": " + e.what());
  }
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view source) {
  return read_scenario(parse_json(text, source), source);
}

std::string write_scenario(const Scenario& s) {
  Writer w;
  Scenario copy = s;
  fields(w, copy);
  Writer d;
  Scenario defaults;
  fields(d, defaults);
  Json out = prune_defaults(w.j_, d.j_);
  // The name is always written, first.
  Json doc = {{"name", s.name}};
  for (auto& [key, value] : out.items()) {
    if (key != "name") doc[key] = std::move(value);
  }
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text_file(path), path.string());
}

BatchConfig parse_batch_config(std::string_view text, const std::filesystem::path& base_dir,
                               std::string_view source) {
  const Json j = parse_json(text, source);
  Reader r(j, "", source);
  BatchConfig cfg;
  r.integer("seed", cfg.seed);

  const Json* objects = r.raw("objects");
  if (!objects || !objects->is_array() || objects->empty()) {
    r.fail("objects", "expected a non-empty array of scenario paths or documents");
  }
  for (std::size_t i = 0; i < objects->size(); ++i) {
    const Json& item = (*objects)[i];
    if (item.is_string()) {
      cfg.objects.push_back(load_scenario(base_dir / item.get<std::string>()));
    } else if (item.is_object()) {
      cfg.objects.push_back(
          read_scenario(item, std::string(source) + ": objects[" + std::to_string(i) + "]"));
    } else {
      r.fail("objects", "entries must be paths or scenario objects");
    }
  }

  // Shared overrides, applied on top of every object's own settings.
  for (Scenario& s : cfg.objects) {
    r.block("noise", [&](Reader& b) { fields(b, s.noise); });
    r.block("perturbation", [&](Reader& b) { fields(b, s.perturbation); });
    r.block("planner", [&](Reader& b) { fields(b, s.planner); });
    try {
      s.validate();
    } catch (const Error& e) {
      throw Error(e.code(), std::string(source) + ": " + s.name + ": " + e.what());
    }
  }

  const bool has_reconfiguration = r.has("reconfiguration");
  const bool has_single_pulse = r.has("single_pulse");
  cfg.run_reconfiguration = has_reconfiguration || !has_single_pulse;
  cfg.run_single_pulse = has_single_pulse;
  r.block("reconfiguration", [&](Reader& b) {
    b.integer("n_paths_per_object", cfg.n_paths_per_object);
    b.block("goal_sampler", [&](Reader& g) { fields(g, cfg.goal_sampler); });
  });
  r.block("single_pulse", [&](Reader& b) {
    b.integer("n_trials", cfg.single_pulse_trials);
    b.number("ds", cfg.single_pulse_ds);
    b.integer("n_steps", cfg.single_pulse_steps);
  });
  r.finish();
  if (cfg.run_reconfiguration && cfg.n_paths_per_object == 0) {
    r.fail("reconfiguration", "n_paths_per_object must be at least 1");
  }
  return cfg;
}

BatchConfig load_batch_config(const std::filesystem::path& path) {
  return parse_batch_config(read_text_file(path), path.parent_path(), path.string());
}

}  // namespace vib2move
