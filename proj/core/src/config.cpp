#include "flowgen/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>

#include "flowgen/error.hpp"
#include "flowgen/rng.hpp"

namespace flowgen {

namespace {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error(ErrorCode::ConfigError,
              std::string(key) + ": cannot parse '" + std::string(value) + "' as " + std::string(expected));
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) bad_value(key, text, "a number");
  return v;
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) bad_value(key, text, "an integer");
  return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) bad_value(key, text, "an unsigned integer");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true") return true;
  if (text == "false") return false;
  bad_value(key, text, "true/false");
}

const char* fmt_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::function<std::string(const GenConfig&)> get;
  std::function<void(GenConfig&, std::string_view key, std::string_view value)> set;
};

template <typename T>
Field int_field(T GenConfig::*member) {
  return {[member](const GenConfig& c) { return std::to_string(c.*member); },
          [member](GenConfig& c, std::string_view k, std::string_view v) {
            const auto parsed = parse_int(k, v);
            if (parsed < std::numeric_limits<int>::min() || parsed > std::numeric_limits<int>::max()) {
              bad_value(k, v, "a 32-bit integer");
            }
            c.*member = static_cast<T>(parsed);
          }};
}

Field double_ref(std::function<double&(GenConfig&)> ref) {
  return {[ref](const GenConfig& c) { return format_double(ref(const_cast<GenConfig&>(c))); },
          [ref](GenConfig& c, std::string_view k, std::string_view v) { ref(c) = parse_double(k, v); }};
}

Field int_ref(std::function<int&(GenConfig&)> ref) {
  return {[ref](const GenConfig& c) { return std::to_string(ref(const_cast<GenConfig&>(c))); },
          [ref](GenConfig& c, std::string_view k, std::string_view v) {
            const auto parsed = parse_int(k, v);
            if (parsed < std::numeric_limits<int>::min() || parsed > std::numeric_limits<int>::max()) {
              bad_value(k, v, "a 32-bit integer");
            }
            ref(c) = static_cast<int>(parsed);
          }};
}

Field bool_ref(std::function<bool&(GenConfig&)> ref) {
  return {[ref](const GenConfig& c) { return std::string(fmt_bool(ref(const_cast<GenConfig&>(c)))); },
          [ref](GenConfig& c, std::string_view k, std::string_view v) { ref(c) = parse_bool(k, v); }};
}

Field dist_ref(std::function<ScalarDistribution&(GenConfig&)> ref) {
  return {[ref](const GenConfig& c) { return ref(const_cast<GenConfig&>(c)).to_string(); },
          [ref](GenConfig& c, std::string_view, std::string_view v) { ref(c) = ScalarDistribution::parse(v); }};
}

void add_motion_fields(std::map<std::string, Field>& f, const std::string& prefix,
                       MotionDistribution GenConfig::*m) {
  f[prefix + ".translation"] = dist_ref([m](GenConfig& c) -> ScalarDistribution& { return (c.*m).translation; });
  f[prefix + ".rotation_deg"] = dist_ref([m](GenConfig& c) -> ScalarDistribution& { return (c.*m).rotation_deg; });
  f[prefix + ".log_scale"] = dist_ref([m](GenConfig& c) -> ScalarDistribution& { return (c.*m).log_scale; });
  f[prefix + ".deform"] = dist_ref([m](GenConfig& c) -> ScalarDistribution& { return (c.*m).deform; });
  f[prefix + ".translation_enabled"] = bool_ref([m](GenConfig& c) -> bool& { return (c.*m).translation_enabled; });
  f[prefix + ".rotation_enabled"] = bool_ref([m](GenConfig& c) -> bool& { return (c.*m).rotation_enabled; });
  f[prefix + ".scaling_enabled"] = bool_ref([m](GenConfig& c) -> bool& { return (c.*m).scaling_enabled; });
  f[prefix + ".deformation_enabled"] = bool_ref([m](GenConfig& c) -> bool& { return (c.*m).deformation_enabled; });
  f[prefix + ".global_scale"] = double_ref([m](GenConfig& c) -> double& { return (c.*m).global_scale; });
}

void add_placement_fields(std::map<std::string, Field>& f, const std::string& prefix,
                          PlacementDistribution GenConfig::*m) {
  f[prefix + ".rotation_deg"] = dist_ref([m](GenConfig& c) -> ScalarDistribution& { return (c.*m).rotation_deg; });
  f[prefix + ".log_scale"] = dist_ref([m](GenConfig& c) -> ScalarDistribution& { return (c.*m).log_scale; });
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> f;
    f["width"] = int_field(&GenConfig::width);
    f["height"] = int_field(&GenConfig::height);
    f["supersample"] = int_field(&GenConfig::supersample);
    f["seed"] = {[](const GenConfig& c) { return std::to_string(c.seed); },
                 [](GenConfig& c, std::string_view k, std::string_view v) { c.seed = parse_u64(k, v); }};
    f["objects.min"] = int_field(&GenConfig::min_objects);
    f["objects.max"] = int_field(&GenConfig::max_objects);

    f["shapes.classes"] = {
        [](const GenConfig& c) {
          std::vector<std::string> names;
          for (ShapeClass s : c.shape_classes) names.emplace_back(to_string(s));
          std::sort(names.begin(), names.end());
          names.erase(std::unique(names.begin(), names.end()), names.end());
          std::string out;
          for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
          return out;
        },
        [](GenConfig& c, std::string_view, std::string_view v) {
          std::vector<ShapeClass> classes;
          v = trim(v);
          while (!v.empty()) {
            const std::size_t comma = v.find(',');
            const std::string_view item = trim(v.substr(0, comma));
            if (!item.empty()) classes.push_back(shape_class_from_string(item));
            if (comma == std::string_view::npos) break;
            v.remove_prefix(comma + 1);
          }
          std::sort(classes.begin(), classes.end());
          classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
          c.shape_classes = std::move(classes);
        }};
    f["shapes.min_diameter"] = double_ref([](GenConfig& c) -> double& { return c.shape.min_diameter; });
    f["shapes.max_diameter"] = double_ref([](GenConfig& c) -> double& { return c.shape.max_diameter; });
    f["shapes.polygon_vertices_min"] = int_ref([](GenConfig& c) -> int& { return c.shape.min_polygon_vertices; });
    f["shapes.polygon_vertices_max"] = int_ref([](GenConfig& c) -> int& { return c.shape.max_polygon_vertices; });
    f["shapes.max_box_aspect"] = double_ref([](GenConfig& c) -> double& { return c.shape.max_box_aspect; });
    f["shapes.needle_aspect_min"] = double_ref([](GenConfig& c) -> double& { return c.shape.min_needle_aspect; });
    f["shapes.needle_aspect_max"] = double_ref([](GenConfig& c) -> double& { return c.shape.max_needle_aspect; });
    f["shapes.stroke_fraction_min"] = double_ref([](GenConfig& c) -> double& { return c.shape.min_stroke_fraction; });
    f["shapes.stroke_fraction_max"] = double_ref([](GenConfig& c) -> double& { return c.shape.max_stroke_fraction; });
    f["shapes.holes"] = bool_ref([](GenConfig& c) -> bool& { return c.shape.holes; });
    f["shapes.hole_probability"] = double_ref([](GenConfig& c) -> double& { return c.shape.hole_probability; });
    f["shapes.holes_min"] = int_ref([](GenConfig& c) -> int& { return c.shape.min_holes; });
    f["shapes.holes_max"] = int_ref([](GenConfig& c) -> int& { return c.shape.max_holes; });
    f["shapes.hole_fraction_min"] = double_ref([](GenConfig& c) -> double& { return c.shape.min_hole_fraction; });
    f["shapes.hole_fraction_max"] = double_ref([](GenConfig& c) -> double& { return c.shape.max_hole_fraction; });

    f["texture.family"] = {
        [](const GenConfig& c) { return std::string(to_string(c.texture)); },
        [](GenConfig& c, std::string_view, std::string_view v) { c.texture = texture_family_from_string(trim(v)); }};
    f["texture.clouds_octaves"] = int_field(&GenConfig::clouds_octaves);
    f["texture.plasma_sites"] = int_field(&GenConfig::plasma_sites);
    f["texture.photo_dir"] = {[](const GenConfig& c) { return c.photo_dir; },
                              [](GenConfig& c, std::string_view, std::string_view v) { c.photo_dir = trim(v); }};

    add_placement_fields(f, "placement.object", &GenConfig::object_placement);
    add_placement_fields(f, "placement.background", &GenConfig::background_placement);
    add_motion_fields(f, "motion.background", &GenConfig::background_motion);
    add_motion_fields(f, "motion.object", &GenConfig::object_motion);

    f["augment.color_both"] = bool_ref([](GenConfig& c) -> bool& { return c.augment.color_both; });
    f["augment.color_between"] = bool_ref([](GenConfig& c) -> bool& { return c.augment.color_between; });
    f["augment.geom_both"] = bool_ref([](GenConfig& c) -> bool& { return c.augment.geom_both; });
    f["augment.geom_between"] = bool_ref([](GenConfig& c) -> bool& { return c.augment.geom_between; });
    f["augment.brightness"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.brightness; });
    f["augment.contrast_min"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.contrast_min; });
    f["augment.contrast_max"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.contrast_max; });
    f["augment.gain_min"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.gain_min; });
    f["augment.gain_max"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.gain_max; });
    f["augment.noise_max"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.noise_max; });
    f["augment.shift_fraction"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.shift_fraction; });
    f["augment.rotation_deg"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.rotation_deg; });
    f["augment.scale_min"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.scale_min; });
    f["augment.scale_max"] = double_ref([](GenConfig& c) -> double& { return c.augment_ranges.scale_max; });
    f["augment.between_fraction"] =
        double_ref([](GenConfig& c) -> double& { return c.augment_ranges.between_fraction; });
    f["augment.interp"] = {
        [](const GenConfig& c) { return std::string(c.augment_interp == FlowInterp::Nearest ? "nearest" : "bilinear"); },
        [](GenConfig& c, std::string_view k, std::string_view v) {
          v = trim(v);
          if (v == "bilinear") {
            c.augment_interp = FlowInterp::Bilinear;
          } else if (v == "nearest") {
            c.augment_interp = FlowInterp::Nearest;
          } else {
            bad_value(k, v, "bilinear/nearest");
          }
        }};

    f["camera.radial_blur"] = double_ref([](GenConfig& c) -> double& { return c.camera.radial_blur_strength; });
    f["camera.gaussian_sigma"] = double_ref([](GenConfig& c) -> double& { return c.camera.gaussian_sigma; });
    f["camera.contrast_boost"] = double_ref([](GenConfig& c) -> double& { return c.camera.contrast_boost; });
    f["camera.bayer"] = {[](const GenConfig& c) {
                           return c.camera.bayer ? std::string(to_string(c.camera.pattern)) : std::string("none");
                         },
                         [](GenConfig& c, std::string_view, std::string_view v) {
                           v = trim(v);
                           if (v == "none") {
                             c.camera.bayer = false;
                             c.camera.pattern = BayerPattern::RGGB;
                           } else {
                             c.camera.bayer = true;
                             c.camera.pattern = bayer_pattern_from_string(v);
                           }
                         }};
    return f;
  }();
  return table;
}

}  // namespace

// ---- distributions ---------------------------------------------------------

double ScalarDistribution::sample(Rng& rng) const {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  if (kind == Kind::Uniform) return a + (b - a) * u1;
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return a + b * r * std::cos(2.0 * std::numbers::pi * u2);
}

ScalarDistribution ScalarDistribution::scaled(double k) const noexcept {
  if (kind == Kind::Normal) return {kind, a, b * k};
  return {kind, a * k, b * k};
}

std::string ScalarDistribution::to_string() const {
  return std::string(kind == Kind::Normal ? "normal(" : "uniform(") + format_double(a) + "," + format_double(b) + ")";
}

ScalarDistribution ScalarDistribution::parse(std::string_view text) {
  const std::string_view t = trim(text);
  const std::size_t open = t.find('(');
  const std::size_t comma = t.find(',');
  if (open == std::string_view::npos || comma == std::string_view::npos || t.back() != ')' || comma < open) {
    throw Error(ErrorCode::ConfigError, "bad distribution '" + std::string(text) + "', expected normal(a,b) or uniform(a,b)");
  }
  const std::string_view name = trim(t.substr(0, open));
  ScalarDistribution d;
  if (name == "normal") {
    d.kind = Kind::Normal;
  } else if (name == "uniform") {
    d.kind = Kind::Uniform;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown distribution '" + std::string(name) + "'");
  }
  d.a = parse_double("distribution", t.substr(open + 1, comma - open - 1));
  d.b = parse_double("distribution", t.substr(comma + 1, t.size() - comma - 2));
  if (d.kind == Kind::Normal && d.b < 0.0) throw Error(ErrorCode::ConfigError, "normal std must be >= 0");
  if (d.kind == Kind::Uniform && d.b < d.a) throw Error(ErrorCode::ConfigError, "uniform needs min <= max");
  return d;
}

MotionDistribution default_background_motion() {
  MotionDistribution m;
  m.translation = ScalarDistribution::normal(0.0, 5.0);
  m.rotation_deg = ScalarDistribution::normal(0.0, 1.5);
  m.log_scale = ScalarDistribution::normal(0.0, 0.03);
  m.deform = ScalarDistribution::uniform(1.0, 6.0);
  return m;
}

MotionDistribution default_object_motion() {
  MotionDistribution m;
  m.translation = ScalarDistribution::normal(0.0, 10.0);
  m.rotation_deg = ScalarDistribution::normal(0.0, 6.0);
  m.log_scale = ScalarDistribution::normal(0.0, 0.06);
  m.deform = ScalarDistribution::uniform(1.0, 4.0);
  return m;
}

MotionDistribution scale_distribution(const MotionDistribution& motion, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::NonpositiveFactor, "scale factor must be positive");
  MotionDistribution out = motion;
  out.translation = motion.translation.scaled(k);
  out.rotation_deg = motion.rotation_deg.scaled(k);
  out.log_scale = motion.log_scale.scaled(k);
  out.deform = motion.deform.scaled(k);
  out.global_scale = motion.global_scale * k;
  return out;
}

// ---- config ----------------------------------------------------------------

void GenConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  if (width < 16 || height < 16 || width > 16384 || height > 16384) fail("width/height must lie in [16, 16384]");
  if (supersample != 1 && supersample != 2 && supersample != 4 && supersample != 8) {
    fail("supersample must be 1, 2, 4 or 8");
  }
  if (min_objects < 0 || max_objects < min_objects || max_objects > 1000) fail("need 0 <= objects.min <= objects.max <= 1000");
  if (shape_classes.empty() && max_objects > 0) throw Error(ErrorCode::EmptyClassSet, "shapes.classes is empty");
  if (!(shape.min_diameter >= 2.0 && shape.max_diameter >= shape.min_diameter)) {
    fail("need 2 <= shapes.min_diameter <= shapes.max_diameter");
  }
  if (shape.min_polygon_vertices < 3 || shape.max_polygon_vertices > 12 ||
      shape.max_polygon_vertices < shape.min_polygon_vertices) {
    fail("polygon vertex range must lie within [3, 12]");
  }
  if (shape.max_box_aspect < 1.0) fail("shapes.max_box_aspect must be >= 1");
  if (shape.min_needle_aspect < 8.0 || shape.max_needle_aspect < shape.min_needle_aspect) {
    fail("needle aspect range must start at 8 or more");
  }
  if (!(shape.min_stroke_fraction > 0.0 && shape.max_stroke_fraction <= 0.1 &&
        shape.min_stroke_fraction <= shape.max_stroke_fraction)) {
    fail("stroke fraction range must lie within (0, 0.1]");
  }
  if (shape.hole_probability < 0.0 || shape.hole_probability > 1.0) fail("shapes.hole_probability must lie in [0, 1]");
  if (shape.min_holes < 1 || shape.max_holes < shape.min_holes || shape.max_holes > 8) fail("hole count range must lie in [1, 8]");
  if (!(shape.min_hole_fraction > 0.0 && shape.max_hole_fraction < 0.5 &&
        shape.min_hole_fraction <= shape.max_hole_fraction)) {
    fail("hole fraction range must lie within (0, 0.5)");
  }
  if (clouds_octaves < 1 || clouds_octaves > 10) fail("texture.clouds_octaves must lie in [1, 10]");
  if (plasma_sites < 16 || plasma_sites > 100000) fail("texture.plasma_sites must lie in [16, 100000]");
  if (texture == TextureFamily::Photo && photo_dir.empty()) fail("texture.family = photo needs texture.photo_dir");
  for (const MotionDistribution* m : {&background_motion, &object_motion}) {
    if (!(m->global_scale > 0.0)) fail("motion global_scale must be positive");
    if (m->deform.kind == ScalarDistribution::Kind::Uniform && m->deform.a < 0.0) fail("deform amplitude must be >= 0");
  }
  augment.validate();
  const AugmentRanges& r = augment_ranges;
  if (r.brightness < 0.0 || r.noise_max < 0.0 || r.shift_fraction < 0.0 || r.rotation_deg < 0.0 ||
      !(r.contrast_min > 0.0 && r.contrast_max >= r.contrast_min) || !(r.gain_min > 0.0 && r.gain_max >= r.gain_min) ||
      !(r.scale_min > 0.0 && r.scale_max >= r.scale_min) || r.between_fraction < 0.0 || r.between_fraction > 1.0) {
    fail("augment ranges are inconsistent");
  }
  try {
    camera.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::string canonical_text(const GenConfig& config) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(config) + "\n";
  return out;
}

std::string config_hash(const GenConfig& config) {
  const std::uint64_t h = Rng::hash_tag(canonical_text(config));
  char buf[17];
  static constexpr char kHex[] = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) buf[i] = kHex[(h >> (60 - 4 * i)) & 0xF];
  buf[16] = '\0';
  return buf;
}

void set_config_value(GenConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  if (key.starts_with("manifest.")) return;
  const auto& table = fields();
  const auto it = table.find(std::string(key));
  if (it == table.end()) throw Error(ErrorCode::ConfigError, "unknown config key '" + std::string(key) + "'");
  it->second.set(config, key, trim(value));
}

GenConfig parse_config(std::string_view text, GenConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      set_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

// ---- presets ---------------------------------------------------------------

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

Overrides table2(int level) {
  // Levels follow the rows of the shape/motion ablation: 0 boxes, 1 polygons,
  // 2 ellipses, 3 polygons+ellipses, then rotation, scaling, holes, thin
  // objects and deformations are added one at a time.
  Overrides o;
  const char* classes = level == 0 ? "box" : level == 1 ? "polygon" : level == 2 ? "ellipse" : "ellipse,polygon";
  if (level >= 7) classes = "ellipse,needle,outline,polygon";
  o.emplace_back("shapes.classes", classes);
  if (level == 0) {
    o.emplace_back("placement.object.rotation_deg", "uniform(0,0)");
  }
  const bool rotation = level >= 4;
  const bool scaling = level >= 5;
  for (const char* who : {"background", "object"}) {
    const std::string p = std::string("motion.") + who;
    o.emplace_back(p + ".rotation_enabled", rotation ? "true" : "false");
    o.emplace_back(p + ".scaling_enabled", scaling ? "true" : "false");
    o.emplace_back(p + ".deformation_enabled", level >= 8 ? "true" : "false");
  }
  if (level >= 6) o.emplace_back("shapes.holes", "true");
  return o;
}

const std::vector<std::string> kTable2 = {
    "boxes-translation", "polygons-translation", "ellipses-translation", "polyell-translation", "polyell-rotation",
    "polyell-scaling",   "polyell-holes",        "polyell-thin",         "polyell-deformations"};

// Table-8 rows as (color_both, color_between, geom_both, geom_between).
struct AugRow {
  const char* name;
  bool cb, cw, gb, gw;
};
const AugRow kAugRows[] = {
    {"aug-none", false, false, false, false},        {"aug-color", true, false, false, false},
    {"aug-color-between", true, true, false, false}, {"aug-geom", false, false, true, false},
    {"aug-geom-between", false, false, true, true},  {"aug-color-geom", true, false, true, false},
    {"aug-all", true, true, true, true},
};

Overrides append(Overrides a, const Overrides& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names = kTable2;
  for (const char* t : {"textures-plasma", "textures-clouds", "textures-photo"}) names.emplace_back(t);
  for (const char* s : {"sintel-like-1x", "sintel-like-2x", "sintel-like-3x"}) names.emplace_back(s);
  for (const AugRow& r : kAugRows) names.emplace_back(r.name);
  names.emplace_back("camera-bumblebee");
  names.emplace_back("camera-bayer");
  return names;
}

std::vector<std::pair<std::string, std::string>> preset_overrides(std::string_view name) {
  for (std::size_t i = 0; i < kTable2.size(); ++i) {
    if (kTable2[i] == name) return table2(static_cast<int>(i));
  }
  const Overrides thin = table2(7);
  if (name == "textures-plasma") return append(thin, {{"texture.family", "plasma"}});
  if (name == "textures-clouds") return append(thin, {{"texture.family", "clouds"}});
  if (name == "textures-photo") {
    return append(thin, {{"texture.family", "photo"}, {"texture.photo_dir", "photos"}});
  }
  for (int k = 1; k <= 3; ++k) {
    if (name == "sintel-like-" + std::to_string(k) + "x") {
      Overrides o = thin;
      if (k > 1) {
        const MotionDistribution bg = scale_distribution(default_background_motion(), k);
        const MotionDistribution ob = scale_distribution(default_object_motion(), k);
        for (const auto& [prefix, m] : {std::pair{"motion.background", bg}, std::pair{"motion.object", ob}}) {
          const std::string p = prefix;
          o.emplace_back(p + ".translation", m.translation.to_string());
          o.emplace_back(p + ".rotation_deg", m.rotation_deg.to_string());
          o.emplace_back(p + ".log_scale", m.log_scale.to_string());
          o.emplace_back(p + ".deform", m.deform.to_string());
          o.emplace_back(p + ".global_scale", format_double(m.global_scale));
        }
      }
      return o;
    }
  }
  for (const AugRow& r : kAugRows) {
    if (name == r.name) {
      return append(thin, {{"augment.color_both", fmt_bool(r.cb)},
                           {"augment.color_between", fmt_bool(r.cw)},
                           {"augment.geom_both", fmt_bool(r.gb)},
                           {"augment.geom_between", fmt_bool(r.gw)}});
    }
  }
  if (name == "camera-bumblebee" || name == "camera-bayer") {
    const CameraProfile p = camera_profile(name == "camera-bayer" ? "bayer" : "bumblebee");
    return append(thin, {{"camera.radial_blur", format_double(p.radial_blur_strength)},
                         {"camera.gaussian_sigma", format_double(p.gaussian_sigma)},
                         {"camera.contrast_boost", format_double(p.contrast_boost)},
                         {"camera.bayer", p.bayer ? std::string(to_string(p.pattern)) : std::string("none")}});
  }
  throw Error(ErrorCode::ConfigError, "unknown preset '" + std::string(name) + "'");
}

GenConfig preset(std::string_view name) {
  GenConfig c;
  for (const auto& [key, value] : preset_overrides(name)) set_config_value(c, key, value);
  return c;
}

}  // namespace flowgen
