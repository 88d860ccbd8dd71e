#include "ptzflow/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ptzflow/errors.hpp"

namespace ptzflow {

namespace {

constexpr double kDegree = kPi / 180.0;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  std::vector<Entry> entries;
};

std::vector<Section> tokenize(std::string_view text) {
  std::vector<Section> sections{{"scenario", {}}};
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(number) + ": unterminated section header");
      }
      sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    sections.back().entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), number});
  }
  return sections;
}

double to_double(const Entry& e) {
  double v = 0.0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    // Accept simple fractions such as 1/20.
    const auto slash = e.value.find('/');
    if (slash != std::string::npos) {
      Entry num{e.key, trim(e.value.substr(0, slash)), e.line};
      Entry den{e.key, trim(e.value.substr(slash + 1)), e.line};
      return to_double(num) / to_double(den);
    }
    throw ConfigError("line " + std::to_string(e.line) + ": '" + e.key + "' expects a number");
  }
  return v;
}

std::int64_t to_int(const Entry& e) {
  std::int64_t v = 0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("line " + std::to_string(e.line) + ": '" + e.key + "' expects an integer");
  }
  return v;
}

bool to_bool(const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError("line " + std::to_string(e.line) + ": '" + e.key + "' expects a boolean");
}

using Handler = std::function<void(const Entry&)>;

void apply(const Section& section, const std::map<std::string, Handler>& handlers) {
  for (const Entry& e : section.entries) {
    auto it = handlers.find(e.key);
    if (it == handlers.end()) {
      throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + e.key +
                        "' in [" + section.name + "]");
    }
    it->second(e);
  }
}

std::vector<bool> to_flags(const Entry& e) {
  std::vector<bool> flags;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    Entry one{e.key, trim(item), e.line};
    if (!one.value.empty()) flags.push_back(to_bool(one));
  }
  return flags;
}

void apply_scenario(const Section& s, ScenarioConfig& cfg, int& camera_count) {
  apply(s, {
      {"width", [&](const Entry& e) { cfg.field.x1 = cfg.field.x0 + to_double(e); }},
      {"height", [&](const Entry& e) { cfg.field.y1 = cfg.field.y0 + to_double(e); }},
      {"arrival_rate", [&](const Entry& e) { cfg.arrival_rate = to_double(e); }},
      {"frames_per_second", [&](const Entry& e) { cfg.frames_per_second = static_cast<int>(to_int(e)); }},
      {"total_pedestrians", [&](const Entry& e) { cfg.total_pedestrians = static_cast<int>(to_int(e)); }},
      {"speed_min", [&](const Entry& e) { cfg.speed_min = to_double(e); }},
      {"speed_max", [&](const Entry& e) { cfg.speed_max = to_double(e); }},
      {"heading_jitter_deg", [&](const Entry& e) { cfg.heading_jitter = to_double(e) * kDegree; }},
      {"walk_noise", [&](const Entry& e) { cfg.walk_noise = to_double(e); }},
      {"detection_noise", [&](const Entry& e) { cfg.detection_noise = to_double(e); }},
      {"max_time", [&](const Entry& e) { cfg.max_time = to_double(e); }},
      {"regions", [&](const Entry& e) { cfg.regions = static_cast<int>(to_int(e)); }},
      {"cameras", [&](const Entry& e) { camera_count = static_cast<int>(to_int(e)); }},
      {"seed", [&](const Entry& e) { cfg.seed = static_cast<std::uint64_t>(to_int(e)); }},
  });
}

void apply_planner(const Section& s, ScenarioConfig& cfg) {
  apply(s, {
      {"kind", [&](const Entry& e) { cfg.kind = parse_planner_kind(e.value); }},
      {"horizon", [&](const Entry& e) { cfg.planner.horizon = static_cast<int>(to_int(e)); }},
      {"window", [&](const Entry& e) { cfg.planner.window = static_cast<int>(to_int(e)); }},
      {"period_len", [&](const Entry& e) { cfg.planner.period_len = to_double(e); }},
      {"group_radius", [&](const Entry& e) { cfg.planner.group_radius = to_double(e); }},
      {"process_noise", [&](const Entry& e) { cfg.filter.process = to_double(e); }},
      {"measurement_noise", [&](const Entry& e) { cfg.filter.measurement = to_double(e); }},
      {"p_formula", [&](const Entry& e) {
         if (e.value == "conserved") cfg.planner.p_formula = PFormula::Conserved;
         else if (e.value == "printed") cfg.planner.p_formula = PFormula::Printed;
         else throw ConfigError("p_formula must be conserved or printed");
       }},
      {"baseline", [&](const Entry& e) {
         if (e.value == "edf") cfg.baseline = BaselinePolicy::EarliestDeadline;
         else if (e.value == "round_robin") cfg.baseline = BaselinePolicy::RoundRobin;
         else throw ConfigError("baseline must be edf or round_robin");
       }},
  });
}

CameraConfig parse_camera(const Section& s, int id, const Rect& field) {
  CameraConfig cam;
  cam.id = id;
  cam.position = {field.center().x, field.y0};
  apply(s, {
      {"x", [&](const Entry& e) { cam.position.x = to_double(e); }},
      {"y", [&](const Entry& e) { cam.position.y = to_double(e); }},
      {"height", [&](const Entry& e) { cam.height = to_double(e); }},
      {"fov_deg", [&](const Entry& e) { cam.fov = to_double(e) * kDegree; }},
      {"aspect", [&](const Entry& e) { cam.aspect = to_double(e); }},
      {"pan_min_deg", [&](const Entry& e) { cam.pan_range.lo = to_double(e) * kDegree; }},
      {"pan_max_deg", [&](const Entry& e) { cam.pan_range.hi = to_double(e) * kDegree; }},
      {"tilt_min_deg", [&](const Entry& e) { cam.tilt_range.lo = to_double(e) * kDegree; }},
      {"tilt_max_deg", [&](const Entry& e) { cam.tilt_range.hi = to_double(e) * kDegree; }},
      {"max_zoom", [&](const Entry& e) { cam.max_zoom = to_double(e); }},
      {"transition_time", [&](const Entry& e) { cam.transition_time = to_double(e); }},
      {"capture_time", [&](const Entry& e) { cam.capture_time = to_double(e); }},
  });
  return cam;
}

ScenarioConfig build_config(const std::vector<Section>& sections) {
  ScenarioConfig cfg;
  int camera_count = 3;
  std::vector<const Section*> camera_sections;
  for (const Section& s : sections) {
    if (s.name == "scenario") apply_scenario(s, cfg, camera_count);
    else if (s.name == "planner") apply_planner(s, cfg);
    else if (s.name == "camera") camera_sections.push_back(&s);
  }
  if (!camera_sections.empty()) {
    cfg.cameras.clear();
    for (const Section* s : camera_sections) {
      cfg.cameras.push_back(parse_camera(*s, static_cast<int>(cfg.cameras.size()), cfg.field));
    }
  } else {
    cfg.cameras = default_cameras(cfg.field, camera_count);
  }
  cfg.validate();
  return cfg;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string_view to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::Flexible: return "flexible";
    case PlannerKind::FlexibleGrouped: return "flexible_grouped";
    case PlannerKind::MasterSlave: return "master_slave";
  }
  return "?";
}

PlannerKind parse_planner_kind(std::string_view text) {
  if (text == "flexible") return PlannerKind::Flexible;
  if (text == "flexible_grouped") return PlannerKind::FlexibleGrouped;
  if (text == "master_slave") return PlannerKind::MasterSlave;
  throw ConfigError("unknown planner '" + std::string(text) +
                    "' (expected flexible, flexible_grouped or master_slave)");
}

std::vector<CameraConfig> default_cameras(const Rect& field, int count) {
  if (count <= 0) throw ConfigError("camera count must be positive");
  std::vector<CameraConfig> cams;
  const double spacing = field.width() / count;
  for (int i = 0; i < count; ++i) {
    CameraConfig cam;
    cam.id = i;
    cam.position = {field.x0 + (i + 0.5) * spacing, field.y0};
    cams.push_back(cam);
  }
  return cams;
}

void ScenarioConfig::validate() const {
  if (!(field.width() > 0.0 && field.height() > 0.0)) throw ConfigError("field must have positive size");
  if (cameras.empty()) throw ConfigError("at least one camera is required");
  for (const CameraConfig& cam : cameras) cam.validate();
  if (!(arrival_rate >= 0.0)) throw ConfigError("arrival_rate must be non-negative");
  if (frames_per_second <= 0) throw ConfigError("frames_per_second must be positive");
  if (total_pedestrians < 0) throw ConfigError("total_pedestrians must be non-negative");
  if (!(speed_min > 0.0 && speed_max >= speed_min)) throw ConfigError("bad pedestrian speed range");
  if (!(heading_jitter >= 0.0 && heading_jitter < kPi / 2.0)) {
    throw ConfigError("heading jitter must lie in [0, 90) degrees");
  }
  if (walk_noise < 0.0 || detection_noise < 0.0) throw ConfigError("noise must be non-negative");
  if (filter.process < 0.0 || filter.measurement < 0.0) throw ConfigError("filter noise must be non-negative");
  if (planner.horizon <= 0 || planner.window <= 0) throw ConfigError("H and T must be positive");
  if (planner.horizon % planner.window != 0) throw ConfigError("window T must divide horizon H");
  if (!(planner.period_len > 0.0)) throw ConfigError("period_len must be positive");
  if (!(planner.group_radius > 0.0)) throw ConfigError("group_radius must be positive");
  if (regions < 0) throw ConfigError("regions must be non-negative");
  const double frames = planner.period_len * frames_per_second;
  if (std::abs(frames - std::round(frames)) > 1e-9) {
    throw ConfigError("period_len must span a whole number of frames");
  }
  const CameraConfig& cam = cameras.front();
  if (cam.transition_time + cam.capture_time > planner.period_len + 1e-9) {
    throw ConfigError("transition + capture time exceeds the planning period");
  }
  if (kind == PlannerKind::MasterSlave && cameras.size() < 2) {
    throw ConfigError("master_slave needs at least two cameras");
  }
  if (!(max_time > 0.0)) throw ConfigError("max_time must be positive");
}

Scene ScenarioConfig::scene() const {
  return Scene{field, cameras, vertical_bands(field, region_count())};
}

std::string ScenarioConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  out << "field " << field.x0 << ' ' << field.y0 << ' ' << field.x1 << ' ' << field.y1 << '\n'
      << "regions " << region_count() << '\n'
      << "arrival " << arrival_rate << ' ' << frames_per_second << ' ' << total_pedestrians << '\n'
      << "speed " << speed_min << ' ' << speed_max << ' ' << heading_jitter << '\n'
      << "noise " << walk_noise << ' ' << detection_noise << ' ' << filter.process << ' '
      << filter.measurement << '\n'
      << "planner " << to_string(kind) << ' ' << planner.horizon << ' ' << planner.window << ' '
      << planner.period_len << ' ' << planner.group_radius << ' '
      << (planner.p_formula == PFormula::Conserved ? "conserved" : "printed") << ' '
      << (baseline == BaselinePolicy::EarliestDeadline ? "edf" : "round_robin") << '\n'
      << "max_time " << max_time << '\n';
  for (const CameraConfig& cam : cameras) {
    out << "camera " << cam.id << ' ' << cam.position.x << ' ' << cam.position.y << ' '
        << cam.height << ' ' << cam.fov << ' ' << cam.aspect << ' ' << cam.pan_range.lo << ' '
        << cam.pan_range.hi << ' ' << cam.tilt_range.lo << ' ' << cam.tilt_range.hi << ' '
        << cam.max_zoom << ' ' << cam.transition_time << ' ' << cam.capture_time << '\n';
  }
  return out.str();
}

ScenarioConfig parse_scenario(std::string_view text) {
  auto sections = tokenize(text);
  for (const Section& s : sections) {
    if (s.name != "scenario" && s.name != "planner" && s.name != "camera") {
      throw ConfigError("unknown section [" + s.name + "]");
    }
  }
  return build_config(sections);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path));
}

Snapshot parse_snapshot(std::string_view text) {
  auto sections = tokenize(text);
  std::vector<Section> scenario_part;
  Snapshot snap;
  std::vector<const Section*> track_sections;
  const Section* snapshot_section = nullptr;
  for (const Section& s : sections) {
    if (s.name == "track") track_sections.push_back(&s);
    else if (s.name == "snapshot") snapshot_section = &s;
    else if (s.name == "scenario" || s.name == "planner" || s.name == "camera") scenario_part.push_back(s);
    else throw ConfigError("unknown section [" + s.name + "]");
  }
  snap.config = build_config(scenario_part);
  if (snapshot_section != nullptr) {
    apply(*snapshot_section, {
        {"now", [&](const Entry& e) { snap.now = to_double(e); }},
        {"window_phase", [&](const Entry& e) { snap.state.window_phase = static_cast<int>(to_int(e)); }},
        {"region_satisfied", [&](const Entry& e) { snap.state.region_satisfied = to_flags(e); }},
    });
  }
  for (const Section* s : track_sections) {
    Track track;
    track.id = static_cast<int>(snap.tracks.size());
    track.covariance = Covariance::Identity();
    apply(*s, {
        {"id", [&](const Entry& e) { track.id = static_cast<int>(to_int(e)); }},
        {"x", [&](const Entry& e) { track.state.x = to_double(e); }},
        {"y", [&](const Entry& e) { track.state.y = to_double(e); }},
        {"vx", [&](const Entry& e) { track.state.vx = to_double(e); }},
        {"vy", [&](const Entry& e) { track.state.vy = to_double(e); }},
        {"interrogated", [&](const Entry& e) { track.interrogated = to_bool(e); }},
    });
    track.stamp = snap.now;
    track.birth_time = snap.now;
    track.exit_time = predict_exit_time(track.state, snap.config.field, snap.now);
    snap.tracks.push_back(track);
  }
  return snap;
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  return parse_snapshot(read_file(path));
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace ptzflow
