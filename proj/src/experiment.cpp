#include "couplefv/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "couplefv/errors.hpp"

namespace couplefv {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_real(const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ConfigError("'" + text + "' is not a finite number");
  return value;
}

long parse_integer(const std::string& text) {
  long value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("'" + text + "' is not an integer");
  return value;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError("'" + text + "' is not a boolean");
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_real(item));
  }
  return out;
}

ColorKind parse_color(const std::string& text) {
  if (text == "erf") return ColorKind::erf_profile;
  if (text == "constant") return ColorKind::constant;
  if (text == "heaviside") return ColorKind::heaviside;
  throw ConfigError("unknown color '" + text + "' (erf, constant, heaviside)");
}

InitialKind parse_initial(const std::string& text) {
  if (text == "riemann") return InitialKind::riemann;
  if (text == "constant") return InitialKind::constant;
  if (text == "cosine") return InitialKind::cosine;
  throw ConfigError("unknown initial profile '" + text + "' (riemann, constant, cosine)");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"flux_left", [](ExperimentConfig& c, const std::string& s) { c.flux_left = s; }},
      {"flux_right", [](ExperimentConfig& c, const std::string& s) { c.flux_right = s; }},
      {"transmission",
       [](ExperimentConfig& c, const std::string& s) { c.transmission_left = c.transmission_right = s; }},
      {"transmission_left", [](ExperimentConfig& c, const std::string& s) { c.transmission_left = s; }},
      {"transmission_right", [](ExperimentConfig& c, const std::string& s) { c.transmission_right = s; }},
      {"color", [](ExperimentConfig& c, const std::string& s) { c.color = parse_color(s); }},
      {"eta", [](ExperimentConfig& c, const std::string& s) { c.eta = parse_real(s); }},
      {"zeta", [](ExperimentConfig& c, const std::string& s) { c.zeta = parse_real(s); }},
      {"color_value", [](ExperimentConfig& c, const std::string& s) { c.color_value = parse_real(s); }},
      {"x_min", [](ExperimentConfig& c, const std::string& s) { c.x_min = parse_real(s); }},
      {"x_max", [](ExperimentConfig& c, const std::string& s) { c.x_max = parse_real(s); }},
      {"N",
       [](ExperimentConfig& c, const std::string& s) {
         const long n = parse_integer(s);
         if (n > 100'000'000 || n < -100'000'000) throw ConfigError("N is out of range");
         c.cells = static_cast<int>(n);
       }},
      {"cfl_number", [](ExperimentConfig& c, const std::string& s) { c.cfl_number = parse_real(s); }},
      {"t_end", [](ExperimentConfig& c, const std::string& s) { c.t_end = parse_real(s); }},
      {"max_steps", [](ExperimentConfig& c, const std::string& s) { c.max_steps = parse_integer(s); }},
      {"initial", [](ExperimentConfig& c, const std::string& s) { c.initial = parse_initial(s); }},
      {"u_left", [](ExperimentConfig& c, const std::string& s) { c.u_left = parse_real(s); }},
      {"u_right", [](ExperimentConfig& c, const std::string& s) { c.u_right = parse_real(s); }},
      {"jump", [](ExperimentConfig& c, const std::string& s) { c.jump = parse_real(s); }},
      {"u_value", [](ExperimentConfig& c, const std::string& s) { c.u_value = parse_real(s); }},
      {"amplitude", [](ExperimentConfig& c, const std::string& s) { c.amplitude = parse_real(s); }},
      {"flux_scheme",
       [](ExperimentConfig& c, const std::string& s) {
         try {
           c.flux_scheme = parse_flux_scheme(s);
         } catch (const InputError& e) {
           throw ConfigError(e.what());
         }
       }},
      {"snapshots", [](ExperimentConfig& c, const std::string& s) { c.snapshot_times = parse_real_list(s); }},
      {"output_dir", [](ExperimentConfig& c, const std::string& s) { c.output_dir = s; }},
      {"diagnostics", [](ExperimentConfig& c, const std::string& s) { c.diagnostics = parse_bool(s); }},
      {"entropy_check", [](ExperimentConfig& c, const std::string& s) { c.entropy_check = parse_bool(s); }},
      {"entropy_levels",
       [](ExperimentConfig& c, const std::string& s) { c.entropy_levels = static_cast<int>(parse_integer(s)); }},
      {"weak_bv_half_width",
       [](ExperimentConfig& c, const std::string& s) { c.weak_bv_half_width = parse_real(s); }},
      {"track_shock", [](ExperimentConfig& c, const std::string& s) { c.track_shock = parse_bool(s); }},
      {"shock_level", [](ExperimentConfig& c, const std::string& s) { c.shock_level = parse_real(s); }},
      {"shock_snapshots",
       [](ExperimentConfig& c, const std::string& s) { c.shock_snapshots = static_cast<int>(parse_integer(s)); }},
      {"plateau", [](ExperimentConfig& c, const std::string& s) { c.plateau = parse_bool(s); }},
  };
  return table;
}

struct Violation {
  std::string field;
  std::string message;
};

bool valid_name(const std::function<void()>& probe) {
  try {
    probe();
    return true;
  } catch (const InputError&) {
    return false;
  }
}

std::optional<Violation> first_violation(const ExperimentConfig& c) {
  if (!valid_name([&] { FluxFunction::from_name(c.flux_left); }))
    return Violation{"flux_left", "unknown flux '" + c.flux_left + "'"};
  if (!valid_name([&] { FluxFunction::from_name(c.flux_right); }))
    return Violation{"flux_right", "unknown flux '" + c.flux_right + "'"};
  if (!valid_name([&] { Transmission::from_name(c.transmission_left); }))
    return Violation{"transmission_left", "unknown transmission '" + c.transmission_left + "'"};
  if (!valid_name([&] { Transmission::from_name(c.transmission_right); }))
    return Violation{"transmission_right", "unknown transmission '" + c.transmission_right + "'"};
  if (c.color == ColorKind::erf_profile && !(c.eta > 0.0)) return Violation{"eta", "must be positive"};
  if (c.color == ColorKind::constant && !(c.color_value >= 0.0 && c.color_value <= 1.0))
    return Violation{"color_value", "must lie in [0, 1]"};
  if (c.color == ColorKind::heaviside &&
      !(Transmission::from_name(c.transmission_left).identity &&
        Transmission::from_name(c.transmission_right).identity))
    return Violation{"color", "heaviside color requires identity transmissions"};
  if (!(c.x_max > c.x_min)) return Violation{"x_max", "must exceed x_min"};
  if (c.cells < 4) return Violation{"N", "must be at least 4"};
  if (!(c.cfl_number > 0.0 && c.cfl_number <= 0.5)) return Violation{"cfl_number", "must lie in (0, 0.5]"};
  if (!(c.t_end > 0.0)) return Violation{"t_end", "must be positive"};
  if (c.max_steps < 1) return Violation{"max_steps", "must be positive"};
  for (double t : c.snapshot_times)
    if (!(t >= 0.0 && t <= c.t_end)) return Violation{"snapshots", "times must lie in [0, t_end]"};
  if (c.entropy_levels < 1) return Violation{"entropy_levels", "must be at least 1"};
  if (!(c.weak_bv_half_width > 0.0)) return Violation{"weak_bv_half_width", "must be positive"};
  if (c.shock_snapshots < 4) return Violation{"shock_snapshots", "must be at least 4"};
  return std::nullopt;
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (auto v = first_violation(config)) throw ConfigError(v->field + ": " + v->message);
}

ExperimentConfig parse_config(std::string_view text) {
  struct Entry {
    std::string key, value;
    int line;
  };
  std::vector<Entry> entries;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string content = trim(raw);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    Entry e{trim(std::string_view(content).substr(0, eq)), trim(std::string_view(content).substr(eq + 1)), line};
    if (e.key.empty()) throw ConfigError("missing key", line);
    if (e.value.empty()) throw ConfigError("missing value for '" + e.key + "'", line);
    if (e.key != "preset" && !setters().contains(e.key)) throw ConfigError("unknown key '" + e.key + "'", line);
    if (!seen.emplace(e.key, line).second) throw ConfigError("duplicate key '" + e.key + "'", line);
    entries.push_back(std::move(e));
  }

  ExperimentConfig config;
  for (const Entry& e : entries) {
    if (e.key != "preset") continue;
    try {
      config = preset(e.value);
    } catch (const InputError& err) {
      throw ConfigError(err.what(), e.line);
    }
  }
  for (const Entry& e : entries) {
    if (e.key == "preset") continue;
    try {
      setters().at(e.key)(config, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(e.key + ": " + err.what(), e.line);
    }
  }
  if (auto v = first_violation(config)) {
    int where = 0;
    if (auto it = seen.find(v->field); it != seen.end()) where = it->second;
    if (v->field.starts_with("transmission") && seen.contains("transmission")) where = seen["transmission"];
    throw ConfigError(v->field + ": " + v->message, where);
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_config(buffer.str());
}

std::string config_reference() {
  return R"(Config keys (flat `key = value`, `#` comments):
  preset              resonance-smooth | resonance-shock | state-coupling |
                      decoupled-burgers | well-balanced; applied before other keys
  flux_left           burgers | burgers_shifted                 [burgers]
  flux_right          burgers | burgers_shifted                 [burgers_shifted]
  transmission        sets both sides: identity | linear(c)
  transmission_left   identity | linear(c)                      [identity]
  transmission_right  identity | linear(c)                      [identity]
  color               erf | constant | heaviside                [erf]
  eta                 erf thickness, > 0                        [0.005]
  zeta                erf shift                                 [0]
  color_value         level of the constant color, in [0, 1]    [0]
  x_min, x_max        domain                                    [-1, 1]
  N                   number of cells, >= 4                     [1000]
  cfl_number          in (0, 0.5]                               [0.45]
  t_end               final time                                [0.4]
  max_steps           step cap                                  [10000000]
  initial             riemann | constant | cosine               [riemann]
  u_left, u_right     Riemann states in w                       [-1, 1.5]
  jump                Riemann jump location                     [0]
  u_value             constant value / cosine mean              [0]
  amplitude           cosine amplitude                          [0]
  flux_scheme         godunov | engquist-osher | rusanov        [godunov]
  snapshots           comma-separated times; t_end always added []
  output_dir          output directory                          [out]
  diagnostics         record and check invariants every step    [true]
  entropy_check       include Kruzhkov entropy residuals        [true]
  entropy_levels      number of Kruzhkov constants              [21]
  weak_bv_half_width  window |x| < h for the weak BV sum        [0.8]
  track_shock         fit a shock speed                         [false]
  shock_level         tracked level; default (u_left + u_right) / 2
  shock_snapshots     snapshots used for the speed fit          [40]
  plateau             report the plateau over 10 eta <= |x| <= 0.2 [false]
)";
}

std::vector<std::string> preset_names() {
  return {"resonance-smooth", "resonance-shock", "state-coupling", "decoupled-burgers", "well-balanced"};
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.preset = std::string(name);
  if (name == "resonance-smooth") {
    // Long enough for the constant state to cover 10 eta <= |x| <= 0.2 for every shift.
    c.t_end = 1.0;
    c.plateau = true;
  } else if (name == "resonance-shock") {
    c.u_left = 1.0;
    c.u_right = -2.0;
    c.track_shock = true;
  } else if (name == "state-coupling") {
    c.color = ColorKind::heaviside;
  } else if (name == "decoupled-burgers") {
    c.flux_right = "burgers";
    c.color = ColorKind::constant;
    c.color_value = 0.0;
    c.u_left = 1.0;
    c.u_right = -0.5;
  } else if (name == "well-balanced") {
    c.transmission_right = "linear(2)";
    c.eta = 0.01;
    c.cells = 200;
    c.initial = InitialKind::constant;
    c.u_value = 0.3;
  } else {
    throw InputError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

ExperimentSetup build_setup(const ExperimentConfig& config) {
  validate(config);
  StaggeredGrid grid(config.x_min, config.x_max, config.cells);
  Transmission minus = Transmission::from_name(config.transmission_left);
  Transmission plus = Transmission::from_name(config.transmission_right);

  InitialProfile profile;
  double lo = 0.0, hi = 0.0;
  switch (config.initial) {
    case InitialKind::riemann: {
      const double ul = minus.theta(config.u_left);
      const double ur = plus.theta(config.u_right);
      profile = RiemannData{ul, ur, config.jump};
      lo = std::min(ul, ur);
      hi = std::max(ul, ur);
      break;
    }
    case InitialKind::constant: {
      const double value = config.u_value;
      profile = std::function<double(double)>([value](double) { return value; });
      lo = hi = value;
      break;
    }
    case InitialKind::cosine: {
      const double mean = config.u_value, amp = config.amplitude;
      profile = std::function<double(double)>(
          [mean, amp](double x) { return mean + amp * std::cos(std::numbers::pi * x); });
      lo = mean - std::abs(amp);
      hi = mean + std::abs(amp);
      break;
    }
  }

  CouplingModel model({FluxFunction::from_name(config.flux_left), FluxFunction::from_name(config.flux_right)},
                      {std::move(minus), std::move(plus)}, {lo, hi});
  ColorFunction color;
  switch (config.color) {
    case ColorKind::erf_profile:
      color = ColorFunction::erf_profile(config.eta, config.zeta);
      break;
    case ColorKind::constant:
      color = ColorFunction::constant(config.color_value);
      break;
    case ColorKind::heaviside:
      color = ColorFunction::heaviside();
      break;
  }
  std::vector<double> v = cell_average_color(grid, color);
  std::vector<double> u0 = cell_average_initial(grid, profile);
  return {grid, std::move(model), std::move(v), std::move(u0)};
}

std::vector<double> cell_w(const CouplingModel& model, std::span<const double> u, std::span<const double> v) {
  if (v.size() != u.size() + 1) throw InputError("cell_w: need one more color value than cells");
  std::vector<double> w(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) w[j] = reconstruct(u[j], v[j], v[j + 1], model).mean;
  return w;
}

std::vector<double> entropy_levels(const CouplingModel& model, int count) {
  const WorkingRange& r = model.range();
  const double lo = std::min({model.c0(r.lo, 0.0), model.c0(r.lo, 1.0), r.lo});
  const double hi = std::max({model.c0(r.hi, 0.0), model.c0(r.hi, 1.0), r.hi});
  if (count == 1 || lo == hi) return {0.5 * (lo + hi)};
  std::vector<double> k(count);
  for (int i = 0; i < count; ++i) k[i] = std::lerp(lo, hi, static_cast<double>(i) / (count - 1));
  k.back() = hi;
  return k;
}

Plateau extract_plateau(const StaggeredGrid& grid, std::span<const double> w, double lo, double hi) {
  std::vector<double> samples;
  for (int j = 0; j < grid.cells(); ++j) {
    const double ax = std::abs(grid.center(j));
    if (ax >= lo && ax <= hi) samples.push_back(w[j]);
  }
  if (samples.empty()) throw InputError("plateau window contains no cells");
  Plateau p;
  p.samples = static_cast<int>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= p.samples;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  p.stddev = std::sqrt(var / p.samples);
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  p.value = samples.size() % 2 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
  return p;
}

ExperimentResult simulate(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentSetup setup = build_setup(config);
  const WellBalancedScheme scheme(setup.grid, setup.model, setup.v, config.flux_scheme);

  const bool entropy = config.diagnostics && config.entropy_check;
  DiagnosticsRecorder recorder(scheme, centered_window(setup.grid, config.weak_bv_half_width),
                               entropy ? entropy_levels(setup.model, config.entropy_levels)
                                       : std::vector<double>{});
  WellBalancedScheme::Observer observer;
  if (config.diagnostics) {
    observer = [&recorder](const SchemeState& before, const SchemeState& after, const StepReport& report) {
      recorder.observe(before, after, report);
    };
  }

  std::vector<double> written = config.snapshot_times;
  written.push_back(config.t_end);
  std::sort(written.begin(), written.end());
  written.erase(std::unique(written.begin(), written.end()), written.end());
  std::vector<double> tracked;
  if (config.track_shock)
    for (int i = 1; i <= config.shock_snapshots; ++i)
      tracked.push_back(i == config.shock_snapshots ? config.t_end : config.t_end * i / config.shock_snapshots);
  std::vector<double> stops = written;
  stops.insert(stops.end(), tracked.begin(), tracked.end());
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  ExperimentResult result{.config = config, .grid = setup.grid, .v = setup.v, .u0 = setup.u0};
  SchemeState state{setup.u0, 0.0, 0};
  std::vector<Snapshot> track_snaps;
  for (double stop : stops) {
    if (stop > state.t) state = scheme.run(std::move(state), stop, config.cfl_number, observer, config.max_steps - state.n);
    std::vector<double> w = cell_w(setup.model, state.u, setup.v);
    if (std::binary_search(tracked.begin(), tracked.end(), stop)) track_snaps.push_back({stop, w});
    if (std::binary_search(written.begin(), written.end(), stop)) {
      result.snapshots.push_back({stop, std::move(w)});
      result.snapshot_u.push_back(state.u);
    }
  }
  result.final_state = state;
  result.w_final = result.snapshots.back().w;

  result.rows = recorder.rows();
  result.worst_max_principle = recorder.worst_max_principle();
  result.worst_convex_combination = recorder.worst_convex_combination();
  result.worst_subcell_max_principle = recorder.worst_subcell_max_principle();
  result.worst_entropy_residual = entropy ? recorder.worst_entropy_residual() : 0.0;
  result.weak_bv_cumulative = recorder.weak_bv_cumulative();
  result.failures = recorder.failures();

  if (config.initial == InitialKind::constant)
    result.well_balanced_residual = well_balanced_residual(state.u, config.u_value);
  if (config.track_shock) {
    const double level = std::isnan(config.shock_level) ? 0.5 * (config.u_left + config.u_right) : config.shock_level;
    ExcludedZone zone;
    if (config.color == ColorKind::erf_profile) zone = {-5.0 * config.eta, 5.0 * config.eta, true};
    try {
      result.shock = shock_track(setup.grid, track_snaps, level, zone);
    } catch (const InputError& e) {
      result.failures.push_back(std::string("shock tracking: ") + e.what());
    }
  }
  if (config.plateau) {
    try {
      result.plateau = extract_plateau(setup.grid, result.w_final, 10.0 * config.eta, 0.2);
    } catch (const InputError& e) {
      result.failures.push_back(std::string("plateau: ") + e.what());
    }
  }
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string snapshot_filename(double t) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t);
  if (ec != std::errc()) throw InputError("cannot format snapshot time");
  return "snap_t" + std::string(buf, ptr) + ".csv";
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.precision(17);
  return out;
}

std::string_view color_name(ColorKind kind) {
  switch (kind) {
    case ColorKind::erf_profile:
      return "erf";
    case ColorKind::constant:
      return "constant";
    case ColorKind::heaviside:
      return "heaviside";
  }
  return "erf";
}

}  // namespace

void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const StaggeredGrid& grid = result.grid;
  const ExperimentConfig& c = result.config;

  for (std::size_t s = 0; s < result.snapshots.size(); ++s) {
    const Snapshot& snap = result.snapshots[s];
    const std::vector<double>& u = result.snapshot_u[s];
    auto out = open_output(dir / snapshot_filename(snap.t));
    out << "x,u,w,v\n";
    for (int j = 0; j < grid.cells(); ++j) {
      const double vl = result.v[j], vr = result.v[j + 1];
      out << grid.center(j) << ',' << u[j] << ',' << snap.w[j] << ',' << 0.5 * (vl + vr) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for snapshot " + snapshot_filename(snap.t));
  }

  {
    auto out = open_output(dir / "diagnostics.csv");
    out << "n,t,dt,u_min,u_max,max_principle_violation,tv_w,weak_bv_increment,weak_bv_cumulative,"
           "max_entropy_residual\n";
    for (const DiagnosticsRow& r : result.rows) {
      out << r.n << ',' << r.t << ',' << r.dt << ',' << r.u_min << ',' << r.u_max << ','
          << r.max_principle_violation << ',' << r.tv_w << ',' << r.weak_bv_increment << ','
          << r.weak_bv_cumulative << ',' << r.max_entropy_residual << '\n';
    }
    if (!out) throw std::runtime_error("write failed for diagnostics.csv");
  }

  auto out = open_output(dir / "summary.txt");
  out << "preset = " << (c.preset.empty() ? "none" : c.preset) << '\n'
      << "flux_left = " << c.flux_left << '\n'
      << "flux_right = " << c.flux_right << '\n'
      << "transmission_left = " << c.transmission_left << '\n'
      << "transmission_right = " << c.transmission_right << '\n'
      << "color = " << color_name(c.color) << '\n'
      << "eta = " << c.eta << '\n'
      << "zeta = " << c.zeta << '\n'
      << "N = " << c.cells << '\n'
      << "cfl_number = " << c.cfl_number << '\n'
      << "flux_scheme = " << to_string(c.flux_scheme) << '\n'
      << "t_end = " << result.final_state.t << '\n'
      << "steps = " << result.final_state.n << '\n'
      << "u_min = " << *std::min_element(result.final_state.u.begin(), result.final_state.u.end()) << '\n'
      << "u_max = " << *std::max_element(result.final_state.u.begin(), result.final_state.u.end()) << '\n'
      << "tv_w_final = " << total_variation(result.w_final) << '\n';
  if (c.diagnostics) {
    out << "max_principle_violation = " << result.worst_max_principle << '\n'
        << "convex_combination_defect = " << result.worst_convex_combination << '\n'
        << "subcell_max_principle_violation = " << result.worst_subcell_max_principle << '\n'
        << "weak_bv_cumulative = " << result.weak_bv_cumulative << '\n';
    if (c.entropy_check) out << "max_entropy_residual = " << result.worst_entropy_residual << '\n';
  }
  if (result.well_balanced_residual) out << "well_balanced_residual = " << *result.well_balanced_residual << '\n';
  if (result.shock) out << "shock_speed = " << result.shock->speed << '\n';
  if (result.plateau)
    out << "plateau_w = " << result.plateau->value << '\n'
        << "plateau_stddev = " << result.plateau->stddev << '\n'
        << "plateau_cells = " << result.plateau->samples << '\n';
  out << "invariants = " << (result.ok() ? "pass" : "fail") << '\n';
  for (const std::string& f : result.failures) out << "failure = " << f << '\n';
  out << "wall_time = " << result.wall_time << '\n';
  if (!out) throw std::runtime_error("write failed for summary.txt");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = simulate(config);
  write_artifacts(result, config.output_dir);
  return result;
}

ConvergenceTable convergence_study(ExperimentConfig config, const std::vector<int>& cell_counts,
                                   int reference_cells) {
  if (cell_counts.empty()) throw InputError("convergence study needs at least one cell count");
  for (int n : cell_counts)
    if (n < 1 || reference_cells % n != 0)
      throw InputError("reference cell count must be a multiple of every N");
  config.diagnostics = false;
  config.track_shock = false;
  config.plateau = false;
  config.snapshot_times.clear();

  config.cells = reference_cells;
  const ExperimentResult reference = simulate(config);

  ConvergenceTable table;
  table.reference_cells = reference_cells;
  for (int n : cell_counts) {
    ConvergenceRow row;
    row.cells = n;
    if (n == reference_cells) {
      row.l1_error = l1_error(reference.grid, reference.w_final, reference.grid, reference.w_final);
    } else {
      config.cells = n;
      const ExperimentResult coarse = simulate(config);
      row.l1_error = l1_error(coarse.grid, coarse.w_final, reference.grid, reference.w_final);
    }
    if (!table.rows.empty()) {
      const ConvergenceRow& prev = table.rows.back();
      row.order = std::log(prev.l1_error / row.l1_error) / std::log(static_cast<double>(n) / prev.cells);
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace couplefv
