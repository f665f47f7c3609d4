#include "vacdiff/config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "vacdiff/errors.hpp"
#include "vacdiff/format.hpp"

namespace vacdiff {

namespace {

using Config = ExperimentConfig;

struct Field {
  std::string key;
  // Exactly one group of accessors is set.
  std::function<double&(Config&)> number;
  std::function<std::optional<double>&(Config&)> optional_number;
  std::function<void(Config&, std::string_view)> parse_word;
  std::function<std::string(const Config&)> print;
};

Field number(std::string key, std::function<double&(Config&)> get) {
  Field f;
  f.key = std::move(key);
  f.number = get;
  f.print = [get](const Config& c) {
    Config copy = c;
    return format_exact(get(copy));
  };
  return f;
}

Field optional_number(std::string key, std::function<std::optional<double>&(Config&)> get,
                      std::function<double(const Config&)> fallback = {}) {
  Field f;
  f.key = std::move(key);
  f.optional_number = get;
  f.print = [get, fallback](const Config& c) -> std::string {
    Config copy = c;
    const auto& v = get(copy);
    if (v) return format_exact(*v);
    if (fallback) return format_exact(fallback(c));
    return {};
  };
  return f;
}

template <typename Enum>
Field word(std::string key, std::function<Enum&(Config&)> get,
           std::vector<std::pair<std::string, Enum>> names) {
  Field f;
  f.key = key;
  f.parse_word = [get, names, key](Config& c, std::string_view text) {
    for (const auto& [name, value] : names) {
      if (text == name) {
        get(c) = value;
        return;
      }
    }
    std::string choices;
    for (const auto& [name, value] : names) choices += (choices.empty() ? "" : "|") + name;
    throw ConfigError(key, 0, "expected one of " + choices);
  };
  f.print = [get, names](const Config& c) -> std::string {
    Config copy = c;
    const Enum v = get(copy);
    for (const auto& [name, value] : names) {
      if (value == v) return name;
    }
    return {};
  };
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> t;
    t.push_back(number("probe.energy_J", [](Config& c) -> double& { return c.probe.energy_j; }));
    t.push_back(number("probe.wavelength_m", [](Config& c) -> double& { return c.probe.wavelength_m; }));
    t.push_back(number("probe.sigma_m", [](Config& c) -> double& { return c.probe.sigma_m; }));
    t.push_back(number("probe.rep_rate_hz", [](Config& c) -> double& { return c.probe.rep_rate_hz; }));
    t.push_back(word<SigmaConvention>(
        "probe.sigma_convention",
        [](Config& c) -> SigmaConvention& { return c.probe.sigma_convention; },
        {{"amplitude", SigmaConvention::Amplitude}, {"intensity", SigmaConvention::Intensity}}));

    t.push_back(number("target.energy_J", [](Config& c) -> double& { return c.target.energy_j; }));
    t.push_back(number("target.duration_s", [](Config& c) -> double& { return c.target.duration_s; }));
    t.push_back(number("target.nu_m", [](Config& c) -> double& { return c.target.nu_m; }));
    t.push_back(number("target.wavelength_m", [](Config& c) -> double& { return c.target.wavelength_m; }));
    t.push_back(optional_number(
        "target.region_half_width_m",
        [](Config& c) -> std::optional<double>& { return c.target.region_half_width_m; },
        [](const Config& c) { return c.region_half_width(); }));

    t.push_back(number("optics.focal_length_m", [](Config& c) -> double& { return c.optics.focal_length_m; }));
    t.push_back(number("optics.pixel_m", [](Config& c) -> double& { return c.optics.pixel_m; }));
    t.push_back(number("optics.half_extent_m", [](Config& c) -> double& { return c.optics.half_extent_m; }));
    {
      Field f;
      f.key = "optics.supersample";
      f.parse_word = [](Config& c, std::string_view text) {
        int v = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || end != text.data() + text.size()) {
          throw ConfigError("optics.supersample", 0, "expected an integer");
        }
        c.optics.supersample = v;
      };
      f.print = [](const Config& c) { return std::to_string(c.optics.supersample); };
      t.push_back(std::move(f));
    }
    t.push_back(word<PixelRule>(
        "optics.pixel_rule", [](Config& c) -> PixelRule& { return c.optics.pixel_rule; },
        {{"adaptive", PixelRule::Adaptive}, {"midpoint", PixelRule::Midpoint}}));

    t.push_back(word<VacuumKind>("vacuum.model", [](Config& c) -> VacuumKind& { return c.vacuum.model; },
                                 {{"none", VacuumKind::None},
                                  {"qed", VacuumKind::Qed},
                                  {"scalar", VacuumKind::Scalar},
                                  {"pseudoscalar", VacuumKind::Pseudoscalar}}));
    t.push_back(optional_number("vacuum.g_gev_inv",
                                [](Config& c) -> std::optional<double>& { return c.vacuum.g_gev_inv; }));
    t.push_back(optional_number("vacuum.mass_ev",
                                [](Config& c) -> std::optional<double>& { return c.vacuum.mass_ev; }));
    t.push_back(optional_number(
        "vacuum.interaction_length_m",
        [](Config& c) -> std::optional<double>& { return c.vacuum.interaction_length_m; },
        [](const Config& c) { return c.interaction_length(); }));

    t.push_back(number("plasma.pressure_pa", [](Config& c) -> double& { return c.plasma.pressure_pa; }));
    t.push_back(number("plasma.temperature_k", [](Config& c) -> double& { return c.plasma.temperature_k; }));
    t.push_back(number("plasma.electrons_per_molecule",
                       [](Config& c) -> double& { return c.plasma.electrons_per_molecule; }));
    t.push_back(number("plasma.intensity_w_cm2", [](Config& c) -> double& { return c.plasma.intensity_w_cm2; }));

    t.push_back(number("run.integration_s", [](Config& c) -> double& { return c.run.integration_s; }));
    t.push_back(word<ProbePolarization>(
        "run.polarization", [](Config& c) -> ProbePolarization& { return c.run.polarization; },
        {{"parallel", ProbePolarization::Parallel}, {"perpendicular", ProbePolarization::Perpendicular}}));
    t.push_back(number("run.exclusion_radius_m", [](Config& c) -> double& { return c.run.exclusion_radius_m; }));
    t.push_back(number("run.dark_counts", [](Config& c) -> double& { return c.run.dark_counts; }));
    t.push_back(number("run.efficiency", [](Config& c) -> double& { return c.run.efficiency; }));
    return t;
  }();
  return table;
}

const Field& find_field(std::string_view key, int line) {
  for (const Field& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError(std::string(key), line, "unknown key");
}

double parse_double(std::string_view key, std::string_view text, int line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [end, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || end != last || text.empty()) {
    throw ConfigError(std::string(key), line, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value, int line) {
  const Field& f = find_field(key, line);
  value = trim(value);
  try {
    if (f.number) {
      f.number(config) = parse_double(key, value, line);
    } else if (f.optional_number) {
      f.optional_number(config) = parse_double(key, value, line);
    } else {
      f.parse_word(config, value);
    }
  } catch (const ConfigError& e) {
    if (e.line() == line) throw;
    throw ConfigError(std::string(key), line, e.detail());
  }
}

void set_numeric(ExperimentConfig& config, std::string_view key, double value) {
  const Field& f = find_field(key, 0);
  if (f.number) {
    f.number(config) = value;
  } else if (f.optional_number) {
    f.optional_number(config) = value;
  } else {
    throw ConfigError(std::string(key), 0, "not a numeric key");
  }
}

double get_numeric(const ExperimentConfig& config, std::string_view key) {
  const Field& f = find_field(key, 0);
  ExperimentConfig c = config;
  if (f.number) return f.number(c);
  if (f.optional_number) {
    if (key == "target.region_half_width_m") return config.region_half_width();
    if (key == "vacuum.interaction_length_m") return config.interaction_length();
    const auto& v = f.optional_number(c);
    if (!v) throw ConfigError(std::string(key), 0, "not set");
    return *v;
  }
  throw ConfigError(std::string(key), 0, "not a numeric key");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("", line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", line_no, "missing key");
    if (value.empty()) throw ConfigError(std::string(key), line_no, "missing value");
    if (seen.count(key)) throw ConfigError(std::string(key), line_no, "duplicate key");
    apply_setting(config, key, value, line_no);
    seen.emplace(std::string(key), line_no);
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    const auto it = seen.find(e.key());
    if (it == seen.end()) throw;
    throw ConfigError(e.key(), it->second, e.detail());
  }
  return config;
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  for (const Field& f : fields()) {
    const std::string v = f.print(config);
    if (!v.empty()) out << f.key << " = " << v << '\n';
  }
  return out.str();
}

}  // namespace vacdiff
