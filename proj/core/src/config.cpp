#include "shearspec/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "shearspec/errors.hpp"
#include "shearspec/profiles.hpp"

namespace shearspec {

std::string_view to_string(Task task) {
  switch (task) {
    case Task::psi: return "psi";
    case Task::evolve: return "evolve";
    case Task::hypo: return "hypo";
    case Task::semiclassical: return "semiclassical";
  }
  return "?";
}

Task parse_task(std::string_view text) {
  for (Task t : {Task::psi, Task::evolve, Task::hypo, Task::semiclassical}) {
    if (text == to_string(t)) return t;
  }
  throw ValidationError("unknown task '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ValidationError("not a number: '" + std::string(s) + "'");
  }
  return value;
}

long parse_integer(std::string_view s) {
  s = trim(s);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("not an integer: '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ValidationError("empty grid");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError("grid '" + std::string(text) + "' is not start:end:N[log|lin]");
    const double start = parse_number(parts[0]);
    const double end = parse_number(parts[1]);
    std::string_view count = parts[2];
    bool log = true;
    if (count.ends_with("log")) {
      count.remove_suffix(3);
    } else if (count.ends_with("lin")) {
      count.remove_suffix(3);
      log = false;
    }
    const long points = parse_integer(count);
    if (points < 1) throw ValidationError("grid needs at least one point");
    if (log && (start <= 0.0 || end <= 0.0)) throw ValidationError("log grid needs positive endpoints");
    std::vector<double> grid;
    for (long i = 0; i < points; ++i) {
      const double s = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
      grid.push_back(log ? std::exp(std::log(start) + s * (std::log(end) - std::log(start)))
                         : start + s * (end - start));
    }
    grid.front() = start;
    grid.back() = end;
    return grid;
  }
  std::vector<double> grid;
  for (auto part : split(text, ',')) grid.push_back(parse_number(part));
  return grid;
}

bool SweepConfig::has_task(Task t) const {
  for (Task x : tasks) {
    if (x == t) return true;
  }
  return false;
}

void SweepConfig::validate() const {
  if (profile.empty()) throw ValidationError("config: profile is required");
  const VelocityProfile p = parse_profile(profile);
  if (tasks.empty()) throw ValidationError("config: tasks must not be empty");
  const bool needs_pairs = has_task(Task::psi) || has_task(Task::evolve) || has_task(Task::hypo);
  if (needs_pairs) {
    if (nu_grid.empty() || k_grid.empty()) throw ValidationError("config: nu_grid and k_grid must not be empty");
    for (double nu : nu_grid) {
      if (!(nu > 0.0)) throw ValidationError("config: every nu must be positive");
    }
    for (double k : k_grid) {
      if (k == 0.0) throw ValidationError("config: k = 0 in k_grid; psi, evolve and hypo need k != 0");
    }
    if (!p.evolvable()) throw ValidationError("config: profile '" + profile + "' is geometry-only");
  }
  if (has_task(Task::hypo) && bc && *bc == Boundary::neumann) {
    throw ValidationError("config: hypo needs Dirichlet or periodic walls");
  }
  if (n < 0 || transverse_n < 1) throw ValidationError("config: resolutions must be positive");
  if (workers < 1) throw ValidationError("config: workers must be >= 1");
  if (psi.scan_points < 16) throw ValidationError("config: psi.scan_points must be >= 16");
  if (!(evolve.dt_factor > 0.0) || !(evolve.horizon > 0.0)) {
    throw ValidationError("config: evolve.dt_factor and evolve.horizon must be positive");
  }
}

SweepConfig parse_config_text(std::string_view text, std::string_view origin) {
  SweepConfig cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ValidationError(std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "psi" && section != "evolve" && section != "hypo" && section != "semiclassical") {
        fail("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) fail("empty value for '" + key + "'");
    try {
      if (section.empty()) {
        if (key == "profile") {
          cfg.profile = std::string(value);
        } else if (key == "nu_grid") {
          cfg.nu_grid = parse_grid(value);
        } else if (key == "k_grid") {
          cfg.k_grid = parse_grid(value);
        } else if (key == "n") {
          cfg.n = static_cast<int>(parse_integer(value));
        } else if (key == "transverse_n") {
          cfg.transverse_n = static_cast<int>(parse_integer(value));
        } else if (key == "bc") {
          cfg.bc = parse_boundary(value);
        } else if (key == "tasks") {
          cfg.tasks.clear();
          for (auto t : split(value, ',')) cfg.tasks.push_back(parse_task(t));
        } else if (key == "output" || key == "output_path") {
          cfg.output_path = std::string(value);
        } else if (key == "seed") {
          cfg.seed = static_cast<unsigned>(parse_integer(value));
        } else if (key == "workers") {
          cfg.workers = static_cast<int>(parse_integer(value));
        } else {
          fail("unknown key '" + key + "'");
        }
      } else if (section == "psi") {
        if (key == "scan_points") {
          cfg.psi.scan_points = static_cast<int>(parse_integer(value));
        } else if (key == "method") {
          cfg.psi.method = parse_sigma_method(value);
        } else {
          fail("unknown key '" + key + "' in [psi]");
        }
      } else if (section == "evolve") {
        if (key == "dt_factor") {
          cfg.evolve.dt_factor = parse_number(value);
        } else if (key == "horizon") {
          cfg.evolve.horizon = parse_number(value);
        } else if (key == "skip_fraction") {
          cfg.evolve.skip_fraction = parse_number(value);
        } else {
          fail("unknown key '" + key + "' in [evolve]");
        }
      } else if (section == "hypo") {
        if (key == "beta0") {
          cfg.hypo.beta0 = parse_number(value);
        } else if (key == "dt_factor") {
          cfg.hypo.dt_factor = parse_number(value);
        } else if (key == "horizon") {
          cfg.hypo.horizon = parse_number(value);
        } else {
          fail("unknown key '" + key + "' in [hypo]");
        }
      } else if (section == "semiclassical") {
        if (key == "sigma_grid") {
          cfg.semiclassical.sigma_grid = parse_grid(value);
        } else {
          fail("unknown key '" + key + "' in [semiclassical]");
        }
      }
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      if (what.starts_with(std::string(origin) + ":")) throw;
      fail(what);
    }
  }
  if (cfg.tasks.empty()) cfg.tasks = {Task::psi};
  cfg.validate();
  return cfg;
}

SweepConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

}  // namespace shearspec
