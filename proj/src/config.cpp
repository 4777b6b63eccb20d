#include "betaflow/config.hpp"

#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace betaflow {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string line_note(int line) {
  return line > 0 ? " (line " + std::to_string(line) + ")" : "";
}

double parse_double(const std::string& key, const std::string& value, int line) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigParseError(key + ": not a number: \"" + value + "\"" + line_note(line),
                           line, key);
  return v;
}

long long parse_int(const std::string& key, const std::string& value, int line) {
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigParseError(key + ": not an integer: \"" + value + "\"" + line_note(line),
                           line, key);
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value, int line) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE ||
      value.find('-') != std::string::npos)
    throw ConfigParseError(key + ": not a nonnegative integer: \"" + value + "\"" +
                               line_note(line),
                           line, key);
  return static_cast<std::uint64_t>(v);
}

void apply(ExperimentConfig& cfg, const std::string& key, const std::string& value,
           int line) {
  if (key == "d") {
    cfg.d = static_cast<int>(parse_int(key, value, line));
  } else if (key == "sector") {
    if (value == "symmetric")
      cfg.sector = Sector::symmetric;
    else if (value == "hermitian")
      cfg.sector = Sector::hermitian;
    else
      throw ConfigError("sector: expected symmetric or hermitian, got \"" + value + "\"" +
                            line_note(line),
                        line, key);
  } else if (key == "p") {
    cfg.p = parse_double(key, value, line);
  } else if (key == "gamma") {
    cfg.gamma = parse_double(key, value, line);
  } else if (key == "n") {
    cfg.n = parse_double(key, value, line);
  } else if (key == "m") {
    cfg.m = static_cast<int>(parse_int(key, value, line));
  } else if (key == "T") {
    cfg.T = parse_double(key, value, line);
  } else if (key == "dt") {
    cfg.dt = parse_double(key, value, line);
  } else if (key == "delta") {
    cfg.delta = parse_double(key, value, line);
  } else if (key == "collision_tol") {
    cfg.collision_tol = parse_double(key, value, line);
  } else if (key == "paths") {
    long long v = parse_int(key, value, line);
    if (v < 0)
      throw ConfigError("paths must be positive" + line_note(line), line, key);
    cfg.paths = static_cast<std::size_t>(v);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value, line);
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(key, value, line));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else {
    throw ConfigError("unknown key \"" + key + "\"" + line_note(line), line, key);
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("d must be >= 1", 0, "d");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw ConfigError("p out of [0,1]", 0, "p");
  if (!(cfg.gamma >= 0.0)) throw ConfigError("gamma must be >= 0", 0, "gamma");
  if (!(cfg.n > 0.0)) throw ConfigError("n must be > 0", 0, "n");
  if (cfg.m < 1) throw ConfigError("m must be >= 1", 0, "m");
  if (!(cfg.T > 0.0)) throw ConfigError("T must be > 0", 0, "T");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be > 0", 0, "dt");
  if (!(cfg.delta > 0.0)) throw ConfigError("delta must be > 0", 0, "delta");
  if (!(cfg.collision_tol >= 0.0))
    throw ConfigError("collision_tol must be >= 0", 0, "collision_tol");
  if (cfg.paths == 0) throw ConfigError("paths must be positive", 0, "paths");
  if (cfg.threads < 0) throw ConfigError("threads must be >= 0", 0, "threads");
  if (cfg.out_dir.empty()) throw ConfigError("out must be nonempty", 0, "out");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigParseError("expected key=value (line " + std::to_string(line) + "): \"" +
                                 trim(raw) + "\"",
                             line);
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw ConfigParseError("empty key (line " + std::to_string(line) + ")", line);
    if (value.empty())
      throw ConfigParseError(key + ": empty value (line " + std::to_string(line) + ")",
                             line, key);
    if (cfg.provided.count(key))
      throw ConfigParseError("duplicate key \"" + key + "\" (line " + std::to_string(line) + ")",
                             line, key);
    apply(cfg, key, value, line);
    cfg.provided.insert(key);
  }
  validate(cfg);
  return cfg;
}

void set_config_field(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value) {
  apply(cfg, key, value, 0);
  cfg.provided.insert(key);
  validate(cfg);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "d = " << cfg.d << "\n";
  out << "sector = " << sector_name(cfg.sector) << "\n";
  out << "p = " << fmt_double(cfg.p) << "\n";
  out << "gamma = " << fmt_double(cfg.gamma) << "\n";
  out << "n = " << fmt_double(cfg.n) << "\n";
  out << "m = " << cfg.m << "\n";
  out << "T = " << fmt_double(cfg.T) << "\n";
  out << "dt = " << fmt_double(cfg.dt) << "\n";
  out << "delta = " << fmt_double(cfg.delta) << "\n";
  out << "collision_tol = " << fmt_double(cfg.collision_tol) << "\n";
  out << "paths = " << cfg.paths << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "threads = " << cfg.threads << "\n";
  out << "out = " << cfg.out_dir << "\n";
  return out.str();
}

}  // namespace betaflow
