#include "qhexa/cli.hpp"

#include "qhexa/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qhexa::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConstructionError("bad value '" + v + "' for " + key);
  return out;
}

template <class T>
T positive(const std::string& key, const std::string& v) {
  T x = parse_number<T>(key, v);
  if (!(x > 0)) throw ConstructionError(key + " must be positive");
  return x;
}

std::string fmt(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

} // namespace

void Config::set(const std::string& key, const std::string& value) {
  if (key == "basis")
    basis = parse_basis(value);
  else if (key == "grid_n")
    grid_n = positive<int>(key, value);
  else if (key == "grid_box")
    grid_box = positive<double>(key, value);
  else if (key == "grid_epsilon")
    grid_epsilon = positive<double>(key, value);
  else if (key == "tol")
    tol = positive<double>(key, value);
  else if (key == "tol_composite")
    tol_composite = positive<double>(key, value);
  else if (key == "step_bound")
    step_bound = positive<std::size_t>(key, value);
  else if (key == "manifest")
    manifest = value;
  else if (key == "format") {
    if (value != "text" && value != "json") throw ConstructionError("format must be text or json");
    format = value;
  } else if (key == "seed")
    seed = parse_number<std::uint64_t>(key, value);
  else if (key == "samples")
    samples = positive<int>(key, value);
  else if (key == "timing") {
    if (value != "true" && value != "false") throw ConstructionError("timing must be true or false");
    timing = value == "true";
  } else
    throw ConstructionError("unknown config key '" + key + "'");
}

void Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConstructionError("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConstructionError(path + ":" + std::to_string(lineno) + ": expected key=value");
    try {
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConstructionError& e) {
      throw ConstructionError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::vector<std::pair<std::string, std::string>> Config::echo() const {
  return {{"basis", to_string(basis)},
          {"grid_n", std::to_string(grid_n)},
          {"grid_box", fmt(grid_box)},
          {"grid_epsilon", fmt(grid_epsilon)},
          {"tol", fmt(tol)},
          {"tol_composite", fmt(tol_composite)},
          {"step_bound", std::to_string(step_bound)},
          {"manifest", manifest},
          {"format", format},
          {"seed", std::to_string(seed)},
          {"samples", std::to_string(samples)},
          {"timing", timing ? "true" : "false"}};
}

Config config_from_env() {
  Config c;
  if (const char* path = std::getenv("QHEXA_CONFIG"); path && *path) c.load(path);
  return c;
}

bool Report::all_pass() const {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::string Report::to_json() const {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  doc["config"] = cfg;
  doc["output"] = output;
  nlohmann::ordered_json res = nlohmann::ordered_json::array();
  for (const auto& r : results)
    res.push_back({{"id", r.id}, {"pass", r.pass}, {"residual", r.residual}, {"time_ms", r.time_ms}});
  doc["results"] = res;
  doc["version"] = kVersion;
  return doc.dump(2) + "\n";
}

std::string Report::to_text() const {
  std::string s;
  for (const auto& line : output) s += line + "\n";
  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.pass;
    s += std::string(r.pass ? "PASS " : "FAIL ") + r.id;
    if (!r.residual.empty()) s += "  residual=" + r.residual;
    if (r.time_ms > 0) s += "  time_ms=" + fmt(r.time_ms);
    s += "\n";
  }
  if (!results.empty()) s += std::to_string(passed) + "/" + std::to_string(results.size()) + " passed\n";
  return s;
}

} // namespace qhexa::cli
