#include "xplate/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace xplate {

namespace {

const std::vector<std::string> kNumericKeys = {
    "a", "b", "b_over_a", "h", "a_over_h", "T", "C",
    "r", "r_over_a", "d", "d_over_a", "e", "e_over_a", "psi"};

bool is_numeric_key(const std::string& k) {
  return std::find(kNumericKeys.begin(), kNumericKeys.end(), k) != kNumericKeys.end();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, int line) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + tok + "'", line);
  }
}

/// "x1, x2, ..." or "lo:step:hi" (inclusive endpoints).
std::vector<double> parse_values(const std::string& text, int line) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(trim(p));
    if (parts.size() != 3) throw ConfigError("range must be lo:step:hi", line);
    const double lo = parse_double(parts[0], line);
    const double step = parse_double(parts[1], line);
    const double hi = parse_double(parts[2], line);
    if (step <= 0 || hi < lo) throw ConfigError("bad range bounds", line);
    for (double v = lo; v <= hi + 1e-12 * std::max(1.0, std::abs(hi)); v += step)
      out.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ',')) {
      p = trim(p);
      if (!p.empty()) out.push_back(parse_double(p, line));
    }
  }
  if (out.empty()) throw ConfigError("empty value list", line);
  return out;
}

std::vector<double> parse_layup(const std::string& text, int line) {
  std::vector<double> angles;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, '/')) {
    p = trim(p);
    if (p.empty()) throw ConfigError("unparseable layup '" + text + "'", line);
    angles.push_back(parse_double(p, line));
  }
  if (angles.empty()) throw ConfigError("unparseable layup '" + text + "'", line);
  return angles;
}

}  // namespace

std::size_t RunConfig::case_count() const {
  std::size_t n = std::max<std::size_t>(layups.size(), 1);
  for (const auto& [k, v] : axes) n *= v.size();
  return n;
}

RunConfig parse_config(std::istream& in, const MaterialTable& table) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", lineno);
    if (seen.count(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
    seen[key] = lineno;

    if (is_numeric_key(key)) {
      cfg.axes[key] = parse_values(value, lineno);
    } else if (key == "layup") {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        cfg.layups.push_back(parse_layup(item, lineno));
        cfg.layup_labels.push_back(item);
      }
      if (cfg.layups.empty()) throw ConfigError("empty layup list", lineno);
    } else if (key == "mesh") {
      std::istringstream ss(value);
      if (!(ss >> cfg.nx >> cfg.ny) || cfg.nx < 1 || cfg.ny < 1)
        throw ConfigError("mesh must be 'NX NY' with positive counts", lineno);
    } else if (key == "center") {
      double x, y;
      std::istringstream ss(value);
      if (!(ss >> x >> y)) throw ConfigError("center must be 'X Y'", lineno);
      cfg.center = Eigen::Vector2d(x, y);
    } else if (key == "bc") {
      if (value == "SSSS") cfg.bc = BoundaryCondition::SSSS;
      else if (value == "CCCC") cfg.bc = BoundaryCondition::CCCC;
      else throw ConfigError("bc must be SSSS or CCCC", lineno);
    } else if (key == "mode") {
      if (value == "static") cfg.mode = AnalysisMode::Static;
      else if (value == "vibration") cfg.mode = AnalysisMode::Vibration;
      else if (value == "buckling") cfg.mode = AnalysisMode::Buckling;
      else throw ConfigError("mode must be static|vibration|buckling", lineno);
    } else if (key == "eigencount") {
      cfg.eigencount = static_cast<int>(parse_double(value, lineno));
      if (cfg.eigencount < 1) throw ConfigError("eigencount must be >= 1", lineno);
    } else if (key == "cutout") {
      if (value == "none") cfg.cutout_kind = CutoutKind::None;
      else if (value == "circle") cfg.cutout_kind = CutoutKind::Circle;
      else if (value == "ellipse") cfg.cutout_kind = CutoutKind::Ellipse;
      else throw ConfigError("cutout must be none|circle|ellipse", lineno);
    } else if (key == "out") {
      cfg.out_path = value;
    } else if (key == "dump_fields") {
      if (value == "true") cfg.dump_fields = true;
      else if (value == "false") cfg.dump_fields = false;
      else throw ConfigError("dump_fields must be true or false", lineno);
    } else {
      throw ConfigError("unknown key '" + key + "'", lineno);
    }
  }

  auto conflict = [&](const char* k1, const char* k2) {
    if (cfg.axes.count(k1) && cfg.axes.count(k2))
      throw ConfigError(std::string("give either '") + k1 + "' or '" + k2 +
                            "', not both",
                        std::max(seen[k1], seen[k2]));
  };
  conflict("b", "b_over_a");
  conflict("h", "a_over_h");
  conflict("r", "r_over_a");
  conflict("d", "d_over_a");
  conflict("e", "e_over_a");

  // Environment must stay inside the material tables; report the line.
  for (const char* k : {"T", "C"}) {
    if (!cfg.axes.count(k)) continue;
    for (double v : cfg.axes[k]) {
      const bool ok = (k[0] == 'T') ? (v >= table.min_T() && v <= table.max_T())
                                    : (v >= table.min_C() && v <= table.max_C());
      if (!ok)
        throw ConfigError(std::string(k) + " = " + std::to_string(v) +
                              " outside the material table range",
                          seen[k]);
    }
  }

  if (cfg.layups.empty()) {
    cfg.layups.push_back({0.0, 90.0, 90.0, 0.0});
    cfg.layup_labels.push_back("0/90/90/0");
  }
  return cfg;
}

RunConfig parse_config(const std::string& text, const MaterialTable& table) {
  std::istringstream ss(text);
  return parse_config(ss, table);
}

RunConfig parse_config_file(const std::string& path, const MaterialTable& table) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in, table);
}

std::vector<SweepCase> expand_sweep(const RunConfig& cfg,
                                    const MaterialTable& table) {
  (void)table;
  // Deterministic ordering: canonical key order, rightmost fastest; the
  // layup index varies slowest.
  std::vector<std::string> keys;
  for (const std::string& k : kNumericKeys)
    if (cfg.axes.count(k)) keys.push_back(k);

  std::vector<std::size_t> sizes;
  for (const auto& k : keys) sizes.push_back(cfg.axes.at(k).size());

  std::vector<SweepCase> cases;
  const std::size_t n_numeric =
      std::accumulate(sizes.begin(), sizes.end(), std::size_t{1},
                      [](std::size_t a, std::size_t b) { return a * b; });

  for (std::size_t li = 0; li < cfg.layups.size(); ++li) {
    for (std::size_t flat = 0; flat < n_numeric; ++flat) {
      std::map<std::string, double> v;
      std::size_t rem = flat;
      for (int i = static_cast<int>(keys.size()) - 1; i >= 0; --i) {
        v[keys[i]] = cfg.axes.at(keys[i])[rem % sizes[i]];
        rem /= sizes[i];
      }
      auto get = [&](const std::string& k, double dflt) {
        auto it = v.find(k);
        return it == v.end() ? dflt : it->second;
      };

      CaseSetup s;
      s.a = get("a", 1.0);
      s.b = v.count("b") ? v["b"] : get("b_over_a", 1.0) * s.a;
      s.h = v.count("h") ? v["h"] : s.a / get("a_over_h", 100.0);
      if (s.a <= 0 || s.b <= 0 || s.h <= 0)
        throw ConfigError("plate dimensions must be positive");
      s.nx = cfg.nx;
      s.ny = cfg.ny;
      s.layup = cfg.layups[li];
      s.analysis.mode = cfg.mode;
      s.analysis.bc = cfg.bc;
      s.analysis.eigencount = cfg.eigencount;
      s.analysis.env.T = get("T", 300.0);
      s.analysis.env.C = get("C", 0.0);

      const Eigen::Vector2d center =
          cfg.center.value_or(Eigen::Vector2d(0.5 * s.a, 0.5 * s.b));
      CutoutKind kind;
      if (cfg.cutout_kind) {
        kind = *cfg.cutout_kind;
      } else if (v.count("r") || v.count("r_over_a")) {
        kind = CutoutKind::Circle;
      } else if (v.count("d") || v.count("d_over_a") || v.count("e") ||
                 v.count("e_over_a")) {
        kind = CutoutKind::Ellipse;
      } else {
        kind = CutoutKind::None;
      }
      if (kind == CutoutKind::Circle) {
        const double r = v.count("r") ? v["r"] : get("r_over_a", 0.0) * s.a;
        s.cutout = r > 0.0 ? CutoutSpec::circle(center, r) : CutoutSpec::none();
      } else if (kind == CutoutKind::Ellipse) {
        const double d = v.count("d") ? v["d"] : get("d_over_a", 0.0) * s.a;
        const double e = v.count("e") ? v["e"] : get("e_over_a", 0.0) * s.a;
        if (d <= 0 || e <= 0)
          throw ConfigError("elliptical cutout needs positive d and e");
        s.cutout = CutoutSpec::ellipse(center, d, e, get("psi", 0.0));
      } else {
        s.cutout = CutoutSpec::none();
      }
      try {
        s.cutout.validate(StructuredMesh(s.a, s.b, 1, 1));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }

      cases.push_back({s, cfg.layup_labels[li]});
    }
  }
  return cases;
}

}  // namespace xplate
