#include "slickseg/config.hpp"

#include "slickseg/log.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace slickseg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void fail(const std::string& context, const std::string& msg) {
  throw std::runtime_error(context + ": " + msg);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t parse_uint(const std::string& token, const std::string& context) {
  const std::string t = trim(token);
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    fail(context, "expected a non-negative integer, got '" + token + "'");
  return v;
}

DistributionModel& model_for(SegmentationConfig& cfg) { return cfg.model; }

void apply_model_kind(DistributionModel& m, const std::string& value,
                      const std::string& context) {
  const std::string v = trim(value);
  if (v == "exp")
    m.kind = ModelKind::exponential;
  else if (v == "weibull")
    m.kind = ModelKind::weibull;
  else if (v == "gamma")
    m.kind = ModelKind::gamma;
  else
    fail(context, "model must be one of exp, weibull, gamma (got '" + v + "')");
}

}  // namespace

std::string format_real(Real v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, p);
}

Real parse_real(const std::string& token, const std::string& context) {
  std::string t = trim(token);
  if (!t.empty() && t[0] == '+') t = t.substr(1);
  Real v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v))
    fail(context, "expected a finite real number, got '" + token + "'");
  return v;
}

long long parse_int(const std::string& token, const std::string& context) {
  const std::string t = trim(token);
  long long v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    fail(context, "expected an integer, got '" + token + "'");
  return v;
}

Shape parse_shape(const std::string& value) {
  const std::string v = trim(value);
  const auto colon = v.find(':');
  if (colon == std::string::npos)
    fail("shape '" + v + "'", "expected rect:..., circle:... or polygon:...");
  const std::string head = v.substr(0, colon);
  const std::string body = v.substr(colon + 1);
  if (head == "rect") {
    const auto parts = split(body, ',');
    if (parts.size() != 4) fail("shape '" + v + "'", "rect needs x0,y0,x1,y1");
    return Rect{parse_real(parts[0], v), parse_real(parts[1], v),
                parse_real(parts[2], v), parse_real(parts[3], v)};
  }
  if (head == "circle") {
    const auto parts = split(body, ',');
    if (parts.size() != 3) fail("shape '" + v + "'", "circle needs cx,cy,r");
    return Circle{parse_real(parts[0], v), parse_real(parts[1], v),
                  parse_real(parts[2], v)};
  }
  if (head == "polygon") {
    Polygon poly;
    for (const auto& pt : split(body, ';')) {
      const auto xy = split(pt, ',');
      if (xy.size() != 2) fail("shape '" + v + "'", "polygon points are x,y");
      poly.vertices.emplace_back(parse_real(xy[0], v), parse_real(xy[1], v));
    }
    if (poly.vertices.size() < 3)
      fail("shape '" + v + "'", "polygon needs at least 3 vertices");
    return poly;
  }
  fail("shape '" + v + "'", "unknown shape kind '" + head + "'");
}

std::string shape_to_string(const Shape& shape) {
  struct Printer {
    std::string operator()(const Rect& r) const {
      return "rect:" + format_real(r.x0) + "," + format_real(r.y0) + "," +
             format_real(r.x1) + "," + format_real(r.y1);
    }
    std::string operator()(const Circle& c) const {
      return "circle:" + format_real(c.cx) + "," + format_real(c.cy) + "," +
             format_real(c.r);
    }
    std::string operator()(const Polygon& p) const {
      std::string out = "polygon:";
      for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        if (i) out += ";";
        out += format_real(p.vertices[i].first) + "," +
               format_real(p.vertices[i].second);
      }
      return out;
    }
  };
  return std::visit(Printer{}, shape);
}

std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::string& text, const std::string& source_name) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(source_name + ":" + std::to_string(lineno),
           "expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      fail(source_name + ":" + std::to_string(lineno), "empty key");
    pairs.emplace_back(key, value);
  }
  return pairs;
}

void apply_config_pair(SegmentationConfig& cfg, const std::string& key,
                       const std::string& value) {
  const std::string ctx = "config key '" + key + "'";
  if (key == "model")
    apply_model_kind(model_for(cfg), value, ctx);
  else if (key == "ks")
    cfg.model.ks = parse_real(value, ctx);
  else if (key == "upsilon")
    cfg.model.upsilon = parse_real(value, ctx);
  else if (key == "kappa")
    cfg.model.kappa = parse_real(value, ctx);
  else if (key == "gamma1")
    cfg.gamma1 = parse_real(value, ctx);
  else if (key == "gamma2")
    cfg.gamma2 = parse_real(value, ctx);
  else if (key == "nu")
    cfg.nu = parse_real(value, ctx);
  else if (key == "mu")
    cfg.mu = parse_real(value, ctx);
  else if (key == "epsilon")
    cfg.epsilon = parse_real(value, ctx);
  else if (key == "tau")
    cfg.tau = parse_real(value, ctx);
  else if (key == "dt")
    cfg.dt = parse_real(value, ctx);
  else if (key == "c0")
    cfg.c0 = parse_real(value, ctx);
  else if (key == "max_iters")
    cfg.max_iters = static_cast<int>(parse_int(value, ctx));
  else if (key == "tol")
    cfg.tol = parse_real(value, ctx);
  else if (key == "init")
    cfg.init = parse_shape(value);
  else
    throw std::runtime_error("unknown config key '" + key + "'");
}

SegmentationConfig parse_config(const std::string& text,
                                const std::string& source_name) {
  SegmentationConfig cfg;
  std::set<std::string> seen;
  for (const auto& [key, value] : parse_key_values(text, source_name)) {
    if (!seen.insert(key).second)
      fail(source_name, "duplicate config key '" + key + "'");
    apply_config_pair(cfg, key, value);
  }
  return cfg;
}

SegmentationConfig load_config(const std::string& path) {
  return parse_config(read_file(path), path);
}

std::string dump_config(const SegmentationConfig& cfg) {
  std::ostringstream out;
  out << "model = " << model_name(cfg.model.kind) << "\n"
      << "ks = " << format_real(cfg.model.ks) << "\n"
      << "upsilon = " << format_real(cfg.model.upsilon) << "\n"
      << "kappa = " << format_real(cfg.model.kappa) << "\n"
      << "gamma1 = " << format_real(cfg.gamma1) << "\n"
      << "gamma2 = " << format_real(cfg.gamma2) << "\n"
      << "nu = " << format_real(cfg.nu) << "\n"
      << "mu = " << format_real(cfg.mu) << "\n"
      << "epsilon = " << format_real(cfg.epsilon) << "\n"
      << "tau = " << format_real(cfg.tau) << "\n"
      << "dt = " << format_real(cfg.dt) << "\n"
      << "c0 = " << format_real(cfg.c0) << "\n"
      << "max_iters = " << cfg.max_iters << "\n"
      << "tol = " << format_real(cfg.tol) << "\n";
  if (cfg.init) out << "init = " << shape_to_string(*cfg.init) << "\n";
  return out.str();
}

void SegmentationConfig::validate() const {
  auto require_positive = [](Real v, const char* name) {
    if (!(v > 0))
      throw std::invalid_argument(std::string("config: ") + name +
                                  " must be positive");
  };
  require_positive(gamma1, "gamma1");
  require_positive(gamma2, "gamma2");
  require_positive(nu, "nu");
  require_positive(mu, "mu");
  require_positive(epsilon, "epsilon");
  require_positive(tau, "tau");
  require_positive(c0, "c0");
  require_positive(tol, "tol");
  if (dt < 0) throw std::invalid_argument("config: dt must be non-negative");
  if (max_iters < 1)
    throw std::invalid_argument("config: max_iters must be at least 1");
  if (dt * mu > 0.25)
    throw std::invalid_argument(
        "config: dt * mu must not exceed 0.25 (explicit-scheme stability)");
  model.validate();
  if (nu < 0.00007 || nu > 0.0004)
    warn_once("config.nu",
              "nu = " + format_real(nu) +
                  " is outside the recommended range [0.00007, 0.0004]");
  if (gamma1 > gamma2)
    warn_once("config.gamma",
              "gamma1 > gamma2; the region-1 fitting weight is normally the "
              "smaller one");
}

namespace {

struct PrefixedPairs {
  std::vector<std::pair<std::string, std::string>> defaults;
  std::map<std::size_t, std::vector<std::pair<std::string, std::string>>> indexed;
  std::size_t count = 1;
  bool count_given = false;
};

// Splits "prefixN.key" entries from unprefixed defaults; "count_key = N"
// sets the number of indexed items.
PrefixedPairs collect_prefixed(const std::string& text,
                               const std::string& source_name,
                               const std::string& prefix,
                               const std::string& count_key) {
  PrefixedPairs out;
  for (const auto& [key, value] : parse_key_values(text, source_name)) {
    if (key == count_key) {
      out.count = parse_uint(value, source_name + " key '" + count_key + "'");
      out.count_given = true;
      continue;
    }
    if (key.rfind(prefix, 0) == 0) {
      const auto dot = key.find('.');
      if (dot == std::string::npos || dot == prefix.size())
        fail(source_name, "expected '" + prefix + "N.key', got '" + key + "'");
      const std::string idx_str = key.substr(prefix.size(), dot - prefix.size());
      const std::size_t idx = parse_uint(idx_str, source_name + " key '" + key + "'");
      out.indexed[idx].emplace_back(key.substr(dot + 1), value);
      continue;
    }
    out.defaults.emplace_back(key, value);
  }
  for (const auto& [idx, pairs] : out.indexed)
    if (idx >= out.count)
      fail(source_name, prefix + std::to_string(idx) +
                            " is out of range (count is " +
                            std::to_string(out.count) + ")");
  return out;
}

void apply_scene_pair(SceneSpec& spec, const std::string& key,
                      const std::string& value, const std::string& source) {
  const std::string ctx = source + " key '" + key + "'";
  if (key == "dims") {
    const auto parts = split(trim(value), 'x');
    if (parts.size() != 2) fail(ctx, "dims must look like 128x128");
    spec.width = static_cast<Eigen::Index>(parse_int(parts[0], ctx));
    spec.height = static_cast<Eigen::Index>(parse_int(parts[1], ctx));
  } else if (key == "shape")
    spec.oil_shape = parse_shape(value);
  else if (key == "background_sigma")
    spec.background_sigma = parse_real(value, ctx);
  else if (key == "oil_sigma")
    spec.oil_sigma = parse_real(value, ctx);
  else if (key == "model")
    apply_model_kind(spec.model, value, ctx);
  else if (key == "ks")
    spec.model.ks = parse_real(value, ctx);
  else if (key == "upsilon")
    spec.model.upsilon = parse_real(value, ctx);
  else if (key == "kappa")
    spec.model.kappa = parse_real(value, ctx);
  else if (key == "seed")
    spec.seed = parse_uint(value, ctx);
  else
    fail(source, "unknown scene key '" + key + "'");
}

}  // namespace

std::vector<SceneSpec> parse_scene_file(const std::string& text,
                                        const std::string& source_name) {
  const PrefixedPairs pp =
      collect_prefixed(text, source_name, "scene", "scenes");
  if (pp.count == 0) fail(source_name, "scene file declares zero scenes");
  SceneSpec defaults;
  bool default_seed_given = false;
  for (const auto& [key, value] : pp.defaults) {
    apply_scene_pair(defaults, key, value, source_name);
    if (key == "seed") default_seed_given = true;
  }
  std::vector<SceneSpec> scenes;
  for (std::size_t i = 0; i < pp.count; ++i) {
    SceneSpec spec = defaults;
    bool seed_given = false;
    const auto it = pp.indexed.find(i);
    if (it != pp.indexed.end())
      for (const auto& [key, value] : it->second) {
        apply_scene_pair(spec, key, value,
                         source_name + " scene" + std::to_string(i));
        if (key == "seed") seed_given = true;
      }
    if (!seed_given)
      spec.seed = (default_seed_given ? defaults.seed : 0) + i;
    scenes.push_back(spec);
  }
  return scenes;
}

std::vector<SceneSpec> load_scene_file(const std::string& path) {
  return parse_scene_file(read_file(path), path);
}

namespace {

void apply_cell_pair(SweepCell& cell, const std::string& key,
                     const std::string& value, const std::string& source) {
  const std::string ctx = source + " key '" + key + "'";
  if (key == "gamma1")
    cell.gamma1 = parse_real(value, ctx);
  else if (key == "gamma2")
    cell.gamma2 = parse_real(value, ctx);
  else if (key == "nu")
    cell.nu = parse_real(value, ctx);
  else if (key == "model")
    apply_model_kind(cell.model, value, ctx);
  else if (key == "ks")
    cell.model.ks = parse_real(value, ctx);
  else if (key == "upsilon")
    cell.model.upsilon = parse_real(value, ctx);
  else if (key == "kappa")
    cell.model.kappa = parse_real(value, ctx);
  else
    fail(source, "unknown grid key '" + key + "'");
}

}  // namespace

std::vector<SweepCell> parse_grid_file(const std::string& text,
                                       const std::string& source_name) {
  const PrefixedPairs pp = collect_prefixed(text, source_name, "cell", "cells");
  if (pp.count == 0 || (!pp.count_given && pp.indexed.empty() && pp.defaults.empty()))
    fail(source_name, "sweep grid has no cells");
  SweepCell defaults;
  for (const auto& [key, value] : pp.defaults)
    apply_cell_pair(defaults, key, value, source_name);
  std::vector<SweepCell> cells;
  for (std::size_t i = 0; i < pp.count; ++i) {
    SweepCell cell = defaults;
    const auto it = pp.indexed.find(i);
    if (it != pp.indexed.end())
      for (const auto& [key, value] : it->second)
        apply_cell_pair(cell, key, value,
                        source_name + " cell" + std::to_string(i));
    cells.push_back(cell);
  }
  return cells;
}

std::vector<SweepCell> load_grid_file(const std::string& path) {
  return parse_grid_file(read_file(path), path);
}

}  // namespace slickseg
