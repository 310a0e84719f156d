#include "run_config.hpp"

#include <fstream>
#include <set>

namespace krein::app {

using nlohmann::json;

const char* task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::Verify: return "verify";
    case TaskKind::Eig: return "eig";
    case TaskKind::Green: return "green";
    case TaskKind::Scatter: return "scatter";
    case TaskKind::Svd: return "svd";
  }
  return "?";
}

TaskKind parse_task_name(const std::string& name) {
  for (TaskKind k : {TaskKind::Verify, TaskKind::Eig, TaskKind::Green, TaskKind::Scatter, TaskKind::Svd}) {
    if (name == task_name(k)) return k;
  }
  throw std::invalid_argument("unknown task '" + name + "'");
}

namespace {

// Typed access to one JSON object with a fixed key set.
class Section {
 public:
  Section(const json& node, std::string pointer, std::set<std::string> allowed)
      : node_(node), pointer_(std::move(pointer)) {
    if (!node_.is_object()) throw ConfigError(pointer_.empty() ? "/" : pointer_, "expected an object");
    for (const auto& item : node_.items()) {
      if (!allowed.count(item.key())) throw ConfigError(at(item.key()), "unknown key");
    }
  }

  std::string at(const std::string& key) const { return pointer_ + "/" + key; }
  bool has(const std::string& key) const { return node_.contains(key); }
  const json& raw(const std::string& key) const { return node_.at(key); }

  void require(const std::string& key) const {
    if (!has(key)) throw ConfigError(at(key), "missing required key");
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::size_t size,
                              const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_array() || (size > 0 && v.size() != size)) {
      throw ConfigError(at(key), size > 0 ? "expected an array of " + std::to_string(size) + " numbers"
                                          : "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(at(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Coefficient coefficient(const std::string& key, const Coefficient& fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (v.is_number()) return Coefficient::constant(v.get<double>());
    if (!v.is_string()) throw ConfigError(at(key), "expected a number or an expression string");
    try {
      return Coefficient::parse(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(at(key), e.what());
    }
  }

  Box box(const std::string& key, const Box& fallback) const {
    const auto v = numbers(key, 4, {fallback.x0, fallback.x1, fallback.y0, fallback.y1});
    if (!(v[1] > v[0]) || !(v[3] > v[2])) throw ConfigError(at(key), "box must satisfy x0 < x1 and y0 < y1");
    return {v[0], v[1], v[2], v[3]};
  }

  cplx complex(const std::string& key, cplx fallback) const {
    const auto v = numbers(key, 2, {fallback.real(), fallback.imag()});
    return {v[0], v[1]};
  }

 private:
  const json& node_;
  std::string pointer_;
};

const json& child_or_empty(const json& doc, const char* key) {
  static const json empty = json::object();
  return doc.contains(key) ? doc.at(key) : empty;
}

void positive(const Section& s, const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError(s.at(key), "must be positive");
}

Family parse_family(const Section& s) {
  s.require("family");
  const std::string name = s.string("family", "");
  for (Family f : {Family::Dirichlet, Family::Neumann, Family::Robin, Family::Delta, Family::DeltaPrime}) {
    if (name == family_name(f)) return f;
  }
  throw ConfigError(s.at("family"), "unknown family '" + name + "'");
}

void parse_curve(const json& doc, RunConfig& cfg) {
  const Section s(child_or_empty(doc, "curve"), "/curve", {"kind", "radius", "semi_x", "semi_y"});
  cfg.curve_kind = s.string("kind", "circle");
  if (cfg.curve_kind == "circle") {
    if (s.has("semi_x") || s.has("semi_y")) throw ConfigError(s.at("semi_x"), "not a circle parameter");
    const double r = s.number("radius", 1.0);
    positive(s, "radius", r);
    cfg.curve = CurveParam::circle(r);
  } else if (cfg.curve_kind == "ellipse") {
    if (s.has("radius")) throw ConfigError(s.at("radius"), "not an ellipse parameter");
    const double a = s.number("semi_x", 2.0), b = s.number("semi_y", 1.0);
    positive(s, "semi_x", a);
    positive(s, "semi_y", b);
    cfg.curve = CurveParam::ellipse(a, b);
  } else if (cfg.curve_kind == "kite") {
    for (const char* k : {"radius", "semi_x", "semi_y"})
      if (s.has(k)) throw ConfigError(s.at(k), "the kite takes no parameters");
    cfg.curve = CurveParam::kite();
  } else {
    throw ConfigError(s.at("kind"), "unknown curve kind '" + cfg.curve_kind + "'");
  }
}

void parse_extension(const json& doc, RunConfig& cfg) {
  if (!doc.contains("extension")) throw ConfigError("/extension", "missing required section");
  const Section s(doc.at("extension"), "/extension",
                  {"family", "b_plus", "b_minus", "alpha", "beta", "region", "arc"});
  ExtensionSpec& e = cfg.extension;
  e.family = parse_family(s);
  e.b_plus = s.coefficient("b_plus", e.b_plus);
  e.b_minus = s.coefficient("b_minus", e.b_minus);
  e.alpha = s.coefficient("alpha", e.alpha);
  e.beta = s.coefficient("beta", e.beta);
  const std::string region = s.string("region", "full");
  if (region == "full") {
    e.on_arc = false;
    if (s.has("arc")) throw ConfigError(s.at("arc"), "arc given for a full-curve region");
  } else if (region == "arc") {
    e.on_arc = true;
    s.require("arc");
    const Section a(s.raw("arc"), s.at("arc"), {"t0", "t1"});
    a.require("t0");
    a.require("t1");
    e.arc.t0 = a.number("t0", 0.0);
    e.arc.t1 = a.number("t1", kPi);
    if (!(e.arc.t1 > e.arc.t0) || !(e.arc.t1 - e.arc.t0 < 2.0 * kPi)) {
      throw ConfigError(s.at("arc"), "need 0 < t1 - t0 < 2 pi");
    }
  } else {
    throw ConfigError(s.at("region"), "expected 'full' or 'arc'");
  }
}

void parse_task(const json& doc, RunConfig& cfg) {
  if (!doc.contains("task")) throw ConfigError("/task", "missing required section");
  const json& node = doc.at("task");
  if (!node.is_object() || !node.contains("kind")) throw ConfigError("/task/kind", "missing required key");
  if (!node.at("kind").is_string()) throw ConfigError("/task/kind", "expected a string");
  try {
    cfg.task = parse_task_name(node.at("kind").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/task/kind", e.what());
  }
  const std::string p = "/task";
  switch (cfg.task) {
    case TaskKind::Verify: {
      const Section s(node, p, {"kind", "n_models"});
      cfg.verify.n_models = s.integer("n_models", cfg.verify.n_models);
      if (cfg.verify.n_models < 1) throw ConfigError(s.at("n_models"), "must be at least 1");
      break;
    }
    case TaskKind::Eig: {
      const Section s(node, p, {"kind", "branch", "s_min", "s_max", "n_scan", "eigenfunction_box", "eigenfunction_n"});
      const std::string branch = s.string("branch", "oscillatory");
      if (branch == "oscillatory") cfg.eig.branch = ScanBranch::Oscillatory;
      else if (branch == "decaying") cfg.eig.branch = ScanBranch::Decaying;
      else throw ConfigError(s.at("branch"), "expected 'oscillatory' or 'decaying'");
      cfg.eig.s_min = s.number("s_min", cfg.eig.s_min);
      cfg.eig.s_max = s.number("s_max", cfg.eig.s_max);
      if (!(cfg.eig.s_min > 0.0)) throw ConfigError(s.at("s_min"), "must be positive");
      if (!(cfg.eig.s_max > cfg.eig.s_min)) throw ConfigError(s.at("s_max"), "must exceed s_min");
      cfg.eig.n_scan = s.integer("n_scan", cfg.eig.n_scan);
      if (cfg.eig.n_scan < 3) throw ConfigError(s.at("n_scan"), "must be at least 3");
      cfg.eig.eigenfunction_box = s.box("eigenfunction_box", cfg.eig.eigenfunction_box);
      cfg.eig.eigenfunction_n = s.integer("eigenfunction_n", cfg.eig.eigenfunction_n);
      if (cfg.eig.eigenfunction_n < 0) throw ConfigError(s.at("eigenfunction_n"), "must be nonnegative");
      break;
    }
    case TaskKind::Green: {
      const Section s(node, p, {"kind", "z", "source", "box", "n"});
      cfg.green.z = s.complex("z", cfg.green.z);
      const auto src = s.numbers("source", 2, {cfg.green.source.x(), cfg.green.source.y()});
      cfg.green.source = Point(src[0], src[1]);
      cfg.green.box = s.box("box", cfg.green.box);
      cfg.green.n = s.integer("n", cfg.green.n);
      if (cfg.green.n < 2) throw ConfigError(s.at("n"), "must be at least 2");
      break;
    }
    case TaskKind::Scatter: {
      const Section s(node, p, {"kind", "k", "direction", "n_angles", "epsilon_path", "near_points"});
      cfg.scatter.k = s.number("k", cfg.scatter.k);
      positive(s, "k", cfg.scatter.k);
      const auto d = s.numbers("direction", 2, {cfg.scatter.direction.x(), cfg.scatter.direction.y()});
      cfg.scatter.direction = Point(d[0], d[1]);
      if (cfg.scatter.direction.norm() < 1e-12) throw ConfigError(s.at("direction"), "must be nonzero");
      cfg.scatter.n_angles = s.integer("n_angles", cfg.scatter.n_angles);
      if (cfg.scatter.n_angles < 1) throw ConfigError(s.at("n_angles"), "must be at least 1");
      cfg.scatter.epsilon_path = s.numbers("epsilon_path", 0, cfg.scatter.epsilon_path);
      for (std::size_t i = 0; i < cfg.scatter.epsilon_path.size(); ++i) {
        const double e = cfg.scatter.epsilon_path[i];
        if (!(e > 0.0) || (i > 0 && !(e < cfg.scatter.epsilon_path[i - 1]))) {
          throw ConfigError(s.at("epsilon_path") + "/" + std::to_string(i),
                            "must be positive and strictly decreasing");
        }
      }
      if (s.has("near_points")) {
        const json& pts = s.raw("near_points");
        if (!pts.is_array()) throw ConfigError(s.at("near_points"), "expected an array of [x, y] pairs");
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const std::string at = s.at("near_points") + "/" + std::to_string(i);
          if (!pts[i].is_array() || pts[i].size() != 2 || !pts[i][0].is_number() || !pts[i][1].is_number()) {
            throw ConfigError(at, "expected [x, y]");
          }
          cfg.scatter.near_points.emplace_back(pts[i][0].get<double>(), pts[i][1].get<double>());
        }
      }
      break;
    }
    case TaskKind::Svd: {
      const Section s(node, p, {"kind", "z", "box", "n_samples"});
      cfg.svd.z = s.complex("z", cfg.svd.z);
      cfg.svd.box = s.box("box", cfg.svd.box);
      cfg.svd.n_samples = s.integer("n_samples", cfg.svd.n_samples);
      if (cfg.svd.n_samples < 16 || cfg.svd.n_samples > 400) {
        throw ConfigError(s.at("n_samples"), "must lie in [16, 400]");
      }
      break;
    }
  }
}

json box_json(const Box& b) { return json::array({b.x0, b.x1, b.y0, b.y1}); }
json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }
json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

}  // namespace

RunConfig parse_config(const json& doc) {
  const Section top(doc, "", {"curve", "grid", "kernel", "extension", "task", "output", "seed"});
  RunConfig cfg;
  parse_curve(doc, cfg);

  const Section grid(child_or_empty(doc, "grid"), "/grid", {"N_gamma", "M_arc"});
  cfg.n_gamma = grid.integer("N_gamma", cfg.n_gamma);
  if (cfg.n_gamma < 8 || cfg.n_gamma % 2 != 0 || cfg.n_gamma > 2048) {
    throw ConfigError(grid.at("N_gamma"), "must be even and lie in [8, 2048]");
  }
  cfg.m_arc = grid.integer("M_arc", cfg.m_arc);
  if (cfg.m_arc < 4 || cfg.m_arc > 2048) throw ConfigError(grid.at("M_arc"), "must lie in [4, 2048]");

  const Section kernel(child_or_empty(doc, "kernel"), "/kernel", {"V0", "lambda0"});
  parse_extension(doc, cfg);
  cfg.extension.V0 = kernel.number("V0", 0.0);
  cfg.extension.lambda0 = kernel.number("lambda0", 1.0);
  if (!(cfg.extension.lambda0 + cfg.extension.V0 > 0.0)) {
    throw ConfigError(kernel.at("lambda0"), "lambda0 + V0 must be positive");
  }
  cfg.extension.arc.M = cfg.m_arc;

  parse_task(doc, cfg);

  const Section out(child_or_empty(doc, "output"), "/output", {"dir"});
  cfg.out_dir = out.string("dir", cfg.out_dir);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ConfigError("/seed", "expected a nonnegative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }

  try {
    cfg.extension.validate(cfg.grid());
  } catch (const DegeneracyError& e) {
    throw ConfigError("/extension", e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

BoundaryGrid RunConfig::grid() const {
  if (extension.on_arc) return graded_arc_grid(curve, extension.arc);
  return discretize_curve(curve, n_gamma);
}

json RunConfig::to_json() const {
  json j;
  json c = {{"kind", curve_kind}};
  if (curve_kind == "circle") c["radius"] = curve.a;
  if (curve_kind == "ellipse") {
    c["semi_x"] = curve.a;
    c["semi_y"] = curve.b;
  }
  j["curve"] = c;
  j["grid"] = {{"N_gamma", n_gamma}, {"M_arc", m_arc}};
  j["kernel"] = {{"V0", extension.V0}, {"lambda0", extension.lambda0}};
  json e = {{"family", family_name(extension.family)},
            {"b_plus", extension.b_plus.to_string()},
            {"b_minus", extension.b_minus.to_string()},
            {"alpha", extension.alpha.to_string()},
            {"beta", extension.beta.to_string()},
            {"region", extension.on_arc ? "arc" : "full"}};
  if (extension.on_arc) e["arc"] = {{"t0", extension.arc.t0}, {"t1", extension.arc.t1}};
  j["extension"] = e;
  json t = {{"kind", task_name(task)}};
  switch (task) {
    case TaskKind::Verify: t["n_models"] = verify.n_models; break;
    case TaskKind::Eig:
      t["branch"] = eig.branch == ScanBranch::Oscillatory ? "oscillatory" : "decaying";
      t["s_min"] = eig.s_min;
      t["s_max"] = eig.s_max;
      t["n_scan"] = eig.n_scan;
      t["eigenfunction_box"] = box_json(eig.eigenfunction_box);
      t["eigenfunction_n"] = eig.eigenfunction_n;
      break;
    case TaskKind::Green:
      t["z"] = complex_json(green.z);
      t["source"] = point_json(green.source);
      t["box"] = box_json(green.box);
      t["n"] = green.n;
      break;
    case TaskKind::Scatter: {
      t["k"] = scatter.k;
      t["direction"] = point_json(scatter.direction);
      t["n_angles"] = scatter.n_angles;
      t["epsilon_path"] = scatter.epsilon_path;
      json pts = json::array();
      for (const Point& q : scatter.near_points) pts.push_back(point_json(q));
      t["near_points"] = pts;
      break;
    }
    case TaskKind::Svd:
      t["z"] = complex_json(svd.z);
      t["box"] = box_json(svd.box);
      t["n_samples"] = svd.n_samples;
      break;
  }
  j["task"] = t;
  j["output"] = {{"dir", out_dir}};
  j["seed"] = seed;
  return j;
}

}  // namespace krein::app
