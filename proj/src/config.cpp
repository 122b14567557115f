#include "rkhs/config.hpp"

#include "rkhs/errors.hpp"
#include "rkhs/linalg.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace rkhs {
namespace {

// Reads one TOML table and remembers which keys were consumed so leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const toml::table* tbl, std::string name) : tbl_(tbl), name_(std::move(name)) {}

  bool has(const std::string& key) const { return tbl_ && tbl_->contains(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const toml::node* n = get(key);
    if (!n) return require(fallback, key);
    return as_number(*n, key);
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    const toml::node* n = get(key);
    if (!n) return require(fallback, key);
    if (!n->is_integer()) fail(key, "must be an integer");
    return static_cast<int>(n->as_integer()->get());
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const toml::node* n = get(key);
    if (!n) return require(fallback, key);
    if (!n->is_string()) fail(key, "must be a string");
    return n->as_string()->get();
  }

  std::optional<Vec> vector(const std::string& key) {
    const toml::node* n = get(key);
    if (!n) return std::nullopt;
    return as_vector(*n, key);
  }

  std::optional<Mat> matrix(const std::string& key) {
    const toml::node* n = get(key);
    if (!n) return std::nullopt;
    const toml::array* rows = n->as_array();
    if (!rows) fail(key, "must be a list of rows");
    Mat out;
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const Vec row = as_vector(*rows->get(i), key);
      if (i == 0) out.resize(static_cast<Eigen::Index>(rows->size()), row.size());
      if (row.size() != out.cols()) fail(key, "rows differ in length");
      out.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return out;
  }

  std::vector<int> int_list(const std::string& key) {
    std::vector<int> out;
    const toml::node* n = get(key);
    if (!n) return out;
    const toml::array* arr = n->as_array();
    if (!arr) fail(key, "must be a list of integers");
    for (const auto& v : *arr) {
      if (!v.is_integer()) fail(key, "must be a list of integers");
      out.push_back(static_cast<int>(v.as_integer()->get()));
    }
    return out;
  }

  std::vector<SignalTerm> terms(const std::string& key) {
    std::vector<SignalTerm> out;
    const toml::node* n = get(key);
    if (!n) return out;
    const toml::array* arr = n->as_array();
    if (!arr) fail(key, "must be an array of tables");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const toml::table* t = arr->get(i)->as_table();
      if (!t) fail(key, "must be an array of tables");
      Section s(t, name_ + "." + key + "[" + std::to_string(i) + "]");
      SignalTerm term;
      const std::string shape = s.string("shape");
      if (shape == "sin")
        term.shape = SignalTerm::Shape::Sin;
      else if (shape == "cos")
        term.shape = SignalTerm::Shape::Cos;
      else if (shape == "tanh")
        term.shape = SignalTerm::Shape::Tanh;
      else
        s.fail("shape", "must be sin, cos, or tanh");
      term.channel = s.integer("channel", 0) - 1;
      term.amplitude = s.number("amplitude");
      term.frequency = s.number("frequency");
      term.phase = s.number("phase", 0.0);
      s.finish();
      out.push_back(term);
    }
    return out;
  }

  void finish() const {
    if (!tbl_) return;
    for (const auto& [k, v] : *tbl_)
      if (!used_.count(std::string(k.str()))) throw ConfigError("unknown key '" + name_ + "." + std::string(k.str()) + "'");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("'" + name_ + "." + key + "' " + what);
  }

 private:
  const toml::node* get(const std::string& key) {
    if (!tbl_) return nullptr;
    used_.insert(key);
    return tbl_->get(key);
  }

  template <class T>
  T require(const std::optional<T>& fallback, const std::string& key) const {
    if (!fallback) throw ConfigError("missing required key '" + name_ + "." + key + "'");
    return *fallback;
  }

  double as_number(const toml::node& n, const std::string& key) const {
    if (n.is_integer()) return static_cast<double>(n.as_integer()->get());
    if (n.is_floating_point()) return n.as_floating_point()->get();
    fail(key, "must be a number");
  }

  Vec as_vector(const toml::node& n, const std::string& key) const {
    const toml::array* arr = n.as_array();
    if (!arr) fail(key, "must be a list of numbers");
    Vec out(static_cast<Eigen::Index>(arr->size()));
    for (std::size_t i = 0; i < arr->size(); ++i) out(static_cast<Eigen::Index>(i)) = as_number(*arr->get(i), key);
    return out;
  }

  const toml::table* tbl_;
  std::string name_;
  std::set<std::string> used_;
};

const std::set<std::string> kSections = {"plant", "kernel", "centers", "observer", "deadzone", "sim", "output"};

void apply_override(toml::table& root, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + text + "' is not key=value");
  const std::string key = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  const auto dot = key.find('.');
  if (dot == std::string::npos) throw ConfigError("override key '" + key + "' must be section.key");
  const std::string section = key.substr(0, dot);
  const std::string field = key.substr(dot + 1);
  if (!kSections.count(section)) throw ConfigError("override names unknown section '" + section + "'");

  toml::table* tbl = root[section].as_table();
  if (!tbl) {
    root.insert_or_assign(section, toml::table{});
    tbl = root[section].as_table();
  }
  try {
    toml::table parsed = toml::parse("v = " + value);
    tbl->insert_or_assign(field, std::move(*parsed.get("v")));
  } catch (const toml::parse_error&) {
    tbl->insert_or_assign(field, value);
  }
}

Mat diag3(double a, double b, double c) {
  Mat m = Mat::Zero(3, 3);
  m.diagonal() << a, b, c;
  return m;
}

ScenarioConfig resolve(const toml::table& root) {
  for (const auto& [k, v] : root)
    if (!kSections.count(std::string(k.str()))) throw ConfigError("unknown section '" + std::string(k.str()) + "'");
  auto table = [&root](const char* name) { return root[name].as_table(); };

  ScenarioConfig cfg;

  // [plant]
  Section plant(table("plant"), "plant");
  auto& p = cfg.plant;
  p.family = plant.string("family");
  const bool translational = p.family == "rigid_translational";
  const bool rotational = p.family == "rigid_rotational";
  if (!translational && !rotational && p.family != "generic_linear")
    plant.fail("family", "must be generic_linear, rigid_translational, or rigid_rotational");

  if (translational) {
    p.mass = plant.number("mass", 4.0);
    if (!(p.mass > 0.0)) plant.fail("mass", "must be positive");
    p.A = translational_A();
    p.B = translational_B(p.mass);
    p.C = translational_C();
  } else if (rotational) {
    p.inertia = plant.matrix("inertia").value_or(diag3(0.2, 15.0, 15.0));
    if (p.inertia.rows() != 3 || p.inertia.cols() != 3) plant.fail("inertia", "must be 3×3");
    if (max_abs(p.inertia - p.inertia.transpose()) > 0.0 || !(lambda_min(p.inertia) > 0.0))
      plant.fail("inertia", "must be symmetric positive definite");
    p.A = Mat::Zero(3, 3);
    p.B = p.inertia.inverse();
    p.C = Mat::Identity(3, 3);
  } else {
    auto a = plant.matrix("A");
    auto b = plant.matrix("B");
    auto c = plant.matrix("C");
    if (!a || !b || !c) throw ConfigError("generic_linear plant needs plant.A, plant.B, and plant.C");
    p.A = *a;
    p.B = *b;
    p.C = *c;
    if (p.A.rows() != p.A.cols() || p.B.rows() != p.A.rows() || p.C.cols() != p.A.rows() ||
        p.C.rows() != p.B.cols())
      throw ConfigError("plant.A, plant.B, plant.C have inconsistent dimensions");
  }
  const auto n = p.A.rows();
  const auto m = p.C.rows();

  p.uncertainty = plant.string("uncertainty", translational ? "translational_force"
                                              : rotational  ? "rotational_drag"
                                                            : "zero");
  const std::set<std::string> uncertainties = {"zero", "translational_force", "rotational_drag", "constant",
                                               "kernel_expansion", "projected_translational_force"};
  if (!uncertainties.count(p.uncertainty)) plant.fail("uncertainty", "is not a known uncertainty model");
  if ((p.uncertainty == "translational_force" || p.uncertainty == "projected_translational_force") && m != 3)
    plant.fail("uncertainty", "translational_force needs a 3-dimensional output");
  p.uncertainty_coeff = plant.number("uncertainty_coeff", 0.001);
  p.uncertainty_constant = plant.vector("uncertainty_constant").value_or(Vec::Zero(m));
  if (p.uncertainty_constant.size() != m) plant.fail("uncertainty_constant", "must have m entries");
  p.uncertainty_alpha = plant.matrix("uncertainty_alpha").value_or(Mat(0, m));
  if (p.uncertainty == "kernel_expansion" && p.uncertainty_alpha.cols() != m)
    plant.fail("uncertainty_alpha", "must be an N×m list of rows");

  p.disturbance = plant.string("disturbance", translational ? "translational" : rotational ? "rotational" : "zero");
  p.disturbance_terms = plant.terms("disturbance_terms");
  p.disturbance_scale = plant.number("disturbance_scale", 1.0);
  if (!(p.disturbance_scale >= 0.0)) plant.fail("disturbance_scale", "must be >= 0");
  double default_bar = 0.0;
  if (p.disturbance == "translational") {
    if (m != 3) plant.fail("disturbance", "translational needs a 3-dimensional output");
    // 0.008(sin + cos) peaks at 0.008√2 per channel, three channels.
    default_bar = 0.008 * std::sqrt(6.0) * p.disturbance_scale;
  } else if (p.disturbance == "rotational") {
    if (m != 3) plant.fail("disturbance", "rotational needs a 3-dimensional output");
    default_bar = 0.05 * std::sqrt(3.0) * p.disturbance_scale;
  } else if (p.disturbance == "custom") {
    default_bar = SignalSum(static_cast<int>(m), p.disturbance_terms, p.disturbance_scale).norm_bound();
  } else if (p.disturbance != "zero") {
    plant.fail("disturbance", "must be zero, translational, rotational, or custom");
  }
  p.delta_bar = plant.number("delta_bar", default_bar);
  if (!(p.delta_bar >= 0.0)) plant.fail("delta_bar", "must be >= 0");

  p.unmatched = plant.string("unmatched", "zero");
  p.unmatched_terms = plant.terms("unmatched_terms");
  if (p.unmatched != "zero" && p.unmatched != "custom") plant.fail("unmatched", "must be zero or custom");

  p.controller = plant.string("controller", translational ? "translational_pd" : rotational ? "rotational_rate" : "zero");
  Mat default_gain;
  if (p.controller == "translational_pd") {
    if (!translational) plant.fail("controller", "translational_pd needs a rigid_translational plant");
    default_gain = Mat::Zero(3, 6);
    default_gain << Mat::Identity(3, 3), Mat::Identity(3, 3);
  } else if (p.controller == "rotational_rate") {
    if (!rotational) plant.fail("controller", "rotational_rate needs a rigid_rotational plant");
    default_gain = 10.0 * Mat::Identity(3, 3);
  } else if (p.controller != "zero" && p.controller != "constant") {
    plant.fail("controller", "must be zero, constant, translational_pd, or rotational_rate");
  }
  // Gainless controllers ignore a gain left over from the base file.
  p.controller_gain = plant.matrix("controller_gain").value_or(default_gain);
  if (default_gain.size() == 0)
    p.controller_gain = Mat();
  else if (p.controller_gain.rows() != default_gain.rows() || p.controller_gain.cols() != default_gain.cols())
    plant.fail("controller_gain", "has the wrong shape");
  p.control_constant = plant.vector("control_constant").value_or(Vec::Zero(m));
  if (p.control_constant.size() != m) plant.fail("control_constant", "must have m entries");

  Vec default_x0 = Vec::Zero(n);
  if (translational) default_x0 = translational_reference(0.0).value;
  if (rotational) default_x0 = rotational_reference(0.0).value;
  p.x0 = plant.vector("x0").value_or(default_x0);
  if (p.x0.size() != n) plant.fail("x0", "must have n entries");
  if (rotational) {
    p.eta0 = plant.vector("eta0").value_or(Vec::Zero(3));
    if (p.eta0.size() != 3) plant.fail("eta0", "must have 3 entries");
  }
  plant.finish();

  // [kernel]
  Section kernel(table("kernel"), "kernel");
  cfg.kernel.family = kernel.string("family", "sobolev_matern");
  if (cfg.kernel.family == "sobolev_matern") {
    cfg.kernel.order = kernel.integer("order", 3);
    cfg.kernel.dimension = kernel.integer("dimension", static_cast<int>(m));
  } else if (cfg.kernel.family != "gaussian") {
    kernel.fail("family", "must be sobolev_matern or gaussian");
  }
  cfg.kernel.length_scale = kernel.number("length_scale", 1.0);
  kernel.finish();

  // [centers]
  Section centers(table("centers"), "centers");
  cfg.centers.points = centers.matrix("points").value_or(Mat(0, m));
  cfg.centers.lower = centers.vector("lower").value_or(Vec());
  cfg.centers.upper = centers.vector("upper").value_or(Vec());
  cfg.centers.points_per_axis = centers.integer("points_per_axis", 3);
  cfg.centers.jitter_initial = centers.number("jitter_initial", 1e-10);
  cfg.centers.jitter_max = centers.number("jitter_max", 1e-6);
  centers.finish();
  if (cfg.centers.points.rows() == 0) {
    if (cfg.centers.lower.size() != m || cfg.centers.upper.size() != m)
      throw ConfigError("centers.lower and centers.upper must have m entries (or give centers.points)");
    if (cfg.centers.points_per_axis < 1) throw ConfigError("centers.points_per_axis must be >= 1");
  } else {
    if (cfg.centers.points.cols() != m) throw ConfigError("centers.points rows must have m entries");
    if (cfg.centers.lower.size() == 0) cfg.centers.lower = cfg.centers.points.colwise().minCoeff().transpose();
    if (cfg.centers.upper.size() == 0) cfg.centers.upper = cfg.centers.points.colwise().maxCoeff().transpose();
  }
  if (!(cfg.centers.jitter_initial > 0.0) || cfg.centers.jitter_max < cfg.centers.jitter_initial)
    throw ConfigError("centers: need 0 < jitter_initial <= jitter_max");

  // [observer]
  Section obs(table("observer"), "observer");
  auto& o = cfg.observer;
  auto l = obs.matrix("L");
  auto w = obs.matrix("W");
  if (!l || !w) throw ConfigError("observer.L and observer.W are required");
  o.L = *l;
  o.W = *w;
  o.epsilon = obs.number("epsilon");
  o.gamma_f = obs.matrix("gamma_f").value_or(Mat::Identity(m, m));
  o.x_hat0 = obs.vector("x_hat0").value_or(Vec::Zero(n));
  o.alpha0 = obs.vector("alpha0").value_or(Vec());
  if (rotational) o.eta_hat0 = obs.vector("eta_hat0").value_or(p.eta0);
  o.certified_states = obs.int_list("certified_states");
  o.spr_tolerance = obs.number("spr_tolerance", 1e-6);
  obs.finish();
  if (o.L.rows() != n || o.L.cols() != m) throw ConfigError("observer.L must be n×m");
  if (o.x_hat0.size() != n) throw ConfigError("observer.x_hat0 must have n entries");
  if (rotational && o.eta_hat0.size() != 3) throw ConfigError("observer.eta_hat0 must have 3 entries");
  for (int idx : o.certified_states)
    if (idx < 1 || idx > n) throw ConfigError("observer.certified_states entries must lie in 1..n");

  // [deadzone]
  Section dz(table("deadzone"), "deadzone");
  cfg.deadzone.d = dz.number("d");
  cfg.deadzone.buffer = dz.number("buffer");
  cfg.deadzone.gate = dz.string("gate", "smooth");
  if (cfg.deadzone.gate != "smooth" && cfg.deadzone.gate != "step") dz.fail("gate", "must be smooth or step");
  cfg.deadzone.probe_lower = dz.vector("probe_lower").value_or(cfg.centers.lower);
  cfg.deadzone.probe_upper = dz.vector("probe_upper").value_or(cfg.centers.upper);
  cfg.deadzone.probe_points_per_axis = dz.integer("probe_points_per_axis", 21);
  cfg.deadzone.residual_points_per_axis = dz.integer("residual_points_per_axis", 11);
  dz.finish();
  if (cfg.deadzone.probe_lower.size() != m || cfg.deadzone.probe_upper.size() != m)
    throw ConfigError("deadzone probe box must have m entries per bound");
  if ((cfg.deadzone.probe_upper.array() < cfg.deadzone.probe_lower.array()).any())
    throw ConfigError("deadzone.probe_upper must not lie below probe_lower");
  if (cfg.deadzone.probe_points_per_axis < 2 || cfg.deadzone.residual_points_per_axis < 2)
    throw ConfigError("deadzone probe grids need at least 2 points per axis");

  // [sim]
  Section sim(table("sim"), "sim");
  cfg.sim.t0 = sim.number("t0", 0.0);
  cfg.sim.t_final = sim.number("t_final", rotational ? 120.0 : 60.0);
  cfg.sim.h = sim.number("h", 1e-3);
  cfg.sim.record_stride = sim.integer("record_stride", 10);
  sim.finish();
  {
    SimConfig check;
    check.t0 = cfg.sim.t0;
    check.t_final = cfg.sim.t_final;
    check.h = cfg.sim.h;
    check.record_stride = cfg.sim.record_stride;
    check.validate();
  }

  Section out(table("output"), "output");
  cfg.output.dir = out.string("dir", "out");
  out.finish();
  return cfg;
}

toml::array to_array(const Vec& v) {
  toml::array a;
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

toml::array to_array(const Mat& m) {
  toml::array rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_array(Vec(m.row(i).transpose())));
  return rows;
}

toml::array to_array(const std::vector<SignalTerm>& terms) {
  toml::array a;
  for (const auto& t : terms) {
    const char* shape = t.shape == SignalTerm::Shape::Sin ? "sin" : t.shape == SignalTerm::Shape::Cos ? "cos" : "tanh";
    a.push_back(toml::table{{"shape", shape},
                            {"channel", t.channel + 1},
                            {"amplitude", t.amplitude},
                            {"frequency", t.frequency},
                            {"phase", t.phase}});
  }
  return a;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config parse error: " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(msg.str());
  }
  for (const auto& o : overrides) apply_override(root, o);
  return resolve(root);
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string effective_config_text(const ScenarioConfig& cfg) {
  const auto& p = cfg.plant;
  toml::table plant;
  plant.insert("family", p.family);
  if (p.family == "rigid_translational") plant.insert("mass", p.mass);
  if (p.family == "rigid_rotational") plant.insert("inertia", to_array(p.inertia));
  if (p.family == "generic_linear") {
    plant.insert("A", to_array(p.A));
    plant.insert("B", to_array(p.B));
    plant.insert("C", to_array(p.C));
  }
  plant.insert("uncertainty", p.uncertainty);
  plant.insert("uncertainty_coeff", p.uncertainty_coeff);
  plant.insert("uncertainty_constant", to_array(p.uncertainty_constant));
  if (p.uncertainty_alpha.rows() > 0) plant.insert("uncertainty_alpha", to_array(p.uncertainty_alpha));
  plant.insert("disturbance", p.disturbance);
  if (!p.disturbance_terms.empty()) plant.insert("disturbance_terms", to_array(p.disturbance_terms));
  plant.insert("disturbance_scale", p.disturbance_scale);
  plant.insert("delta_bar", p.delta_bar);
  plant.insert("unmatched", p.unmatched);
  if (!p.unmatched_terms.empty()) plant.insert("unmatched_terms", to_array(p.unmatched_terms));
  plant.insert("controller", p.controller);
  if (p.controller_gain.size() > 0) plant.insert("controller_gain", to_array(p.controller_gain));
  plant.insert("control_constant", to_array(p.control_constant));
  plant.insert("x0", to_array(p.x0));
  if (p.family == "rigid_rotational") plant.insert("eta0", to_array(p.eta0));

  toml::table kernel;
  kernel.insert("family", cfg.kernel.family);
  if (cfg.kernel.family == "sobolev_matern") {
    kernel.insert("order", cfg.kernel.order);
    kernel.insert("dimension", cfg.kernel.dimension);
  }
  kernel.insert("length_scale", cfg.kernel.length_scale);

  toml::table centers;
  if (cfg.centers.points.rows() > 0) centers.insert("points", to_array(cfg.centers.points));
  centers.insert("lower", to_array(cfg.centers.lower));
  centers.insert("upper", to_array(cfg.centers.upper));
  centers.insert("points_per_axis", cfg.centers.points_per_axis);
  centers.insert("jitter_initial", cfg.centers.jitter_initial);
  centers.insert("jitter_max", cfg.centers.jitter_max);

  const auto& o = cfg.observer;
  toml::table observer;
  observer.insert("L", to_array(o.L));
  observer.insert("W", to_array(o.W));
  observer.insert("epsilon", o.epsilon);
  observer.insert("gamma_f", to_array(o.gamma_f));
  observer.insert("x_hat0", to_array(o.x_hat0));
  if (o.alpha0.size() > 0) observer.insert("alpha0", to_array(o.alpha0));
  if (p.family == "rigid_rotational") observer.insert("eta_hat0", to_array(o.eta_hat0));
  if (!o.certified_states.empty()) {
    toml::array idx;
    for (int i : o.certified_states) idx.push_back(i);
    observer.insert("certified_states", idx);
  }
  observer.insert("spr_tolerance", o.spr_tolerance);

  toml::table deadzone;
  deadzone.insert("d", cfg.deadzone.d);
  deadzone.insert("buffer", cfg.deadzone.buffer);
  deadzone.insert("gate", cfg.deadzone.gate);
  deadzone.insert("probe_lower", to_array(cfg.deadzone.probe_lower));
  deadzone.insert("probe_upper", to_array(cfg.deadzone.probe_upper));
  deadzone.insert("probe_points_per_axis", cfg.deadzone.probe_points_per_axis);
  deadzone.insert("residual_points_per_axis", cfg.deadzone.residual_points_per_axis);

  toml::table sim{{"t0", cfg.sim.t0}, {"t_final", cfg.sim.t_final}, {"h", cfg.sim.h},
                  {"record_stride", cfg.sim.record_stride}};
  toml::table output{{"dir", cfg.output.dir}};

  toml::table root;
  root.insert("plant", plant);
  root.insert("kernel", kernel);
  root.insert("centers", centers);
  root.insert("observer", observer);
  root.insert("deadzone", deadzone);
  root.insert("sim", sim);
  root.insert("output", output);
  std::ostringstream out;
  out << root << '\n';
  return out.str();
}

BuiltScenario build_scenario(const ScenarioConfig& cfg) {
  const auto& p = cfg.plant;
  const int m = static_cast<int>(p.C.rows());

  BuiltScenario built;

  KernelModel model = cfg.kernel.family == "gaussian"
                          ? KernelModel::gaussian(cfg.kernel.length_scale, m)
                          : KernelModel::sobolev_matern(cfg.kernel.order, cfg.kernel.dimension,
                                                        cfg.kernel.length_scale, m);
  std::vector<Vec> points;
  if (cfg.centers.points.rows() > 0) {
    for (Eigen::Index i = 0; i < cfg.centers.points.rows(); ++i)
      points.push_back(cfg.centers.points.row(i).transpose());
  } else {
    points = lattice({cfg.centers.lower, cfg.centers.upper}, cfg.centers.points_per_axis);
  }
  JitterPolicy jitter{cfg.centers.jitter_initial, 10.0, cfg.centers.jitter_max};
  built.centers = std::make_shared<const CenterSet>(CenterSet::assemble(model, std::move(points), jitter));
  built.probe = {cfg.deadzone.probe_lower, cfg.deadzone.probe_upper};

  // Plant.
  PlantModel& plant = built.scenario.plant;
  plant.family = p.family == "rigid_translational" ? PlantFamily::RigidTranslational
                 : p.family == "rigid_rotational"  ? PlantFamily::RigidRotational
                                                   : PlantFamily::GenericLinear;
  plant.A = p.A;
  plant.B = p.B;
  plant.C = p.C;
  if (plant.family == PlantFamily::RigidRotational) plant.inertia = Mat3(p.inertia);

  std::optional<Vec> alpha_exact;
  if (p.uncertainty == "zero") {
    plant.f_true = [m](const Vec&) { return Vec(Vec::Zero(m)); };
    alpha_exact = Vec::Zero(built.centers->coeff_dim());
  } else if (p.uncertainty == "translational_force") {
    plant.f_true = [](const Vec& y) { return translational_force(y); };
  } else if (p.uncertainty == "rotational_drag") {
    const double c = p.uncertainty_coeff;
    plant.f_true = [c](const Vec& y) { return rotational_drag(y, c); };
  } else if (p.uncertainty == "constant") {
    const Vec c = p.uncertainty_constant;
    plant.f_true = [c](const Vec&) { return c; };
  } else {
    Vec alpha;
    if (p.uncertainty == "kernel_expansion") {
      if (static_cast<std::size_t>(p.uncertainty_alpha.rows()) != built.centers->size())
        throw ConfigError("plant.uncertainty_alpha must have one row per center");
      Mat t = p.uncertainty_alpha.transpose();
      alpha = Eigen::Map<const Vec>(t.data(), t.size());
    } else {  // projected_translational_force
      const auto grid = lattice(built.probe, cfg.deadzone.residual_points_per_axis);
      alpha = project_into_span(*built.centers, translational_force, grid, jitter).coeffs;
    }
    auto centers = built.centers;
    plant.f_true = [centers, alpha](const Vec& y) { return evaluate_element(*centers, alpha, y); };
    alpha_exact = alpha;
  }
  if (alpha_exact) {
    built.scenario.alpha_reference = alpha_exact;
    built.scenario.alpha_reference_exact = true;
  } else {
    const auto grid = lattice(built.probe, cfg.deadzone.residual_points_per_axis);
    built.scenario.alpha_reference = project_into_span(*built.centers, plant.f_true, grid, jitter).coeffs;
    built.scenario.alpha_reference_exact = false;
  }

  if (p.disturbance == "zero") {
    plant.delta = [m](double) { return Vec(Vec::Zero(m)); };
  } else {
    SignalSum s = p.disturbance == "translational" ? translational_disturbance(p.disturbance_scale)
                  : p.disturbance == "rotational"  ? rotational_disturbance(p.disturbance_scale)
                                                   : SignalSum(m, p.disturbance_terms, p.disturbance_scale);
    plant.delta = [s](double t) { return s(t); };
  }
  plant.delta_bar = p.delta_bar;

  const auto n = p.A.rows();
  if (p.unmatched == "zero") {
    plant.xi = [n](double) { return Vec(Vec::Zero(n)); };
  } else {
    SignalSum s(static_cast<int>(n), p.unmatched_terms);
    plant.xi = [s](double t) { return s(t); };
  }

  if (p.controller == "translational_pd") {
    const Mat gain = p.controller_gain;
    const Mat b_pinv = pseudo_inverse(p.B);
    built.scenario.controller = [gain, b_pinv](double t, const Vec& x) {
      return translational_controller(t, x, gain, b_pinv);
    };
  } else if (p.controller == "rotational_rate") {
    const Mat gain = p.controller_gain;
    built.scenario.controller = [gain](double t, const Vec& x) { return rotational_controller(t, x, gain); };
  } else {
    const Vec u = p.controller == "constant" ? p.control_constant : Vec(Vec::Zero(m));
    built.scenario.controller = [u](double, const Vec&) { return u; };
  }
  built.scenario.name = p.family;

  // Observer design.
  ObserverDesignInputs in;
  in.A = p.A;
  in.B = p.B;
  in.C = p.C;
  in.L = cfg.observer.L;
  in.gamma_f = cfg.observer.gamma_f;
  in.W = cfg.observer.W;
  in.epsilon = cfg.observer.epsilon;
  in.deadzone = {cfg.deadzone.d, cfg.deadzone.buffer,
                 cfg.deadzone.gate == "step" ? GateKind::Step : GateKind::Smooth};
  in.delta_bar = p.delta_bar;
  in.centers = built.centers;
  for (int i : cfg.observer.certified_states) in.certified_states.push_back(i - 1);
  in.spr_tolerance = cfg.observer.spr_tolerance;
  built.design = ObserverDesign::build(std::move(in));

  // Sim settings.
  SimConfig& sim = built.sim;
  sim.t0 = cfg.sim.t0;
  sim.t_final = cfg.sim.t_final;
  sim.h = cfg.sim.h;
  sim.record_stride = cfg.sim.record_stride;
  sim.x0 = p.x0;
  sim.x_hat0 = cfg.observer.x_hat0;
  sim.alpha0 = cfg.observer.alpha0;
  if (sim.alpha0.size() != 0 && sim.alpha0.size() != built.centers->coeff_dim())
    throw ConfigError("observer.alpha0 must have m·N entries");
  if (plant.family == PlantFamily::RigidRotational) {
    sim.eta0 = Vec3(p.eta0);
    sim.eta_hat0 = Vec3(cfg.observer.eta_hat0);
  }
  sim.validate();
  return built;
}

}  // namespace rkhs
