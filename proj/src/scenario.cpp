#include "phisim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "phisim/operators.hpp"
#include "phisim/phi_field.hpp"
#include "phisim/snapshot.hpp"

namespace phisim {

namespace pt = boost::property_tree;

namespace {

struct KindName {
  Kind kind;
  std::string_view name;
};
constexpr KindName kKinds[] = {{Kind::schrodinger, "schrodinger"},
                               {Kind::phi, "phi"},
                               {Kind::maxwell_fields, "maxwell-fields"},
                               {Kind::maxwell_potential, "maxwell-potential"},
                               {Kind::reconstruct_phi, "reconstruct-phi"},
                               {Kind::reconstruct_A, "reconstruct-A"},
                               {Kind::compare, "compare"}};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"kind", "name", "backend", "seed"}},
      {"grid", {"dims", "points", "length"}},
      {"constants", {}},  // free-form
      {"potential", {"V"}},
      {"initial",
       {"psi_re", "psi_im", "phi", "phi_dot", "E_x", "E_y", "E_z", "B_x", "B_y", "B_z", "A_x",
        "A_y", "A_z", "A_dot_x", "A_dot_y", "A_dot_z", "eigenstate", "normalize", "noise"}},
      {"sources", {"rho", "J_x", "J_y", "J_z"}},
      {"integrator", {"method", "dt", "steps", "duration", "stride", "safety"}},
      {"monitors",
       {"max_norm_drift", "max_constraint", "max_identity", "max_roundtrip", "max_difference"}},
      {"output", {"snapshot", "diagnostics"}},
      {"input", {"trajectory"}},
      {"compare", {"a", "b", "map_a", "map_b"}},
  };
  return keys;
}

bool is_maxwell(Kind k) { return k == Kind::maxwell_fields || k == Kind::maxwell_potential; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, const expr::Bindings& constants)
      : tree_(tree), constants_(constants) {}

  std::optional<std::string> text(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) return std::nullopt;
    return *v;
  }
  std::string required(const std::string& key, std::string_view why) const {
    auto v = text(key);
    if (!v || v->empty()) {
      throw InvalidArgument("missing required key " + key + " (" + std::string(why) + ")");
    }
    return *v;
  }
  double number(const std::string& key, const std::string& source) const {
    try {
      const auto e = expr::Expression::parse(source);
      const double v = e.evaluate(constants_);
      if (!std::isfinite(v)) throw InvalidArgument("value is not finite");
      return v;
    } catch (const Error& err) {
      throw InvalidArgument(key + ": " + err.what());
    }
  }
  std::optional<double> optional_number(const std::string& key) const {
    auto v = text(key);
    if (!v) return std::nullopt;
    return number(key, *v);
  }
  long integer(const std::string& key, const std::string& source) const {
    const double v = number(key, source);
    if (v != std::floor(v) || std::abs(v) > 1e15) {
      throw InvalidArgument(key + ": expected an integer, got '" + source + "'");
    }
    return static_cast<long>(v);
  }
  std::optional<expr::Expression> expression(const std::string& key) const {
    auto v = text(key);
    if (!v) return std::nullopt;
    try {
      return expr::Expression::parse(*v);
    } catch (const expr::ParseError& e) {
      throw InvalidArgument(key + ": " + e.what());
    }
  }

 private:
  const pt::ptree& tree_;
  const expr::Bindings& constants_;
};

void check_names(const expr::Expression& e, const std::string& key, const std::set<std::string>& allowed) {
  for (const auto& name : e.free_names()) {
    if (!allowed.count(name)) {
      throw InvalidArgument(key + ": unknown name '" + name + "' in '" + e.source() + "'");
    }
  }
}

void apply_override(pt::ptree& tree, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw InvalidArgument("override '" + item + "' is not of the form section.key=value");
  }
  const std::string key = item.substr(0, eq);
  if (key.find('.') == std::string::npos) {
    throw InvalidArgument("override key '" + key + "' needs a section, e.g. integrator.steps");
  }
  tree.put(pt::ptree::path_type(key, '.'), item.substr(eq + 1));
}

void validate_sections(const pt::ptree& tree) {
  const auto& keys = known_keys();
  for (const auto& [section, child] : tree) {
    auto it = keys.find(section);
    if (it == keys.end()) throw InvalidArgument("unknown section [" + section + "]");
    if (section == "constants") continue;
    for (const auto& [key, value] : child) {
      if (!it->second.count(key)) {
        throw InvalidArgument("unknown key " + section + "." + key);
      }
    }
  }
}

}  // namespace

std::string_view to_string(Kind k) {
  for (const auto& kn : kKinds) {
    if (kn.kind == k) return kn.name;
  }
  return "?";
}

Kind parse_kind(std::string_view name) {
  for (const auto& kn : kKinds) {
    if (kn.name == name) return kn.kind;
  }
  throw InvalidArgument("unknown scenario kind '" + std::string(name) + "'");
}

const expr::Expression* InitialSpec::get(const std::string& name) const {
  auto it = fields.find(name);
  return it == fields.end() ? nullptr : &it->second;
}

PotentialSpec Scenario::sampled_potential() const {
  if (!grid) throw InvalidArgument("scenario has no grid");
  if (!potential) return PotentialSpec::zero(*grid);
  return PotentialSpec::from_expression(*potential, *grid, constants);
}

Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open scenario " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path, overrides);
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& origin,
                        const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument(origin.string() + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& o : overrides) apply_override(tree, o);
  validate_sections(tree);

  Scenario s;
  s.path = origin;
  {
    std::ostringstream canonical;
    pt::write_ini(canonical, tree);
    s.hash = fnv1a_hex(canonical.str());
  }

  // Constants first: every other numeric entry may refer to them.
  s.constants.clear();
  if (auto c = tree.get_child_optional("constants")) {
    for (const auto& [key, value] : *c) {
      Reader r(tree, s.constants);
      s.constants[key] = r.number("constants." + key, value.data());
    }
  }
  const Reader r(tree, s.constants);
  if (s.constants.count("hbar")) s.quantum.hbar = s.constants.at("hbar");
  if (s.constants.count("mass")) s.quantum.mass = s.constants.at("mass");
  if (s.constants.count("c")) s.c = s.constants.at("c");
  s.quantum.validate();
  if (!(s.c > 0.0)) throw InvalidArgument("constants.c must be positive");

  s.kind = parse_kind(r.required("run.kind", "scenario kind"));
  s.name = r.text("run.name").value_or(origin.stem().string());
  if (s.name.empty()) s.name = "run";
  const Backend backend = parse_backend(r.text("run.backend").value_or("spectral"));
  if (auto seed = r.text("run.seed")) s.seed = static_cast<std::uint64_t>(r.integer("run.seed", *seed));

  if (auto v = r.text("output.snapshot")) s.snapshot_name = *v;
  if (auto v = r.text("output.diagnostics")) s.diagnostics_name = *v;

  if (auto v = r.optional_number("monitors.max_norm_drift")) s.monitors.max_norm_drift = v;
  if (auto v = r.optional_number("monitors.max_constraint")) s.monitors.max_constraint = v;
  if (auto v = r.optional_number("monitors.max_identity")) s.monitors.max_identity = v;
  if (auto v = r.optional_number("monitors.max_roundtrip")) s.monitors.max_roundtrip = v;
  if (auto v = r.optional_number("monitors.max_difference")) s.monitors.max_difference = v;

  if (s.kind == Kind::compare) {
    s.compare.run_a = r.required("compare.a", "first run to compare");
    s.compare.run_b = r.required("compare.b", "second run to compare");
    s.compare.map_a = r.text("compare.map_a").value_or("none");
    s.compare.map_b = r.text("compare.map_b").value_or("none");
    return s;
  }

  if (s.kind == Kind::reconstruct_phi || s.kind == Kind::reconstruct_A) {
    s.input = r.required("input.trajectory", "snapshot to reconstruct from");
    return s;
  }

  // Simulation kinds.
  const int dims = static_cast<int>(r.integer("grid.dims", r.required("grid.dims", "grid dimension")));
  if (dims < 1 || dims > 3) throw InvalidArgument("grid.dims must be 1, 2 or 3");
  if (is_maxwell(s.kind) && dims != 3) {
    throw InvalidArgument("grid.dims must be 3 for " + std::string(to_string(s.kind)));
  }
  const auto points_list = split_list(r.required("grid.points", "grid size"));
  const auto length_list = split_list(r.required("grid.length", "box length"));
  auto pick = [&](const std::vector<std::string>& list, int a, const std::string& key) {
    if (list.size() == 1) return list[0];
    if (static_cast<int>(list.size()) != dims) {
      throw InvalidArgument(key + " needs 1 or " + std::to_string(dims) + " comma-separated values");
    }
    return list[static_cast<std::size_t>(a)];
  };
  std::array<int, 3> points{1, 1, 1};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  for (int a = 0; a < dims; ++a) {
    points[a] = static_cast<int>(r.integer("grid.points", pick(points_list, a, "grid.points")));
    lengths[a] = r.number("grid.length", pick(length_list, a, "grid.length"));
  }
  s.grid = Grid(dims, points, lengths, backend);

  std::set<std::string> allowed_static = {"pi"};
  for (const auto& [k, v] : s.constants) allowed_static.insert(k);
  static const char* kCoord[3] = {"x", "y", "z"};
  static const char* kLength[3] = {"Lx", "Ly", "Lz"};
  for (int a = 0; a < dims; ++a) {
    allowed_static.insert(kCoord[a]);
    allowed_static.insert(kLength[a]);
  }
  std::set<std::string> allowed_dynamic = allowed_static;
  allowed_dynamic.insert("t");

  s.potential = r.expression("potential.V");
  if (s.potential) {
    check_names(*s.potential, "potential.V", allowed_dynamic);
    if (s.potential->references("t")) {
      throw InvalidArgument("potential.V: time-dependent potential unsupported for " +
                            std::string(to_string(s.kind)));
    }
    if (is_maxwell(s.kind)) throw InvalidArgument("potential.V is not used by Maxwell kinds");
  }

  if (auto init = tree.get_child_optional("initial")) {
    for (const auto& [key, value] : *init) {
      if (key == "eigenstate") {
        s.initial.eigenstate = static_cast<int>(r.integer("initial.eigenstate", value.data()));
      } else if (key == "normalize") {
        const std::string v = value.data();
        if (v != "true" && v != "false") throw InvalidArgument("initial.normalize must be true or false");
        s.initial.normalize = v == "true";
      } else if (key == "noise") {
        s.initial.noise = r.number("initial.noise", value.data());
      } else {
        auto e = r.expression("initial." + key);
        check_names(*e, "initial." + key, allowed_static);
        s.initial.fields.emplace(key, std::move(*e));
      }
    }
  }
  auto allow_fields = [&](std::initializer_list<std::string_view> ok) {
    for (const auto& [key, e] : s.initial.fields) {
      if (std::find(ok.begin(), ok.end(), key) == ok.end()) {
        throw InvalidArgument("initial." + key + " is not used by " + std::string(to_string(s.kind)));
      }
    }
  };
  switch (s.kind) {
    case Kind::schrodinger:
      allow_fields({"psi_re", "psi_im"});
      break;
    case Kind::phi:
      allow_fields({"psi_re", "psi_im", "phi", "phi_dot"});
      if ((s.initial.get("psi_re") || s.initial.get("psi_im")) &&
          (s.initial.get("phi") || s.initial.get("phi_dot"))) {
        throw InvalidArgument("initial: give either psi_re/psi_im or phi/phi_dot, not both");
      }
      break;
    case Kind::maxwell_fields:
      allow_fields({"E_x", "E_y", "E_z", "B_x", "B_y", "B_z"});
      break;
    default:
      allow_fields({"E_x", "E_y", "E_z", "B_x", "B_y", "B_z", "A_x", "A_y", "A_z", "A_dot_x",
                    "A_dot_y", "A_dot_z"});
      break;
  }
  if (s.initial.eigenstate) {
    if (is_maxwell(s.kind)) throw InvalidArgument("initial.eigenstate is a quantum option");
    if (!s.initial.fields.empty()) {
      throw InvalidArgument("initial.eigenstate excludes explicit initial fields");
    }
    if (*s.initial.eigenstate < 0) throw InvalidArgument("initial.eigenstate must be >= 0");
  }
  if (!(s.initial.noise >= 0.0)) throw InvalidArgument("initial.noise must be >= 0");

  if (tree.get_child_optional("sources")) {
    if (!is_maxwell(s.kind)) throw InvalidArgument("[sources] is only used by Maxwell kinds");
    auto get = [&](const std::string& key) {
      auto e = r.expression("sources." + key);
      if (!e) e = expr::Expression::parse("0");
      check_names(*e, "sources." + key, allowed_dynamic);
      return *e;
    };
    s.sources = SourceSpec(get("rho"), {get("J_x"), get("J_y"), get("J_z")}, s.constants);
  }

  // Integrator and auto dt.
  IntegratorSpec& in = s.integrator;
  const std::string default_method = s.kind == Kind::schrodinger ? "cn"
                                     : s.kind == Kind::maxwell_fields ? "rk4"
                                                                      : "verlet";
  in.method = r.text("integrator.method").value_or(default_method);
  const std::set<std::string> methods =
      s.kind == Kind::schrodinger ? std::set<std::string>{"cn", "dense"}
                                  : std::set<std::string>{default_method};
  if (!methods.count(in.method)) {
    throw InvalidArgument("integrator.method '" + in.method + "' is not available for " +
                          std::string(to_string(s.kind)));
  }
  const double default_safety = is_maxwell(s.kind) ? 0.5 : 0.2;
  in.safety = r.optional_number("integrator.safety").value_or(default_safety);
  if (!(in.safety > 0.0)) throw InvalidArgument("integrator.safety must be positive");
  in.stride = r.text("integrator.stride") ? r.integer("integrator.stride", *r.text("integrator.stride")) : 1;
  if (in.stride < 1) throw InvalidArgument("integrator.stride must be >= 1");

  const std::string dt_text = r.text("integrator.dt").value_or("auto");
  double dt_limit = 0.0;
  if (dt_text == "auto") {
    in.auto_dt = true;
    switch (s.kind) {
      case Kind::schrodinger:
      case Kind::phi:
        dt_limit = stable_dt(s.sampled_potential(), s.quantum, in.safety);
        break;
      case Kind::maxwell_fields:
        dt_limit = in.safety * rk4_stability_limit(*s.grid, s.c);
        break;
      default:
        dt_limit = in.safety * a_verlet_stability_limit(*s.grid, s.c);
        break;
    }
    in.dt = dt_limit;
  } else {
    in.dt = r.number("integrator.dt", dt_text);
    if (!(in.dt > 0.0)) throw InvalidArgument("integrator.dt must be positive");
  }

  const auto steps_text = r.text("integrator.steps");
  const auto duration = r.optional_number("integrator.duration");
  if (steps_text && duration) {
    throw InvalidArgument("integrator: give steps or duration, not both");
  }
  if (steps_text) {
    in.steps = r.integer("integrator.steps", *steps_text);
  } else if (duration) {
    if (!(*duration > 0.0)) throw InvalidArgument("integrator.duration must be positive");
    // Largest dt not above the requested one that splits the duration into
    // whole frames, so the last frame falls on the end time.
    const double frames = std::ceil(*duration / (in.dt * static_cast<double>(in.stride)) * (1.0 - 1e-12));
    in.steps = static_cast<long>(frames) * in.stride;
    in.dt = *duration / static_cast<double>(in.steps);
  } else {
    throw InvalidArgument("missing required key integrator.steps (or integrator.duration)");
  }
  if (in.steps < 1) throw InvalidArgument("integrator.steps must be >= 1");

  if (is_maxwell(s.kind) && !s.sources.is_vacuum()) {
    std::vector<double> times;
    const long evaluations = s.sources.is_static() ? 1 : in.steps;
    for (long n = 0; n <= evaluations; ++n) {
      times.push_back(static_cast<double>(n) * in.dt);
      if (s.kind == Kind::maxwell_fields && n < evaluations) {
        times.push_back((static_cast<double>(n) + 0.5) * in.dt);
      }
    }
    s.sources.require_continuity(*s.grid, times, in.dt);
  }
  return s;
}

}  // namespace phisim
