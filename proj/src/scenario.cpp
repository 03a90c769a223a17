#include "semiflow/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "semiflow/errors.hpp"

namespace semiflow {

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::plaplace_obstacle: return "plaplace_obstacle";
    case ProblemKind::reaction_diffusion: return "reaction_diffusion";
    case ProblemKind::age_structured: return "age_structured";
    case ProblemKind::impulsive: return "impulsive";
    case ProblemKind::custom_linear: return "custom_linear";
  }
  return "?";
}

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// Comment markers are honored only outside double quotes, so expressions
// stay intact.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"') quoted = !quoted;
    if (!quoted && (c == '#' || c == ';')) return line.substr(0, i);
  }
  return line;
}

const std::set<std::string> kSections{"scenario", "operator",  "forcing", "constraints",
                                      "initial",  "time",      "checker", "barriers"};

std::vector<Entry> tokenize(const std::string& text) {
  std::vector<Entry> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (kSections.count(section) == 0) fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    if (section.empty()) fail(line_no, "key outside any section");
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = line_no;
    if (e.key.empty()) fail(line_no, "empty key");
    if (e.value.empty()) fail(line_no, "key '" + e.key + "': empty value");
    out.push_back(std::move(e));
  }
  return out;
}

double to_double(const Entry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last)
    fail(e.line, "key '" + e.key + "': not a number: " + e.value);
  if (!std::isfinite(v)) fail(e.line, "key '" + e.key + "': not finite");
  return v;
}

int to_int(const Entry& e) {
  int v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last)
    fail(e.line, "key '" + e.key + "': not an integer: " + e.value);
  return v;
}

std::uint64_t to_seed(const Entry& e) {
  std::uint64_t v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last)
    fail(e.line, "key '" + e.key + "': not an unsigned integer: " + e.value);
  return v;
}

std::string unquote(const Entry& e) {
  const std::string& v = e.value;
  if (v.size() < 2 || v.front() != '"' || v.back() != '"')
    fail(e.line, "key '" + e.key + "': expression values must be double-quoted");
  std::string inner = v.substr(1, v.size() - 2);
  if (inner.find('"') != std::string::npos)
    fail(e.line, "key '" + e.key + "': stray quote inside expression");
  return inner;
}

Expression to_expr(const Entry& e, const VarSet& allowed) {
  std::string text = unquote(e);
  Expression expr;
  try {
    expr = parse_expression(text);
  } catch (const ParseError& err) {
    fail(e.line, "key '" + e.key + "': " + err.what());
  }
  if (!expr.references().subset_of(allowed)) {
    std::string names = allowed.names();
    fail(e.line, "key '" + e.key + "' may only reference {" + names + "}, got {" +
                     expr.references().names() + "}");
  }
  return expr;
}

std::vector<double> to_delta_list(const Entry& e) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(e.value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    double v = 0.0;
    const char* first = item.data();
    const char* last = first + item.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last || !(v > 0.0) || !std::isfinite(v))
      fail(e.line, "key 'delta': expected a comma list of positive numbers");
    out.push_back(v);
  }
  if (out.empty()) fail(e.line, "key 'delta': empty list");
  return out;
}

ProblemKind parse_kind(const Entry& e) {
  const std::string& v = e.value;
  if (v == "plaplace_obstacle") return ProblemKind::plaplace_obstacle;
  if (v == "reaction_diffusion") return ProblemKind::reaction_diffusion;
  if (v == "age_structured") return ProblemKind::age_structured;
  if (v == "impulsive") return ProblemKind::impulsive;
  if (v == "custom_linear") return ProblemKind::custom_linear;
  fail(e.line, "unknown kind '" + v + "'");
}

bool scalar_kind(ProblemKind k) {
  return k == ProblemKind::impulsive || k == ProblemKind::custom_linear;
}

// Parses "tau3" / "impulse7" into (base, index).
std::pair<std::string, int> barrier_key(const Entry& e) {
  std::string base;
  if (e.key.rfind("tau", 0) == 0) base = "tau";
  else if (e.key.rfind("impulse", 0) == 0) base = "impulse";
  else fail(e.line, "unknown key '" + e.key + "' in [barriers]");
  std::string idx = e.key.substr(base.size());
  if (idx.size() != 1 || idx[0] < '1' || idx[0] > '9')
    fail(e.line, "key '" + e.key + "': barrier keys are tau1..tau9, impulse1..impulse9");
  return {base, idx[0] - '0'};
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
  std::vector<Entry> entries = tokenize(text);

  ProblemKind kind = ProblemKind::custom_linear;
  int kind_line = 0;
  bool kind_seen = false;
  for (const Entry& e : entries) {
    if (e.section == "scenario" && e.key == "kind") {
      if (kind_seen) fail(e.line, "duplicate kind");
      kind = parse_kind(e);
      kind_line = e.line;
      kind_seen = true;
    }
  }
  if (!kind_seen) throw ConfigError(name + ": missing kind in [scenario]");

  const bool scalar = scalar_kind(kind);
  VarSet only_x;
  only_x.x = true;
  VarSet f_vars;
  if (scalar) {
    f_vars.u = f_vars.t = true;
  } else {
    f_vars.x = f_vars.u = true;
  }
  VarSet only_u;
  only_u.u = true;
  VarSet no_vars;

  Scenario s;
  s.name = name;
  s.kind = kind;

  std::set<std::string> seen;
  std::map<int, Expression> taus, impulses;
  std::map<int, int> barrier_lines;

  for (const Entry& e : entries) {
    std::string id = e.section + "." + e.key;
    if (e.section != "barriers" && !seen.insert(id).second)
      fail(e.line, "duplicate key '" + e.key + "'");

    if (e.section == "scenario") {
      if (e.key == "kind") continue;
      if (e.key == "name") s.name = e.value;
      else fail(e.line, "unknown key '" + e.key + "' in [scenario]");
    } else if (e.section == "operator") {
      if (e.key == "p") s.p = to_double(e);
      else if (e.key == "length") s.length = to_double(e);
      else if (e.key == "length_y") s.length_y = to_double(e);
      else if (e.key == "nodes") s.nodes = to_int(e);
      else if (e.key == "nodes_y") s.nodes_y = to_int(e);
      else if (e.key == "dim") s.dim = to_int(e);
      else if (e.key == "coefficient") s.coefficient = to_double(e);
      else if (e.key == "beta") s.beta = to_expr(e, only_x);
      else fail(e.line, "unknown key '" + e.key + "' in [operator]");
    } else if (e.section == "forcing") {
      if (e.key == "f") s.f = to_expr(e, f_vars);
      else fail(e.line, "unknown key '" + e.key + "' in [forcing]");
    } else if (e.section == "constraints") {
      if (e.key == "m") s.m = to_expr(e, only_x);
      else if (e.key == "M") s.M = to_expr(e, only_x);
      else fail(e.line, "unknown key '" + e.key + "' in [constraints]");
    } else if (e.section == "initial") {
      if (e.key == "x0") s.x0 = to_expr(e, scalar ? no_vars : only_x);
      else if (e.key == "profile") s.x0_profile = e.value;
      else if (e.key == "amplitude") s.x0_amplitude = to_double(e);
      else fail(e.line, "unknown key '" + e.key + "' in [initial]");
    } else if (e.section == "time") {
      if (e.key == "T") s.T = to_double(e);
      else if (e.key == "steps") s.steps = to_int(e);
      else fail(e.line, "unknown key '" + e.key + "' in [time]");
    } else if (e.section == "checker") {
      if (e.key == "delta") s.delta_family = to_delta_list(e);
      else if (e.key == "samples") s.samples_per_delta = to_int(e);
      else if (e.key == "omega") s.omega_choice = e.value;
      else if (e.key == "seed") s.seed = to_seed(e);
      else fail(e.line, "unknown key '" + e.key + "' in [checker]");
    } else {  // barriers
      auto [base, idx] = barrier_key(e);
      auto& slot = base == "tau" ? taus : impulses;
      if (slot.count(idx)) fail(e.line, "duplicate key '" + e.key + "'");
      slot[idx] = to_expr(e, only_u);
      barrier_lines[idx] = e.line;
    }
  }

  // Shape checks that need the kind.
  auto require = [&](const char* id, const char* what) {
    if (seen.count(id) == 0)
      throw ConfigError(s.name + ": " + what + " (missing " + id + ")");
  };
  auto reject = [&](const char* id, const char* why) {
    if (seen.count(id))
      throw ConfigError(s.name + ": " + id + " is only valid " + why);
  };

  if (scalar) {
    reject("operator.p", "for the plaplace_obstacle kind");
    reject("operator.length", "for the PDE kinds");
    reject("operator.nodes", "for the PDE kinds");
    reject("operator.dim", "for the reaction_diffusion kind");
    reject("constraints.m", "for the PDE kinds");
    reject("constraints.M", "for the PDE kinds");
    require("initial.x0", "scalar kinds need a constant x0");
  } else {
    reject("operator.coefficient", "for the scalar kinds");
  }
  if (kind != ProblemKind::plaplace_obstacle) reject("operator.p", "for the plaplace_obstacle kind");
  if (kind != ProblemKind::reaction_diffusion) {
    reject("operator.dim", "for the reaction_diffusion kind");
    reject("operator.nodes_y", "for the reaction_diffusion kind");
    reject("operator.length_y", "for the reaction_diffusion kind");
  }
  if (kind != ProblemKind::age_structured) reject("operator.beta", "for the age_structured kind");
  if (kind == ProblemKind::age_structured) require("operator.beta", "the age kind needs a birth kernel");

  if (kind == ProblemKind::reaction_diffusion) {
    if (s.dim != 1 && s.dim != 2)
      throw ConfigError(s.name + ": dim must be 1 or 2");
    if (s.dim == 2) {
      if (seen.count("initial.x0"))
        throw ConfigError(s.name + ": two-dimensional initial data uses profile, not x0");
      if (s.x0_profile.empty())
        throw ConfigError(s.name + ": two-dimensional scenarios need initial.profile");
    }
  }
  if (!s.x0_profile.empty()) {
    if (kind != ProblemKind::reaction_diffusion || s.dim != 2)
      throw ConfigError(s.name + ": profile is only valid for two-dimensional reaction_diffusion");
    if (s.x0_profile != "product_sine" && s.x0_profile != "zero")
      throw ConfigError(s.name + ": unknown profile '" + s.x0_profile + "'");
  }
  if (!scalar && s.x0.empty() && !(kind == ProblemKind::reaction_diffusion && s.dim == 2))
    throw ConfigError(s.name + ": missing initial.x0");

  if (kind == ProblemKind::plaplace_obstacle || kind == ProblemKind::reaction_diffusion) {
    require("constraints.m", "obstacle scenarios need a lower obstacle m");
    require("constraints.M", "obstacle scenarios need an upper obstacle M");
  }
  if (kind == ProblemKind::age_structured)
    require("constraints.m", "the age kind monitors the lower obstacle m");

  if (kind == ProblemKind::impulsive) {
    if (taus.empty()) fail(kind_line, "the impulsive kind needs at least one barrier");
    int n = static_cast<int>(taus.size());
    for (int j = 1; j <= n; ++j) {
      if (taus.count(j) == 0)
        throw ConfigError(s.name + ": barrier indices must be contiguous from 1 (missing tau" +
                          std::to_string(j) + ")");
      if (impulses.count(j) == 0)
        throw ConfigError(s.name + ": tau" + std::to_string(j) + " has no impulse" +
                          std::to_string(j));
      s.taus.push_back(taus[j]);
      s.impulses.push_back(impulses[j]);
    }
    if (static_cast<int>(impulses.size()) != n)
      throw ConfigError(s.name + ": every impulse needs a matching tau");
  } else if (!taus.empty() || !impulses.empty()) {
    fail(barrier_lines.begin()->second, "barriers are only valid for the impulsive kind");
  }

  if (!(s.T > 0.0)) throw ConfigError(s.name + ": T must be positive");
  if (s.steps < 1) throw ConfigError(s.name + ": steps must be at least 1");
  if (s.samples_per_delta < 1) throw ConfigError(s.name + ": samples must be at least 1");
  if (s.omega_choice != "auto" && s.omega_choice != "zero")
    throw ConfigError(s.name + ": omega must be auto or zero");
  if (!scalar && s.nodes < 3) throw ConfigError(s.name + ": nodes must be at least 3");
  if (!(s.length > 0.0)) throw ConfigError(s.name + ": length must be positive");

  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  std::size_t slash = name.find_last_of("/\\");
  if (slash != std::string::npos) name = name.substr(slash + 1);
  std::size_t dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  try {
    return parse_scenario_text(buf.str(), name);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

GridFunction sample_profile(const Expression& expr, const Geometry& geometry) {
  if (expr.empty()) throw PreconditionError("sample_profile: empty expression");
  return GridFunction::sample(geometry, [&](double x, double) {
    EvalEnv env;
    env.x = x;
    return expr.eval(env);
  });
}

namespace {

Geometry without_boundary(Geometry g) {
  g.boundary = BoundaryKind::none;
  return g;
}

Forcing make_forcing(const Scenario& s, const Geometry& geom) {
  if (s.f.empty()) return zero_forcing();
  Expression f = s.f;
  if (scalar_kind(s.kind)) {
    return [f](double t, const GridFunction& u) {
      EvalEnv env;
      env.t = t;
      env.u = u.scalar_value();
      return GridFunction::constant(without_boundary(u.geometry()), f.eval(env));
    };
  }
  Geometry free = without_boundary(geom);
  int nx = geom.nodes[0];
  return [f, free, nx](double, const GridFunction& u) {
    std::vector<double> vals(u.size());
    EvalEnv env;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      env.x = free.coord(0, free.dim == 2 ? static_cast<int>(i) % nx : static_cast<int>(i));
      env.u = u[i];
      vals[i] = f.eval(env);
    }
    return GridFunction(free, std::move(vals));
  };
}

GridFunction make_x0(const Scenario& s, const Geometry& geom) {
  if (scalar_kind(s.kind)) {
    EvalEnv env;
    return GridFunction::constant(geom, s.x0.eval(env));
  }
  if (s.kind == ProblemKind::reaction_diffusion && s.dim == 2) {
    if (s.x0_profile == "zero") return GridFunction::zeros(geom);
    const double a = s.x0_amplitude;
    const double lx = geom.length[0];
    const double ly = geom.length[1];
    const double pi = std::acos(-1.0);
    return GridFunction::sample(geom, [&](double x, double y) {
      return a * std::sin(pi * x / lx) * std::sin(pi * y / ly);
    });
  }
  try {
    return sample_profile(s.x0, geom);
  } catch (const GeometryError& e) {
    throw ConfigError(s.name + ": x0 must vanish on the boundary (" + e.what() + ")");
  }
}

}  // namespace

Problem build_problem(const Scenario& s) {
  Geometry geom;
  ResolventOracle op;
  std::vector<double> beta_values;

  switch (s.kind) {
    case ProblemKind::plaplace_obstacle: {
      PLaplaceSpec spec;
      spec.p = s.p;
      spec.length = s.length;
      spec.interior_nodes = s.nodes;
      geom = geometry_of(spec);
      op = make_plaplace(spec);
      break;
    }
    case ProblemKind::reaction_diffusion: {
      LaplaceSpec spec;
      spec.dim = s.dim;
      spec.length = {s.length, s.dim == 2 ? s.length_y : 0.0};
      spec.nodes = {s.nodes, s.dim == 2 ? (s.nodes_y > 0 ? s.nodes_y : s.nodes) : 0};
      geom = geometry_of(spec);
      op = make_laplace(spec);
      break;
    }
    case ProblemKind::age_structured: {
      TransportBirthSpec spec;
      spec.age_horizon = s.length;
      spec.nodes = s.nodes;
      Geometry sample_geom = without_boundary(geometry_of(TransportBirthSpec{
          s.length, s.nodes, std::vector<double>(static_cast<std::size_t>(s.nodes), 0.0),
          spec.tag}));
      spec.beta = sample_profile(s.beta, sample_geom).values();
      try {
        op = make_transport_birth(spec);
      } catch (const PreconditionError& e) {
        throw ConfigError(s.name + ": " + e.what());
      }
      geom = geometry_of(spec);
      beta_values = spec.beta;
      break;
    }
    case ProblemKind::impulsive:
    case ProblemKind::custom_linear: {
      DiagonalSpec spec;
      spec.coefficient = s.coefficient;
      geom = spec.geometry;
      op = make_diagonal(spec);
      break;
    }
  }

  std::optional<GridFunction> m, M;
  Geometry free = without_boundary(geom);
  if (!s.m.empty()) m = sample_profile(s.m, free);
  if (!s.M.empty()) M = sample_profile(s.M, free);

  std::vector<Barrier> barriers;
  for (std::size_t j = 0; j < s.taus.size(); ++j) {
    Expression tau = s.taus[j];
    Expression imp = s.impulses[j];
    Barrier b;
    b.tau = [tau](const GridFunction& u) {
      EvalEnv env;
      env.u = u.scalar_value();
      return tau.eval(env);
    };
    b.impulse = [imp](const GridFunction& u) {
      EvalEnv env;
      env.u = u.scalar_value();
      return GridFunction::constant(without_boundary(u.geometry()), imp.eval(env));
    };
    barriers.push_back(std::move(b));
  }

  return Problem{s,
                 geom,
                 op,
                 make_forcing(s, geom),
                 make_x0(s, geom),
                 std::move(m),
                 std::move(M),
                 std::move(beta_values),
                 std::move(barriers)};
}

}  // namespace semiflow
