#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>

#include "hullsing/body.hpp"
#include "hullsing/classify.hpp"
#include "hullsing/genfam.hpp"
#include "hullsing/quadmin.hpp"
#include "hullsing/swallowtail.hpp"

namespace hullsing::cli {

namespace {

json common_defaults() { return {{"out", "hullsing_out"}, {"seed", 1}}; }

void check_type(const std::string& key, const json& def, const json& value) {
  bool ok = false;
  if (def.is_boolean()) {
    ok = value.is_boolean();
  } else if (def.is_number_float()) {
    ok = value.is_number();
  } else if (def.is_number()) {
    ok = value.is_number_integer();
  } else if (def.is_string()) {
    ok = value.is_string();
  } else if (def.is_array()) {
    ok = value.is_array() &&
         std::all_of(value.begin(), value.end(), [](const json& x) { return x.is_number(); });
  }
  if (!ok) throw UsageError("'" + key + "' has the wrong type (expected like " + def.dump() + ")");
}

std::vector<double> numbers(const json& config, const std::string& key) {
  std::vector<double> out;
  for (const auto& x : config.at(key)) {
    const double v = x.get<double>();
    if (!std::isfinite(v)) throw UsageError("'" + key + "' entries must be finite");
    out.push_back(v);
  }
  return out;
}

long grid_size(const std::vector<Axis>& axes) {
  long total = 1;
  for (const auto& a : axes) {
    total *= a.n;
    if (total > 20'000'000) throw UsageError("grid has more than 2e7 nodes");
  }
  return total;
}

/// Node values of a multi-axis grid at flat index i; first axis varies slowest.
std::vector<double> grid_node(const std::vector<Axis>& axes, long i) {
  std::vector<double> out(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    out[k] = axes[k].node(static_cast<int>(i % axes[k].n));
    i /= axes[k].n;
  }
  return out;
}

json axes_json(const std::vector<Axis>& axes) {
  json out = json::array();
  for (const auto& a : axes) out.push_back({{"axis", a.name}, {"lo", a.lo}, {"hi", a.hi}, {"n", a.n}});
  return out;
}

/// The first two axes with more than one node, if any.
std::vector<int> plot_axes(const std::vector<Axis>& axes) {
  std::vector<int> out;
  for (std::size_t k = 0; k < axes.size() && out.size() < 2; ++k) {
    if (axes[k].n > 1) out.push_back(static_cast<int>(k));
  }
  return out;
}

/// Section (2 plotted axes) or curve (1 plotted axis) of f over the grid, the other axes held at
/// their middle node. Returns false when nothing varies.
bool plot_grid(const std::string& path, const Stamp& stamp, const std::string& title,
               const std::string& value_name, const std::vector<Axis>& axes,
               const std::function<double(const std::vector<double>&)>& f) {
  const auto shown = plot_axes(axes);
  if (shown.empty()) return false;
  std::vector<double> base(axes.size());
  for (std::size_t k = 0; k < axes.size(); ++k) base[k] = axes[k].node(axes[k].n / 2);
  const Axis& ax = axes[shown[0]];
  if (shown.size() == 1) {
    Polyline line;
    for (int i = 0; i < ax.n; ++i) {
      base[shown[0]] = ax.node(i);
      line.x.push_back(base[shown[0]]);
      line.y.push_back(f(base));
    }
    write_curves_svg(path, stamp, title, ax.name, value_name, {line});
    return true;
  }
  const Axis& ay = axes[shown[1]];
  std::vector<double> z;
  z.reserve(static_cast<std::size_t>(ax.n) * ay.n);
  for (int i = 0; i < ax.n; ++i) {
    for (int j = 0; j < ay.n; ++j) {
      base[shown[0]] = ax.node(i);
      base[shown[1]] = ay.node(j);
      z.push_back(f(base));
    }
  }
  write_section_svg(path, stamp, title, ax, ay, z);
  return true;
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

AlphaProfile alpha_profile(const json& c) {
  AlphaKind kind;
  try {
    kind = alpha_kind_from_string(get_string(c, "alpha"));
  } catch (const Error&) {
    throw UsageError("'alpha' must be one of linear, plus_quadratic, minus_quadratic, constant");
  }
  return AlphaProfile(kind, get_number(c, "a"));
}

GeneratingFamily corner_family(const json& c) {
  const auto m = numbers(c, "corner");
  if (m.size() != 3) throw UsageError("'corner' needs three moduli a,b,c");
  Polynomial higher;
  const std::string text = get_string(c, "higher");
  if (!text.empty()) higher = Polynomial::parse(text, kFamilyVars);
  return GeneratingFamily::corner(m[0], m[1], m[2], higher);
}

json family_params(const json& c) {
  return {{"alpha", c["alpha"]}, {"a", c["a"]}, {"corner", c["corner"]}, {"higher", c["higher"]}};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"envelope", "front", "verify", "classify",
                                                 "swallowtail"};
  return names;
}

json default_config(const std::string& command) {
  json c = common_defaults();
  if (command == "envelope") {
    c.update({{"form", "r1"},
              {"grid", ""},
              {"x", 0.0},
              {"y", 0.0},
              {"z", 0.0},
              {"t", 0.1},
              {"alpha", "linear"},
              {"a", 0.3},
              {"corner", {0.1, 0.1, 0.1}},
              {"higher", ""},
              {"max_quasidegree", 3}});
  } else if (command == "front") {
    c.update({{"family", "item2"},
              {"poly", ""},
              {"variety", ""},
              {"grid", "x=-1:1:11,y=-1:1:11,z=-0.5:0.5:11"},
              {"tol", 1e-10},
              {"alpha", "linear"},
              {"a", 0.3},
              {"corner", {0.1, 0.1, 0.1}},
              {"higher", ""},
              {"max_quasidegree", 3}});
  } else if (command == "verify") {
    c.update({{"suite", "all"},
              {"samples", 0},
              {"tamper", ""},
              {"tamper_delta", 1e-3},
              {"tol", 1e-9},
              {"contact_tol", 1e-10},
              {"lemma2_tol", 1e-5},
              {"lemma2_step", 1e-4},
              {"bracket_tol", 1e-6},
              {"a1a3_tol", 1e-12},
              {"phi3_tol", 1e-10}});
  } else if (command == "classify") {
    c.update({{"body", "ellipsoid"},
              {"points", ""},
              {"density", 1.0},
              {"resolution", 0},
              {"cluster_tol", 1e-2},
              {"link_tol", 0.15},
              {"hessian_ratio", 1e-3},
              {"hessian_floor", 1e-6},
              {"quartic_threshold", 1e-6},
              {"family_radius", 2.0},
              {"tangency_all", false},
              {"use_analytic", false}});
  } else if (command == "swallowtail") {
    c.update({{"mode", "membership"},
              {"point", json::array()},
              {"grid", ""},
              {"u", -1.0},
              {"tau", "-2:2:401"}});
  } else {
    throw UsageError("unknown command '" + command + "'");
  }
  return c;
}

json merge_config(const std::string& command, const json& file, const json& flags) {
  json c = default_config(command);
  for (const json* layer : {&file, &flags}) {
    for (const auto& [key, value] : layer->items()) {
      if (key == "command") {
        if (value != command) throw UsageError("config is for command " + value.dump());
        continue;
      }
      if (!c.contains(key)) throw UsageError("unknown key '" + key + "' for " + command);
      check_type(key, c[key], value);
      c[key] = c[key].is_number_float() ? json(value.get<double>()) : value;
    }
  }
  return c;
}

int run_command(const std::string& command, const json& config) {
  const std::string out = get_string(config, "out");
  if (out.empty()) throw UsageError("'out' must name a directory");
  const Stamp stamp{command, config_hash(config), get_seed(config)};
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw UsageError("cannot create output directory " + out + ": " + ec.message());
  if (command == "envelope") return cmd_envelope(config, stamp, out);
  if (command == "front") return cmd_front(config, stamp, out);
  if (command == "verify") return cmd_verify(config, stamp, out);
  if (command == "classify") return cmd_classify(config, stamp, out);
  if (command == "swallowtail") return cmd_swallowtail(config, stamp, out);
  throw UsageError("unknown command '" + command + "'");
}

// ---------------------------------------------------------------------------------------------

int cmd_envelope(const json& c, const Stamp& stamp, const std::string& out) {
  const std::string form = get_string(c, "form");
  std::string grid_spec = get_string(c, "grid");
  if (grid_spec.empty()) {
    if (form == "r0" || form == "r1") {
      grid_spec = "x=-1:1:41,t=-1:1:41";
    } else if (form == "v3") {
      grid_spec = "x=-3:3:41,y=-3:3:41";
    } else {
      grid_spec = "x=-1:1:41,y=-1:1:41";
    }
  }
  const auto axes = parse_grid(grid_spec, "xyzt");
  const long total = grid_size(axes);
  const Eigen::Vector4d fixed(get_number(c, "x"), get_number(c, "y"), get_number(c, "z"),
                              get_number(c, "t"));

  std::function<double(const Eigen::Vector4d&)> env;
  json params = json::object();
  if (form == "r0") {
    env = [](const Eigen::Vector4d& p) { return envelope_r0(p[0], p[1], p[2], p[3]); };
  } else if (form == "r1") {
    env = [](const Eigen::Vector4d& p) { return envelope_r1(p[0], p[1], p[2], p[3]); };
  } else if (form == "r2") {
    const AlphaProfile alpha = alpha_profile(c);
    params = {{"alpha", c["alpha"]}, {"a", c["a"]}};
    env = [alpha](const Eigen::Vector4d& p) { return envelope_r2(p[0], p[1], p[2], p[3], alpha); };
  } else if (form == "r3") {
    const GeneratingFamily F = corner_family(c);
    params = {{"corner", c["corner"]}, {"higher", c["higher"]}, {"family", F.poly().to_string(kFamilyVars)}};
    env = [F](const Eigen::Vector4d& p) { return envelope_r3(p[0], p[1], p[2], p[3], F); };
  } else if (form == "v3") {
    env = [](const Eigen::Vector4d& p) { return envelope_v3(p[0], p[1], p[2], p[3]); };
  } else {
    throw UsageError("'form' must be one of r0, r1, r2, r3, v3");
  }

  auto point_of = [&](const std::vector<double>& node) {
    Eigen::Vector4d p = fixed;
    for (std::size_t k = 0; k < axes.size(); ++k) p[std::string("xyzt").find(axes[k].name)] = node[k];
    return p;
  };

  CsvWriter csv(stamp, {"x", "y", "z", "t", "value"});
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (long i = 0; i < total; ++i) {
    const Eigen::Vector4d p = point_of(grid_node(axes, i));
    const double v = env(p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    csv.row({p[0], p[1], p[2], p[3], v});
  }
  csv.save(join_path(out, "envelope.csv"));
  json files = {"envelope.csv"};
  if (plot_grid(join_path(out, "envelope.svg"), stamp, "envelope " + form, "value", axes,
                [&](const std::vector<double>& node) { return env(point_of(node)); })) {
    files.push_back("envelope.svg");
  }
  files.push_back("envelope.json");
  write_json(join_path(out, "envelope.json"), stamp,
             {{"form", form},
              {"parameters", params},
              {"fixed", {{"x", fixed[0]}, {"y", fixed[1]}, {"z", fixed[2]}, {"t", fixed[3]}}},
              {"grid", axes_json(axes)},
              {"nodes", total},
              {"value_min", lo},
              {"value_max", hi},
              {"files", files}});
  return 0;
}

// ---------------------------------------------------------------------------------------------

namespace {

struct FamilyChoice {
  GeneratingFamily family;
  Variety variety;
};

Variety variety_from_flag(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "r0") return Variety::R0;
  if (s == "r1") return Variety::R1;
  if (s == "r2") return Variety::R2;
  if (s == "r3") return Variety::R3;
  if (s == "v3" || s == "v3tilde") return Variety::V3tilde;
  throw UsageError("'variety' must be one of r0, r1, r2, r3, v3");
}

FamilyChoice choose_family(const json& c) {
  const std::string name = get_string(c, "family");
  if (name == "item1") return {GeneratingFamily::smooth(), Variety::R0};
  if (name == "item2") return {GeneratingFamily::fold(), Variety::R1};
  if (name == "item3") return {GeneratingFamily::angle(alpha_profile(c)), Variety::R2};
  if (name == "item4") return {corner_family(c), Variety::R3};
  if (name == "item5") return {GeneratingFamily::swallowtail(), Variety::V3tilde};
  if (name == "item5-reduced") return {GeneratingFamily::swallowtail_reduced(), Variety::V3tilde};
  if (name == "custom") {
    const std::string poly = get_string(c, "poly");
    if (poly.empty()) throw UsageError("family custom needs 'poly'");
    const int d = get_int(c, "max_quasidegree");
    return {GeneratingFamily::parse(poly, d), variety_from_flag(get_string(c, "variety"))};
  }
  throw UsageError("'family' must be item1..item5, item5-reduced or custom");
}

}  // namespace

int cmd_front(const json& c, const Stamp& stamp, const std::string& out) {
  const FamilyChoice choice = choose_family(c);
  const auto axes = parse_grid(get_string(c, "grid"), "xyz");
  Grid3 grid;
  grid.lo.setZero();
  grid.hi.setZero();
  grid.n = {1, 1, 1};
  for (const auto& a : axes) {
    const int k = static_cast<int>(std::string("xyz").find(a.name));
    grid.lo[k] = a.lo;
    grid.hi[k] = a.n == 1 ? a.lo : a.hi;
    grid.n[k] = a.n;
  }
  grid_size(axes);
  FrontOptions options;
  options.tol = positive(c, "tol");
  const FrontSample sample = front(choice.family, choice.variety, grid, options);

  CsvWriter csv(stamp, {"x", "y", "z", "t"});
  for (int i = 0; i < grid.size(); ++i) {
    const Eigen::Vector3d p = grid.node(i);
    csv.row({p[0], p[1], p[2], sample.t[static_cast<std::size_t>(i)]});
  }
  csv.save(join_path(out, "front.csv"));

  std::vector<Axis> full;
  for (int k = 0; k < 3; ++k) full.push_back({std::string(1, "xyz"[k]), grid.lo[k], grid.hi[k], grid.n[k]});
  json files = {"front.csv"};
  const auto shown = plot_axes(full);
  if (!shown.empty()) {
    // heights are read back from the sample rather than recomputed
    auto height = [&](const std::vector<double>& node) {
      int idx[3];
      for (int k = 0; k < 3; ++k) {
        idx[k] = full[k].n == 1 ? 0
                                : static_cast<int>(std::lround((node[k] - full[k].lo) /
                                                               (full[k].hi - full[k].lo) *
                                                               (full[k].n - 1)));
      }
      return sample.t[static_cast<std::size_t>((idx[0] * grid.n[1] + idx[1]) * grid.n[2] + idx[2])];
    };
    plot_grid(join_path(out, "front.svg"), stamp, "front height t over " + get_string(c, "family"),
              "t", full, height);
    files.push_back("front.svg");
  }
  files.push_back("front.json");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double t : sample.t) lo = std::min(lo, t), hi = std::max(hi, t);
  write_json(join_path(out, "front.json"), stamp,
             {{"family", c["family"]},
              {"polynomial", choice.family.poly().to_string(kFamilyVars)},
              {"variety", to_string(choice.variety)},
              {"parameters", family_params(c)},
              {"grid", axes_json(full)},
              {"nodes", grid.size()},
              {"coorientation", sample.coorientation},
              {"coorientation_axis", "t"},
              {"tol", options.tol},
              {"t_min", lo},
              {"t_max", hi},
              {"files", files}});
  return 0;
}

// ---------------------------------------------------------------------------------------------

int cmd_classify(const json& c, const Stamp& stamp, const std::string& out) {
  const double density = positive(c, "density");
  const std::string points_path = get_string(c, "points");
  std::string body_name = get_string(c, "body");
  auto load_points = [&]() {
    std::ifstream in(points_path);
    if (!in) throw UsageError("cannot read points file " + points_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError("points file " + points_path + ": " + e.what());
    }
    if (j.is_object() && j.contains("points")) j = j["points"];
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
      throw UsageError("points file must hold an array of coordinate arrays");
    }
    const std::size_t dim = j[0].size();
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_array() || j[i].size() != dim) {
        throw UsageError("point " + std::to_string(i) + " has the wrong dimension");
      }
      for (std::size_t k = 0; k < dim; ++k) {
        if (!j[i][k].is_number()) throw UsageError("point coordinates must be numbers");
        pts(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = j[i][k].get<double>();
      }
    }
    return PointCloudBody(pts);
  };
  const PointCloudBody body =
      points_path.empty() ? make_builtin_body(body_name, density) : load_points();
  if (!points_path.empty()) body_name = "points";

  ClassifyOptions options;
  options.cluster_tol = positive(c, "cluster_tol");
  options.link_tol = positive(c, "link_tol");
  options.hessian_ratio = positive(c, "hessian_ratio");
  options.hessian_floor = positive(c, "hessian_floor");
  options.quartic_threshold = positive(c, "quartic_threshold");
  options.family_radius = positive(c, "family_radius");
  options.tangency_all = get_bool(c, "tangency_all");
  options.use_analytic = get_bool(c, "use_analytic");
  int k = get_int(c, "resolution");
  if (k < 0 || k > 256) throw UsageError("'resolution' must be in 0..256");
  if (k == 0) k = body.dim() == 3 ? 16 : 8;
  const DirectionGrid grid = cube_sphere_grid(body.dim(), k);
  const ClassifyResult result = classify(body, grid, options);

  std::vector<std::string> columns = {"index"};
  for (int i = 0; i < body.dim(); ++i) columns.push_back("d" + std::to_string(i + 1));
  for (const char* s : {"support_value", "clusters", "tangency", "label"}) columns.push_back(s);
  CsvWriter csv(stamp, columns);
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    std::vector<std::string> row = {std::to_string(i)};
    for (int d = 0; d < body.dim(); ++d) row.push_back(CsvWriter::number(r.direction[d]));
    row.push_back(CsvWriter::number(r.support_value));
    row.push_back(std::to_string(r.clusters.size()));
    std::string tang;
    for (std::size_t t = 0; t < r.tangency_labels.size(); ++t) {
      tang += (t ? ";" : "") + std::string(to_string(r.tangency_labels[t]));
    }
    row.push_back(tang.empty() ? "-" : tang);
    row.push_back(r.catalogue_label);
    csv.row(row);
  }
  csv.save(join_path(out, "classify.csv"));

  const auto& s = result.summary;
  json families = json::array();
  for (const auto& f : s.families) {
    families.push_back({{"label", f.label},
                        {"size", f.members.size()},
                        {"members", f.members},
                        {"representative", std::vector<double>(f.representative.data(),
                                                               f.representative.data() +
                                                                   f.representative.size())}});
  }
  write_json(join_path(out, "classify.json"), stamp,
             {{"body", body_name},
              {"dim", body.dim()},
              {"points", body.size()},
              {"diameter", body.diameter()},
              {"resolution", k},
              {"spacing", grid.spacing},
              {"directions", s.directions},
              {"options",
               {{"cluster_tol", options.cluster_tol},
                {"link_tol", options.link_tol},
                {"hessian_ratio", options.hessian_ratio},
                {"hessian_floor", options.hessian_floor},
                {"quartic_threshold", options.quartic_threshold},
                {"family_radius", options.family_radius},
                {"tangency_all", options.tangency_all},
                {"use_analytic", options.use_analytic}}},
              {"label_counts", s.label_counts},
              {"family_counts", s.family_counts},
              {"families", families},
              {"predicted_strata", s.predicted_strata},
              {"singularities", s.singularities},
              {"files", {"classify.csv", "classify.json"}}});
  return 0;
}

// ---------------------------------------------------------------------------------------------

int cmd_swallowtail(const json& c, const Stamp& stamp, const std::string& out) {
  const std::string mode = get_string(c, "mode");
  const auto point = numbers(c, "point");
  if (!point.empty() && point.size() != 3) throw UsageError("'point' needs u,v,w");
  json files = json::array();
  json summary;

  if (mode == "membership" || mode == "project") {
    std::vector<Axis> axes;
    if (point.empty()) {
      std::string spec = get_string(c, "grid");
      if (spec.empty()) spec = "u=-3:3:13,v=-3:3:13,w=-3:3:13";
      axes = parse_grid(spec, "uvw");
    }
    const long total = point.empty() ? grid_size(axes) : 1;
    auto point_of = [&](const std::vector<double>& node) {
      Eigen::Vector3d p = Eigen::Vector3d::Zero();
      for (std::size_t k = 0; k < axes.size(); ++k) p[std::string("uvw").find(axes[k].name)] = node[k];
      return p;
    };
    const bool project = mode == "project";
    std::vector<std::string> cols = {"u", "v", "w"};
    if (project) {
      for (const char* s : {"foot_u", "foot_v", "foot_w", "distance", "normal_tau"}) cols.push_back(s);
    } else {
      for (const char* s : {"member", "quartic_min", "argmin_tau", "discriminant"}) cols.push_back(s);
    }
    CsvWriter csv(stamp, cols);
    long members = 0;
    double max_dist = 0.0;
    for (long i = 0; i < total; ++i) {
      const Eigen::Vector3d p =
          point.empty() ? point_of(grid_node(axes, i)) : Eigen::Vector3d(point[0], point[1], point[2]);
      const QuarticPoint q(p);
      if (project) {
        const Projection pr = project_to_v3(p);
        const auto tau = pr.normal_tau();
        max_dist = std::max(max_dist, pr.distance);
        members += pr.distance == 0.0;
        csv.row({p[0], p[1], p[2], pr.foot[0], pr.foot[1], pr.foot[2], pr.distance,
                 tau ? *tau : std::numeric_limits<double>::quiet_NaN()});
      } else {
        const bool m = quartic_nonneg(q);
        const QuarticMinimum qm = quartic_min(q);
        members += m;
        csv.row({p[0], p[1], p[2], m ? 1.0 : 0.0, qm.value, qm.tau, discriminant(q)});
      }
    }
    csv.save(join_path(out, "swallowtail.csv"));
    files.push_back("swallowtail.csv");
    if (!point.empty()) {
      summary = {{"point", point}};
    } else {
      summary = {{"grid", axes_json(axes)}};
      auto value = [&](const std::vector<double>& node) {
        const Eigen::Vector3d p = point_of(node);
        return project ? project_to_v3(p).distance : -quartic_min(QuarticPoint(p)).value;
      };
      if (plot_grid(join_path(out, "swallowtail.svg"), stamp,
                    project ? "distance to V3" : "minus quartic minimum (zero level = boundary of V3)",
                    project ? "distance" : "-min", axes, value)) {
        files.push_back("swallowtail.svg");
      }
    }
    summary["nodes"] = total;
    summary["members"] = members;
    if (project) summary["max_distance"] = max_dist;
  } else if (mode == "section") {
    const double u0 = get_number(c, "u");
    const Axis tau = parse_range("tau", get_string(c, "tau"));
    CsvWriter csv(stamp, {"tau", "u", "v", "w"});
    std::vector<Polyline> lines(1);
    for (int i = 0; i < tau.n; ++i) {
      const double s = tau.node(i);
      if (u0 < -2.0 * s * s) {
        if (!lines.back().x.empty()) lines.emplace_back();
        continue;
      }
      const BoundaryChart b(s, u0);
      csv.row({s, u0, b.v(), b.w()});
      lines.back().x.push_back(b.v());
      lines.back().y.push_back(b.w());
    }
    if (lines.back().x.empty()) lines.pop_back();
    csv.save(join_path(out, "swallowtail.csv"));
    files.push_back("swallowtail.csv");
    if (!lines.empty()) {
      write_curves_svg(join_path(out, "swallowtail.svg"), stamp,
                       "double-root curve of V3 at u = " + CsvWriter::number(u0), "v", "w", lines);
      files.push_back("swallowtail.svg");
    }
    summary = {{"u", u0}, {"tau", {{"lo", tau.lo}, {"hi", tau.hi}, {"n", tau.n}}},
               {"branches", lines.size()}};
  } else {
    throw UsageError("'mode' must be membership, project or section");
  }
  files.push_back("swallowtail.json");
  summary["mode"] = mode;
  summary["files"] = files;
  write_json(join_path(out, "swallowtail.json"), stamp, summary);
  return 0;
}

}  // namespace hullsing::cli
