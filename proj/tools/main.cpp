#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hullsing/errors.hpp"

using hullsing::cli::json;
using hullsing::cli::UsageError;

namespace {

enum class Kind { number, integer, text, list, flag };

struct Flag {
  const char* name;
  const char* key;
  Kind kind;
  const char* help;
};

const std::map<std::string, std::vector<Flag>>& flag_table() {
  static const std::map<std::string, std::vector<Flag>> table = {
      {"envelope",
       {{"--form", "form", Kind::text, "r0, r1, r2, r3 or v3"},
        {"--grid", "grid", Kind::text, "axes over x,y,z,t, e.g. x=-1:1:101,t=-1:1:101"},
        {"--x", "x", Kind::number, "fixed x"},
        {"--y", "y", Kind::number, "fixed y"},
        {"--z", "z", Kind::number, "fixed z"},
        {"--t", "t", Kind::number, "fixed t"},
        {"--alpha", "alpha", Kind::text, "alpha profile: linear, plus_quadratic, minus_quadratic, constant"},
        {"--a", "a", Kind::number, "alpha profile constant"},
        {"--corner", "corner", Kind::list, "corner moduli a,b,c"},
        {"--higher", "higher", Kind::text, "higher-order terms of the corner family"},
        {"--max-quasidegree", "max_quasidegree", Kind::integer, "bound on family quasidegree"}}},
      {"front",
       {{"--family", "family", Kind::text, "item1..item5, item5-reduced or custom"},
        {"--poly", "poly", Kind::text, "custom family in p,q,r,x,y,z,t"},
        {"--variety", "variety", Kind::text, "variety of a custom family: r0..r3 or v3"},
        {"--grid", "grid", Kind::text, "axes over x,y,z"},
        {"--tol", "tol", Kind::number, "root tolerance in t"},
        {"--alpha", "alpha", Kind::text, "alpha profile of item3"},
        {"--a", "a", Kind::number, "alpha profile constant"},
        {"--corner", "corner", Kind::list, "moduli a,b,c of item4"},
        {"--higher", "higher", Kind::text, "higher-order terms of item4"},
        {"--max-quasidegree", "max_quasidegree", Kind::integer, "bound on family quasidegree"}}},
      {"verify",
       {{"--suite", "suite", Kind::text, "all, ideal, contact, lemma2, bracket, omega, phi3, a1a3"},
        {"--samples", "samples", Kind::integer, "samples per suite (0 = defaults)"},
        {"--tol", "tol", Kind::number, "generator tolerance of the ideal suite"},
        {"--tamper", "tamper", Kind::text, "ideal:N perturbs generator N"},
        {"--tamper-delta", "tamper_delta", Kind::number, "size of the tamper perturbation"}}},
      {"classify",
       {{"--body", "body", Kind::text, "ellipsoid, peanut, caltrop or torus"},
        {"--points", "points", Kind::text, "JSON file with an array of points"},
        {"--density", "density", Kind::number, "sample density of built-in bodies"},
        {"--resolution", "resolution", Kind::integer, "cube-sphere grid resolution (0 = auto)"},
        {"--cluster-tol", "cluster_tol", Kind::number, "contact band, relative to the diameter"},
        {"--link-tol", "link_tol", Kind::number, "linkage distance, relative to the diameter"},
        {"--hessian-ratio", "hessian_ratio", Kind::number, "small-eigenvalue ratio"},
        {"--hessian-floor", "hessian_floor", Kind::number, "vanishing Hessian threshold"},
        {"--quartic-threshold", "quartic_threshold", Kind::number, "A3 quartic threshold"},
        {"--family-radius", "family_radius", Kind::number, "family linkage in grid spacings"},
        {"--tangency-all", "tangency_all", Kind::flag, "fit tangency on every record"},
        {"--use-analytic", "use_analytic", Kind::flag, "resample heights from the level set"}}},
      {"swallowtail",
       {{"--mode", "mode", Kind::text, "membership, project or section"},
        {"--point", "point", Kind::list, "single point u,v,w"},
        {"--grid", "grid", Kind::text, "axes over u,v,w"},
        {"--u", "u", Kind::number, "section level"},
        {"--tau", "tau", Kind::text, "double-root range lo:hi:n"}}},
  };
  return table;
}

json convert(const Flag& f, const std::string& text) {
  switch (f.kind) {
    case Kind::text: return text;
    case Kind::list: return hullsing::cli::parse_list(text);
    case Kind::number: {
      const auto v = hullsing::cli::parse_list(text);
      if (v.size() != 1) throw UsageError(std::string(f.name) + " takes one number");
      return v[0];
    }
    case Kind::integer: {
      try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
      } catch (const std::exception&) {
        throw UsageError(std::string(f.name) + " takes an integer");
      }
    }
    case Kind::flag: break;
  }
  return true;
}

struct Parsed {
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
  std::string config_path, out;
  unsigned long long seed = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex hull singularity toolkit: envelopes, fronts, identity checks, body scans"};
  app.require_subcommand(1);
  std::map<std::string, Parsed> parsed;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> about = {
      {"envelope", "evaluate a normal-form envelope on a grid"},
      {"front", "compute the front of a generating family"},
      {"verify", "run the identity and ideal checks"},
      {"classify", "scan support planes of a sampled body"},
      {"swallowtail", "membership, projection and sections of V3"}};
  for (const auto& name : hullsing::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    Parsed& p = parsed[name];
    sub->add_option("--config", p.config_path, "JSON config file; flags override it");
    p.seed_opt = sub->add_option("--seed", p.seed, "seed recorded in every output");
    p.out_opt = sub->add_option("--out", p.out, "output directory");
    for (const Flag& f : flag_table().at(name)) {
      if (f.kind == Kind::flag) {
        p.options[f.key] = sub->add_flag(f.name, p.flags[f.key], f.help);
      } else {
        p.options[f.key] = sub->add_option(f.name, p.values[f.key], f.help);
      }
    }
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      Parsed& p = parsed[name];
      json file = json::object();
      if (!p.config_path.empty()) file = hullsing::cli::load_config_file(p.config_path);
      json flags = json::object();
      if (p.seed_opt->count()) flags["seed"] = p.seed;
      if (p.out_opt->count()) flags["out"] = p.out;
      for (const Flag& f : flag_table().at(name)) {
        if (!p.options[f.key]->count()) continue;
        flags[f.key] = f.kind == Kind::flag ? json(p.flags[f.key]) : convert(f, p.values[f.key]);
      }
      const json config = hullsing::cli::merge_config(name, file, flags);
      return hullsing::cli::run_command(name, config);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hullsing::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case hullsing::ErrorCode::NonConvergence:
      case hullsing::ErrorCode::InsufficientSamples: return 1;
      default: return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
