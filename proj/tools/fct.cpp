#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fct/dimension.hpp"
#include "fct/graph.hpp"
#include "fct/invariants.hpp"
#include "fct/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRefused = 2;
constexpr int kExitCap = 3;

struct Options {
  std::string graph_path;
  int trials = 3;
  std::uint64_t seed = 0;
  std::size_t labeling_budget = 10000;
  std::string format = "table";
  int degree = 1;
  std::string support;
  std::size_t cap = 50000;
  std::string poly_file;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fct::Error("cannot read file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fct::ParseResult load_graph(const std::string& path) {
  fct::ParseResult result = fct::parse_graph(slurp(path));
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  return result;
}

void emit_json(const nlohmann::ordered_json& j) { std::cout << j.dump() << "\n"; }

std::string yesno(bool b) { return b ? "yes" : "no"; }

void print_collection_table(const fct::ValidCollection& c, const std::string& heading) {
  std::cout << heading << "\n";
  for (const auto& [h, pairs] : c.assignment) {
    std::cout << "  " << h << ":";
    for (const auto& [u, v] : pairs) std::cout << " (" << u << "," << v << ")";
    std::cout << "\n";
  }
}

void print_report_table(const fct::DimensionReport& rep, bool with_exact) {
  std::cout << "expected                " << rep.expected << "\n";
  std::cout << "zero_pattern_bound      " << rep.zero_pattern << "\n";
  std::cout << "upper                   " << rep.upper << "\n";
  if (rep.lower)
    std::cout << "lower                   " << *rep.lower << "\n";
  else
    std::cout << "lower                   none\n";
  std::cout << "lower_exhaustive        " << yesno(rep.lower_exhaustive) << "\n";
  if (with_exact) {
    std::cout << "exact                   " << rep.exact << "\n";
    std::cout << "exact_is_probabilistic  " << yesno(rep.exact_is_probabilistic) << "\n";
    std::cout << "trials                  " << rep.trials << "\n";
    std::cout << "seed                    " << rep.seed << "\n";
    std::cout << "defective               " << yesno(rep.defective) << "\n";
  }
  print_collection_table(rep.witness_upper, "witness_upper");
  if (rep.lower_labeling) {
    std::cout << "witness_lower labeling\n  order:";
    for (const auto& h : rep.lower_labeling->latent_order) std::cout << " " << h;
    std::cout << "\n  witnesses:";
    for (const auto& v : rep.lower_labeling->witnesses) std::cout << " " << v;
    std::cout << "\n";
    print_collection_table(rep.witness_lower, "witness_lower collection");
  }
}

nlohmann::ordered_json bounds_json(const fct::DimensionReport& rep) {
  nlohmann::ordered_json full = fct::report_json(rep);
  nlohmann::ordered_json j;
  for (const auto& key : {"expected", "zero_pattern_bound", "upper", "lower",
                          "lower_exhaustive", "witness_upper", "witness_lower"})
    j[key] = full[key];
  return j;
}

std::vector<fct::Variable> parse_support(const std::string& text, const fct::FactorGraph& g) {
  std::vector<fct::Variable> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto sep = item.find('_');
    if (sep == std::string::npos || item.find('_', sep + 1) != std::string::npos)
      throw fct::Error("support entries must look like u_v, got: " + item);
    fct::Variable v = fct::Variable::sigma(item.substr(0, sep), item.substr(sep + 1));
    g.observed_index(v.first());
    g.observed_index(v.second());
    out.push_back(v);
  }
  if (out.empty()) throw fct::Error("empty support list");
  return out;
}

int run_dim(const Options& opt, bool with_exact) {
  fct::FactorGraph g = load_graph(opt.graph_path).graph;
  fct::DimensionReport rep;
  if (with_exact) {
    rep = fct::dimension_report(g, opt.trials, opt.seed, opt.labeling_budget);
  } else {
    rep.expected = fct::expected_dimension(g);
    rep.zero_pattern = fct::zero_pattern_bound(g);
    rep.witness_upper = fct::max_valid_collection(g);
    rep.upper = g.p() + rep.witness_upper.total();
    fct::LowerBoundResult lb = fct::lower_bound(g, opt.labeling_budget);
    rep.lower = lb.value;
    rep.lower_exhaustive = lb.exhaustive;
    rep.lower_labeling = lb.witness;
    rep.witness_lower = lb.collection;
  }
  if (opt.format == "json")
    emit_json(with_exact ? fct::report_json(rep) : bounds_json(rep));
  else
    print_report_table(rep, with_exact);
  return kExitOk;
}

int run_zuta(const Options& opt) {
  fct::FactorGraph g = load_graph(opt.graph_path).graph;
  std::optional<fct::ZutaLabeling> lab = fct::zuta_labeling(g);
  if (opt.format == "json") {
    nlohmann::ordered_json j;
    if (lab) {
      j["latent_order"] = lab->latent_order;
      j["witnesses"] = lab->witnesses;
    } else {
      j = nullptr;
    }
    emit_json(j);
  } else if (lab) {
    std::cout << "order:";
    for (const auto& h : lab->latent_order) std::cout << " " << h;
    std::cout << "\nwitnesses:";
    for (const auto& v : lab->witnesses) std::cout << " " << v;
    std::cout << "\n";
  } else {
    std::cout << "none\n";
  }
  return kExitOk;
}

int run_invariants(const Options& opt) {
  fct::FactorGraph g = load_graph(opt.graph_path).graph;
  fct::GeneratorSet gs;
  try {
    gs = fct::two_factor_groebner(g);
  } catch (const fct::NotTwoFactor& e) {
    std::cerr << "error: " << e.what()
              << "; closed-form generators cover two factors only, try the oracle verb\n";
    return kExitRefused;
  } catch (const fct::OverlapTooLarge& e) {
    std::cerr << "error: " << e.what()
              << "; no closed-form generating set is known here, try the oracle verb\n";
    return kExitRefused;
  }
  if (opt.format == "json") {
    emit_json(fct::generator_set_json(gs));
  } else {
    auto cmp = gs.order.cmp_fn();
    for (const auto& [name, list] :
         {std::pair{"monomials", &gs.monomials}, std::pair{"tetrads", &gs.tetrads},
          std::pair{"hexads", &gs.hexads}}) {
      std::cout << name << " (" << list->size() << ")\n";
      for (const auto& gen : *list) std::cout << "  " << gen.poly.str(cmp) << "\n";
    }
  }
  return kExitOk;
}

int run_verify(const Options& opt) {
  fct::FactorGraph g = load_graph(opt.graph_path).graph;
  std::stringstream in(slurp(opt.poly_file));
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
    if (!trimmed.empty()) trimmed.erase(trimmed.find_last_not_of(" \t\r\n") + 1);
    if (trimmed.empty()) continue;
    any = true;
    fct::Polynomial f = fct::parse_polynomial(trimmed);
    std::cout << (fct::verify_vanishes(f, g) ? "OK" : "FAIL") << " " << trimmed << "\n";
  }
  if (!any) throw fct::Error("no polynomials in " + opt.poly_file);
  return kExitOk;
}

int run_oracle(const Options& opt) {
  fct::FactorGraph g = load_graph(opt.graph_path).graph;
  fct::VanishingBasisRequest req;
  req.graph = &g;
  req.degree = opt.degree;
  req.cap = opt.cap;
  if (!opt.support.empty()) req.support = parse_support(opt.support, g);
  std::vector<fct::Polynomial> basis = fct::vanishing_basis(req, opt.seed);
  if (opt.format == "json") {
    nlohmann::ordered_json j;
    j["degree"] = opt.degree;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : basis) arr.push_back(f.str());
    j["certified"] = std::move(arr);
    emit_json(j);
  } else {
    for (const auto& f : basis) std::cout << f.str() << "\n";
    std::cout << "certified: " << basis.size() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact tools for sparse factor analysis models"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("graph", opt.graph_path, "graph description (JSON)")->required();
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
  };

  CLI::App* dim = app.add_subcommand("dim", "dimension report for a graph");
  add_common(dim);
  dim->add_option("--trials", opt.trials, "Jacobian rank trials")->capture_default_str();
  dim->add_option("--seed", opt.seed, "seed for randomized draws")->capture_default_str();
  dim->add_option("--labeling-budget", opt.labeling_budget, "labeling enumeration budget")
      ->capture_default_str();

  CLI::App* bounds = app.add_subcommand("bounds", "combinatorial bounds only (skips the Jacobian)");
  add_common(bounds);
  bounds->add_option("--labeling-budget", opt.labeling_budget, "labeling enumeration budget")
      ->capture_default_str();

  CLI::App* zuta = app.add_subcommand("zuta", "find an ordering with per-factor witnesses");
  add_common(zuta);

  CLI::App* invariants = app.add_subcommand("invariants", "closed-form generating set");
  add_common(invariants);

  CLI::App* verify = app.add_subcommand("verify", "check polynomials against the model");
  add_common(verify);
  verify->add_option("--poly-file", opt.poly_file, "file with one polynomial per line")
      ->required();

  CLI::App* oracle = app.add_subcommand("oracle", "search the vanishing ideal numerically");
  add_common(oracle);
  oracle->add_option("--degree", opt.degree, "maximum degree to search")->required();
  oracle->add_option("--support", opt.support, "comma-separated pairs u_v restricting the search");
  oracle->add_option("--cap", opt.cap, "monomial count cap")->capture_default_str();
  oracle->add_option("--seed", opt.seed, "seed for randomized draws")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dim->parsed()) return run_dim(opt, true);
    if (bounds->parsed()) return run_dim(opt, false);
    if (zuta->parsed()) return run_zuta(opt);
    if (invariants->parsed()) return run_invariants(opt);
    if (verify->parsed()) return run_verify(opt);
    if (oracle->parsed()) return run_oracle(opt);
  } catch (const fct::NotTwoFactor& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRefused;
  } catch (const fct::OverlapTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRefused;
  } catch (const fct::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const fct::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
