// Command-line surface over the engine: group inspection, sub-factor
// enumeration, sub-index reports, stability sweeps, table generation, and
// the verification suites.
//
// Exit codes: 0 success, 2 usage/parse error, 3 search budget exceeded,
// 4 verification failure (report still printed).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "subf/catalog.hpp"
#include "subf/group.hpp"
#include "subf/subfactor.hpp"
#include "subf/subindex.hpp"
#include "subf/subset.hpp"
#include "subf/survey.hpp"

using namespace subf;
using nlohmann::json;

namespace {

struct CliConfig {
  int workers = 0;  // 0 -> hardware default
  std::uint64_t budget = 100'000'000;
  std::string format = "text";
  std::string cache;
  std::uint64_t seed = 0;
  std::string catalog_dir;

  SearchOptions search() const {
    SearchOptions opts;
    opts.node_budget = budget;
    opts.workers = workers;
    opts.seed = seed;
    return opts;
  }
};

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) out[key] = value;
  }
  return out;
}

// Precedence: command-line flag > environment variable > config file > default.
void apply_layered_config(CliConfig& cfg, const std::map<std::string, std::string>& file,
                          const CLI::App& app) {
  auto layered = [&](const char* flag, const char* env, const char* key,
                     auto setter) {
    if (app.count(flag) > 0) return;  // explicit flag wins, already stored
    if (const char* v = std::getenv(env); v && *v) {
      setter(std::string(v));
      return;
    }
    if (auto it = file.find(key); it != file.end()) setter(it->second);
  };
  layered("--workers", "SUBF_WORKERS", "workers",
          [&](const std::string& v) { cfg.workers = std::stoi(v); });
  layered("--budget", "SUBF_BUDGET", "budget",
          [&](const std::string& v) { cfg.budget = std::stoull(v); });
  layered("--format", "SUBF_FORMAT", "format", [&](const std::string& v) { cfg.format = v; });
  layered("--cache", "SUBF_CACHE", "cache", [&](const std::string& v) { cfg.cache = v; });
  layered("--seed", "SUBF_SEED", "seed",
          [&](const std::string& v) { cfg.seed = std::stoull(v); });
}

std::string mode_name(EnumerationMode m) {
  switch (m) {
    case EnumerationMode::bounded_search: return "bounded";
    case EnumerationMode::algorithm_branching: return "branching";
    case EnumerationMode::brute_force: return "brute";
  }
  return "?";
}

EnumerationMode parse_mode(const std::string& s) {
  if (s == "bounded") return EnumerationMode::bounded_search;
  if (s == "branching") return EnumerationMode::algorithm_branching;
  if (s == "brute") return EnumerationMode::brute_force;
  throw ParseError("unknown mode '" + s + "' (expected bounded|branching|brute)");
}

json row_to_json(const StabilityRow& row) {
  return json::parse(table_to_json({row}))[0];
}

void print_report_text(std::ostream& out, const FiniteGroup& g, const Subset& a,
                       const SubIndexReport& r) {
  auto show = [&](const std::vector<ElementId>& ids) {
    std::string s = "{";
    for (std::size_t i = 0; i < ids.size(); ++i)
      s += (i ? "," : "") + g.name(ids[i]);
    return s + "}";
  };
  out << "A = " << a.to_string() << " in " << g.spec() << " (|G|=" << g.order() << ")\n";
  out << "partition class: " << r.partition_class << "\n";
  out << "bounds: " << r.bound_lower << " <= lower, upper <= min(" << r.bound_upper << ", "
      << r.bound_eq25 << ")\n";
  out << "right: lower " << r.lower_right << ", upper " << r.upper_right
      << (r.right_stable ? "  (right index stable)" : "  (not right stable)") << "\n";
  out << "left:  lower " << r.lower_left << ", upper " << r.upper_left
      << (r.left_stable ? "  (left index stable)" : "  (not left stable)") << "\n";
  if (r.index)
    out << "index stable, |G:A| = " << *r.index << "\n";
  else
    out << "not index stable\n";
  if (r.relatively_strong_unstable_right) out << "relatively strong right index unstable\n";
  out << "witnesses: right max " << show(r.witness_right_max) << ", right min "
      << show(r.witness_right_min) << ", left max " << show(r.witness_left_max)
      << ", left min " << show(r.witness_left_min) << "\n";
}

int cmd_group_info(const CliConfig& cfg, const std::string& spec_text) {
  FiniteGroup g = parse_group_spec(spec_text);
  auto subgroups = all_subgroups(g);
  if (cfg.format == "json") {
    json j;
    j["spec"] = g.spec();
    j["order"] = g.order();
    j["abelian"] = g.is_abelian();
    j["names"] = g.names();
    json orders = json::array();
    for (int e = 0; e < g.order(); ++e) orders.push_back(g.element_order(e));
    j["element_orders"] = orders;
    j["subgroup_count"] = subgroups.size();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "group " << g.spec() << ": order " << g.order()
              << (g.is_abelian() ? ", abelian" : ", non-abelian") << ", " << subgroups.size()
              << " subgroups\n";
    std::cout << "elements:";
    for (int e = 0; e < g.order(); ++e)
      std::cout << " " << g.name(e) << "(o" << g.element_order(e) << ")";
    std::cout << "\n";
  }
  return 0;
}

int cmd_subfactors(const CliConfig& cfg, const std::string& spec_text,
                   const std::string& set_text, const std::string& side,
                   const std::string& mode_text, bool normalized) {
  FiniteGroup g = parse_group_spec(spec_text);
  Subset a = parse_subset(g, set_text);
  EnumerationMode mode = parse_mode(mode_text);
  SubsetFamily family = side == "left"
                            ? enumerate_left_subfactors(a, mode, cfg.search())
                            : enumerate_right_subfactors(a, mode, normalized, cfg.search());
  if (cfg.format == "json") {
    std::cout << family_to_json(a, family, mode, normalized) << "\n";
  } else {
    for (const Subset& s : family.members()) std::cout << s.to_string() << "\n";
    std::cout << "(" << family.size() << " " << (side == "left" ? "left" : "right")
              << " sub-factors, mode " << mode_name(mode) << ")\n";
  }
  return 0;
}

int cmd_subindex(const CliConfig& cfg, const std::string& spec_text,
                 const std::string& set_text) {
  FiniteGroup g = parse_group_spec(spec_text);
  Subset a = parse_subset(g, set_text);

  std::optional<ReportCache> cache;
  if (!cfg.cache.empty()) cache.emplace(cfg.cache);
  SubIndexReport report;
  if (cache) {
    if (auto hit = cache->get(g, a.mask())) {
      report = *hit;
    } else {
      report = sub_index_report(a, cfg.search());
      cache->put(g, a.mask(), report);
    }
  } else {
    report = sub_index_report(a, cfg.search());
  }
  if (cfg.format == "json")
    std::cout << report_to_json(report) << "\n";
  else
    print_report_text(std::cout, g, a, report);
  return 0;
}

int cmd_stability(const CliConfig& cfg, const std::string& spec_text, int k) {
  FiniteGroup g = parse_group_spec(spec_text);
  if (k > 0) {
    KStabilityCell cell = k_index_stability(g, k, cfg.search());
    if (cfg.format == "json") {
      json j;
      j["group"] = g.spec();
      j["k"] = k;
      j["right_stable"] = cell.right_stable;
      j["two_sided_stable"] = cell.two_sided_stable;
      if (cell.witness_mask)
        j["witness"] = Subset(g, *cell.witness_mask).elements();
      else
        j["witness"] = nullptr;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "k=" << k << ": " << (cell.right_stable ? "1" : "0") << "-"
                << (cell.two_sided_stable ? "1" : "0");
      if (cell.witness_mask)
        std::cout << "  witness " << Subset(g, *cell.witness_mask).to_string();
      std::cout << "\n";
    }
    return 0;
  }
  std::vector<const FiniteGroup*> one{&g};
  auto rows = stability_table(one, cfg.search());
  if (cfg.format == "json")
    std::cout << table_to_json(rows) << "\n";
  else if (cfg.format == "markdown")
    std::cout << table_to_markdown(rows);
  else
    std::cout << table_to_text(rows);
  return 0;
}

int cmd_table(const CliConfig& cfg, const std::string& orders) {
  int lo = 6, hi = 16;
  if (!orders.empty()) {
    auto dash = orders.find('-');
    if (dash == std::string::npos) {
      lo = hi = std::stoi(orders);
    } else {
      lo = std::stoi(orders.substr(0, dash));
      hi = std::stoi(orders.substr(dash + 1));
    }
  }
  if (lo < 1 || hi > 16 || lo > hi) throw ParseError("orders range must lie within 1-16");
  Catalog catalog = Catalog::load(cfg.catalog_dir);
  catalog.require_complete(hi);
  std::vector<const FiniteGroup*> groups;
  std::vector<std::pair<int, int>> meta;
  for (const CatalogEntry* e : catalog.up_to_order(hi)) {
    if (e->order < lo) continue;
    groups.push_back(e->group.get());
    meta.emplace_back(e->order, e->id);
  }
  auto rows = stability_table(groups, cfg.search());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].group_id = meta[i].second;
  if (cfg.format == "json")
    std::cout << table_to_json(rows) << "\n";
  else if (cfg.format == "markdown")
    std::cout << table_to_markdown(rows);
  else
    std::cout << table_to_text(rows);
  return 0;
}

int cmd_verify(const CliConfig& cfg, const std::string& target, int max_order, int max_n) {
  bool ok = true;
  if (target == "characterization") {
    Catalog catalog = Catalog::load(cfg.catalog_dir);
    auto report = verify_characterization(catalog, max_order, cfg.search());
    int stable = 0;
    for (const auto& e : report.groups) {
      std::cout << (e.index_stable ? "IndexStable    " : "NotIndexStable ") << e.order << "."
                << e.id << " " << e.name;
      if (!e.index_stable && e.witness_mask) {
        Subset w(*catalog.find(e.order, e.id)->group, *e.witness_mask);
        std::cout << "  witness " << w.to_string();
        if (!e.witness_origin.empty()) std::cout << " (" << e.witness_origin << ")";
      }
      std::cout << "\n";
      stable += e.index_stable ? 1 : 0;
    }
    std::cout << stable << " index stable groups up to order " << max_order << "\n";
    std::cout << "order-32 witness pair: " << (report.witness32_ok ? "ok" : "FAIL") << "\n";
    std::cout << "order-49 witness pair: " << (report.witness49_ok ? "ok" : "FAIL") << "\n";
    ok = report.ok();
  } else if (target == "counterexamples") {
    Catalog catalog = Catalog::load(cfg.catalog_dir);
    auto report = run_counterexample_suite(catalog, cfg.search());
    for (const auto& c : report.cases)
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << ": " << c.claim << "\n        "
                << c.evidence << "\n";
    ok = report.all_pass();
  } else if (target == "zn") {
    for (int n = 2; n <= max_n; ++n) {
      ZnPairResult r = zn_pair_index(n, cfg.search());
      std::cout << "n=" << n << " lower=" << r.lower << " upper=" << r.upper
                << " closed-form=" << (r.matches_closed_form ? "ok" : "FAIL")
                << " constructions=" << (r.b_even_is_subfactor && r.b_prime_is_subfactor
                                             ? "ok"
                                             : "FAIL")
                << "\n";
      ok = ok && r.ok();
    }
  } else if (target == "factorization") {
    Catalog catalog = Catalog::load(cfg.catalog_dir);
    for (const CatalogEntry* e : catalog.up_to_order(max_order)) {
      int n = e->order;
      for (int a = 1; a <= n; ++a) {
        if (n % a != 0) continue;
        int b = n / a;
        auto pair = find_factorization(*e->group, a, b, cfg.search());
        bool good = pair && is_right_factor(pair->first, pair->second);
        std::cout << e->name << " (" << a << "," << b << "): "
                  << (good ? pair->first.to_string() + " * " + pair->second.to_string()
                           : std::string("FAIL"))
                  << "\n";
        ok = ok && good;
      }
    }
  } else {
    throw ParseError("unknown verify target '" + target + "'");
  }
  return ok ? 0 : 4;
}

int cmd_factorize(const CliConfig& cfg, const std::string& spec_text,
                  const std::string& sizes) {
  auto comma = sizes.find(',');
  if (comma == std::string::npos) throw ParseError("--sizes expects 'a,b'");
  int a = std::stoi(sizes.substr(0, comma));
  int b = std::stoi(sizes.substr(comma + 1));
  FiniteGroup g = parse_group_spec(spec_text);
  auto pair = find_factorization(g, a, b, cfg.search());
  if (!pair) {
    std::cout << "not found within budget (existence undecided)\n";
    return 0;
  }
  if (cfg.format == "json") {
    json j;
    j["group"] = g.spec();
    j["A"] = pair->first.elements();
    j["B"] = pair->second.elements();
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "A = " << pair->first.to_string() << "\nB = " << pair->second.to_string()
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig cfg;
  std::string config_path;

  CLI::App app{"finite-group sub-factor and sub-index calculator"};
  app.require_subcommand(1);
  app.add_option("--workers", cfg.workers, "worker thread count (>= 1)");
  app.add_option("--budget", cfg.budget, "search node budget (>= 10000)");
  app.add_option("--format", cfg.format, "output format: text|json|markdown");
  app.add_option("--cache", cfg.cache, "sub-index report cache file");
  app.add_option("--seed", cfg.seed, "seed for randomized choosers");
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--catalog", cfg.catalog_dir, "catalog directory");

  auto* group = app.add_subcommand("group", "group inspection");
  std::string gi_spec;
  auto* group_info = group->add_subcommand("info", "order, names, subgroup count");
  group_info->add_option("spec", gi_spec, "group spec, e.g. C6 or C2^5")->required();

  auto* sf = app.add_subcommand("subfactors", "enumerate sub-factors related to a set");
  std::string sf_spec, sf_set, sf_side = "right", sf_mode = "bounded";
  bool sf_norm = false;
  sf->add_option("spec", sf_spec)->required();
  sf->add_option("--set", sf_set, "comma-separated elements")->required();
  sf->add_option("--side", sf_side, "right|left");
  sf->add_option("--mode", sf_mode, "bounded|branching|brute");
  sf->add_flag("--normalized", sf_norm, "only members containing the identity");

  auto* si = app.add_subcommand("subindex", "the four sub-indices of a set");
  std::string si_spec, si_set;
  si->add_option("spec", si_spec)->required();
  si->add_option("--set", si_set)->required();

  auto* st = app.add_subcommand("stability", "k-index stability of one group");
  std::string st_spec;
  int st_k = 0;
  st->add_option("spec", st_spec)->required();
  st->add_option("--k", st_k, "single k (default: all k up to |G|/2)");

  auto* tb = app.add_subcommand("table", "stability table over the catalog");
  std::string tb_orders;
  tb->add_option("--orders", tb_orders, "order range, e.g. 6-16");

  auto* vf = app.add_subcommand("verify", "run a verification suite");
  std::string vf_target;
  int vf_max_order = 16, vf_max_n = 24;
  vf->add_option("target", vf_target, "characterization|counterexamples|zn|factorization")
      ->required();
  vf->add_option("--max-order", vf_max_order);
  vf->add_option("--max-n", vf_max_n);

  auto* fz = app.add_subcommand("factorize", "find G = A*B with given part sizes");
  std::string fz_spec, fz_sizes;
  fz->add_option("spec", fz_spec)->required();
  fz->add_option("--sizes", fz_sizes, "a,b with a*b = |G|")->required();

  // global flags may follow the subcommand
  for (CLI::App* sc : {group, group_info, sf, si, st, tb, vf, fz}) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::map<std::string, std::string> file_cfg;
    if (!config_path.empty()) file_cfg = read_config_file(config_path);
    apply_layered_config(cfg, file_cfg, app);
    if (cfg.workers == 0)
      cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (cfg.workers < 1 || cfg.budget < 10'000)
      throw ParseError("--workers must be >= 1 and --budget >= 10000");
    if (cfg.format != "text" && cfg.format != "json" && cfg.format != "markdown")
      throw ParseError("unknown format '" + cfg.format + "'");
    if (cfg.catalog_dir.empty()) cfg.catalog_dir = Catalog::default_dir();

    if (group_info->parsed()) return cmd_group_info(cfg, gi_spec);
    if (sf->parsed()) return cmd_subfactors(cfg, sf_spec, sf_set, sf_side, sf_mode, sf_norm);
    if (si->parsed()) return cmd_subindex(cfg, si_spec, si_set);
    if (st->parsed()) return cmd_stability(cfg, st_spec, st_k);
    if (tb->parsed()) return cmd_table(cfg, tb_orders);
    if (vf->parsed()) return cmd_verify(cfg, vf_target, vf_max_order, vf_max_n);
    if (fz->parsed()) return cmd_factorize(cfg, fz_spec, fz_sizes);
    std::cerr << "no command given\n";
    return 2;
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
