#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "quasirand/catalog.hpp"
#include "quasirand/census.hpp"
#include "quasirand/error.hpp"
#include "quasirand/flip.hpp"
#include "quasirand/graph_io.hpp"
#include "quasirand/oracle.hpp"
#include "quasirand/schatten.hpp"
#include "quasirand/signed_stats.hpp"

namespace quasirand::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kUnsupported:
    case ErrorKind::kParse:
      return 2;
    case ErrorKind::kWorkCap:
    case ErrorKind::kPrecondition:
      return 3;
    case ErrorKind::kReservoirShortfall:
    case ErrorKind::kConvergenceFailure:
    case ErrorKind::kRetriesExhausted:
      return 4;
  }
  return 1;
}

json error_json(const std::string& kind, const std::string& message, json diagnostics = json::object()) {
  return {{"error", kind}, {"message", message}, {"diagnostics", std::move(diagnostics)}};
}

// Write via a temporary sibling and rename.
void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::kInvalidArgument, "cannot write " + tmp.string());
    f << text;
    if (!f) throw Error(ErrorKind::kInvalidArgument, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void emit(const json& report, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << report.dump(2) << "\n";
  } else {
    write_atomic(path, report.dump(2) + "\n");
  }
}

std::string csv_name(std::string name) {
  for (auto& c : name) {
    if (c == ',') c = '_';
  }
  return name;
}

template <class S>
json value(const S& v) {
  if constexpr (std::is_same_v<S, Rational>) {
    return v.get_d();
  } else {
    return v;
  }
}

template <class S>
json measure_report(const Graph& g, const EdgeProbability& prob, int k) {
  const auto& cat = Catalog::instance();
  const S p = prob.as<S>();
  const auto census = induced_census(g, k);
  const auto dev = deviation_from_census<S>(census, p);
  json classes = json::array();
  const auto cls = cat.classes(k);
  for (std::size_t i = 0; i < cls.size(); ++i) {
    json row{{"class", cat.name(cls[i])},
             {"count", census.counts[i]},
             {"expected", value(expected_count<S>(cls[i], g.order(), p))},
             {"deviation", value(dev.per_class[i])}};
    if constexpr (std::is_same_v<S, Rational>) row["deviation_exact"] = dev.per_class[i].get_str();
    classes.push_back(row);
  }
  json r{{"n", g.order()},
         {"edges", g.edge_count()},
         {"u_k", value(dev.u_k)},
         {"u_k_argmax", cat.name(cls[dev.argmax])},
         {"classes", classes}};
  if constexpr (std::is_same_v<S, Rational>) r["u_k_exact"] = dev.u_k.get_str();
  if (g.order() >= 2) r["D"] = nearest_integer_distance(g.order(), prob);
  json sums = json::object();
  for (const auto& f : family_Fk(k).members) sums[cat.name(f)] = value(signed_sum<S>(f, g, p));
  r["signed_sums"] = sums;
  return r;
}

template <class S>
json identities_report(const Graph& g, const EdgeProbability& prob, int k) {
  const auto& cat = Catalog::instance();
  const S p = prob.as<S>();
  json decomposition = json::object();
  S worst = 0;
  for (const auto& h : cat.classes(k)) {
    const auto dc = decomposition_coefficients(h, g.order());
    const S r = decomposition_residual<S>(dc, g, p);
    decomposition[cat.name(h)] = value(r);
    worst = std::max<S>(worst, r < 0 ? S(-r) : r);
  }
  const auto q = quadratic_identities_check<S>(g, p);
  json r{{"decomposition_residuals", decomposition},
         {"decomposition_max_abs", value(worst)},
         {"edge_square_residual", value(q.edge_square_residual)},
         {"signed_square_residual", value(q.signed_residual)},
         {"S_K2", value(q.s_k2)},
         {"S_P2", value(q.s_p2)},
         {"S_2K2", value(q.s_2k2)}};
  return r;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidArgument, "malformed integer list '" + text + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::kInvalidArgument, "empty integer list");
  return out;
}

struct ConstructFlags {
  int k = 4;
  double eps = 0.005;
  double cap_c = 0.25;
  int retries = 20;
  int budget = -1;
};

void add_construct_flags(CLI::App* app, ConstructFlags& f) {
  app->add_option("--k", f.k, "family order (3..5)")->capture_default_str();
  app->add_option("--eps", f.eps, "property constant epsilon")->capture_default_str();
  app->add_option("--cap-c", f.cap_c, "reservoir constant C")->capture_default_str();
  app->add_option("--retries", f.retries, "resampling attempts")->capture_default_str();
  app->add_option("--budget", f.budget, "phase-2 swap budget (default ceil(2 sqrt(p) n))");
}

ConstructOptions construct_options(int n, const EdgeProbability& p, std::uint64_t seed,
                                   const ConstructFlags& f) {
  ConstructOptions o;
  o.n = n;
  o.p = p;
  o.k = f.k;
  o.seed = seed;
  o.eps = f.eps;
  o.cap_c = f.cap_c;
  o.max_retries = f.retries;
  if (f.budget >= 0) o.budget = f.budget;
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasirandom graph toolkit"};
  app.require_subcommand(1);

  std::string p_text = "1/2";
  std::uint64_t seed = 0;
  std::string report_path;

  // construct
  auto* construct_cmd = app.add_subcommand("construct", "build a graph with small u_k");
  int c_n = 0;
  std::string c_out;
  bool c_trajectory = false;
  ConstructFlags c_flags;
  construct_cmd->add_option("--n", c_n, "order")->required();
  construct_cmd->add_option("--p", p_text, "edge probability, decimal or a/b")->capture_default_str();
  construct_cmd->add_option("--seed", seed, "sampling seed")->required();
  add_construct_flags(construct_cmd, c_flags);
  construct_cmd->add_option("--out", c_out, "write the graph (graph6)");
  construct_cmd->add_option("--report", report_path, "write the JSON report here instead of stdout");
  construct_cmd->add_flag("--trajectory", c_trajectory, "keep the per-step trajectory in the report");

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "census, deviations and signed sums of a graph");
  std::string m_in;
  int m_k = 4;
  measure_cmd->add_option("--in", m_in, "graph file (graph6)")->required()->check(CLI::ExistingFile);
  measure_cmd->add_option("--p", p_text, "edge probability")->capture_default_str();
  measure_cmd->add_option("--k", m_k, "census order")->capture_default_str();
  measure_cmd->add_option("--report", report_path, "write the JSON report here");

  // identities
  auto* ident_cmd = app.add_subcommand("identities", "decomposition and quadratic identity residuals");
  std::string i_in;
  int i_n = 0;
  int i_k = 4;
  double i_density = 0.5;
  ident_cmd->add_option("--in", i_in, "graph file")->check(CLI::ExistingFile);
  ident_cmd->add_option("--n", i_n, "sample G(n, density) instead of reading a file");
  ident_cmd->add_option("--density", i_density, "sampling density")->capture_default_str();
  ident_cmd->add_option("--seed", seed, "sampling seed");
  ident_cmd->add_option("--p", p_text, "edge probability")->capture_default_str();
  ident_cmd->add_option("--k", i_k, "class order for the decomposition (2..4)")->capture_default_str();
  ident_cmd->add_option("--report", report_path, "write the JSON report here");

  // schatten
  auto* sch_cmd = app.add_subcommand("schatten", "Schatten and bipartite norms of M = A - pJ");
  int s_n = 0;
  int s_s = 4;
  std::string s_construction = "empty";
  std::string s_in;
  std::string s_bipartite;
  sch_cmd->add_option("--n", s_n, "order (empty, looprandom)");
  sch_cmd->add_option("--p", p_text, "edge probability")->capture_default_str();
  sch_cmd->add_option("--s", s_s, "even exponent >= 4")->capture_default_str();
  sch_cmd->add_option("--construction", s_construction, "empty, looprandom or file")
      ->check(CLI::IsMember({"empty", "looprandom", "file"}))
      ->capture_default_str();
  sch_cmd->add_option("--in", s_in, "graph file for --construction file")->check(CLI::ExistingFile);
  sch_cmd->add_option("--bipartite", s_bipartite, "K_{a,b} norm, given as a,b");
  sch_cmd->add_option("--seed", seed, "seed for looprandom");
  sch_cmd->add_option("--report", report_path, "write the JSON report here");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive searches on tiny orders");
  oracle_cmd->require_subcommand(1);
  auto* o_uk = oracle_cmd->add_subcommand("min-uk", "minimum of u_k over graphs on n <= 7 vertices");
  int o_n = 0;
  int o_k = 2;
  int o_s = 4;
  int o_nmax = 9;
  std::string o_grid = "1/2";
  o_uk->add_option("--n", o_n)->required();
  o_uk->add_option("--p", p_text)->capture_default_str();
  o_uk->add_option("--k", o_k)->capture_default_str();
  auto* o_sch = oracle_cmd->add_subcommand("min-schatten", "minimum Schatten norm over loop-graphs, n <= 5");
  o_sch->add_option("--n", o_n)->required();
  o_sch->add_option("--p", p_text)->capture_default_str();
  o_sch->add_option("--s", o_s)->capture_default_str();
  auto* o_prop = oracle_cmd->add_subcommand("proportional", "graphs with u_3 = 0");
  o_prop->add_option("--p", o_grid, "comma-separated fractions")->capture_default_str();
  o_prop->add_option("--n-max", o_nmax)->capture_default_str();
  for (auto* sub : {o_uk, o_sch, o_prop}) sub->add_option("--report", report_path);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "construct over a grid of (n, seed) and write CSV");
  std::string w_n;
  int w_seeds = 0;
  std::string w_seed_list;
  std::string w_out;
  std::string w_cells;
  int w_jobs = 1;
  ConstructFlags w_flags;
  sweep_cmd->add_option("--n", w_n, "comma-separated orders")->required();
  sweep_cmd->add_option("--p", p_text)->capture_default_str();
  auto* seeds_opt = sweep_cmd->add_option("--seeds", w_seeds, "use seeds 1..N");
  auto* list_opt = sweep_cmd->add_option("--seed-list", w_seed_list, "comma-separated seeds");
  seeds_opt->excludes(list_opt);
  add_construct_flags(sweep_cmd, w_flags);
  sweep_cmd->add_option("--out", w_out, "CSV path (stdout when omitted)");
  sweep_cmd->add_option("--cell-dir", w_cells, "also write one JSON report per cell here");
  sweep_cmd->add_option("--jobs", w_jobs, "cells run concurrently")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("invalid_argument", e.what()).dump() << "\n";
    return 2;
  }

  try {
    const EdgeProbability p = EdgeProbability::parse(p_text);

    if (*construct_cmd) {
      const auto rep = construct(construct_options(c_n, p, seed, c_flags));
      if (!c_out.empty()) write_graph(c_out, rep.graph, GraphFormat::kGraph6);
      json j = rep.to_json();
      if (!c_trajectory) j.erase("trajectory");
      emit(j, report_path, out);
      return 0;
    }

    if (*measure_cmd) {
      const Graph g = read_graph(m_in);
      json r = p.is_exact() ? measure_report<Rational>(g, p, m_k) : measure_report<double>(g, p, m_k);
      r["parameters"] = {{"in", m_in}, {"p", p.to_string()}, {"k", m_k}, {"exact", p.is_exact()}};
      emit(r, report_path, out);
      return 0;
    }

    if (*ident_cmd) {
      Graph g;
      json params{{"p", p.to_string()}, {"k", i_k}, {"exact", p.is_exact()}};
      if (!i_in.empty()) {
        g = read_graph(i_in);
        params["in"] = i_in;
      } else {
        if (i_n <= 0) throw Error(ErrorKind::kInvalidArgument, "give --in or --n");
        if (ident_cmd->count("--seed") == 0) {
          throw Error(ErrorKind::kInvalidArgument, "--seed is required when sampling");
        }
        g = sample_gnp(i_n, EdgeProbability::from_double(i_density), Seed{seed});
        params["n"] = i_n;
        params["density"] = i_density;
        params["seed"] = seed;
      }
      if (i_k < 2 || i_k > 4) throw Error(ErrorKind::kUnsupported, "identities support k in 2..4");
      json r = p.is_exact() ? identities_report<Rational>(g, p, i_k) : identities_report<double>(g, p, i_k);
      r["parameters"] = params;
      emit(r, report_path, out);
      return 0;
    }

    if (*sch_cmd) {
      Graph g;
      json params{{"p", p.value()}, {"construction", s_construction}};
      if (s_construction == "file") {
        if (s_in.empty()) throw Error(ErrorKind::kInvalidArgument, "--construction file needs --in");
        g = read_graph(s_in);
        params["in"] = s_in;
      } else {
        if (s_n <= 0) throw Error(ErrorKind::kInvalidArgument, "--n must be positive");
        params["n"] = s_n;
        if (s_construction == "empty") {
          g = Graph(s_n, true);
        } else {
          if (sch_cmd->count("--seed") == 0) {
            throw Error(ErrorKind::kInvalidArgument, "--seed is required for looprandom");
          }
          g = sample_gnp(s_n, p, Seed{seed}, true);
          params["seed"] = seed;
        }
      }
      json r;
      if (!s_bipartite.empty()) {
        const auto sides = parse_int_list(s_bipartite);
        if (sides.size() != 2) throw Error(ErrorKind::kInvalidArgument, "--bipartite takes a,b");
        params["a"] = sides[0];
        params["b"] = sides[1];
        r["norm"] = bipartite_norm(g, p.value(), sides[0], sides[1]);
      } else {
        params["s"] = s_s;
        r["norm"] = schatten_norm(g, p.value(), s_s);
        const double f = schatten_formula(g.order(), p.value(), s_s);
        r["formula"] = f;
        r["ratio"] = r["norm"].get<double>() / f;
      }
      r["parameters"] = params;
      emit(r, report_path, out);
      return 0;
    }

    if (*oracle_cmd) {
      json r;
      if (*o_uk) {
        r = minimize_u_k(o_n, p, o_k).to_json();
      } else if (*o_sch) {
        r = minimize_schatten(o_n, p.value(), o_s).to_json();
      } else {
        std::vector<Rational> grid;
        std::stringstream ss(o_grid);
        std::string item;
        while (std::getline(ss, item, ',')) grid.push_back(exact_probability(EdgeProbability::parse(item)));
        r = proportional_search(grid, o_nmax).to_json();
      }
      emit(r, report_path, out);
      return 0;
    }

    if (*sweep_cmd) {
      const auto ns = parse_int_list(w_n);
      std::vector<std::uint64_t> seeds;
      if (!w_seed_list.empty()) {
        for (int s : parse_int_list(w_seed_list)) seeds.push_back(static_cast<std::uint64_t>(s));
      } else if (w_seeds > 0) {
        for (int s = 1; s <= w_seeds; ++s) seeds.push_back(s);
      } else {
        throw Error(ErrorKind::kInvalidArgument, "--seeds or --seed-list is required");
      }
      if (w_jobs < 1) throw Error(ErrorKind::kInvalidArgument, "--jobs must be positive");
      if (!w_cells.empty()) fs::create_directories(w_cells);
      const auto family = family_Fk(w_flags.k);
      const auto& cat = Catalog::instance();

      struct Cell {
        int n;
        std::uint64_t seed;
      };
      std::vector<Cell> cells;
      for (int n : ns)
        for (auto s : seeds) cells.push_back({n, s});

      auto run_cell = [&](const Cell& c) {
        std::ostringstream row;
        row.precision(12);
        const double d = nearest_integer_distance(c.n, p);
        row << c.n << ',' << p.to_string() << ',' << c.seed << ',' << w_flags.k << ',';
        json cell_json;
        try {
          const auto rep = construct(construct_options(c.n, p, c.seed, w_flags));
          cell_json = rep.to_json();
          cell_json.erase("trajectory");
          row << "ok,";
          if (rep.u_k) {
            row << *rep.u_k << ',' << *rep.u_k / std::pow(c.n, w_flags.k - 2);
          } else {
            row << ',';
          }
          row << ',' << d;
          for (double v : rep.s_after) {
            row << ',';
            if (!std::isnan(v)) row << v;
          }
          row << ',' << rep.log.phase2_steps << ',' << rep.wall_time_s;
        } catch (const Error& e) {
          cell_json = error_json(std::string(to_string(e.kind())), e.what(), e.diagnostics());
          cell_json["parameters"] = {{"n", c.n}, {"p", p.to_string()}, {"seed", c.seed}};
          row << to_string(e.kind()) << ",,," << d;
          for (std::size_t f = 0; f < family.members.size(); ++f) row << ',';
          row << ",,";
        }
        if (!w_cells.empty()) {
          write_atomic(fs::path(w_cells) / ("n" + std::to_string(c.n) + "_seed" + std::to_string(c.seed) + ".json"),
                       cell_json.dump(2) + "\n");
        }
        return row.str();
      };

      std::vector<std::string> rows(cells.size());
      for (std::size_t start = 0; start < cells.size(); start += w_jobs) {
        std::vector<std::future<std::string>> batch;
        for (std::size_t i = start; i < std::min(cells.size(), start + w_jobs); ++i) {
          batch.push_back(std::async(std::launch::async, run_cell, cells[i]));
        }
        for (std::size_t i = 0; i < batch.size(); ++i) rows[start + i] = batch[i].get();
      }

      std::ostringstream csv;
      csv.precision(12);
      csv << "n,p,seed,k,status,u_k,u_k_scaled,D";
      for (const auto& f : family.members) csv << ",S_" << csv_name(cat.name(f));
      csv << ",phase2_steps,wall_time_s\n";
      for (const auto& r : rows) csv << r << "\n";
      if (w_out.empty()) {
        out << csv.str();
      } else {
        write_atomic(w_out, csv.str());
      }
      return 0;
    }
  } catch (const Error& e) {
    err << error_json(std::string(to_string(e.kind())), e.what(), e.diagnostics()).dump() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()).dump() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace quasirand::cli
