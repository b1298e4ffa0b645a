//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "treelat/graph_io.hpp"
#include "treelat/grouping.hpp"
#include "treelat/growth.hpp"
#include "treelat/realize.hpp"
#include "treelat/star_tree.hpp"

using namespace treelat;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitPrecondition = 4;

void emit(const Json &j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::uint64_t> parse_list(const std::string &text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(item, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != item.size())
        throw parse_error("bad integer '" + item + "'");
      out.push_back(v);
    }
  return out;
}

// "prefix;period", for example ";3,6" or "4;6".
AdmissibleSequence parse_sequence(std::uint64_t n, const std::string &text) {
  if (text.empty())
    return AdmissibleSequence::canonical(n);
  auto semi = text.find(';');
  if (semi == std::string::npos)
    throw parse_error("sequence needs the form prefix;period");
  AdmissibleSequence s(n, parse_list(text.substr(0, semi)),
                       parse_list(text.substr(semi + 1)));
  if (auto v = s.violations(); !v.empty())
    throw precondition_error("NotAdmissible", v.front());
  return s;
}

Rational parse_kappa(const std::string &text) { return parse_rational(text); }

// Star-tree source shared by several subcommands.
struct SpecSource {
  std::string startree = "ray";
  std::string spec_file;
  std::uint64_t m = 4;
  std::uint64_t n = 3;
  std::string sequence;

  void add(CLI::App *app) {
    app->add_option("--startree", startree,
                    "ray, star, or Tf:<growth> (ignored with --spec)");
    app->add_option("--spec", spec_file, "star-tree spec JSON");
    app->add_option("--m", m, "degree of V0 vertices");
    app->add_option("--n", n, "degree of V1 vertices");
    app->add_option("--s", sequence,
                    "admissible sequence as prefix;period (default s = n)");
  }

  StarTreeSpec spec() const {
    if (!spec_file.empty())
      return spec_from_json(read_json_file(spec_file));
    if (startree == "ray")
      return build_star_ray(m);
    if (startree == "star")
      return build_single_star(m);
    if (startree.rfind("Tf:", 0) == 0)
      return build_Tf(GrowthFunction::parse(startree.substr(3)), m);
    throw parse_error("unknown star tree '" + startree + "'");
  }

  AdmissibleSequence seq(const StarTreeSpec &spec) const {
    if (sequence.empty() && spec.rule && spec.rule->weights)
      return spec.rule->weights->sequence();
    return parse_sequence(n, sequence);
  }
};

Json string_list(const std::vector<std::string> &v) {
  Json a = Json::array();
  for (const auto &s : v)
    a.push_back(s);
  return a;
}

Json integer_list(const std::vector<Integer> &v) {
  Json a = Json::array();
  for (const auto &x : v)
    a.push_back(x.get_str());
  return a;
}

int run_validate(const std::string &graph_file, const std::string &spec_file,
                 const std::string &cover_file, std::int64_t m,
                 std::int64_t n) {
  Json out;
  std::vector<std::string> problems;
  if (!graph_file.empty()) {
    auto g = graph_from_json(read_json_file(graph_file));
    out["vertices"] = g.vertex_count();
    out["edges"] = g.edge_count() / 2;
    out["unimodular"] = is_unimodular(g);
    if (m > 0 && n > 0) {
      auto v = biregularity_violations(g, m, n);
      problems.insert(problems.end(), v.begin(), v.end());
    }
  }
  if (!spec_file.empty()) {
    auto spec = spec_from_json(read_json_file(spec_file));
    auto v = spec_violations(spec);
    problems.insert(problems.end(), v.begin(), v.end());
    out["spec"] = spec_to_json(spec);
  }
  if (!cover_file.empty()) {
    auto c = cover_from_json(read_json_file(cover_file));
    auto v = verify_cover(c);
    problems.insert(problems.end(), v.begin(), v.end());
  }
  out["valid"] = problems.empty();
  out["violations"] = string_list(problems);
  emit(out);
  return problems.empty() ? 0 : kExitInvariant;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"treelat: edge-indexed graphs, groupings and tree lattices"};
  app.require_subcommand(1);

  // validate
  std::string graph_file, spec_file, cover_file;
  std::int64_t vm = 0, vn = 0;
  auto *validate = app.add_subcommand("validate", "check a graph, spec or cover");
  validate->add_option("--graph", graph_file);
  validate->add_option("--spec", spec_file);
  validate->add_option("--cover", cover_file);
  validate->add_option("--m", vm, "also check the local X_{m,n} criterion");
  validate->add_option("--n", vn);

  // order
  std::string order_graph, base_id, base_value = "1";
  bool minimal = false;
  auto *order = app.add_subcommand("order", "compute the ordering N");
  order->add_option("--graph", order_graph)->required();
  order->add_option("--base", base_id, "base vertex id (default: first)");
  order->add_option("--value", base_value, "N(base)");
  order->add_flag("--minimal", minimal, "rescale to the minimal integral ordering");

  // cover-check / cover-degree
  std::string cc_file, cd_file;
  auto *cover_check = app.add_subcommand("cover-check", "verify a cover map");
  cover_check->add_option("--cover", cc_file)->required();
  auto *cover_degree_cmd =
      app.add_subcommand("cover-degree", "degree of a cover map");
  cover_degree_cmd->add_option("--cover", cd_file)->required();

  // startree
  SpecSource st_src;
  std::size_t st_depth = 4;
  bool st_canonical_only = false;
  auto *startree = app.add_subcommand("startree", "build and truncate a star tree");
  st_src.add(startree);
  startree->add_option("--depth", st_depth);
  startree->add_flag("--spec-only", st_canonical_only, "print only the spec");

  // covolume
  SpecSource cv_src;
  std::string cv_selector = "v0", cv_graph, cv_base;
  std::size_t cv_depth = 30;
  auto *covolume_cmd = app.add_subcommand("covolume", "exact covolume");
  cv_src.add(covolume_cmd);
  covolume_cmd->add_option("--selector", cv_selector)
      ->check(CLI::IsMember({"v0", "v1", "all"}));
  covolume_cmd->add_option("--depth", cv_depth, "truncation depth for bounds");
  covolume_cmd->add_option("--graph", cv_graph, "finite graph instead of a star tree");
  covolume_cmd->add_option("--base", cv_base);

  // realize
  std::string rz_kappa, rz_f, rz_seq;
  std::uint64_t rz_m = 4, rz_n = 3, rz_seed = 0;
  std::size_t rz_samples = 0, rz_radius = 20;
  bool rz_full = false;
  auto *realize = app.add_subcommand("realize", "realize a covolume");
  realize->add_option("--kappa", rz_kappa)->required();
  realize->add_option("--f", rz_f, "quotient growth function, e.g. exp:3/2");
  realize->add_option("--m", rz_m);
  realize->add_option("--n", rz_n);
  realize->add_option("--s", rz_seq, "admissible sequence prefix;period");
  realize->add_flag("--full", rz_full, "use the sequence-indexed construction");
  realize->add_option("--radius", rz_radius, "growth tabulation radius");
  realize->add_option("--seed", rz_seed, "sampler seed");
  realize->add_option("--samples", rz_samples,
                      "draw this many distinct digit sequences instead");

  // shrink
  SpecSource sh_src;
  std::size_t sh_k = 1, sh_depth = 0;
  bool sh_grouping = false;
  auto *shrink = app.add_subcommand("shrink", "divide the covolume by |H|");
  sh_src.add(shrink);
  shrink->add_option("--k", sh_k, "tower level");
  shrink->add_option("--depth", sh_depth, "truncation depth (default k + 2)");
  shrink->add_flag("--grouping", sh_grouping, "include the finite grouping");

  // growth
  std::string gr_f, gr_g, gr_stab;
  SpecSource gr_src;
  std::size_t gr_range = 48, gr_radius = 0;
  bool gr_v0 = false;
  auto *growth = app.add_subcommand("growth", "growth functions and comparisons");
  growth->add_option("--f", gr_f, "growth function");
  growth->add_option("--g", gr_g, "second function for preceq / equivalence");
  growth->add_option("--range", gr_range);
  growth->add_option("--radius", gr_radius,
                     "tabulate ball growth of a star tree to this radius");
  growth->add_flag("--v0-only", gr_v0, "stabilizer growth over V0 only");
  gr_src.add(growth);
  growth->add_option("--stabilizer", gr_stab,
                     "tabulate stabilizer growth: 'levels' or 'graph'");

  // export
  SpecSource ex_src;
  std::string ex_graph, ex_format = "json";
  std::size_t ex_depth = 3;
  bool ex_order = false;
  auto *export_cmd = app.add_subcommand("export", "export a graph as JSON or DOT");
  ex_src.add(export_cmd);
  export_cmd->add_option("--graph", ex_graph);
  export_cmd->add_option("--depth", ex_depth);
  export_cmd->add_option("--format", ex_format)
      ->check(CLI::IsMember({"json", "dot"}));
  export_cmd->add_flag("--ordering", ex_order, "label vertices with N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    if (*validate)
      return run_validate(graph_file, spec_file, cover_file, vm, vn);

    if (*order) {
      auto g = graph_from_json(read_json_file(order_graph));
      const VertexId base = base_id.empty() ? 0 : g.vertex_by_id(base_id);
      Ordering o = compute_ordering(g, base, parse_rational(base_value));
      if (minimal)
        o = minimal_integral_ordering(o);
      emit(ordering_to_json(g, o));
      return 0;
    }

    if (*cover_check) {
      auto c = cover_from_json(read_json_file(cc_file));
      auto v = verify_cover(c);
      emit({{"valid", v.empty()}, {"violations", string_list(v)}});
      return v.empty() ? 0 : kExitInvariant;
    }

    if (*cover_degree_cmd) {
      auto c = cover_from_json(read_json_file(cd_file));
      std::cout << cover_degree(c) << "\n";
      return 0;
    }

    if (*startree) {
      auto spec = st_src.spec();
      if (auto v = spec_violations(spec); !v.empty())
        throw invariant_error("InvalidSpec", v.front());
      Json out;
      out["spec"] = spec_to_json(spec);
      out["level_counts"] = integer_list(level_counts(spec, st_depth));
      if (!st_canonical_only) {
        auto s = st_src.seq(spec);
        auto t = admissible_indexing(spec, s, st_depth);
        out["depth"] = st_depth;
        out["graph"] = graph_to_json(t.graph);
        out["ordering"] =
            ordering_to_json(t.graph, compute_ordering(t.graph, t.base));
      }
      emit(out);
      return 0;
    }

    if (*covolume_cmd) {
      const Selector sel = Selector::parse(cv_selector);
      if (!cv_graph.empty()) {
        auto g = graph_from_json(read_json_file(cv_graph));
        const VertexId base = cv_base.empty() ? 0 : g.vertex_by_id(cv_base);
        std::cout << to_string(covolume(g, compute_ordering(g, base), sel))
                  << "\n";
        return 0;
      }
      auto spec = cv_src.spec();
      auto s = cv_src.seq(spec);
      auto rep = covolume(spec, s, sel, cv_depth);
      if (rep.exact) {
        std::cout << to_string(*rep.exact) << "\n";
        return 0;
      }
      emit({{"interval", to_string(rep.interval)},
            {"depth", rep.depth},
            {"tail_bound", rep.tail_bound}});
      return 0;
    }

    if (*realize) {
      const Rational kappa = parse_kappa(rz_kappa);
      auto s = parse_sequence(rz_n, rz_seq);
      if (rz_samples > 0) {
        const Weights h(s);
        const Rational rho = kappa - h.kappa0();
        if (rho <= 0)
          throw precondition_error("BelowKappa0",
                                   "the sampler needs kappa > kappa0");
        const auto bound = default_digit_bound(h, rho);
        Json out;
        out["seed"] = rz_seed;
        out["rho"] = to_string(rho);
        out["bound"] = bound;
        Json list = Json::array();
        for (const auto &d :
             sample_digit_sequences(rho, h, bound, rz_samples, rz_seed))
          list.push_back(digit_sequence_to_json(d));
        out["sequences"] = list;
        emit(out);
        return 0;
      }
      Realization r =
          rz_f.empty() ? realize_covolume(kappa, rz_m, rz_n)
          : rz_full
              ? realize_full(kappa, GrowthFunction::parse(rz_f), s, rz_m)
              : realize_covolume_growth(kappa, GrowthFunction::parse(rz_f),
                                        rz_m, rz_n);
      Json out = realization_report(r, rz_radius);
      out["spec"] = spec_to_json(r.spec);
      emit(out);
      return 0;
    }

    if (*shrink) {
      auto spec = sh_src.spec();
      auto s = sh_src.seq(spec);
      const std::size_t depth = sh_depth ? sh_depth : sh_k + 2;
      auto res = shrink_covolume(spec, s, sh_k, depth);
      Json out;
      out["k"] = sh_k;
      out["units"] = res.units.get_str();
      out["modulus"] = res.tower->modulus();
      if (res.covolume)
        out["covolume"] = to_string(*res.covolume);
      out["interval"] = to_string(res.interval);
      if (res.tower->modulus() <= 4096)
        out["tower"] = tower_report_to_json(verify_tower(*res.tower, sh_k + 1));
      if (sh_grouping)
        out["grouping"] = grouping_to_json(res.grouping);
      emit(out);
      return 0;
    }

    if (*growth) {
      Json out;
      CompareOptions opt;
      opt.range = gr_range;
      if (!gr_f.empty()) {
        auto f = GrowthFunction::parse(gr_f);
        out["f"] = growth_to_json(f);
        out["table"] = integer_list(f.table(std::min<std::size_t>(gr_range, 24)));
        auto acc = is_acceptable(f);
        out["acceptable"] = {{"value", to_string(acc.value)},
                             {"reasons", string_list(acc.reasons)}};
        if (!gr_g.empty()) {
          auto g = GrowthFunction::parse(gr_g);
          out["g"] = growth_to_json(g);
          out["equivalence"] = equivalence_to_json(equivalent(f, g, opt));
        }
      }
      if (gr_radius > 0) {
        auto spec = gr_src.spec();
        out["ball"] = integer_list(ball_growth_levels(spec, gr_radius));
        if (!gr_stab.empty()) {
          auto s = gr_src.seq(spec);
          if (gr_stab == "levels") {
            out["stabilizer"] = integer_list(
                stabilizer_growth_levels(spec, s, gr_radius, gr_v0));
          } else if (gr_stab == "graph") {
            // Half-edge radius r needs combinatorial depth about r.
            auto t = admissible_indexing(spec, s, gr_radius + 1);
            auto g = stabilizer_growth(t.graph,
                                       compute_ordering(t.graph, t.base),
                                       t.base, gr_radius, gr_v0);
            out["stabilizer"] = integer_list(g.values());
          } else {
            throw parse_error("--stabilizer takes 'levels' or 'graph'");
          }
        }
      }
      if (out.empty())
        throw parse_error("growth needs --f or --radius");
      emit(out);
      return 0;
    }

    if (*export_cmd) {
      EdgeIndexedGraph g;
      VertexId base = 0;
      if (!ex_graph.empty()) {
        g = graph_from_json(read_json_file(ex_graph));
      } else {
        auto spec = ex_src.spec();
        auto t = admissible_indexing(spec, ex_src.seq(spec), ex_depth);
        g = t.graph;
        base = t.base;
      }
      std::optional<Ordering> o;
      if (ex_order)
        o = compute_ordering(g, base);
      if (ex_format == "dot")
        std::cout << graph_to_dot(g, o);
      else if (o)
        emit({{"graph", graph_to_json(g)}, {"ordering", ordering_to_json(g, *o)}});
      else
        emit(graph_to_json(g));
      return 0;
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
    case Error::Kind::parse:
      return kExitParse;
    case Error::Kind::invariant:
      return kExitInvariant;
    case Error::Kind::precondition:
      return kExitPrecondition;
    }
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
