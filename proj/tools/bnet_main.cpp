// bnet: generate instances, run exact / mini-bucket solvers, benchmark.

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mbe/bnet_io.hpp"
#include "mbe/error.hpp"
#include "mbe/generators.hpp"
#include "mbe/minibucket.hpp"
#include "mbe/report.hpp"
#include "mbe/search.hpp"

namespace fs = std::filesystem;
using namespace mbe;

namespace {

enum Exit { ok = 0, generic = 1, usage = 2, parse = 3, resource = 4, infeasible = 5 };

std::size_t mem_cells() {
  const char* env = std::getenv("BNET_MEM_CELLS");
  if (!env || !*env) return kDefaultMaxCells;
  std::size_t v = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
    throw InvalidArgument("BNET_MEM_CELLS must be a positive integer");
  }
  return v;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::map<std::string, OrderingStrategy> kOrderings{
    {"min_fill", OrderingStrategy::min_fill},
    {"min_degree", OrderingStrategy::min_degree},
    {"given", OrderingStrategy::given}};

// -------------------------------------------------------------------- gen

struct GenArgs {
  std::string kind = "uniform";
  std::size_t nodes = 30, edges = 80, count = 1, evidence = 0;
  int card = 2;
  std::uint64_t seed = 1;
  std::string policy = "positive_ones";
  std::string out = ".";
};

int cmd_gen(const GenArgs& a) {
  GenSpec spec;
  spec.n = a.nodes;
  spec.e = a.edges;
  spec.cardinality = a.card;
  spec.kind = a.kind == "uniform" ? NetworkKind::uniform : NetworkKind::noisy_or;
  spec.validate();
  const EvidencePolicy policy =
      a.policy == "sampled" ? EvidencePolicy::sampled : EvidencePolicy::positive_ones;
  fs::create_directories(a.out);
  std::ofstream manifest(fs::path(a.out) / "manifest.txt");
  for (std::size_t k = 0; k < a.count; ++k) {
    spec.seed = a.seed + k;
    NetworkFile file;
    file.network = generate(spec);
    file.evidence = gen_evidence(file.network, a.evidence, policy, spec.seed);
    file.meta = NetworkMeta{spec.seed, spec.kind};
    const std::string name = "inst_" + std::to_string(spec.seed) + ".bnet";
    save_network(file, fs::path(a.out) / name);
    manifest << spec.seed << ' ' << name << '\n';
  }
  if (!manifest) throw InvalidArgument("cannot write manifest in " + a.out);
  return ok;
}

// ------------------------------------------------------------------ solve

struct SolveArgs {
  std::string file;
  std::string task = "mpe";
  bool exact = false, approx = false, search = false, superbuckets = false, strict_i = false;
  std::size_t i = MiniBucketConfig::unbounded, m = MiniBucketConfig::unbounded;
  std::string strategy;
  std::string ordering = "min_fill";
  std::vector<VarId> order;
  int query = 0;
  std::vector<VarId> hyp;
};

Ordering solve_ordering(const SolveArgs& a, const NetworkFile& f, std::vector<VarId> first) {
  Ordering d;
  if (!a.order.empty()) {
    d = Ordering(a.order);
  } else if (a.ordering == "legal") {
    d = legal_ordering(f.network, f.evidence);
  } else {
    d = find_ordering(moral_graph(f.network), kOrderings.at(a.ordering));
  }
  return first.empty() ? d : move_to_front(d, first);
}

int cmd_solve(SolveArgs a) {
  if (!a.exact && !a.approx && !a.search) a.exact = true;
  const NetworkFile f = load_network_file(a.file);
  const BeliefNetwork& bn = f.network;
  const Evidence& e = f.evidence;

  ElimOptions opts;
  opts.max_cells = mem_cells();

  MiniBucketConfig cfg;
  cfg.i = a.i;
  cfg.m = a.m;
  cfg.strict = a.strict_i;
  if (a.strategy.empty()) {
    cfg.strategy = a.i != MiniBucketConfig::unbounded ? PartitionStrategy::by_i : PartitionStrategy::by_m;
  } else {
    cfg.strategy = a.strategy == "by_m" ? PartitionStrategy::by_m : PartitionStrategy::by_i;
  }

  StatRow row;
  row.instance = fs::path(a.file).stem().string();
  row.task = a.task;
  row.strategy = a.search ? "best_first" : a.approx ? to_string(cfg.strategy) : "exact";
  if (a.approx || a.search) {
    row.i = cfg.i;
    row.m = cfg.m;
  }
  row.ordering = a.order.empty() ? a.ordering : "given";
  row.fi = bn.max_family_size();

  std::vector<VarId> first;
  if (a.task == "bel") first = {a.query};
  if (a.task == "map") first = a.hyp;
  const Ordering d = solve_ordering(a, f, first);

  if (a.task == "mpe") {
    opts.super_buckets = a.superbuckets;
    if (a.exact) {
      const auto t0 = std::chrono::steady_clock::now();
      const MpeResult r = elim_mpe(bn, e, d, opts);
      row.te = quantize_seconds(since(t0));
      row.exact = r.value;
      row.fo = r.trace.max_arity;
      row.mb = 1;
    }
    if (a.search) {
      const auto t0 = std::chrono::steady_clock::now();
      const SearchResult r = best_first_mpe(bn, e, d, cfg, opts);
      row.ta = quantize_seconds(since(t0));
      row.upper = r.heuristic_upper;
      row.lower = r.value;
      if (!row.exact) row.exact = r.value;
      std::cerr << "expanded " << r.stats.expanded << " generated " << r.stats.generated
                << " peak_frontier " << r.stats.peak_frontier << '\n';
    } else if (a.approx) {
      const auto t0 = std::chrono::steady_clock::now();
      const BoundsResult r = approx_mpe(bn, e, d, cfg, opts);
      row.ta = quantize_seconds(since(t0));
      row.upper = r.upper;
      row.lower = r.lower;
      row.mb = r.diag.mb;
      row.fo = r.diag.fo;
    }
  } else if (a.task == "bel") {
    if (a.search) throw InvalidArgument("--search applies to mpe only");
    if (a.exact) {
      const auto t0 = std::chrono::steady_clock::now();
      const BelResult r = elim_bel(bn, e, d, a.query, opts);
      row.te = quantize_seconds(since(t0));
      row.exact = r.p_evidence;
      row.fo = r.trace.max_arity;
      row.mb = 1;
      std::cerr << "posterior";
      for (double p : r.posterior()) std::cerr << ' ' << p;
      std::cerr << '\n';
    }
    if (a.approx) {
      const auto t0 = std::chrono::steady_clock::now();
      const BelBound up = approx_bel(bn, e, d, a.query, cfg, BoundMode::upper, opts);
      const BelBound lo = approx_bel(bn, e, d, a.query, cfg, BoundMode::lower, opts);
      row.ta = quantize_seconds(since(t0));
      row.upper = up.p_evidence_bound;
      row.lower = lo.p_evidence_bound;
      row.mb = up.diag.mb;
      row.fo = up.diag.fo;
    }
  } else if (a.task == "map") {
    if (a.search) throw InvalidArgument("--search applies to mpe only");
    if (a.exact) {
      const auto t0 = std::chrono::steady_clock::now();
      const MapResult r = elim_map(bn, e, d, a.hyp, opts);
      row.te = quantize_seconds(since(t0));
      row.exact = r.value;
      row.fo = r.trace.max_arity;
      row.mb = 1;
    }
    if (a.approx) {
      const auto t0 = std::chrono::steady_clock::now();
      const BoundsResult r = approx_map(bn, e, d, a.hyp, cfg, opts);
      row.ta = quantize_seconds(since(t0));
      row.upper = r.upper;
      if (r.has_lower) row.lower = r.lower;
      row.mb = r.diag.mb;
      row.fo = r.diag.fo;
    }
  } else {
    throw InvalidArgument("unknown task " + a.task);
  }

  if (row.upper) row.ratios = bound_ratios(row.exact, *row.upper, row.lower.value_or(0.0));
  if (row.upper && !row.lower) row.ratios.ml = row.ratios.ul = std::numeric_limits<double>::quiet_NaN();
  if (row.te && row.ta) row.tr = *row.te / *row.ta;
  std::cout << kCsvHeader << '\n' << csv_row(row) << '\n';
  return ok;
}

// ------------------------------------------------------------------ bench

struct BenchArgs {
  std::string manifest;
  std::vector<std::size_t> is, ms;
  std::string ordering = "min_fill";
  bool no_exact = false;
  int threads = 1;
  std::string out, summary;
};

int cmd_bench(const BenchArgs& a) {
  const fs::path mpath(a.manifest);
  std::ifstream in(mpath);
  if (!in) throw InvalidArgument("cannot open manifest " + a.manifest);
  std::vector<BenchInstance> instances;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string seed, file;
    if (!(ls >> seed)) continue;
    if (!(ls >> file)) file = seed;
    const fs::path p = mpath.parent_path() / file;
    if (!fs::exists(p)) throw InvalidArgument("missing instance " + p.string());
    instances.push_back({fs::path(file).stem().string(), load_network_file(p)});
  }

  BenchOptions opts;
  for (std::size_t i : a.is) opts.grid.push_back(MiniBucketConfig::by_i(i));
  for (std::size_t m : a.ms) opts.grid.push_back(MiniBucketConfig::by_m(m));
  if (opts.grid.empty()) throw InvalidArgument("bench needs --i and/or --m values");
  opts.ordering = kOrderings.at(a.ordering);
  opts.exact = !a.no_exact;
  opts.threads = a.threads;
  opts.elim.max_cells = mem_cells();

  const auto rows = run_bench(instances, opts);
  if (a.out.empty()) {
    write_csv(std::cout, rows);
  } else {
    std::ofstream os(a.out);
    write_csv(os, rows);
    if (!os) throw InvalidArgument("cannot write " + a.out);
  }
  const auto summaries = summarize(rows);
  if (a.summary.empty()) {
    write_summary(std::cerr, summaries);
  } else {
    std::ofstream os(a.summary);
    write_summary(os, summaries);
    if (!os) throw InvalidArgument("cannot write " + a.summary);
  }
  return ok;
}

// ------------------------------------------------------------------ width

int cmd_width(const std::string& file, const std::string& ordering, const std::vector<VarId>& order) {
  const NetworkFile f = load_network_file(file);
  const UndirectedGraph g = moral_graph(f.network);
  const Ordering d = order.empty() ? find_ordering(g, kOrderings.at(ordering)) : Ordering(order);
  const Widths w = induced_width(g, d);
  std::cout << "ordering " << d.str() << "\nwidth " << w.width << "\ninduced_width "
            << w.induced_width << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bucket and mini-bucket elimination for belief networks"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate random networks");
  g->add_option("--kind", gen.kind)
      ->transform(CLI::Transformer(std::map<std::string, std::string>{{"noisy-or", "noisy_or"}}))
      ->check(CLI::IsMember({"uniform", "noisy_or"}));
  g->add_option("--nodes", gen.nodes, "number of variables");
  g->add_option("--edges", gen.edges, "number of directed edges");
  g->add_option("--card", gen.card, "domain size (uniform only)");
  g->add_option("--count", gen.count, "instances; seeds run seed..seed+count-1");
  g->add_option("--seed", gen.seed);
  g->add_option("--evidence", gen.evidence, "number of observed variables");
  g->add_option("--evidence-policy", gen.policy)->check(CLI::IsMember({"positive_ones", "sampled"}));
  g->add_option("--out", gen.out, "output directory");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "solve one network file, print a CSV row");
  s->add_option("file", solve.file)->required()->check(CLI::ExistingFile);
  s->add_option("--task", solve.task)->check(CLI::IsMember({"mpe", "bel", "map"}));
  s->add_flag("--exact", solve.exact, "bucket elimination");
  s->add_flag("--approx", solve.approx, "mini-bucket bounds");
  s->add_flag("--search", solve.search, "best-first mpe search with a mini-bucket heuristic");
  s->add_option("--i", solve.i, "variables per mini-bucket besides the eliminated one");
  s->add_option("--m", solve.m, "nonsubsumed functions per mini-bucket");
  s->add_option("--strategy", solve.strategy)->check(CLI::IsMember({"by_i", "by_m"}));
  s->add_flag("--superbuckets", solve.superbuckets, "merge consecutive same-family buckets (mpe)");
  s->add_flag("--strict-i", solve.strict_i, "reject an i below some function scope");
  s->add_option("--ordering", solve.ordering)
      ->check(CLI::IsMember({"min_fill", "min_degree", "given", "legal"}));
  s->add_option("--order", solve.order, "explicit ordering, first position first")->delimiter(',');
  s->add_option("--query", solve.query, "bel query variable");
  s->add_option("--hyp", solve.hyp, "map hypothesis variables")->delimiter(',');

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "run exact and approx-mpe over a manifest");
  b->add_option("--manifest", bench.manifest)->required()->check(CLI::ExistingFile);
  b->add_option("--i", bench.is, "i grid (strategy by_i)")->delimiter(',');
  b->add_option("--m", bench.ms, "m grid (strategy by_m)")->delimiter(',');
  b->add_option("--ordering", bench.ordering)
      ->check(CLI::IsMember({"min_fill", "min_degree", "given"}));
  b->add_flag("--no-exact", bench.no_exact, "skip elim-mpe; report U/L only");
  b->add_option("--threads", bench.threads, "instances solved in parallel")->check(CLI::PositiveNumber);
  b->add_option("--out", bench.out, "CSV rows (default stdout)");
  b->add_option("--summary", bench.summary, "means and histograms (default stderr)");

  std::string wfile, wordering = "min_fill";
  std::vector<VarId> worder;
  auto* w = app.add_subcommand("width", "print w(d) and w*(d)");
  w->add_option("file", wfile)->required()->check(CLI::ExistingFile);
  w->add_option("--ordering", wordering)->check(CLI::IsMember({"min_fill", "min_degree", "given"}));
  w->add_option("--order", worder)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex) == 0 ? ok : usage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*b) return cmd_bench(bench);
    if (*w) return cmd_width(wfile, wordering, worder);
  } catch (const ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << '\n';
    return parse;
  } catch (const ResourceError& ex) {
    std::cerr << "resource error: " << ex.what() << '\n';
    return resource;
  } catch (const InfeasibleConfig& ex) {
    std::cerr << "infeasible configuration: " << ex.what() << '\n';
    return infeasible;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return generic;
  }
  return generic;
}
