#include "mbe/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mbe/error.hpp"

namespace mbe {

double quantize_seconds(double seconds) {
  const double ms = std::max(1.0, std::ceil(seconds * 1000.0 - 1e-9));
  return ms / 1000.0;
}

const char* to_string(OrderingStrategy s) {
  switch (s) {
    case OrderingStrategy::min_degree: return "min_degree";
    case OrderingStrategy::min_fill: return "min_fill";
    case OrderingStrategy::given: return "given";
  }
  return "?";
}

std::string format_size(std::size_t v) {
  return v == MiniBucketConfig::unbounded ? "inf" : std::to_string(v);
}

namespace {

std::string num(std::optional<double> v, const char* spec = "%.17g") {
  if (!v || std::isnan(*v)) return "";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, *v);
  return buf;
}

}  // namespace

std::string csv_row(const StatRow& r) {
  std::string s = r.instance;
  s += "," + r.task + "," + r.strategy + "," + format_size(r.i) + "," + format_size(r.m);
  s += "," + num(r.exact) + "," + num(r.upper) + "," + num(r.lower);
  s += "," + num(r.ratios.ml, "%.10g") + "," + num(r.ratios.um, "%.10g") + "," +
       num(r.ratios.ul, "%.10g");
  s += "," + num(r.tr, "%.6g") + "," + num(r.ta, "%.3f") + "," + num(r.te, "%.3f");
  s += "," + std::to_string(r.mb) + "," + std::to_string(r.fi) + "," + std::to_string(r.fo);
  s += "," + r.ordering;
  return s;
}

void write_csv(std::ostream& os, const std::vector<StatRow>& rows) {
  os << kCsvHeader << '\n';
  for (const StatRow& r : rows) os << csv_row(r) << '\n';
}

std::size_t histogram_bin(double r) {
  if (std::isnan(r)) throw InvalidArgument("cannot bin a missing ratio");
  if (r <= 1.0 + 1e-9) return 0;
  if (r <= 2.0) return 1;
  if (r <= 3.0) return 2;
  if (r <= 4.0) return 3;
  return 4;
}

std::vector<HistogramBin> histogram(const std::vector<double>& ratios,
                                    const std::vector<double>& trs) {
  std::vector<HistogramBin> bins{{"1"}, {"(1,2]"}, {"(2,3]"}, {"(3,4]"}, {"(4,inf]"}};
  std::vector<double> tr_sum(bins.size(), 0.0);
  std::vector<std::size_t> tr_count(bins.size(), 0);
  std::size_t total = 0;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (std::isnan(ratios[k])) continue;
    const std::size_t b = histogram_bin(ratios[k]);
    ++bins[b].count;
    ++total;
    if (k < trs.size() && !std::isnan(trs[k])) {
      tr_sum[b] += trs[k];
      ++tr_count[b];
    }
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bins[b].percent = total ? 100.0 * static_cast<double>(bins[b].count) / static_cast<double>(total) : 0.0;
    bins[b].mean_tr = tr_count[b] ? tr_sum[b] / static_cast<double>(tr_count[b])
                                  : std::numeric_limits<double>::quiet_NaN();
  }
  return bins;
}

std::vector<ConfigSummary> summarize(const std::vector<StatRow>& rows) {
  struct Acc {
    ConfigSummary s;
    std::vector<double> ml, um, ul, tr, ta;
    std::size_t mb = 0, fi = 0, fo = 0;
  };
  std::vector<Acc> accs;
  for (const StatRow& r : rows) {
    if (r.strategy == "exact") continue;
    auto it = std::find_if(accs.begin(), accs.end(), [&](const Acc& a) {
      return a.s.strategy == r.strategy && a.s.i == r.i && a.s.m == r.m;
    });
    if (it == accs.end()) {
      accs.push_back({});
      it = accs.end() - 1;
      it->s.strategy = r.strategy;
      it->s.i = r.i;
      it->s.m = r.m;
    }
    ++it->s.runs;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    it->ml.push_back(r.ratios.ml);
    it->um.push_back(r.ratios.um);
    it->ul.push_back(r.ratios.ul);
    it->tr.push_back(r.tr.value_or(nan));
    it->ta.push_back(r.ta.value_or(nan));
    it->s.max_mb = std::max(it->s.max_mb, r.mb);
    it->s.max_fi = std::max(it->s.max_fi, r.fi);
    it->s.max_fo = std::max(it->s.max_fo, r.fo);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    std::size_t c = 0;
    for (double x : v) {
      if (std::isnan(x)) continue;
      s += x;
      ++c;
    }
    return c ? s / static_cast<double>(c) : std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<ConfigSummary> out;
  for (Acc& a : accs) {
    a.s.mean_ml = mean(a.ml);
    a.s.mean_um = mean(a.um);
    a.s.mean_ul = mean(a.ul);
    a.s.mean_tr = mean(a.tr);
    a.s.mean_ta = mean(a.ta);
    const bool have_exact = !std::isnan(a.s.mean_um);
    if (have_exact) {
      a.s.histograms.push_back({"ml", histogram(a.ml, a.tr)});
      a.s.histograms.push_back({"um", histogram(a.um, a.tr)});
    } else {
      a.s.histograms.push_back({"ul", histogram(a.ul, a.tr)});
    }
    out.push_back(std::move(a.s));
  }
  return out;
}

void write_summary(std::ostream& os, const std::vector<ConfigSummary>& summaries) {
  os << "strategy,i,m,runs,mean_ml,mean_um,mean_ul,mean_tr,mean_ta,max_mb,max_fi,max_fo\n";
  for (const auto& s : summaries) {
    os << s.strategy << ',' << format_size(s.i) << ',' << format_size(s.m) << ',' << s.runs << ','
       << num(s.mean_ml, "%.6g") << ',' << num(s.mean_um, "%.6g") << ',' << num(s.mean_ul, "%.6g")
       << ',' << num(s.mean_tr, "%.6g") << ',' << num(s.mean_ta, "%.4f") << ',' << s.max_mb << ','
       << s.max_fi << ',' << s.max_fo << '\n';
  }
  os << "\nstrategy,i,m,ratio,bin,count,percent,mean_tr\n";
  for (const auto& s : summaries) {
    for (const auto& [name, bins] : s.histograms) {
      for (const auto& b : bins) {
        os << s.strategy << ',' << format_size(s.i) << ',' << format_size(s.m) << ',' << name
           << ',' << b.label << ',' << b.count << ',' << num(b.percent, "%.1f") << ','
           << num(b.mean_tr, "%.4g") << '\n';
      }
    }
  }
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<StatRow> bench_one(const BenchInstance& inst, const BenchOptions& opts) {
  const BeliefNetwork& bn = inst.file.network;
  const Evidence& e = inst.file.evidence;
  const Ordering d = find_ordering(moral_graph(bn), opts.ordering);

  std::optional<double> exact, te;
  if (opts.exact) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      exact = elim_mpe(bn, e, d, opts.elim).value;
      te = quantize_seconds(seconds_since(t0));
    } catch (const ResourceError&) {
    }
  }

  std::vector<StatRow> rows;
  for (const MiniBucketConfig& cfg : opts.grid) {
    StatRow r;
    r.instance = inst.id;
    r.task = "mpe";
    r.strategy = to_string(cfg.strategy);
    r.i = cfg.i;
    r.m = cfg.m;
    r.exact = exact;
    r.te = te;
    r.ordering = to_string(opts.ordering);
    r.fi = bn.max_family_size();
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const BoundsResult b = approx_mpe(bn, e, d, cfg, opts.elim);
      r.ta = quantize_seconds(seconds_since(t0));
      r.upper = b.upper;
      r.lower = b.lower;
      r.ratios = bound_ratios(exact, b.upper, b.lower);
      r.mb = b.diag.mb;
      r.fo = b.diag.fo;
      if (te) r.tr = *te / *r.ta;
    } catch (const ResourceError&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      r.ratios = {nan, nan, nan};
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

std::vector<StatRow> run_bench(const std::vector<BenchInstance>& instances,
                               const BenchOptions& opts) {
  std::vector<std::vector<StatRow>> per(instances.size());
  const int threads = std::max(1, opts.threads);
  std::vector<std::string> errors(instances.size());
  BenchOptions inner = opts;
  if (threads > 1) inner.elim.kernel = kernels::Mode::serial;
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (std::size_t k = 0; k < instances.size(); ++k) {
    try {
      per[k] = bench_one(instances[k], inner);
    } catch (const std::exception& ex) {
      errors[k] = instances[k].id + ": " + ex.what();
    }
  }
  for (const std::string& err : errors) {
    if (!err.empty()) throw InvalidArgument(err);
  }
  std::vector<StatRow> rows;
  for (auto& v : per) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

}  // namespace mbe
