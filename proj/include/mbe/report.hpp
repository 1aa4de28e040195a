#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mbe/bnet_io.hpp"
#include "mbe/minibucket.hpp"

namespace mbe {

/// Wall-clock seconds rounded up to whole milliseconds, never below 1 ms.
double quantize_seconds(double seconds);

struct StatRow {
  std::string instance;
  std::string task;      // mpe, bel, map
  std::string strategy;  // exact, by_i, by_m
  std::size_t i = MiniBucketConfig::unbounded;
  std::size_t m = MiniBucketConfig::unbounded;
  std::optional<double> exact;
  std::optional<double> upper;
  std::optional<double> lower;
  Ratios ratios{};
  std::optional<double> tr;
  std::optional<double> ta;
  std::optional<double> te;
  std::size_t mb = 0;
  std::size_t fi = 0;
  std::size_t fo = 0;
  std::string ordering;
};

inline constexpr const char* kCsvHeader =
    "instance,task,strategy,i,m,exact,upper,lower,ml,um,ul,tr,ta,te,mb,fi,fo,ordering";

std::string csv_row(const StatRow& row);
void write_csv(std::ostream& os, const std::vector<StatRow>& rows);

struct HistogramBin {
  std::string label;  // "1", "(1,2]", "(2,3]", "(3,4]", "(4,inf]"
  std::size_t count = 0;
  double percent = 0.0;
  double mean_tr = 0.0;  // NaN when the bin is empty or no TR exists
};

struct ConfigSummary {
  std::string strategy;
  std::size_t i = MiniBucketConfig::unbounded;
  std::size_t m = MiniBucketConfig::unbounded;
  std::size_t runs = 0;
  double mean_ml = 0.0, mean_um = 0.0, mean_ul = 0.0, mean_tr = 0.0, mean_ta = 0.0;
  std::size_t max_mb = 0, max_fi = 0, max_fo = 0;
  /// ratio name ("ml", "um" or "ul") -> five bins
  std::vector<std::pair<std::string, std::vector<HistogramBin>>> histograms;
};

/// Index of the bin holding ratio r.
std::size_t histogram_bin(double r);
std::vector<HistogramBin> histogram(const std::vector<double>& ratios,
                                    const std::vector<double>& trs);

/// One summary per distinct (strategy, i, m), in first-appearance order.
/// Exact-only rows are skipped.
std::vector<ConfigSummary> summarize(const std::vector<StatRow>& rows);
void write_summary(std::ostream& os, const std::vector<ConfigSummary>& summaries);

struct BenchOptions {
  std::vector<MiniBucketConfig> grid;
  OrderingStrategy ordering = OrderingStrategy::min_fill;
  bool exact = true;  // attempted; skipped rows keep U/L only
  ElimOptions elim;
  int threads = 1;
};

struct BenchInstance {
  std::string id;
  NetworkFile file;
};

/// Task mpe. Rows come out instance by instance in input order, one row per
/// grid entry.
std::vector<StatRow> run_bench(const std::vector<BenchInstance>& instances,
                               const BenchOptions& opts);

const char* to_string(OrderingStrategy s);
std::string format_size(std::size_t v);  // "inf" for unbounded

}  // namespace mbe
