#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decbench/bd/bd_delta.hpp"
#include "decbench/pipeline/result_store.hpp"

namespace decbench::report {

enum class Metric { kBdr, kBddt, kBdde };

const char* metric_label(Metric m);  // "BDR", "BDDT", "BDDE"
Metric parse_metric(const std::string& name);
bd::CostField metric_field(Metric m);

/// BD values of one test sequence against the reference.
struct SequenceBd {
  std::string sequence;
  std::string sequence_class;
  std::string config;
  std::string variant;
  std::optional<double> bdr;
  std::optional<double> bddt;
  std::optional<double> bdde;

  std::optional<double> get(Metric m) const;
};

struct ClassRow {
  std::string sequence_class;
  std::optional<double> bdr_percent;
  std::optional<double> bddt_percent;
  std::optional<double> bdde_percent;
  std::size_t sequence_count = 0;

  std::optional<double> get(Metric m) const;
};

inline constexpr const char* kDefaultSignConvention =
    "Positive values: the test costs more than the reference at equal YUV-PSNR.";
inline constexpr const char* kAblationSignConvention =
    "Tool-off vs reference: positive BDR means the tool improves RD efficiency; positive "
    "BDDT/BDDE means the tool lowers decoding time/energy when used.";

struct ComparisonReport {
  std::string reference_label;
  std::string test_label;
  std::string config;
  /// One row per class present in the input for this config, class order.
  std::vector<ClassRow> rows;
  /// Mean over all sequences of this config (not over class means).
  ClassRow overall;
  std::string sign_convention = kDefaultSignConvention;
};

/// Canonical class ordering A1, A2, B, C, D, E, F, then any others by name.
bool class_less(const std::string& a, const std::string& b);

/// Per-class and overall sequence means for one config. Throws
/// Error(kEmptyReport) when `results` is empty.
ComparisonReport aggregate(const std::vector<SequenceBd>& results, const std::string& config,
                           const std::string& reference_label = {},
                           const std::string& test_label = {});

/// One report per config, in the given order.
std::vector<ComparisonReport> aggregate_configs(const std::vector<SequenceBd>& results,
                                                const std::vector<std::string>& configs,
                                                const std::string& reference_label = {},
                                                const std::string& test_label = {});

/// Computes BDR, BDDT and BDDE of `test_variant` against
/// `reference_variant` for every (sequence, config) in the records.
std::vector<SequenceBd> collect_bd(const std::vector<pipeline::ResultRecord>& records,
                                   const std::string& reference_variant,
                                   const std::string& test_variant,
                                   bd::FitMethod method = bd::kDefaultMethod,
                                   const std::vector<int>& qps = {22, 27, 32, 37},
                                   std::vector<std::string>* notices = nullptr);

enum class TableFormat { kMarkdown, kCsv };
TableFormat parse_format(const std::string& name);

/// Class rows by config column groups. Markdown shows "-" for absent
/// cells, CSV leaves them empty. Values use two decimals, halves rounded
/// away from zero.
std::string render_table(const std::vector<ComparisonReport>& reports, TableFormat format,
                         const std::vector<Metric>& metrics = {Metric::kBdr, Metric::kBddt,
                                                               Metric::kBdde});

/// Rows sequence,class,variant,x,y. Sequences missing either metric are
/// skipped with a notice.
std::string export_scatter(const std::vector<SequenceBd>& results, Metric x, Metric y,
                           std::vector<std::string>* notices = nullptr);

/// Rows variant,cost,psnr_yuv,qp for every variant of one sequence/config.
std::string export_curves(const std::vector<pipeline::ResultRecord>& records,
                          const std::string& sequence, const std::string& config,
                          bd::CostField field, const std::vector<int>& qps = {22, 27, 32, 37});

}  // namespace decbench::report
