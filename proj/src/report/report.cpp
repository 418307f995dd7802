#include "decbench/report/report.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "decbench/error.hpp"
#include "decbench/format.hpp"
#include "decbench/pipeline/runner.hpp"

namespace decbench::report {

const char* metric_label(Metric m) {
  switch (m) {
    case Metric::kBdr: return "BDR";
    case Metric::kBddt: return "BDDT";
    case Metric::kBdde: return "BDDE";
  }
  return "?";
}

Metric parse_metric(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "bdr" || lower == "rate") return Metric::kBdr;
  if (lower == "bddt" || lower == "time") return Metric::kBddt;
  if (lower == "bdde" || lower == "energy") return Metric::kBdde;
  throw Error(Errc::kInvalidArgument, "unknown metric '" + name + "' (expected bdr, bddt, bdde)");
}

bd::CostField metric_field(Metric m) {
  switch (m) {
    case Metric::kBdr: return bd::CostField::kRate;
    case Metric::kBddt: return bd::CostField::kTime;
    case Metric::kBdde: return bd::CostField::kEnergy;
  }
  return bd::CostField::kRate;
}

std::optional<double> SequenceBd::get(Metric m) const {
  switch (m) {
    case Metric::kBdr: return bdr;
    case Metric::kBddt: return bddt;
    case Metric::kBdde: return bdde;
  }
  return std::nullopt;
}

std::optional<double> ClassRow::get(Metric m) const {
  switch (m) {
    case Metric::kBdr: return bdr_percent;
    case Metric::kBddt: return bddt_percent;
    case Metric::kBdde: return bdde_percent;
  }
  return std::nullopt;
}

bool class_less(const std::string& a, const std::string& b) {
  static const std::array<std::string, 7> order{"A1", "A2", "B", "C", "D", "E", "F"};
  const auto rank = [](const std::string& c) {
    const auto it = std::find(order.begin(), order.end(), c);
    return static_cast<std::size_t>(it - order.begin());
  };
  const auto ra = rank(a);
  const auto rb = rank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

namespace {

constexpr std::array<Metric, 3> kAllMetrics{Metric::kBdr, Metric::kBddt, Metric::kBdde};

ClassRow mean_row(const std::string& label, const std::vector<const SequenceBd*>& members) {
  ClassRow row;
  row.sequence_class = label;
  std::set<std::string> sequences;
  for (const auto* m : members) sequences.insert(m->sequence);
  row.sequence_count = sequences.size();
  for (Metric metric : kAllMetrics) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto* m : members) {
      if (auto v = m->get(metric)) {
        sum += *v;
        ++n;
      }
    }
    if (n == 0) continue;
    const double mean = sum / static_cast<double>(n);
    switch (metric) {
      case Metric::kBdr: row.bdr_percent = mean; break;
      case Metric::kBddt: row.bddt_percent = mean; break;
      case Metric::kBdde: row.bdde_percent = mean; break;
    }
  }
  return row;
}

}  // namespace

ComparisonReport aggregate(const std::vector<SequenceBd>& results, const std::string& config,
                           const std::string& reference_label, const std::string& test_label) {
  if (results.empty()) throw Error(Errc::kEmptyReport, "no BD results to aggregate");
  ComparisonReport report;
  report.reference_label = reference_label;
  report.test_label = test_label;
  report.config = config;

  std::map<std::string, std::vector<const SequenceBd*>, decltype(&class_less)> by_class(
      &class_less);
  std::vector<const SequenceBd*> all;
  for (const auto& r : results) {
    if (r.config != config) continue;
    by_class[r.sequence_class].push_back(&r);
    all.push_back(&r);
  }
  for (const auto& [cls, members] : by_class) report.rows.push_back(mean_row(cls, members));
  report.overall = mean_row("Mean", all);
  return report;
}

std::vector<ComparisonReport> aggregate_configs(const std::vector<SequenceBd>& results,
                                                const std::vector<std::string>& configs,
                                                const std::string& reference_label,
                                                const std::string& test_label) {
  std::vector<ComparisonReport> out;
  for (const auto& c : configs) out.push_back(aggregate(results, c, reference_label, test_label));
  return out;
}

std::vector<SequenceBd> collect_bd(const std::vector<pipeline::ResultRecord>& records,
                                   const std::string& reference_variant,
                                   const std::string& test_variant, bd::FitMethod method,
                                   const std::vector<int>& qps, std::vector<std::string>* notices) {
  const auto sets = pipeline::group_curve_sets(records);
  std::map<std::pair<std::string, std::string>, SequenceBd> merged;
  for (Metric metric : kAllMetrics) {
    std::vector<std::string> local;
    const auto entries = bd::bd_table(sets, reference_variant, test_variant, metric_field(metric),
                                      method, qps, &local);
    for (auto& n : local) {
      if (notices) notices->push_back(std::string(metric_label(metric)) + ": " + n);
    }
    for (const auto& e : entries) {
      auto& s = merged[{e.sequence, e.config}];
      s.sequence = e.sequence;
      s.sequence_class = e.sequence_class;
      s.config = e.config;
      s.variant = e.test_variant;
      switch (metric) {
        case Metric::kBdr: s.bdr = e.result.delta_percent; break;
        case Metric::kBddt: s.bddt = e.result.delta_percent; break;
        case Metric::kBdde: s.bdde = e.result.delta_percent; break;
      }
    }
  }
  std::vector<SequenceBd> out;
  for (auto& [key, s] : merged) out.push_back(std::move(s));
  std::stable_sort(out.begin(), out.end(), [](const SequenceBd& a, const SequenceBd& b) {
    if (a.config != b.config) return a.config < b.config;
    if (a.sequence_class != b.sequence_class) return class_less(a.sequence_class, b.sequence_class);
    return a.sequence < b.sequence;
  });
  return out;
}

TableFormat parse_format(const std::string& name) {
  if (name == "markdown" || name == "md") return TableFormat::kMarkdown;
  if (name == "csv") return TableFormat::kCsv;
  throw Error(Errc::kInvalidArgument, "unknown format '" + name + "' (expected markdown or csv)");
}

std::string render_table(const std::vector<ComparisonReport>& reports, TableFormat format,
                         const std::vector<Metric>& metrics) {
  std::vector<std::string> classes;
  for (const auto& r : reports) {
    for (const auto& row : r.rows) {
      if (std::find(classes.begin(), classes.end(), row.sequence_class) == classes.end()) {
        classes.push_back(row.sequence_class);
      }
    }
  }
  std::sort(classes.begin(), classes.end(), class_less);

  const bool md = format == TableFormat::kMarkdown;
  const std::string sep = md ? " | " : ",";
  const std::string dash = md ? "-" : "";
  auto cell = [&](const std::optional<double>& v) { return v ? format_fixed(*v, 2) : dash; };
  auto emit_row = [&](std::ostringstream& out, const std::string& label,
                      const std::vector<const ClassRow*>& cols) {
    out << (md ? "| " : "") << label;
    for (const ClassRow* row : cols) {
      for (Metric m : metrics) out << sep << (row ? cell(row->get(m)) : dash);
    }
    out << (md ? " |" : "") << '\n';
  };

  std::ostringstream out;
  if (md && !reports.empty()) {
    const auto& first = reports.front();
    if (!first.reference_label.empty() || !first.test_label.empty()) {
      out << "Test: " << (first.test_label.empty() ? "?" : first.test_label)
          << ", reference: " << (first.reference_label.empty() ? "?" : first.reference_label)
          << ".\n";
    }
    if (!first.sign_convention.empty()) out << first.sign_convention << "\n";
    out << '\n';
  }

  out << (md ? "| " : "") << (md ? "Class" : "class");
  for (const auto& r : reports) {
    for (Metric m : metrics) {
      out << sep << r.config << (md ? " " : "_") << metric_label(m) << (md ? " in %" : "");
    }
  }
  out << (md ? " |" : "") << '\n';
  if (md) {
    out << "|---";
    for (std::size_t i = 0; i < reports.size() * metrics.size(); ++i) out << "|---:";
    out << "|\n";
  }

  for (const auto& cls : classes) {
    std::vector<const ClassRow*> cols;
    for (const auto& r : reports) {
      const ClassRow* found = nullptr;
      for (const auto& row : r.rows) {
        if (row.sequence_class == cls) found = &row;
      }
      cols.push_back(found);
    }
    emit_row(out, cls, cols);
  }
  std::vector<const ClassRow*> means;
  for (const auto& r : reports) means.push_back(r.overall.sequence_count ? &r.overall : nullptr);
  emit_row(out, "Mean", means);
  return out.str();
}

std::string export_scatter(const std::vector<SequenceBd>& results, Metric x, Metric y,
                           std::vector<std::string>* notices) {
  std::ostringstream out;
  out << "sequence,class,variant," << metric_label(x) << "," << metric_label(y) << '\n';
  for (const auto& r : results) {
    const auto xv = r.get(x);
    const auto yv = r.get(y);
    if (!xv || !yv) {
      if (notices) {
        notices->push_back("scatter: " + r.sequence + "/" + r.config + " lacks " +
                           (!xv ? metric_label(x) : metric_label(y)) + ", skipped");
      }
      continue;
    }
    out << r.sequence << ',' << r.sequence_class << ',' << r.variant << ','
        << format_fixed(*xv, 4) << ',' << format_fixed(*yv, 4) << '\n';
  }
  return out.str();
}

std::string export_curves(const std::vector<pipeline::ResultRecord>& records,
                          const std::string& sequence, const std::string& config,
                          bd::CostField field, const std::vector<int>& qps) {
  std::vector<pipeline::ResultRecord> subset;
  bool sequence_known = false;
  for (const auto& r : records) {
    if (r.sequence != sequence) continue;
    sequence_known = true;
    if (r.config == config) subset.push_back(r);
  }
  if (!sequence_known) throw Error(Errc::kNotFound, "no records for sequence '" + sequence + "'");
  if (subset.empty()) {
    throw Error(Errc::kNotFound, "no records for " + sequence + " with config " + config);
  }
  const auto sets = pipeline::group_curve_sets(subset);
  std::set<std::string> variants;
  for (const auto& r : subset) variants.insert(r.variant);

  std::ostringstream out;
  out << "variant,cost,psnr_yuv,qp\n";
  for (const auto& variant : variants) {
    const auto it = std::find_if(sets.begin(), sets.end(), [&](const bd::CurveSet& s) {
      return s.key.variant == variant;
    });
    if (it == sets.end()) {
      throw Error(Errc::kIncompleteCurve,
                  sequence + "/" + config + "/" + variant + ": no measured points");
    }
    bd::require_qps(*it, qps);
    auto points = it->points;
    std::sort(points.begin(), points.end(),
              [](const bd::MeasuredPoint& a, const bd::MeasuredPoint& b) { return a.qp < b.qp; });
    for (const auto& p : points) {
      out << variant << ',' << format_fixed(p.cost(field), 6) << ','
          << format_fixed(p.psnr_yuv, 4) << ',' << p.qp << '\n';
    }
  }
  return out.str();
}

}  // namespace decbench::report
