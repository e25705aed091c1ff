#pragma once

// Experiment report: per-replication rows plus aggregate summaries, with CSV
// and aligned-table serialization.  CSV files carry the full experiment spec
// as a `# key = value` comment preamble so a results file is self-describing,
// and every data row repeats the spec hash so rows from different runs cannot
// be conflated after a careless `cat`.

#include <string>
#include <vector>

#include "fone/experiment.hpp"

namespace fone {

struct ReportRow {
  std::string estimator;    // INIT, SGD, DCSGD, DISFONE, ERM, SINVW, VARIANCE
  Index replication = 0;    // 1-based; 0 for aggregate rows
  double err_to_truth = 0.0;
  double err_to_erm = 0.0;  // NaN when ERM was not computed
  Index comm_vectors = 0;   // p-dimensional vectors communicated
  double seconds = 0.0;
  std::string note;         // empty, or an error tag such as "diverged"
};

struct ExperimentReport {
  std::string spec_text;  // canonical serialization of the spec that produced it
  std::string hash;       // spec_hash of the above
  std::vector<ReportRow> rows;
};

struct AggregateRow {
  std::string estimator;
  Index count = 0;          // replications that completed without an error note
  Index failed = 0;         // replications that carry an error note
  double mean_err_to_truth = 0.0;
  double se_err_to_truth = 0.0;
  double mean_err_to_erm = 0.0;
  double se_err_to_erm = 0.0;
  double mean_comm_vectors = 0.0;
  double mean_seconds = 0.0;
};

// Group rows by estimator (order of first appearance) and compute means and
// standard errors over the replications that completed.
std::vector<AggregateRow> aggregate(const ExperimentReport& report);

// CSV with `# key = value` spec preamble, the pinned header, one line per
// replication row, then AGG_MEAN / AGG_SE summary rows per estimator.
void emit_csv(const ExperimentReport& report, std::ostream& out);

// Human-readable aligned summary table (aggregates only).
void emit_table(const ExperimentReport& report, std::ostream& out);

// Dispatch on format ("csv" or "table"); path "-" writes to stdout.
void emit_report(const ExperimentReport& report, const std::string& path,
                 const std::string& format);

// Parse a CSV produced by emit_csv back into a report (preamble -> spec_text,
// data rows -> rows; AGG_* rows are recomputable and skipped).
ExperimentReport parse_csv(std::istream& in);
ExperimentReport parse_csv_file(const std::string& path);

}  // namespace fone
