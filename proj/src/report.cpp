#include "fone/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fone {

namespace {

constexpr const char* kCsvHeader =
    "estimator,replication,err_to_truth,err_to_erm,comm_vectors,seconds,spec_hash,note";

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("report: bad double");
  return std::string(buf, ptr);
}

double parse_csv_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("report: bad numeric field '" + s + "'");
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

struct Welford {
  Index count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double se() const {
    if (count < 2) return 0.0;
    const double var = m2 / static_cast<double>(count - 1);
    return std::sqrt(var / static_cast<double>(count));
  }
};

}  // namespace

std::vector<AggregateRow> aggregate(const ExperimentReport& report) {
  std::vector<std::string> order;
  struct Acc {
    Welford truth, erm, comm, secs;
    Index failed = 0;
  };
  std::map<std::string, Acc> by_name;
  for (const auto& row : report.rows) {
    if (row.estimator.rfind("TUNE", 0) == 0) continue;  // audit rows, not estimates
    if (by_name.find(row.estimator) == by_name.end()) order.push_back(row.estimator);
    Acc& acc = by_name[row.estimator];
    if (!row.note.empty()) {
      ++acc.failed;
      continue;
    }
    acc.truth.add(row.err_to_truth);
    if (!std::isnan(row.err_to_erm)) acc.erm.add(row.err_to_erm);
    acc.comm.add(static_cast<double>(row.comm_vectors));
    acc.secs.add(row.seconds);
  }
  std::vector<AggregateRow> out;
  out.reserve(order.size());
  for (const auto& name : order) {
    const Acc& acc = by_name[name];
    AggregateRow agg;
    agg.estimator = name;
    agg.count = acc.truth.count;
    agg.failed = acc.failed;
    agg.mean_err_to_truth = acc.truth.count ? acc.truth.mean : std::nan("");
    agg.se_err_to_truth = acc.truth.se();
    agg.mean_err_to_erm = acc.erm.count ? acc.erm.mean : std::nan("");
    agg.se_err_to_erm = acc.erm.se();
    agg.mean_comm_vectors = acc.comm.count ? acc.comm.mean : std::nan("");
    agg.mean_seconds = acc.secs.count ? acc.secs.mean : std::nan("");
    out.push_back(agg);
  }
  return out;
}

void emit_csv(const ExperimentReport& report, std::ostream& out) {
  std::istringstream spec_lines(report.spec_text);
  std::string line;
  while (std::getline(spec_lines, line)) out << "# " << line << "\n";
  out << kCsvHeader << "\n";
  for (const auto& row : report.rows) {
    out << row.estimator << ',' << row.replication << ',' << fmt_double(row.err_to_truth) << ','
        << fmt_double(row.err_to_erm) << ',' << row.comm_vectors << ','
        << fmt_double(row.seconds) << ',' << report.hash << ',' << row.note << "\n";
  }
  for (const auto& agg : aggregate(report)) {
    out << "AGG_MEAN_" << agg.estimator << ',' << 0 << ',' << fmt_double(agg.mean_err_to_truth)
        << ',' << fmt_double(agg.mean_err_to_erm) << ','
        << static_cast<Index>(std::llround(agg.mean_comm_vectors)) << ','
        << fmt_double(agg.mean_seconds) << ',' << report.hash << ",n=" << agg.count << "\n";
    out << "AGG_SE_" << agg.estimator << ',' << 0 << ',' << fmt_double(agg.se_err_to_truth)
        << ',' << fmt_double(agg.se_err_to_erm) << ',' << 0 << ',' << fmt_double(0.0) << ','
        << report.hash << ",n=" << agg.count << "\n";
  }
}

void emit_table(const ExperimentReport& report, std::ostream& out) {
  const auto aggs = aggregate(report);
  out << std::left << std::setw(10) << "estimator" << std::right << std::setw(6) << "reps"
      << std::setw(14) << "err(truth)" << std::setw(12) << "se" << std::setw(14) << "err(erm)"
      << std::setw(12) << "se" << std::setw(12) << "comm" << std::setw(10) << "sec" << "\n";
  out << std::string(90, '-') << "\n";
  const auto num = [](double v, int prec) {
    std::ostringstream s;
    if (std::isnan(v)) {
      s << "-";
    } else {
      s << std::scientific << std::setprecision(prec) << v;
    }
    return s.str();
  };
  for (const auto& agg : aggs) {
    out << std::left << std::setw(10) << agg.estimator << std::right << std::setw(6)
        << agg.count << std::setw(14) << num(agg.mean_err_to_truth, 3) << std::setw(12)
        << num(agg.se_err_to_truth, 1) << std::setw(14) << num(agg.mean_err_to_erm, 3)
        << std::setw(12) << num(agg.se_err_to_erm, 1) << std::setw(12)
        << std::fixed << std::setprecision(0) << agg.mean_comm_vectors << std::setw(10)
        << std::fixed << std::setprecision(2) << agg.mean_seconds << "\n";
    if (agg.failed > 0)
      out << "  (" << agg.failed << " replication(s) failed and were excluded)\n";
  }
  out << "spec " << report.hash << "\n";
}

void emit_report(const ExperimentReport& report, const std::string& path,
                 const std::string& format) {
  const auto write = [&](std::ostream& out) {
    if (format == "csv") emit_csv(report, out);
    else if (format == "table") emit_table(report, out);
    else throw std::invalid_argument("emit_report: unknown format '" + format + "'");
  };
  if (path == "-") {
    write(std::cout);
  } else {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot open " + path);
    write(out);
  }
}

ExperimentReport parse_csv(std::istream& in) {
  ExperimentReport report;
  std::string line;
  bool saw_header = false;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      report.spec_text += line.substr(2) + "\n";
      continue;
    }
    if (line == "#") {
      report.spec_text += "\n";
      continue;
    }
    if (!saw_header) {
      if (line != kCsvHeader)
        throw std::runtime_error("report csv: line " + std::to_string(line_no) +
                                 ": unexpected header '" + line + "'");
      saw_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 8)
      throw std::runtime_error("report csv: line " + std::to_string(line_no) + ": expected 8 "
                               "fields, got " + std::to_string(fields.size()));
    if (fields[0].rfind("AGG_", 0) == 0) continue;  // aggregates are derivable
    ReportRow row;
    row.estimator = fields[0];
    row.replication = static_cast<Index>(parse_csv_double(fields[1]));
    row.err_to_truth = parse_csv_double(fields[2]);
    row.err_to_erm = parse_csv_double(fields[3]);
    row.comm_vectors = static_cast<Index>(parse_csv_double(fields[4]));
    row.seconds = parse_csv_double(fields[5]);
    if (report.hash.empty()) report.hash = fields[6];
    else if (report.hash != fields[6])
      throw std::runtime_error("report csv: line " + std::to_string(line_no) +
                               ": spec hash mismatch (file mixes runs)");
    row.note = fields[7];
    report.rows.push_back(row);
  }
  if (!saw_header) throw std::runtime_error("report csv: missing header line");
  return report;
}

ExperimentReport parse_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("report csv: cannot open " + path);
  return parse_csv(in);
}

}  // namespace fone
