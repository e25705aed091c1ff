#include "fone/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

namespace fone {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, Index line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("load_csv: bad numeric field '" + std::string(s) + "' on line " +
                             std::to_string(line));
  }
  return v;
}

}  // namespace

void validate_dataset(const Dataset& data) {
  if (data.x.rows() != data.y.size())
    throw std::invalid_argument("dataset: x and y row counts differ");
  if (data.x.rows() == 0) throw std::invalid_argument("dataset: empty");
  if (data.x.cols() < 1) throw std::invalid_argument("dataset: needs at least the intercept");
  if (!data.x.allFinite() || !data.y.allFinite())
    throw std::invalid_argument("dataset: non-finite value");
  for (Index i = 0; i < data.x.rows(); ++i) {
    if (data.x(i, 0) != 1.0)
      throw std::invalid_argument("dataset: x[0] != 1 at row " + std::to_string(i));
  }
}

Dataset make_dataset(RowMatrixXd x, Eigen::VectorXd y) {
  Dataset d{std::move(x), std::move(y)};
  validate_dataset(d);
  return d;
}

void dump_csv(const Dataset& data, const std::string& path) {
  validate_dataset(data);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
  out << "y";
  for (Index j = 0; j < data.dim(); ++j) out << ",x" << j;
  out << "\n";
  for (Index i = 0; i < data.n(); ++i) {
    out << format_double(data.y(i));
    for (Index j = 0; j < data.dim(); ++j) out << ',' << format_double(data.x(i, j));
    out << "\n";
  }
  if (!out) throw std::runtime_error("dump_csv: write failed for " + path);
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_csv: missing header");

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) header.push_back(field);
  }
  if (header.size() < 2 || header[0] != "y")
    throw std::runtime_error("load_csv: header must start with y,x0,...");
  const Index p = static_cast<Index>(header.size()) - 1;
  for (Index j = 0; j < p; ++j) {
    if (header[static_cast<std::size_t>(j) + 1] != "x" + std::to_string(j))
      throw std::runtime_error("load_csv: unexpected header column " +
                               header[static_cast<std::size_t>(j) + 1]);
  }

  std::vector<double> ys;
  std::vector<double> xs;
  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t pos = 0;
    Index field_idx = 0;
    while (true) {
      const std::size_t next = line.find(',', pos);
      const std::string_view field(line.data() + pos,
                                   (next == std::string::npos ? line.size() : next) - pos);
      const double v = parse_double(field, line_no);
      if (field_idx == 0)
        ys.push_back(v);
      else
        xs.push_back(v);
      ++field_idx;
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (field_idx != p + 1)
      throw std::runtime_error("load_csv: wrong field count on line " + std::to_string(line_no));
  }
  const Index n = static_cast<Index>(ys.size());
  if (n == 0) throw std::runtime_error("load_csv: no data rows");

  RowMatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Index i = 0; i < n; ++i) {
    y(i) = ys[static_cast<std::size_t>(i)];
    for (Index j = 0; j < p; ++j) x(i, j) = xs[static_cast<std::size_t>(i * p + j)];
  }
  return make_dataset(std::move(x), std::move(y));
}

}  // namespace fone
