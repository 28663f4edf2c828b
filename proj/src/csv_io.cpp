#include "rtda/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rtda {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return {buf, end};
}

double parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  return value;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

}  // namespace

void write_signal_csv(std::ostream& out, const SignalFrame& frame) {
  out << 't';
  for (std::size_t c = 0; c < frame.channels(); ++c) out << ",c" << c;
  out << '\n';
  for (std::size_t i = 0; i < frame.size(); ++i) {
    out << format_number(frame.times()[i]);
    for (std::size_t c = 0; c < frame.channels(); ++c)
      out << ',' << format_number(frame.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)));
    out << '\n';
  }
}

SignalFrame read_signal_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw std::invalid_argument("signal csv: empty input");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "t") throw std::invalid_argument("signal csv: header must be t,c0,...");
  for (std::size_t c = 1; c < header.size(); ++c)
    if (header[c] != "c" + std::to_string(c - 1)) throw std::invalid_argument("signal csv: unexpected column '" + header[c] + "'");
  const std::size_t d = header.size() - 1;

  std::vector<double> times;
  std::vector<double> flat;
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    const auto fields = split(line);
    if (fields.size() != d + 1) throw std::invalid_argument("signal csv: wrong field count on line " + std::to_string(row));
    times.push_back(parse_number(fields[0]));
    for (std::size_t c = 0; c < d; ++c) flat.push_back(parse_number(fields[c + 1]));
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t c = 0; c < d; ++c)
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = flat[i * d + c];
  return SignalFrame(std::move(times), std::move(values));
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram) {
  out << "dim,birth,death\n";
  for (const auto& p : diagram.pairs) out << p.dim << ',' << format_number(p.birth) << ',' << format_number(p.death) << '\n';
}

PersistenceDiagram read_diagram_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != "dim,birth,death") throw std::invalid_argument("diagram csv: header must be dim,birth,death");
  PersistenceDiagram diagram;
  while (next_line(in, line)) {
    const auto fields = split(line);
    if (fields.size() != 3) throw std::invalid_argument("diagram csv: expected 3 fields");
    const double dim = parse_number(fields[0]);
    if (dim != 0.0 && dim != 1.0) throw std::invalid_argument("diagram csv: dim must be 0 or 1");
    diagram.pairs.push_back({static_cast<int>(dim), parse_number(fields[1]), parse_number(fields[2])});
  }
  return diagram;
}

void write_complex_csv(std::ostream& out, const FilteredComplex& complex) {
  out << "dim,v0,v1,v2,scale\n";
  for (const auto& s : complex.simplices()) {
    out << static_cast<int>(s.dim);
    for (std::size_t k = 0; k < 3; ++k) {
      out << ',';
      if (k < s.size()) out << s.vertices[k];
    }
    out << ',' << format_number(s.scale) << '\n';
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rtda
