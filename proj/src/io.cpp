// Apache License, Version 2.0, refer to LICENSE.txt
#include "ghsbp/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace ghsbp {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Strips trailing CR / whitespace so CRLF files parse identically.
std::string_view trimmed(const std::string& line) {
  std::string_view v(line);
  while (!v.empty() && (v.back() == '\r' || v.back() == ' ' || v.back() == '\t')) {
    v.remove_suffix(1);
  }
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) {
    v.remove_prefix(1);
  }
  return v;
}

[[noreturn]] void parse_error(const std::string& path, std::size_t line_no,
                              const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view field, const std::string& path,
                    std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    parse_error(path, line_no, "invalid number '" + std::string(field) + "'");
  }
  return v;
}

void write_comments(std::ofstream& out, const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << "# " << c << "\n";
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& header_comments) {
  if (m.empty()) throw std::invalid_argument("write_matrix_csv: empty matrix");
  const std::size_t cols = m.front().size();
  for (const auto& row : m) {
    if (row.size() != cols || cols == 0) {
      throw std::invalid_argument("write_matrix_csv: matrix not rectangular");
    }
  }
  std::ofstream out = open_for_write(path);
  write_comments(out, header_comments);
  for (std::size_t j = 0; j < cols; ++j) {
    out << (j == 0 ? "" : ",") << "s" << j;
  }
  out << "\n";
  for (const auto& row : m) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (j != 0) out << ",";
      out << format_double(row[j]);
    }
    out << "\n";
  }
  finish_write(out, path);
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in = open_for_read(path);
  Matrix m;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view v = trimmed(line);
    if (v.empty() || v.front() == '#') continue;
    if (!header_seen) {  // the s0,s1,... column-label row
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= v.size()) {
      std::size_t comma = v.find(',', start);
      if (comma == std::string_view::npos) comma = v.size();
      row.push_back(parse_double(v.substr(start, comma - start), path, line_no));
      start = comma + 1;
    }
    if (!m.empty() && row.size() != m.front().size()) {
      parse_error(path, line_no, "inconsistent column count");
    }
    m.push_back(std::move(row));
  }
  if (m.empty()) throw std::runtime_error(path + ": no matrix rows found");
  return m;
}

void write_sequence(const std::string& path,
                    const std::vector<std::int64_t>& states,
                    const std::vector<std::string>& header_comments) {
  std::ofstream out = open_for_write(path);
  write_comments(out, header_comments);
  for (std::int64_t s : states) out << s << "\n";
  finish_write(out, path);
}

std::vector<std::int64_t> read_sequence(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<std::int64_t> states;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view v = trimmed(line);
    if (v.empty() || v.front() == '#') continue;
    std::int64_t s = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), s);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      parse_error(path, line_no, "invalid state '" + std::string(v) + "'");
    }
    if (s < 0) parse_error(path, line_no, "negative state");
    states.push_back(s);
  }
  if (states.empty()) throw std::runtime_error(path + ": no states found");
  return states;
}

void write_reports_csv(const std::string& path,
                       const std::vector<EvalReport>& reports,
                       const std::vector<std::string>& header_comments) {
  std::ofstream out = open_for_write(path);
  write_comments(out, header_comments);
  out << "method,alpha,beta,b0,mae_times_100,d,chain_length,seed\n";
  for (const EvalReport& r : reports) {
    out << method_name(r.method) << ",";
    if (r.hyperparams_used) {
      out << format_double(r.hyperparams_used->alpha) << ","
          << format_double(r.hyperparams_used->beta) << ","
          << format_double(r.hyperparams_used->b0);
    } else {
      out << ",,";
    }
    out << "," << format_double(r.mae_times_100) << "," << r.d << ","
        << r.chain_length << "," << r.seed << "\n";
  }
  finish_write(out, path);
}

void write_text(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out = open_for_write(path);
  for (const std::string& l : lines) out << l << "\n";
  finish_write(out, path);
}

}  // namespace ghsbp
