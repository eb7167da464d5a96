#pragma once
// Line-oriented decimal text files. Every persistent artifact is a one-line
// format header ("<kind> v1") followed by decimal integers or space-separated
// rows, one value per line, so files stay diffable and independent of host
// byte order.

#include <gmpxx.h>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsw {

inline void write_text_file(const std::string& path, const std::string& header,
                            const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << header << '\n';
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<std::string> read_text_file(const std::string& path,
                                               const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty file: " + path);
  if (header != expected_header)
    throw std::runtime_error("bad header in " + path + ": expected '" + expected_header +
                             "', got '" + header + "'");
  std::vector<std::string> lines;
  std::string l;
  while (std::getline(in, l)) {
    if (!l.empty()) lines.push_back(l);
  }
  return lines;
}

inline mpz_class parse_mpz(const std::string& s) {
  try {
    return mpz_class(s);
  } catch (const std::invalid_argument&) {
    throw std::runtime_error("not a decimal integer: '" + s + "'");
  }
}

inline std::vector<mpz_class> parse_mpz_row(const std::string& line) {
  std::istringstream in(line);
  std::vector<mpz_class> row;
  std::string tok;
  while (in >> tok) row.push_back(parse_mpz(tok));
  if (row.empty()) throw std::runtime_error("empty row");
  return row;
}

inline std::string format_mpz_row(const std::vector<mpz_class>& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(' ');
    out += row[i].get_str();
  }
  return out;
}

}  // namespace bsw
