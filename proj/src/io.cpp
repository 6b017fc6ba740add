#include "invscat/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "invscat/error.hpp"

namespace invscat::io {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool skip_line(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

double parse_number(const std::string& tok, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": not a number: '" + tok + "'");
  }
  return v;
}

// Half a unit in the last written decimal place of a fixed-point token.
double half_last_digit(const std::string& tok) {
  const auto e = tok.find_first_of("eE");
  const std::string mantissa = tok.substr(0, e);
  int exponent = 0;
  if (e != std::string::npos) exponent = std::stoi(tok.substr(e + 1));
  const auto dot = mantissa.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
  return 0.5 * std::pow(10.0, exponent - decimals);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  return in;
}

}  // namespace

ShiftTable parse_shift_table(std::istream& in) {
  ShiftTable out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 2) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 'l delta'");
    const double l = parse_number(tok[0], line_no);
    if (l != std::floor(l) || l != static_cast<double>(out.deltas.size())) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": l must run 0, 1, 2, ... without gaps");
    }
    out.deltas.push_back(parse_number(tok[1], line_no));
    out.sigma.push_back(half_last_digit(tok[1]));
  }
  if (out.deltas.empty()) throw Error(ErrorKind::Parse, "shift table has no rows");
  return out;
}

ShiftTable read_shift_file(const std::string& path) {
  auto in = open_in(path);
  return parse_shift_table(in);
}

PotentialTable parse_potential_table(std::istream& in) {
  PotentialTable out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tok = split_ws(line);
    if (tok.size() != 2) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 'r q'");
    const double r = parse_number(tok[0], line_no);
    if (!out.r.empty() && !(r > out.r.back())) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": r must increase");
    }
    out.r.push_back(r);
    out.q.push_back(parse_number(tok[1], line_no));
  }
  if (out.r.size() < 2) throw Error(ErrorKind::Parse, "potential table needs at least two rows");
  return out;
}

PotentialTable read_potential_table(const std::string& path) {
  auto in = open_in(path);
  return parse_potential_table(in);
}

std::string format_g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv(std::ostream& out, const CsvDocument& doc) {
  out << "# config:";
  for (const auto& [k, v] : doc.config) out << ' ' << k << '=' << v;
  out << '\n';
  for (const auto& w : doc.warnings) out << "# warning: " << w << '\n';
  out << "r,q_true,q_rec\n";
  for (const auto& row : doc.rows) {
    out << format_g9(row.r) << ',' << (row.q_true ? format_g9(*row.q_true) : "") << ',' << format_g9(row.q_rec)
        << '\n';
  }
}

CsvDocument parse_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      if (t.rfind("# config:", 0) == 0) {
        for (const auto& item : split_ws(t.substr(9))) {
          const auto eq = item.find('=');
          if (eq == std::string::npos) continue;
          doc.config.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        }
      } else if (t.rfind("# warning:", 0) == 0) {
        doc.warnings.push_back(trim(t.substr(10)));
      }
      continue;
    }
    if (!header) {
      if (t != "r,q_true,q_rec") throw Error(ErrorKind::Parse, "missing 'r,q_true,q_rec' header");
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(t);
    while (std::getline(is, cell, ',')) cells.push_back(trim(cell));
    if (t.back() == ',') cells.emplace_back();
    if (cells.size() != 3) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 3 columns");
    CsvRow row{parse_number(cells[0], line_no), std::nullopt, parse_number(cells[2], line_no)};
    if (!cells[1].empty()) row.q_true = parse_number(cells[1], line_no);
    if (!doc.rows.empty() && !(row.r > doc.rows.back().r)) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": r must increase");
    }
    doc.rows.push_back(row);
  }
  if (!header) throw Error(ErrorKind::Parse, "missing 'r,q_true,q_rec' header");
  return doc;
}

CsvDocument read_csv(const std::string& path) {
  auto in = open_in(path);
  return parse_csv(in);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  const fs::path tmp = dir / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Parse, "cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Parse, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Parse, "cannot move output into '" + path + "'");
  }
}

}  // namespace invscat::io
