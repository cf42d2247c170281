#include "storeplan/solver/mps.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

namespace storeplan::solver {

namespace {

constexpr std::string_view kObjective = "COST";

std::string base36(int v) {
  constexpr char digits[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::string s;
  do {
    s.insert(s.begin(), digits[v % 36]);
    v /= 36;
  } while (v > 0);
  return s;
}

class NameTable {
 public:
  explicit NameTable(std::set<std::string> reserved = {}) : used_(std::move(reserved)) {}

  std::string add(std::string_view raw) {
    std::string base(raw.substr(0, 8));
    for (auto& ch : base) {
      if (ch == ' ' || ch == '\t') ch = '_';
    }
    if (base.empty()) base = "_";
    if (used_.insert(base).second) return base;
    for (int counter = 1;; ++counter) {
      const std::string suffix = base36(counter);
      std::string candidate = base.substr(0, 8 - std::min<std::size_t>(suffix.size(), 8)) + suffix;
      if (used_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::set<std::string> used_;
};

/// Shortest round-trip representation, shortened further when it does not fit in 12 characters.
std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string best(buf, res.ptr);
  for (int prec = 16; best.size() > 12 && prec >= 1; --prec) {
    res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, prec);
    best.assign(buf, res.ptr);
  }
  return best;
}

std::string line(std::string_view f1, std::string_view f2, std::string_view f3 = {},
                 std::string_view f4 = {}, std::string_view f5 = {}, std::string_view f6 = {}) {
  std::string s = fmt::format(" {:<2} {:<8}", f1, f2);
  if (!f3.empty()) {
    s += fmt::format("  {:<8}  {:>12}", f3, f4);
    if (!f5.empty()) s += fmt::format("   {:<8}  {:>12}", f5, f6);
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  s += '\n';
  return s;
}

}  // namespace

std::vector<std::string> mps_column_names(const Problem& p) {
  NameTable table;
  std::vector<std::string> names;
  names.reserve(p.col_names.size());
  for (const auto& n : p.col_names) names.push_back(table.add(n));
  return names;
}

std::string export_mps(const Problem& p) {
  p.validate();
  const int n = p.num_cols();
  const int m = p.num_rows();
  NameTable row_table({std::string(kObjective)});
  std::vector<std::string> rows(m);
  for (int i = 0; i < m; ++i) rows[i] = row_table.add(p.row_names[i]);
  const std::vector<std::string> cols = mps_column_names(p);

  std::string out = fmt::format("NAME          {}\n", NameTable().add(p.name));
  out += "ROWS\n";
  out += line("N", kObjective);
  std::vector<char> kind(m);
  for (int i = 0; i < m; ++i) {
    const double lo = p.row_lower[i], up = p.row_upper[i];
    if (lo == up) kind[i] = 'E';
    else if (std::isfinite(up)) kind[i] = 'L';
    else if (std::isfinite(lo)) kind[i] = 'G';
    else kind[i] = 'N';
    out += line(std::string(1, kind[i]), rows[i]);
  }

  // column-wise entries, objective first
  std::vector<std::vector<std::pair<int, double>>> by_col(n);
  for (int i = 0; i < m; ++i) {
    for (int k = p.row_start[i]; k < p.row_start[i + 1]; ++k) {
      by_col[p.row_index[k]].emplace_back(i, p.row_value[k]);
    }
  }
  out += "COLUMNS\n";
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<std::string, double>> entries;
    if (p.objective[j] != 0.0) entries.emplace_back(std::string(kObjective), p.objective[j]);
    for (const auto& [i, v] : by_col[j]) entries.emplace_back(rows[i], v);
    if (entries.empty()) entries.emplace_back(std::string(kObjective), 0.0);
    for (std::size_t e = 0; e < entries.size(); e += 2) {
      if (e + 1 < entries.size()) {
        out += line("", cols[j], entries[e].first, number(entries[e].second), entries[e + 1].first,
                    number(entries[e + 1].second));
      } else {
        out += line("", cols[j], entries[e].first, number(entries[e].second));
      }
    }
  }

  out += "RHS\n";
  if (p.objective_offset != 0.0) out += line("", "RHS", kObjective, number(-p.objective_offset));
  for (int i = 0; i < m; ++i) {
    double rhs = 0.0;
    switch (kind[i]) {
      case 'E':
      case 'L': rhs = p.row_upper[i]; break;
      case 'G': rhs = p.row_lower[i]; break;
      default: break;
    }
    if (rhs != 0.0) out += line("", "RHS", rows[i], number(rhs));
  }

  out += "RANGES\n";
  for (int i = 0; i < m; ++i) {
    if (kind[i] == 'L' && std::isfinite(p.row_lower[i])) {
      out += line("", "RNG", rows[i], number(p.row_upper[i] - p.row_lower[i]));
    }
  }

  out += "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const double lo = p.col_lower[j], up = p.col_upper[j];
    if (p.col_type[j] == VarType::Binary && lo == 0.0 && up == 1.0) {
      out += line("BV", "BND", cols[j]);
      continue;
    }
    if (lo == up) {
      out += line("FX", "BND", cols[j], number(lo));
      continue;
    }
    if (!std::isfinite(lo) && !std::isfinite(up)) {
      out += line("FR", "BND", cols[j]);
      continue;
    }
    if (!std::isfinite(lo)) out += line("MI", "BND", cols[j]);
    else if (lo != 0.0 || up < 0.0) out += line("LO", "BND", cols[j], number(lo));
    if (std::isfinite(up)) out += line("UP", "BND", cols[j], number(up));
  }
  out += "ENDATA\n";
  return out;
}

namespace {

double parse_number(const std::string& tok, int line_no) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw MpsError(fmt::format("mps line {}: bad number '{}'", line_no, tok));
  }
  return v;
}

}  // namespace

Problem read_mps(std::string_view text) {
  Problem p;
  enum class Section { None, Rows, Columns, Rhs, Ranges, Bounds, End } section = Section::None;
  std::string objective_row;
  std::unordered_map<std::string, int> row_id, col_id;
  std::vector<char> kind;
  std::vector<std::vector<std::pair<int, double>>> entries;  // per row
  std::vector<double> rhs, range;
  std::vector<bool> has_range;
  std::vector<bool> lower_set;
  bool integer_block = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto column = [&](const std::string& name) {
    auto it = col_id.find(name);
    if (it != col_id.end()) return it->second;
    const int id = p.add_column(0.0, 0.0, kInf, VarType::Continuous, name);
    if (integer_block) {
      // integer markers without bounds default to binary in this toolkit
      p.col_type[id] = VarType::Binary;
      p.col_upper[id] = 1.0;
    }
    col_id.emplace(name, id);
    lower_set.push_back(false);
    return id;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '*') continue;
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (raw[0] != ' ' && raw[0] != '\t') {
      const std::string& head = tok[0];
      if (head == "NAME") p.name = tok.size() > 1 ? tok[1] : "";
      else if (head == "ROWS") section = Section::Rows;
      else if (head == "COLUMNS") section = Section::Columns;
      else if (head == "RHS") section = Section::Rhs;
      else if (head == "RANGES") section = Section::Ranges;
      else if (head == "BOUNDS") section = Section::Bounds;
      else if (head == "ENDATA") section = Section::End;
      else throw MpsError(fmt::format("mps line {}: unknown section '{}'", line_no, head));
      continue;
    }
    auto row_of = [&](const std::string& name) -> int {
      if (name == objective_row) return -1;
      auto it = row_id.find(name);
      if (it == row_id.end()) throw MpsError(fmt::format("mps line {}: unknown row '{}'", line_no, name));
      return it->second;
    };
    switch (section) {
      case Section::Rows: {
        if (tok.size() != 2) throw MpsError(fmt::format("mps line {}: bad ROWS entry", line_no));
        const char k = tok[0][0];
        if (k == 'N' && objective_row.empty()) {
          objective_row = tok[1];
          break;
        }
        if (k != 'N' && k != 'L' && k != 'G' && k != 'E') {
          throw MpsError(fmt::format("mps line {}: bad row type '{}'", line_no, tok[0]));
        }
        row_id.emplace(tok[1], static_cast<int>(kind.size()));
        kind.push_back(k);
        p.row_names.push_back(tok[1]);
        entries.emplace_back();
        rhs.push_back(0.0);
        range.push_back(0.0);
        has_range.push_back(false);
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          integer_block = tok[2] == "'INTORG'";
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) {
          throw MpsError(fmt::format("mps line {}: bad COLUMNS entry", line_no));
        }
        const int j = column(tok[0]);
        for (std::size_t t = 1; t + 1 < tok.size(); t += 2) {
          const double v = parse_number(tok[t + 1], line_no);
          const int i = row_of(tok[t]);
          if (i < 0) p.objective[j] += v;
          else entries[i].emplace_back(j, v);
        }
        break;
      }
      case Section::Rhs:
      case Section::Ranges: {
        // the set name is optional
        const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
        for (std::size_t t = first; t + 1 < tok.size(); t += 2) {
          const double v = parse_number(tok[t + 1], line_no);
          const int i = row_of(tok[t]);
          if (section == Section::Rhs) {
            if (i < 0) p.objective_offset = -v;
            else rhs[i] = v;
          } else if (i >= 0) {
            range[i] = v;
            has_range[i] = true;
          }
        }
        break;
      }
      case Section::Bounds: {
        if (tok.size() < 3) throw MpsError(fmt::format("mps line {}: bad BOUNDS entry", line_no));
        const std::string& type = tok[0];
        const int j = column(tok[2]);
        const bool needs_value = type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
        if (needs_value && tok.size() < 4) {
          throw MpsError(fmt::format("mps line {}: bound without value", line_no));
        }
        const double v = needs_value ? parse_number(tok[3], line_no) : 0.0;
        if (type == "UP" || type == "UI") {
          p.col_upper[j] = v;
          if (v < 0 && !lower_set[j] && p.col_lower[j] == 0.0) p.col_lower[j] = -kInf;
        } else if (type == "LO" || type == "LI") {
          p.col_lower[j] = v;
          lower_set[j] = true;
        } else if (type == "FX") {
          p.col_lower[j] = p.col_upper[j] = v;
        } else if (type == "FR") {
          p.col_lower[j] = -kInf;
          p.col_upper[j] = kInf;
        } else if (type == "MI") {
          p.col_lower[j] = -kInf;
        } else if (type == "PL") {
          p.col_upper[j] = kInf;
        } else if (type == "BV") {
          p.col_type[j] = VarType::Binary;
          p.col_lower[j] = 0.0;
          p.col_upper[j] = 1.0;
        } else {
          throw MpsError(fmt::format("mps line {}: unknown bound type '{}'", line_no, type));
        }
        break;
      }
      default:
        throw MpsError(fmt::format("mps line {}: data outside a section", line_no));
    }
  }
  if (section != Section::End) throw MpsError("mps: missing ENDATA");

  const int m = static_cast<int>(kind.size());
  p.row_names.clear();
  std::vector<std::string> names(m);
  for (const auto& [name, id] : row_id) names[id] = name;
  for (int i = 0; i < m; ++i) {
    double lo = -kInf, up = kInf;
    switch (kind[i]) {
      case 'E':
        lo = up = rhs[i];
        if (has_range[i]) {
          if (range[i] >= 0) up = rhs[i] + range[i];
          else lo = rhs[i] + range[i];
        }
        break;
      case 'L':
        up = rhs[i];
        if (has_range[i]) lo = rhs[i] - std::abs(range[i]);
        break;
      case 'G':
        lo = rhs[i];
        if (has_range[i]) up = rhs[i] + std::abs(range[i]);
        break;
      default: break;
    }
    std::vector<int> cols;
    std::vector<double> vals;
    for (const auto& [j, v] : entries[i]) {
      cols.push_back(j);
      vals.push_back(v);
    }
    p.add_row(cols, vals, lo, up, names[i]);
  }
  return p;
}

}  // namespace storeplan::solver
