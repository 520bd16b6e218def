#include "npovm/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "npovm/errors.hpp"

namespace npovm::csv {

namespace {

constexpr std::int64_t kPicoScale = 1'000'000'000'000;
constexpr const char* kNan = "nan";

const char* bool_text(bool b) { return b ? "true" : "false"; }

std::string slack_or_nan(const scenarios::ParamMap& slacks, const std::string& key) {
  const auto it = slacks.find(key);
  return it == slacks.end() ? kNan : format_real(it->second);
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return kNan;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  std::string s(buf, res.ptr);
  // Trim trailing zeros of the mantissa that %g-style output keeps.
  const auto exp_pos = s.find('e');
  std::string mantissa = s.substr(0, exp_pos);
  const std::string exponent = exp_pos == std::string::npos ? "" : s.substr(exp_pos);
  if (mantissa.find('.') != std::string::npos) {
    while (mantissa.back() == '0') mantissa.pop_back();
    if (mantissa.back() == '.') mantissa.pop_back();
  }
  return mantissa + exponent;
}

std::int64_t to_pico_units(double p) {
  if (!std::isfinite(p)) throw InvalidArgument("to_pico_units: non-finite value");
  return std::llround(p * static_cast<double>(kPicoScale));
}

std::string format_pico(std::int64_t units) {
  const bool negative = units < 0;
  const std::uint64_t mag =
      negative ? static_cast<std::uint64_t>(-(units + 1)) + 1 : static_cast<std::uint64_t>(units);
  std::string frac = std::to_string(mag % kPicoScale);
  frac.insert(0, 12 - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(mag / kPicoScale) + "." + frac;
}

std::optional<std::int64_t> parse_pico(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos || dot == 0 || text.size() - dot - 1 != 12) return std::nullopt;
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  const auto w = std::from_chars(text.data(), text.data() + dot, whole);
  if (w.ec != std::errc{} || w.ptr != text.data() + dot) return std::nullopt;
  const auto f = std::from_chars(text.data() + dot + 1, text.data() + text.size(), frac);
  if (f.ec != std::errc{} || f.ptr != text.data() + text.size()) return std::nullopt;
  const std::int64_t units = whole * kPicoScale + frac;
  return negative ? -units : units;
}

void write_sweep(std::ostream& out, const optimizer::SweepTable& table,
                 const std::vector<std::string>& free_names, bool with_reduced_slack) {
  std::vector<std::string> header;
  for (const auto& axis : table.axes) header.push_back(axis.name);
  for (const auto& name : free_names) header.push_back(name);
  for (const char* h : {"p_npovm", "p_povm", "delta_p", "slack_d", "slack_E"}) header.emplace_back(h);
  if (with_reduced_slack) header.emplace_back("slack_d_reduced");
  for (const char* h : {"boundary_d", "boundary_E", "feasible", "converged"}) header.emplace_back(h);

  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';

  for (const auto& row : table.rows) {
    if (row.status == optimizer::RowStatus::InvalidPoint) continue;
    std::vector<std::string> cells;
    for (double v : row.axis_values) cells.push_back(format_real(v));
    if (row.result) {
      const auto& r = *row.result;
      for (const auto& name : free_names) cells.push_back(format_real(r.argmin.at(name)));
      const std::int64_t a = to_pico_units(r.p_npovm.value());
      const std::int64_t b = to_pico_units(r.p_povm.value());
      cells.push_back(format_pico(a));
      cells.push_back(format_pico(b));
      cells.push_back(format_pico(a - b));
      cells.push_back(slack_or_nan(r.constraint_slacks, "d"));
      cells.push_back(slack_or_nan(r.constraint_slacks, "E"));
      if (with_reduced_slack) cells.push_back(slack_or_nan(r.constraint_slacks, "d_reduced"));
      cells.emplace_back(bool_text(r.boundary_active.at("d")));
      cells.emplace_back(bool_text(r.boundary_active.at("E")));
      cells.emplace_back(bool_text(r.feasible));
      cells.emplace_back(bool_text(r.converged));
    } else {
      for (std::size_t k = 0; k < free_names.size(); ++k) cells.emplace_back(kNan);
      cells.emplace_back(kNan);
      cells.push_back(row.p_povm ? format_pico(to_pico_units(*row.p_povm)) : kNan);
      cells.emplace_back(kNan);
      cells.push_back(slack_or_nan(row.slacks, "d"));
      cells.push_back(slack_or_nan(row.slacks, "E"));
      if (with_reduced_slack) cells.push_back(slack_or_nan(row.slacks, "d_reduced"));
      for (int k = 0; k < 4; ++k) cells.emplace_back("false");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InvalidArgument("csv: no column " + std::string(name));
}

Table parse(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  Table table;
  std::string line;
  if (!std::getline(in, line)) return table;
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw InvalidArgument("csv: row has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

std::vector<std::size_t> delta_mismatches(const Table& table) {
  const std::size_t a = table.column("p_npovm");
  const std::size_t b = table.column("p_povm");
  const std::size_t d = table.column("delta_p");
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row[a] == kNan || row[b] == kNan || row[d] == kNan) continue;
    const auto pa = parse_pico(row[a]);
    const auto pb = parse_pico(row[b]);
    const auto pd = parse_pico(row[d]);
    if (!pa || !pb || !pd || *pa - *pb != *pd) bad.push_back(i);
  }
  return bad;
}

}  // namespace npovm::csv
