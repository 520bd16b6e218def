#pragma once

// Locale-independent CSV for sweep tables.
//
// General reals use 12 significant digits. Probability columns (p_npovm,
// p_povm, delta_p) are written as fixed-point decimals with 12 places from
// integer multiples of 1e-12, with delta_p formed from the two rounded
// integers, so delta_p == p_npovm - p_povm holds exactly on reload.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "npovm/optimizer.hpp"

namespace npovm::csv {

/// 12 significant digits, shortest form; "nan", "inf", "-inf" for
/// non-finite values.
std::string format_real(double v);

/// round(p * 1e12) as an integer count of 1e-12 units.
std::int64_t to_pico_units(double p);
/// Fixed 12-decimal rendering of an integer count of 1e-12 units.
std::string format_pico(std::int64_t units);
/// Inverse of format_pico; nullopt unless `text` has that exact shape.
std::optional<std::int64_t> parse_pico(std::string_view text);

/// Writes header and rows. InvalidPoint rows are omitted; Infeasible rows
/// keep their axis values and slacks, with "nan" in the result columns and
/// feasible = false.
void write_sweep(std::ostream& out, const optimizer::SweepTable& table,
                 const std::vector<std::string>& free_names, bool with_reduced_slack);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws InvalidArgument if absent.
  std::size_t column(std::string_view name) const;
};

/// Plain comma split, no quoting (the writer never quotes).
Table parse(std::istream& in);

/// Rows whose serialized delta_p differs from p_npovm - p_povm, recomputed
/// in integer units. Rows with "nan" in any of the three are skipped.
std::vector<std::size_t> delta_mismatches(const Table& table);

}  // namespace npovm::csv
