#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "storeplan/solver/problem.hpp"

namespace storeplan::solver {

struct MpsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed-format MPS. Names are cut to 8 characters (spaces become '_'); clashes after cutting
/// get a base-36 counter suffix, in column/row order. The objective row is COST and the
/// objective offset is written as its negated RHS. Ranged rows are L rows with a RANGES entry.
/// Binaries on [0,1] get a BV bound.
std::string export_mps(const Problem& problem);

/// Column names exactly as export_mps writes them.
std::vector<std::string> mps_column_names(const Problem& problem);

/// Reads free- or fixed-format MPS (whitespace separated fields, no spaces inside names).
Problem read_mps(std::string_view text);

}  // namespace storeplan::solver
