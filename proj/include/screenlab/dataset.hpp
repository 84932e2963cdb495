#pragma once

// Dataset CSV: comma-separated, header row required, no quoting.
//
//   z,d,y[,stated_complier][,true_type]
//
// z, d and stated_complier are 0/1 integers, y is a real number, true_type is
// one of c (complier), a (always-taker), n (never-taker). Columns may appear
// in any order on input; output always uses the order above.

#include <iosfwd>
#include <string>

#include "screenlab/dgp.hpp"

namespace screenlab {

/// Throws Error(SchemaError) naming the line and column of the first bad field.
Sample read_dataset(std::istream& in);
Sample read_dataset_file(const std::string& path);

/// Writes z,d,y plus stated_complier / true_type when every unit has them.
/// Requires binary take-up. y is written in shortest round-trip form.
void write_dataset(std::ostream& out, const Sample& s);
void write_dataset_file(const std::string& path, const Sample& s);

}  // namespace screenlab
