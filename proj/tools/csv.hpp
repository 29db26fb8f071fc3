#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "circirf/errors.hpp"
#include "circirf/kriging.hpp"
#include "circirf/simulate.hpp"

namespace circirf::cli {

/// Malformed input file; the message names the offending line.
class InputError : public Error {
public:
  using Error::Error;
};

struct InputData {
  /// Angles as written in the file, in the file's units.
  std::vector<double> angles;
  Dataset data;
};

/// Reads `angle,value[,realization_index]`. With a realization_index column
/// only rows whose index equals `realization` are kept.
InputData read_dataset(const std::string& path, bool degrees, int realization = 0);

/// Full round-trip precision.
std::string format_double(double x);

/// `angles` are echoed verbatim, so they stay in the caller's units.
void write_predictions(std::ostream& os, const std::vector<double>& angles, const std::vector<Prediction>& predictions);
void write_realizations(std::ostream& os, const std::vector<Realization>& realizations, bool degrees);

}  // namespace circirf::cli
