#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace circirf::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, const std::string& path, int line, const char* column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (field.empty() || used != field.size() || !std::isfinite(v))
    throw InputError(path + ":" + std::to_string(line) + ": cannot parse " + column + " from '" + field + "'");
  return v;
}

}  // namespace

InputData read_dataset(const std::string& path, bool degrees, int realization) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");

  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(trim(line));
      break;
    }
  }
  if (header.size() < 2 || header[0] != "angle" || header[1] != "value")
    throw InputError(path + ":" + std::to_string(line_no) + ": expected header 'angle,value'");
  int index_column = -1;
  for (std::size_t i = 2; i < header.size(); ++i)
    if (header[i] == "realization_index") index_column = static_cast<int>(i);

  std::vector<double> raw;
  std::vector<Angle> points;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line));
    if (fields.size() != header.size())
      throw InputError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    if (index_column >= 0) {
      const double idx = parse_number(fields[static_cast<std::size_t>(index_column)], path, line_no, "realization_index");
      if (idx != realization) continue;
    }
    const double a = parse_number(fields[0], path, line_no, "angle");
    raw.push_back(a);
    points.push_back(degrees ? Angle::from_degrees(a) : Angle(a));
    values.push_back(parse_number(fields[1], path, line_no, "value"));
  }
  if (points.empty()) throw InputError(path + ": no data rows");
  return {std::move(raw), Dataset(std::move(points), std::move(values))};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

double angle_out(Angle a, bool degrees) { return degrees ? a.degrees() : a.radians(); }

}  // namespace

void write_predictions(std::ostream& os, const std::vector<double>& angles, const std::vector<Prediction>& predictions) {
  os << "angle,prediction,kriging_variance\n";
  for (std::size_t i = 0; i < predictions.size(); ++i)
    os << format_double(angles[i]) << ',' << format_double(predictions[i].value) << ','
       << format_double(predictions[i].kriging_variance) << '\n';
}

void write_realizations(std::ostream& os, const std::vector<Realization>& realizations, bool degrees) {
  os << "angle,value,realization_index\n";
  for (std::size_t r = 0; r < realizations.size(); ++r) {
    const auto& path = realizations[r];
    for (int j = 0; j < path.grid_size(); ++j)
      os << format_double(angle_out(path.location(j), degrees)) << ','
         << format_double(path.values[static_cast<std::size_t>(j)]) << ',' << r << '\n';
  }
}

}  // namespace circirf::cli
