#pragma once

// File formats of the command-line front end: parameter/system JSON in,
// CSV and JSON reports out.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fspec/asympt.hpp"
#include "fspec/renewal.hpp"
#include "fspec/selfsim.hpp"
#include "fspec/spectral.hpp"

namespace fspec::io {

using nlohmann::json;

/// A JSON number, or a string holding a decimal or "p/q" rational.
double parse_number(const json& value);
std::vector<double> parse_vector(const json& value, const char* field);

RawParams parse_params(const json& doc);
RawParams read_params(const std::string& path);

json meta_to_json(const SelfSimilarParams& params, const SimilarityMeta& meta);
/// Reads the fields of meta_to_json needed by the amplitude estimators.
struct SeriesMeta {
  double D = 0.0;
  std::optional<double> nu;
  Classification classification = Classification::NonArithmetic;
};
SeriesMeta parse_series_meta(const json& doc);

Forcing parse_forcing(const json& spec);

struct RenewalSystem {
  RenewalCoefficients coeffs;
  std::vector<double> x1, x2;  // discrete sequences
  Forcing forcing1, forcing2;
};
RenewalSystem parse_system(const json& doc);

json read_json(const std::string& path);
std::string read_text(const std::string& path);

/// Scientific notation with 6 significant digits.
std::string fmt(double value);

void write_counting_csv(std::ostream& out, const CountingSeries& series);
/// Side is negative when every lambda is negative.
CountingSeries read_counting_csv(std::istream& in, const SeriesMeta& meta);

void write_solution_csv(std::ostream& out, const RenewalSolution& sol);
json amplitude_to_json(const AmplitudeEstimate& est);

std::vector<double> parse_list(const std::string& csv);

}  // namespace fspec::io
