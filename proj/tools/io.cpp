#include "io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fspec/error.hpp"

namespace fspec::io {

namespace {

double parse_decimal(const std::string& text) {
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + text + "'");
  return value;
}

}  // namespace

double parse_number(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);
    const double den = parse_decimal(s.substr(slash + 1));
    if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + s + "'");
    return parse_decimal(s.substr(0, slash)) / den;
  }
  throw Error(ErrorCode::InvalidArgument, "expected a number, got " + value.dump());
}

std::vector<double> parse_vector(const json& value, const char* field) {
  if (!value.is_array())
    throw Error(ErrorCode::InvalidArgument, std::string("field '") + field + "' must be an array");
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& v : value) out.push_back(parse_number(v));
  return out;
}

RawParams parse_params(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "parameter file must be an object");
  for (const char* key : {"a", "d", "beta"})
    if (!doc.contains(key))
      throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
  return {parse_vector(doc["a"], "a"), parse_vector(doc["d"], "d"),
          parse_vector(doc["beta"], "beta")};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  const auto text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, "malformed JSON in '" + path + "': " + e.what());
  }
}

RawParams read_params(const std::string& path) { return parse_params(read_json(path)); }

json meta_to_json(const SelfSimilarParams& params, const SimilarityMeta& meta) {
  json j;
  j["N"] = params.size();
  j["p0"] = meta.p0;
  j["p1"] = meta.p1;
  j["M0"] = meta.M0;
  j["M1"] = meta.M1;
  j["D"] = meta.D;
  j["D_half"] = meta.half_order();
  j["classification"] = to_string(meta.classification);
  j["nu"] = meta.nu ? json(*meta.nu) : json(nullptr);
  json parity = json::array();
  for (const auto& p : meta.parity)
    parity.push_back({{"piece", p.piece + 1}, {"multiple", p.multiple}, {"odd", p.odd}});
  j["parity"] = parity;
  int depth = 0;
  while (cell_count(params.size(), depth + 1, 1u << 12)) ++depth;
  const auto r = refine(params, meta, depth);
  j["continuous"] = r.continuous;
  j["max_jump"] = r.max_jump;
  return j;
}

SeriesMeta parse_series_meta(const json& doc) {
  SeriesMeta m;
  if (!doc.contains("D")) throw Error(ErrorCode::InvalidArgument, "meta file lacks 'D'");
  m.D = parse_number(doc["D"]);
  if (doc.contains("nu") && !doc["nu"].is_null()) m.nu = parse_number(doc["nu"]);
  const auto c = doc.value("classification", std::string("nonarithmetic"));
  if (c == "degenerate_arithmetic")
    m.classification = Classification::DegenerateArithmetic;
  else if (c == "arithmetic")
    m.classification = Classification::Arithmetic;
  else if (c == "nonarithmetic")
    m.classification = Classification::NonArithmetic;
  else
    throw Error(ErrorCode::InvalidArgument, "unknown classification '" + c + "'");
  return m;
}

Forcing parse_forcing(const json& spec) {
  if (!spec.is_object() || !spec.contains("kind"))
    throw Error(ErrorCode::InvalidArgument, "forcing spec needs a 'kind'");
  const auto kind = spec["kind"].get<std::string>();
  auto num = [&](const char* key, double fallback) {
    return spec.contains(key) ? parse_number(spec[key]) : fallback;
  };
  Forcing f;
  if (kind == "zero") {
    return f;
  } else if (kind == "gaussian") {
    f = Forcing::gaussian(num("center", 0.0), num("width", 1.0), num("mass", 1.0));
  } else if (kind == "triangle") {
    f = Forcing::triangle(num("left", 0.0), num("right", 1.0), num("mass", 1.0));
  } else if (kind == "expcut") {
    f = Forcing::exp_cut(num("start", 0.0), num("rate", 1.0), num("amplitude", 1.0));
  } else if (kind == "table") {
    if (!spec.contains("t") || !spec.contains("x"))
      throw Error(ErrorCode::InvalidArgument, "table forcing needs 't' and 'x'");
    f = Forcing::table(parse_vector(spec["t"], "t"), parse_vector(spec["x"], "x"));
  } else if (kind == "sum") {
    if (!spec.contains("terms") || !spec["terms"].is_array())
      throw Error(ErrorCode::InvalidArgument, "sum forcing needs a 'terms' array");
    for (const auto& term : spec["terms"]) f += parse_forcing(term);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown forcing kind '" + kind + "'");
  }
  if (spec.contains("scale")) f *= parse_number(spec["scale"]);
  return f;
}

RenewalSystem parse_system(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "system file must be an object");
  RenewalSystem s;
  if (!doc.contains("u") || !doc.contains("v"))
    throw Error(ErrorCode::InvalidArgument, "system needs 'u' and 'v'");
  s.coeffs.u = parse_vector(doc["u"], "u");
  s.coeffs.v = parse_vector(doc["v"], "v");
  if (doc.contains("delays")) s.coeffs.delays = parse_vector(doc["delays"], "delays");
  if (doc.contains("x1")) s.x1 = parse_vector(doc["x1"], "x1");
  if (doc.contains("x2")) s.x2 = parse_vector(doc["x2"], "x2");
  if (doc.contains("forcing1")) s.forcing1 = parse_forcing(doc["forcing1"]);
  if (doc.contains("forcing2")) s.forcing2 = parse_forcing(doc["forcing2"]);
  return s;
}

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", value);
  return buf;
}

void write_counting_csv(std::ostream& out, const CountingSeries& series) {
  out << "lambda,ind\n";
  for (const auto& s : series.samples) out << fmt(s.lambda) << ',' << s.ind << '\n';
}

CountingSeries read_counting_csv(std::istream& in, const SeriesMeta& meta) {
  CountingSeries s;
  s.D = meta.D;
  s.nu = meta.nu;
  s.classification = meta.classification;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, "empty counting series");
  if (line.rfind("lambda", 0) != 0)
    throw Error(ErrorCode::InvalidArgument, "counting series header must start with 'lambda'");
  bool all_negative = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "bad counting row '" + line + "'");
    const double lambda = parse_decimal(line.substr(0, comma));
    const double ind = parse_decimal(line.substr(comma + 1));
    if (!(ind >= 0.0) || ind != std::floor(ind))
      throw Error(ErrorCode::InvalidArgument, "ind must be a non-negative integer");
    s.samples.push_back({lambda, static_cast<std::size_t>(ind), false});
    all_negative = all_negative && lambda < 0.0;
  }
  if (s.samples.empty()) throw Error(ErrorCode::InvalidArgument, "counting series has no rows");
  s.side = all_negative ? Side::Negative : Side::Positive;
  for (std::size_t i = 1; i < s.samples.size(); ++i)
    if (s.samples[i].ind < s.samples[i - 1].ind) s.monotone = false;
  return s;
}

void write_solution_csv(std::ostream& out, const RenewalSolution& sol) {
  out << "t,Z1,Z2,predicted_limit\n";
  for (std::size_t i = 0; i < sol.t.size(); ++i)
    out << fmt(sol.t[i]) << ',' << fmt(sol.z1[i]) << ',' << fmt(sol.z2[i]) << ','
        << fmt(sol.predicted1[i]) << '\n';
}

json amplitude_to_json(const AmplitudeEstimate& est) {
  json j;
  j["mode"] = est.mode == AmplitudeEstimate::Mode::Periodic ? "periodic" : "constant";
  j["side"] = to_string(est.side);
  j["lambda_window"] = {est.lambda_lo, est.lambda_hi};
  if (est.mode == AmplitudeEstimate::Mode::Periodic) {
    json bins = json::array();
    for (const auto& b : est.bins) {
      json samples = json::array();
      for (const auto& s : b.samples)
        samples.push_back(
            {{"lambda", s.lambda}, {"ind", s.ind}, {"ratio", s.ratio}, {"matched", s.matched}});
      bins.push_back({{"phi", b.phi},
                      {"mean", b.mean},
                      {"min", b.min},
                      {"max", b.max},
                      {"count", b.count},
                      {"tail_count", b.tail_count},
                      {"all_min", b.all_min},
                      {"all_max", b.all_max},
                      {"samples", samples}});
    }
    j["bins"] = bins;
  } else {
    j["s_plus"] = est.s_plus ? json(*est.s_plus) : json(nullptr);
    j["s_minus"] = est.s_minus ? json(*est.s_minus) : json(nullptr);
    j["spread"] = {est.spread_min, est.spread_max};
  }
  return j;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_decimal(item));
  return out;
}

}  // namespace fspec::io
