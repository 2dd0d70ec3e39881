#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "fspec/asympt.hpp"
#include "fspec/error.hpp"
#include "fspec/renewal.hpp"
#include "fspec/selfsim.hpp"
#include "fspec/spectral.hpp"
#include "io.hpp"

namespace fspec::cli {

namespace {

struct Options {
  std::string params;
  std::string out;
  std::string side = "pos";
  std::size_t count = 12;
  int depth_max = 12;
  int depth = -1;
  double tol = 0.005;
  double lmin = 1e2;
  double lmax = 1e7;
  std::size_t points = 400;
  std::string phases;
  std::string series;
  std::string meta;
  std::string mode = "auto";
  std::string system;
  std::size_t nmax = 400;
  double horizon = 50.0;
  double step = 0.0;
  double tmin = -10.0;
  double tmax = 100.0;
  std::size_t stride = 1;
};

Side parse_side(const std::string& s) {
  if (s == "pos" || s == "+" || s == "positive") return Side::Positive;
  if (s == "neg" || s == "-" || s == "negative") return Side::Negative;
  throw Error(ErrorCode::InvalidArgument, "side must be 'pos' or 'neg'");
}

struct Loaded {
  SelfSimilarParams params;
  SimilarityMeta meta;
};

Loaded load(const Options& o) {
  auto params = validate_params(io::read_params(o.params));
  auto meta = compute_meta(params);
  return {std::move(params), std::move(meta)};
}

// Writes through `emit` to --out or to the given stream.
void write_output(const Options& o, std::ostream& out,
                  const std::function<void(std::ostream&)>& emit) {
  if (o.out.empty()) {
    emit(out);
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw Error(ErrorCode::Io, "cannot write '" + o.out + "'");
  emit(file);
  if (!file) throw Error(ErrorCode::Io, "write to '" + o.out + "' failed");
}

int cmd_meta(const Options& o, std::ostream& out) {
  const auto [params, meta] = load(o);
  write_output(o, out, [&](std::ostream& s) { s << io::meta_to_json(params, meta).dump(2) << '\n'; });
  return kOk;
}

ConvergencePolicy policy_of(const Options& o) {
  ConvergencePolicy p;
  p.depth_max = o.depth_max;
  p.tol = o.tol;
  return p;
}

int cmd_eigen(const Options& o, std::ostream& out, std::ostream& err) {
  const auto [params, meta] = load(o);
  const Side side = parse_side(o.side);
  const auto r = converged_eigenvalues(params, meta, side, o.count, policy_of(o));
  const int sgn = side == Side::Positive ? 1 : -1;
  write_output(o, out, [&](std::ostream& s) {
    s << "n,lambda,rel_gap\n";
    for (std::size_t k = 0; k < r.values.size(); ++k)
      s << sgn * static_cast<int>(k + 1) << ',' << io::fmt(r.values[k]) << ','
        << io::fmt(r.rel_gap.empty() ? std::numeric_limits<double>::quiet_NaN() : r.rel_gap[k])
        << '\n';
  });
  if (!r.converged) {
    err << "eigenvalues did not converge to tol " << o.tol << " by depth " << r.depth << '\n';
    return kNumerical;
  }
  return kOk;
}

int cmd_table1(const Options& o, std::ostream& out, std::ostream& err) {
  const auto [params, meta] = load(o);
  const auto pos = converged_eigenvalues(params, meta, Side::Positive, o.count, policy_of(o));
  const auto neg = converged_eigenvalues(params, meta, Side::Negative, o.count, policy_of(o));
  write_output(o, out, [&](std::ostream& s) {
    s << "n,lambda,rel_gap,ratio\n";
    for (const auto* r : {&pos, &neg}) {
      const int sgn = r->side == Side::Positive ? 1 : -1;
      for (std::size_t k = 0; k < r->values.size(); ++k) {
        const double n = static_cast<double>(k + 1);
        s << sgn * static_cast<int>(k + 1) << ',' << io::fmt(r->values[k]) << ','
          << io::fmt(r->rel_gap.empty() ? std::numeric_limits<double>::quiet_NaN() : r->rel_gap[k])
          << ',' << io::fmt(n / std::pow(std::abs(r->values[k]), meta.half_order())) << '\n';
      }
    }
  });
  if (!pos.converged || !neg.converged) {
    err << "eigenvalues did not converge to tol " << o.tol << '\n';
    return kNumerical;
  }
  return kOk;
}

int counting_depth(const Options& o, const SelfSimilarParams& params) {
  if (o.depth >= 0) return o.depth;
  int depth = 0;
  while (depth < o.depth_max && cell_count(params.size(), depth + 1, std::size_t{1} << 16)) ++depth;
  return depth;
}

int cmd_counting(const Options& o, std::ostream& out) {
  const auto [params, meta] = load(o);
  const Side side = parse_side(o.side);
  auto grid = log_grid(o.lmin, o.lmax, o.points);
  if (!o.phases.empty() && meta.nu) {
    const auto phases = io::parse_list(o.phases);
    const auto extra = phase_aligned_magnitudes({o.lmin, o.lmax}, *meta.nu, phases, side);
    grid.insert(grid.end(), extra.begin(), extra.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a / b - 1.0) < 1e-5; }),
               grid.end());
  }
  const auto pencil = assemble_pencil(params, meta, counting_depth(o, params));
  const auto series = counting_series(pencil, side, grid);
  write_output(o, out, [&](std::ostream& s) { io::write_counting_csv(s, series); });
  return kOk;
}

int cmd_s_estimate(const Options& o, std::ostream& out) {
  const auto meta = io::parse_series_meta(io::read_json(o.meta));
  std::ifstream in(o.series);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + o.series + "'");
  const auto series = io::read_counting_csv(in, meta);
  std::string mode = o.mode;
  if (mode == "auto")
    mode = meta.classification == Classification::DegenerateArithmetic ? "periodic" : "constant";
  AmplitudeEstimate est;
  if (mode == "periodic") {
    const auto phases = io::parse_list(o.phases.empty() ? "0,1" : o.phases);
    est = estimate_periodic_s(series, phases);
  } else if (mode == "constant") {
    est = estimate_constant_s(series);
  } else {
    throw Error(ErrorCode::InvalidArgument, "mode must be auto, periodic or constant");
  }
  write_output(o, out, [&](std::ostream& s) { s << io::amplitude_to_json(est).dump(2) << '\n'; });
  return kOk;
}

io::RenewalSystem load_system(const Options& o) { return io::parse_system(io::read_json(o.system)); }

int cmd_renewal_discrete(const Options& o, std::ostream& out) {
  const auto sys = load_system(o);
  const auto z = solve_discrete(sys.coeffs, sys.x1, sys.x2, o.nmax);
  RenewalSolution sol;
  sol.z1 = z.z1;
  sol.z2 = z.z2;
  std::optional<DiscreteLimits> limits;
  if (has_degenerate_parity(sys.coeffs)) limits = discrete_limits(sys.coeffs, sys.x1, sys.x2);
  for (std::size_t n = 0; n <= o.nmax; ++n) {
    sol.t.push_back(static_cast<double>(n));
    sol.predicted1.push_back(limits ? limits->limit(1, n) : std::numeric_limits<double>::quiet_NaN());
  }
  write_output(o, out, [&](std::ostream& s) { io::write_solution_csv(s, sol); });
  return kOk;
}

int cmd_renewal_lattice(const Options& o, std::ostream& out) {
  const auto sys = load_system(o);
  const auto phases = io::parse_list(o.phases.empty() ? "0" : o.phases);
  const auto sol = solve_lattice(sys.coeffs, sys.forcing1, sys.forcing2, phases, o.horizon);
  write_output(o, out, [&](std::ostream& s) { io::write_solution_csv(s, sol); });
  return kOk;
}

int cmd_renewal_nonarith(const Options& o, std::ostream& out) {
  const auto sys = load_system(o);
  NonArithmeticOptions opts;
  opts.step = o.step;
  opts.t_min = o.tmin;
  opts.t_max = o.tmax;
  auto sol = solve_nonarithmetic(sys.coeffs, sys.forcing1, sys.forcing2, opts);
  if (o.stride > 1) {
    RenewalSolution thin;
    for (std::size_t i = 0; i < sol.t.size(); i += o.stride) {
      thin.t.push_back(sol.t[i]);
      thin.z1.push_back(sol.z1[i]);
      thin.z2.push_back(sol.z2[i]);
      thin.predicted1.push_back(sol.predicted1[i]);
      thin.predicted2.push_back(sol.predicted2[i]);
    }
    sol = std::move(thin);
  }
  write_output(o, out, [&](std::ostream& s) { io::write_solution_csv(s, sol); });
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral asymptotics of indefinite strings with self-similar weights",
               "fractal-spectra"};
  app.require_subcommand(1);
  Options o;

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--params", o.params, "IFS parameter JSON {a, d, beta}")->required();
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "output file (default stdout)"); };
  auto add_policy = [&](CLI::App* sub) {
    sub->add_option("--depth-max", o.depth_max, "maximum refinement depth")->check(CLI::Range(1, 40));
    sub->add_option("--tol", o.tol, "relative change accepted between depths")
        ->check(CLI::PositiveNumber);
    sub->add_option("--count", o.count, "eigenvalues per ray")->check(CLI::PositiveNumber);
  };

  auto* meta = app.add_subcommand("meta", "derived quantities of the self-similar function (JSON)");
  add_params(meta);
  add_out(meta);

  auto* table1 = app.add_subcommand("table1", "first eigenvalues on both rays with ratios (CSV)");
  add_params(table1);
  add_policy(table1);
  add_out(table1);

  auto* eigen = app.add_subcommand("eigen", "first eigenvalues on one ray (CSV)");
  add_params(eigen);
  add_policy(eigen);
  eigen->add_option("--side", o.side, "pos or neg");
  add_out(eigen);

  auto* counting = app.add_subcommand("counting", "counting function on a log grid (CSV)");
  add_params(counting);
  counting->add_option("--lmin", o.lmin)->check(CLI::PositiveNumber);
  counting->add_option("--lmax", o.lmax)->check(CLI::PositiveNumber);
  counting->add_option("--points", o.points)->check(CLI::Range(2, 10000000));
  counting->add_option("--side", o.side, "pos or neg");
  counting->add_option("--depth", o.depth, "mesh depth (default: up to 2^16 cells)");
  counting->add_option("--depth-max", o.depth_max)->check(CLI::Range(1, 40));
  counting->add_option("--phases", o.phases, "also sample exp(nu (2k + phi)) for these phases");
  add_out(counting);

  auto* s_est = app.add_subcommand("s-estimate", "amplitude estimate from a counting series (JSON)");
  s_est->add_option("--series", o.series, "counting CSV")->required();
  s_est->add_option("--meta", o.meta, "meta JSON from the 'meta' command")->required();
  s_est->add_option("--phases", o.phases, "comma-separated phases");
  s_est->add_option("--mode", o.mode, "auto, periodic or constant");
  add_out(s_est);

  auto add_system = [&](CLI::App* sub) {
    sub->add_option("--system", o.system, "renewal system JSON")->required();
  };
  auto* rd = app.add_subcommand("renewal-discrete", "discrete two-component recursion (CSV)");
  add_system(rd);
  rd->add_option("--nmax", o.nmax);
  add_out(rd);

  auto* rl = app.add_subcommand("renewal-lattice", "lattice renewal system by phase fibers (CSV)");
  add_system(rl);
  rl->add_option("--phases", o.phases, "fiber phases in [0, 1)");
  rl->add_option("--horizon", o.horizon);
  add_out(rl);

  auto* rn = app.add_subcommand("renewal-nonarith", "real-delay renewal system by time marching (CSV)");
  add_system(rn);
  rn->add_option("--step", o.step, "grid step (default min delay / 64)");
  rn->add_option("--tmin", o.tmin);
  rn->add_option("--tmax", o.tmax);
  rn->add_option("--stride", o.stride, "write every n-th grid point")->check(CLI::PositiveNumber);
  add_out(rn);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kValidation;
  }

  try {
    if (meta->parsed()) return cmd_meta(o, out);
    if (table1->parsed()) return cmd_table1(o, out, err);
    if (eigen->parsed()) return cmd_eigen(o, out, err);
    if (counting->parsed()) return cmd_counting(o, out);
    if (s_est->parsed()) return cmd_s_estimate(o, out);
    if (rd->parsed()) return cmd_renewal_discrete(o, out);
    if (rl->parsed()) return cmd_renewal_lattice(o, out);
    if (rn->parsed()) return cmd_renewal_nonarith(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (kind_of(e.code())) {
      case ErrorKind::Validation: return kValidation;
      case ErrorKind::Numerical: return kNumerical;
      case ErrorKind::Io: return kIo;
    }
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

}  // namespace fspec::cli
