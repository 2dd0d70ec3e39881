#include "fspec/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fspec/error.hpp"

namespace fspec {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kNegligible = 1e-17;

double eval(const ForcingShape& shape, double t) {
  return std::visit(
      overloaded{
          [t](const Gaussian& g) {
            const double z = (t - g.center) / g.width;
            return g.mass / (g.width * std::sqrt(2.0 * std::numbers::pi)) * std::exp(-0.5 * z * z);
          },
          [t](const TriangleBump& b) {
            if (t <= b.left || t >= b.right) return 0.0;
            const double half = 0.5 * (b.right - b.left);
            const double peak = b.mass / half;
            return peak * (1.0 - std::abs(t - (b.left + half)) / half);
          },
          [t](const ExpCut& e) {
            return t < e.start ? 0.0 : e.amplitude * std::exp(-e.rate * (t - e.start));
          },
          [t](const Table& tab) {
            if (t < tab.t.front() || t > tab.t.back()) return 0.0;
            auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
            if (it == tab.t.end()) return tab.x.back();
            const auto i = static_cast<std::size_t>(it - tab.t.begin());
            const double w = (t - tab.t[i - 1]) / (tab.t[i] - tab.t[i - 1]);
            return (1.0 - w) * tab.x[i - 1] + w * tab.x[i];
          },
      },
      shape);
}

double integral_of(const ForcingShape& shape) {
  return std::visit(overloaded{
                        [](const Gaussian& g) { return g.mass; },
                        [](const TriangleBump& b) { return b.mass; },
                        [](const ExpCut& e) { return e.amplitude / e.rate; },
                        [](const Table& tab) {
                          double s = 0.0;
                          for (std::size_t i = 1; i < tab.t.size(); ++i)
                            s += 0.5 * (tab.x[i] + tab.x[i - 1]) * (tab.t[i] - tab.t[i - 1]);
                          return s;
                        },
                    },
                    shape);
}

// Integral of |shape| over (-inf, t].
double abs_left_mass(const ForcingShape& shape, double t) {
  return std::visit(
      overloaded{
          [t](const Gaussian& g) {
            return std::abs(g.mass) * 0.5 *
                   std::erfc(-(t - g.center) / (g.width * std::numbers::sqrt2));
          },
          [t](const TriangleBump& b) {
            if (t <= b.left) return 0.0;
            if (t >= b.right) return std::abs(b.mass);
            const double half = 0.5 * (b.right - b.left);
            const double mid = b.left + half;
            const double m = std::abs(b.mass);
            if (t <= mid) {
              const double s = (t - b.left) / half;
              return 0.5 * m * s * s;
            }
            const double s = (b.right - t) / half;
            return m - 0.5 * m * s * s;
          },
          [t](const ExpCut& e) {
            if (t <= e.start) return 0.0;
            return std::abs(e.amplitude) / e.rate * (1.0 - std::exp(-e.rate * (t - e.start)));
          },
          [t](const Table& tab) {
            double s = 0.0;
            for (std::size_t i = 1; i < tab.t.size() && tab.t[i - 1] < t; ++i) {
              const double right = std::min(t, tab.t[i]);
              const double x_right = eval(tab, right);
              s += 0.5 * (std::abs(tab.x[i - 1]) + std::abs(x_right)) * (right - tab.t[i - 1]);
            }
            return s;
          },
      },
      shape);
}

std::pair<double, double> support_of(const ForcingShape& shape) {
  return std::visit(
      overloaded{
          [](const Gaussian& g) {
            // exp(-z^2/2) < 1e-17 for |z| > 8.9
            return std::pair{g.center - 9.0 * g.width, g.center + 9.0 * g.width};
          },
          [](const TriangleBump& b) { return std::pair{b.left, b.right}; },
          [](const ExpCut& e) {
            return std::pair{e.start, e.start - std::log(kNegligible) / e.rate};
          },
          [](const Table& tab) { return std::pair{tab.t.front(), tab.t.back()}; },
      },
      shape);
}

void check_shape(const ForcingShape& shape) {
  std::visit(overloaded{
                 [](const Gaussian& g) {
                   if (!(g.width > 0.0))
                     throw Error(ErrorCode::InvalidArgument, "gaussian width must be positive");
                 },
                 [](const TriangleBump& b) {
                   if (!(b.right > b.left))
                     throw Error(ErrorCode::InvalidArgument, "triangle needs left < right");
                 },
                 [](const ExpCut& e) {
                   if (!(e.rate > 0.0))
                     throw Error(ErrorCode::InvalidArgument, "expcut rate must be positive");
                 },
                 [](const Table& tab) {
                   if (tab.t.size() != tab.x.size() || tab.t.size() < 2)
                     throw Error(ErrorCode::InvalidArgument,
                                 "table needs >= 2 points and equal t/x lengths");
                   for (std::size_t i = 1; i < tab.t.size(); ++i)
                     if (!(tab.t[i] > tab.t[i - 1]))
                       throw Error(ErrorCode::InvalidArgument, "table t must be increasing");
                   for (double x : tab.x)
                     if (!std::isfinite(x))
                       throw Error(ErrorCode::InvalidArgument, "table x must be finite");
                 },
             },
             shape);
}

}  // namespace

Forcing::Forcing(ForcingShape shape, double weight) {
  check_shape(shape);
  terms_.push_back({std::move(shape), weight});
  derive_certificate();
}

Forcing Forcing::gaussian(double center, double width, double mass) {
  return Forcing(Gaussian{center, width, mass});
}
Forcing Forcing::triangle(double left, double right, double mass) {
  return Forcing(TriangleBump{left, right, mass});
}
Forcing Forcing::exp_cut(double start, double rate, double amplitude) {
  return Forcing(ExpCut{start, rate, amplitude});
}
Forcing Forcing::table(std::vector<double> t, std::vector<double> x) {
  return Forcing(Table{std::move(t), std::move(x)});
}

double Forcing::operator()(double t) const {
  double s = 0.0;
  for (const auto& term : terms_) s += term.weight * eval(term.shape, t);
  return s;
}

double Forcing::integral() const {
  double s = 0.0;
  for (const auto& term : terms_) s += term.weight * integral_of(term.shape);
  return s;
}

double Forcing::abs_mass_left_of(double t) const {
  double s = 0.0;
  for (const auto& term : terms_) s += std::abs(term.weight) * abs_left_mass(term.shape, t);
  return s;
}

std::pair<double, double> Forcing::effective_support() const {
  if (terms_.empty()) return {0.0, 0.0};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& term : terms_) {
    auto [a, b] = support_of(term.shape);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  return {lo, hi};
}

double Forcing::envelope_constant() const {
  if (terms_.empty()) return 0.0;
  auto [lo, hi] = effective_support();
  const double span = hi - lo;
  const int samples = 200000;
  double best = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = lo + span * i / samples;
    best = std::max(best, std::abs((*this)(t)) * (t * t + 1.0));
  }
  return best;
}

bool Forcing::vanishes_on_negative_axis(double tol) const {
  if (terms_.empty()) return true;
  const double scale = std::max(1.0, abs_mass_left_of(std::numeric_limits<double>::max()));
  return abs_mass_left_of(0.0) <= tol * scale;
}

Forcing Forcing::shifted(double dt) const {
  Forcing out = *this;
  for (auto& term : out.terms_) {
    std::visit(overloaded{
                   [dt](Gaussian& g) { g.center += dt; },
                   [dt](TriangleBump& b) {
                     b.left += dt;
                     b.right += dt;
                   },
                   [dt](ExpCut& e) { e.start += dt; },
                   [dt](Table& tab) {
                     for (auto& t : tab.t) t += dt;
                   },
               },
               term.shape);
  }
  out.derive_certificate();
  return out;
}

Forcing& Forcing::operator+=(const Forcing& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  derive_certificate();
  return *this;
}

Forcing& Forcing::operator*=(double factor) {
  if (factor == 0.0) {
    terms_.clear();
  } else {
    for (auto& term : terms_) term.weight *= factor;
  }
  derive_certificate();
  return *this;
}

void Forcing::derive_certificate() {
  cert_ = DecayCertificate{};
  if (terms_.empty()) return;
  auto [lo, hi] = effective_support();
  cert_.lo = lo;
  cert_.hi = hi;
  bool compact = true;
  double rate = std::numeric_limits<double>::infinity();
  double bound = 0.0;
  for (const auto& term : terms_) {
    if (const auto* e = std::get_if<ExpCut>(&term.shape)) {
      compact = false;
      rate = std::min(rate, e->rate);
      bound += std::abs(term.weight * e->amplitude);
    } else if (const auto* g = std::get_if<Gaussian>(&term.shape)) {
      // Treated as compact on its 9-sigma window; the tails are below 1e-17.
      bound += std::abs(term.weight * g->mass) / g->width;
    }
  }
  if (compact) {
    cert_.kind = DecayKind::Compact;
  } else {
    cert_.kind = DecayKind::Exponential;
    cert_.rate = rate;
    cert_.bound = bound;
  }
}

}  // namespace fspec
