#pragma once

// Forcing terms X(t) for the renewal systems: linear combinations of a small
// closed-form registry plus tabulated samples, carrying a decay certificate.

#include <utility>
#include <variant>
#include <vector>

namespace fspec {

struct Gaussian {
  double center = 0.0;
  double width = 1.0;
  double mass = 1.0;
};

/// Symmetric hat on [left, right] with the given integral.
struct TriangleBump {
  double left = 0.0;
  double right = 1.0;
  double mass = 1.0;
};

/// amplitude * exp(-rate (t - start)) for t >= start, zero before.
struct ExpCut {
  double start = 0.0;
  double rate = 1.0;
  double amplitude = 1.0;
};

/// Piecewise-linear through (t_i, x_i), zero outside [t_0, t_last].
struct Table {
  std::vector<double> t;
  std::vector<double> x;
};

using ForcingShape = std::variant<Gaussian, TriangleBump, ExpCut, Table>;

enum class DecayKind {
  None,         // no certificate: series-based limits refuse to run
  Compact,      // zero outside [lo, hi]
  Exponential,  // |X(t)| <= bound * exp(-rate (t - lo)) beyond hi
  Algebraic,    // |X(t)| <= bound / (t^2 + 1)
};

struct DecayCertificate {
  DecayKind kind = DecayKind::Compact;
  double rate = 0.0;
  double bound = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

class Forcing {
 public:
  struct Term {
    ForcingShape shape;
    double weight = 1.0;
  };

  /// The zero forcing.
  Forcing() = default;
  Forcing(ForcingShape shape, double weight = 1.0);  // NOLINT(google-explicit-constructor)

  static Forcing gaussian(double center, double width, double mass = 1.0);
  static Forcing triangle(double left, double right, double mass = 1.0);
  static Forcing exp_cut(double start, double rate, double amplitude = 1.0);
  static Forcing table(std::vector<double> t, std::vector<double> x);

  double operator()(double t) const;
  /// Integral over the real line.
  double integral() const;
  /// Integral of |X| over (-inf, t], bounded termwise.
  double abs_mass_left_of(double t) const;
  /// sup_t |X(t)| (t^2 + 1), sampled.
  double envelope_constant() const;
  bool vanishes_on_negative_axis(double tol = 1e-14) const;
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Interval outside which |X| is below 1e-17 of its scale.
  std::pair<double, double> effective_support() const;

  const DecayCertificate& certificate() const noexcept { return cert_; }
  /// Certificates are trusted inputs; this replaces the derived one.
  void set_certificate(DecayCertificate cert) { cert_ = cert; }

  const std::vector<Term>& terms() const noexcept { return terms_; }

  Forcing shifted(double dt) const;
  Forcing& operator+=(const Forcing& other);
  Forcing& operator*=(double factor);
  friend Forcing operator+(Forcing lhs, const Forcing& rhs) { return lhs += rhs; }
  friend Forcing operator*(double factor, Forcing f) { return f *= factor; }

 private:
  void derive_certificate();

  std::vector<Term> terms_;
  DecayCertificate cert_{};
};

}  // namespace fspec
