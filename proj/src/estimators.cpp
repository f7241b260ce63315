#include "tomorisk/estimators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace tomorisk {

namespace {

using Vec = std::array<double, 3>;

double norm_of(const Vec& v, int dim) {
  return dim == 2 ? std::hypot(v[0], v[1]) : std::hypot(v[0], v[1], v[2]);
}

// Euclidean projection onto the closed unit ball.
Vec project_to_ball(Vec v, int dim) {
  const double n = norm_of(v, dim);
  if (n > 1.0) {
    for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] /= n;
  }
  return v;
}

BlochVector make_bloch(const Vec& v, int dim) { return BlochVector(std::span<const double>(v.data(), static_cast<std::size_t>(dim))); }

class LogLikelihood {
 public:
  LogLikelihood(const Dataset& d, const MeasurementDesign& design)
      : dim_(design.num_axes()), shots_(design.shots()) {
    for (int i = 0; i < dim_; ++i) plus_[static_cast<std::size_t>(i)] = d[i];
  }

  double value(const Vec& r) const {
    double ll = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim_); ++i) {
      const int plus = plus_[i];
      const int minus = shots_ - plus;
      if (plus > 0) ll += plus * std::log(std::max(0.0, 0.5 * (1.0 + r[i])));
      if (minus > 0) ll += minus * std::log(std::max(0.0, 0.5 * (1.0 - r[i])));
    }
    return ll;
  }

  Vec gradient(const Vec& r) const {
    Vec g{};
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim_); ++i) {
      const int plus = plus_[i];
      const int minus = shots_ - plus;
      if (plus > 0) g[i] += plus / (1.0 + r[i]);
      if (minus > 0) g[i] -= minus / (1.0 - r[i]);
    }
    return g;
  }

 private:
  int dim_;
  int shots_;
  std::array<int, 3> plus_{};
};

}  // namespace

char axis_label(Axis a) noexcept {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

MeasurementDesign::MeasurementDesign(std::vector<Axis> axes, int shots)
    : axes_(std::move(axes)), shots_(shots) {
  const bool rebit = axes_ == std::vector<Axis>{Axis::X, Axis::Z};
  const bool qubit = axes_ == std::vector<Axis>{Axis::X, Axis::Y, Axis::Z};
  if (!rebit && !qubit) throw InvalidParameter("design axes must be {X,Z} or {X,Y,Z}");
  if (shots_ < 1) throw InvalidParameter("shots per axis must be >= 1");
}

std::size_t MeasurementDesign::num_datasets() const noexcept {
  std::size_t n = 1;
  for (std::size_t i = 0; i < axes_.size(); ++i) n *= static_cast<std::size_t>(shots_) + 1;
  return n;
}

Dataset::Dataset(std::span<const int> counts) {
  if (counts.size() < 1 || counts.size() > 3) throw InvalidDataset("1 to 3 counts expected");
  size_ = static_cast<int>(counts.size());
  std::copy(counts.begin(), counts.end(), counts_.begin());
}

void Dataset::validate(const MeasurementDesign& design) const {
  if (size_ != design.num_axes()) {
    throw InvalidDataset("expected " + std::to_string(design.num_axes()) + " counts, got " +
                         std::to_string(size_));
  }
  for (int i = 0; i < size_; ++i) {
    if (counts_[static_cast<std::size_t>(i)] < 0 || counts_[static_cast<std::size_t>(i)] > design.shots()) {
      throw InvalidDataset("count " + std::to_string(counts_[static_cast<std::size_t>(i)]) +
                           " outside [0, " + std::to_string(design.shots()) + "]");
    }
  }
}

void EstimatorSpec::validate() const {
  if (is_hedged() && !(h > 0.0 && h < 1.0)) {
    throw InvalidParameter("hedging strength h must lie in (0, 1), got " + std::to_string(h));
  }
}

std::string EstimatorSpec::name() const {
  auto with_h = [this](const char* base) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, h);
    return std::string(base) + "(" + std::string(buf, res.ptr) + ")";
  };
  switch (kind) {
    case EstimatorKind::LinearInversion: return "li";
    case EstimatorKind::ConstrainedLS: return "cls";
    case EstimatorKind::Hedged: return with_h("hedged");
    case EstimatorKind::MLE: return "mle";
    case EstimatorKind::HedgedMLE: return with_h("hedged-mle");
  }
  return "?";
}

EstimatorSpec parse_estimator(std::string_view text, double default_hedge) {
  std::string_view base = text;
  std::string_view arg;
  if (const auto open = text.find('('); open != std::string_view::npos && text.back() == ')') {
    base = text.substr(0, open);
    arg = text.substr(open + 1, text.size() - open - 2);
  } else if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    base = text.substr(0, colon);
    arg = text.substr(colon + 1);
  }
  if (arg.starts_with("h=")) arg.remove_prefix(2);

  EstimatorSpec spec;
  if (base == "li") spec = EstimatorSpec::linear_inversion();
  else if (base == "cls") spec = EstimatorSpec::constrained_ls();
  else if (base == "mle") spec = EstimatorSpec::mle();
  else if (base == "hedged") spec = EstimatorSpec::hedged(default_hedge);
  else if (base == "hedged-mle") spec = EstimatorSpec::hedged_mle(default_hedge);
  else throw InvalidParameter("unknown estimator '" + std::string(text) + "'");

  if (!arg.empty()) {
    if (!spec.is_hedged()) throw InvalidParameter("estimator '" + std::string(base) + "' takes no h");
    double h = 0.0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), h);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw InvalidParameter("bad h in '" + std::string(text) + "'");
    }
    spec.h = h;
  }
  spec.validate();
  return spec;
}

FrequencyVector frequencies(const Dataset& d, const MeasurementDesign& design) {
  d.validate(design);
  const double n = design.shots();
  std::array<double, 3> f{};
  for (int i = 0; i < d.size(); ++i) f[static_cast<std::size_t>(i)] = (2.0 * d[i] - n) / n;
  return FrequencyVector(std::span<const double>(f.data(), static_cast<std::size_t>(d.size())));
}

BlochVector constrained_ls(const FrequencyVector& f) {
  const BlochVector b = f.as_bloch();
  if (f.norm_squared() < 1.0) return b;
  return b.scaled(1.0 / f.norm());
}

BlochVector hedged(const FrequencyVector& f, double h) {
  if (!(h > 0.0 && h < 1.0)) throw InvalidParameter("h must lie in (0, 1)");
  const BlochVector b = f.as_bloch();
  if (f.norm_squared() < 1.0) return b;
  return b.scaled(std::sqrt(1.0 - h) / f.norm());
}

double default_h(int shots) {
  if (shots < 1) throw InvalidParameter("N must be >= 1");
  const double n = shots;
  return (n - 1.0) / (n * n);  // single rounding: N = 10 gives the double nearest 0.09
}

BlochVector apply_hedging(const BlochVector& estimate, double h) {
  if (!(h > 0.0 && h < 1.0)) throw InvalidParameter("h must lie in (0, 1)");
  if (!is_pure(estimate)) return estimate;
  return estimate.scaled(std::sqrt(1.0 - h));
}

double log_likelihood(const BlochVector& r, const Dataset& d, const MeasurementDesign& design) {
  d.validate(design);
  if (r.dim() != design.num_axes()) throw InvalidParameter("state/design dimension mismatch");
  Vec v{};
  for (int i = 0; i < r.dim(); ++i) v[static_cast<std::size_t>(i)] = r[i];
  return LogLikelihood(d, design).value(v);
}

BlochVector mle(const Dataset& d, const MeasurementDesign& design, const MleOptions& options) {
  const FrequencyVector f = frequencies(d, design);
  if (f.norm_squared() <= 1.0) return f.as_bloch();

  const int dim = design.num_axes();
  const LogLikelihood objective(d, design);
  const double f_norm = f.norm();
  Vec x{};
  for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = f[i] / f_norm;
  x = project_to_ball(x, dim);

  auto advance = [dim](const Vec& from, const Vec& g, double t) {
    Vec y = from;
    for (int i = 0; i < dim; ++i) y[static_cast<std::size_t>(i)] += t * g[static_cast<std::size_t>(i)];
    return project_to_ball(y, dim);
  };
  // Norm of the unit-step gradient mapping; zero exactly at a constrained maximizer.
  auto stationarity = [&](const Vec& at, const Vec& g) {
    const Vec y = advance(at, g, 1.0);
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double dx = y[static_cast<std::size_t>(i)] - at[static_cast<std::size_t>(i)];
      r2 += dx * dx;
    }
    return std::sqrt(r2);
  };

  double value = objective.value(x);
  Vec grad = objective.gradient(x);
  double residual = stationarity(x, grad);
  double first_step = 1.0;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (residual <= options.tolerance) return make_bloch(x, dim);

    // Backtracking by halving. Near the optimum the gain of a step drops below the rounding
    // error of log L; there a step is taken only if it shrinks the stationarity residual.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(value) + 1.0);
    bool accepted = false;
    for (double step = first_step; step > 1e-30; step *= 0.5) {
      const Vec y = advance(x, grad, step);
      const double candidate = objective.value(y);
      if (!std::isfinite(candidate)) continue;
      double ascent = 0.0;
      for (int i = 0; i < dim; ++i) {
        ascent += grad[static_cast<std::size_t>(i)] * (y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]);
      }
      const double required = value + options.armijo * ascent;
      if (candidate < required - slack) continue;
      const Vec grad_y = objective.gradient(y);
      const double residual_y = stationarity(y, grad_y);
      if (candidate < required + slack && !(residual_y < residual)) continue;

      // Barzilai-Borwein guess for the next trial step.
      double ss = 0.0, sy = 0.0;
      for (int i = 0; i < dim; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double sk = y[k] - x[k];
        ss += sk * sk;
        sy -= sk * (grad_y[k] - grad[k]);
      }
      first_step = (sy > 0.0 && ss > 0.0) ? std::clamp(ss / sy, 1e-12, 1e12) : 1.0;

      x = y;
      value = candidate;
      grad = grad_y;
      residual = residual_y;
      accepted = true;
      break;
    }
    if (!accepted) break;
  }
  throw SolverFailure("projected gradient ascent stopped at residual " + std::to_string(residual),
                      make_bloch(x, dim), residual);
}

BlochVector estimate(const EstimatorSpec& spec, const Dataset& d, const MeasurementDesign& design) {
  spec.validate();
  switch (spec.kind) {
    case EstimatorKind::LinearInversion: return frequencies(d, design).as_bloch();
    case EstimatorKind::ConstrainedLS: return constrained_ls(frequencies(d, design));
    case EstimatorKind::Hedged: return hedged(frequencies(d, design), spec.h);
    case EstimatorKind::MLE: return mle(d, design);
    case EstimatorKind::HedgedMLE: return apply_hedging(mle(d, design), spec.h);
  }
  throw InvalidParameter("unknown estimator kind");
}

}  // namespace tomorisk
