// Acceptance suite. Usage: tomorisk_acceptance <criterion>|all
// Prints one PASS/FAIL line per criterion, followed by indented detail lines.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tomorisk/bayes.hpp"
#include "tomorisk/risk.hpp"

using namespace tomorisk;

namespace {

// Tolerances, one place.
constexpr double kDominanceMargin = 1e-12;      // risk differences must exceed this
constexpr double kSpotTolerance = 1e-9;         // spot risks vs hand enumeration
constexpr double kHedgeRiskTolerance = 1e-6;    // risk(argmin h) vs risk(1/N - 1/N^2)
constexpr double kHedgeGridStep = 1e-3;
constexpr double kNormalization = 1e-10;
constexpr double kLossIdentity = 1e-10;
constexpr double kProjectionMatch = 2e-3;
constexpr double kProjectionGridStep = 1e-3;
constexpr double kLikelihoodSlack = 1e-12;
constexpr double kMonteCarloSigmas = 3.0;
constexpr int kMonteCarloSamples = 1000000;
constexpr double kHedgeN4 = 0.1875;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void note(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    details.emplace_back(buf);
  }
  void require(bool ok, const char* fmt, auto... args) {
    if (!ok) pass = false;
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + buf);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BlochVector random_state(std::mt19937_64& rng, int dim, bool pure = false) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  std::array<double, 3> v{};
  double n2 = 0;
  for (int i = 0; i < dim; ++i) {
    v[i] = g(rng);
    n2 += v[i] * v[i];
  }
  const double r = pure ? 1.0 / std::sqrt(n2) : std::pow(u(rng), 1.0 / dim) / std::sqrt(n2);
  for (int i = 0; i < dim; ++i) v[i] *= r;
  return BlochVector(std::span<const double>(v.data(), static_cast<std::size_t>(dim)));
}

// ---------------------------------------------------------------------------

Outcome disk_dominance() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  RiskEngine engine(MeasurementDesign::rebit(4));
  const auto field = risk_disk({0.01, 2.0}, EstimatorSpec::constrained_ls(), EstimatorSpec::hedged(kHedgeN4),
                               LossKind::HilbertSchmidt, engine);
  const double elapsed = seconds_since(t0);
  double lowest = std::numeric_limits<double>::infinity();
  const DiskPoint* worst = nullptr;
  std::size_t below = 0;
  for (const auto& p : field) {
    const double d = p.diff.value_or(-std::numeric_limits<double>::infinity());
    if (!(d > kDominanceMargin)) ++below;
    if (d < lowest) {
      lowest = d;
      worst = &p;
    }
  }
  o.require(below == 0, "%zu grid points, %zu at or below %.0e; min diff %.6g at angle %g deg, radius %g",
            field.size(), below, kDominanceMargin, lowest, worst->angle_deg, worst->radius);
  o.note("runtime %.2f s (expected < 10 s)", elapsed);
  return o;
}

// Hand enumeration with its own binomials, estimators and loss.
double spot_oracle(double h) {
  auto choose = [](int n, int k) {
    double c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
  };
  const int n = 4;
  double total = 0;
  for (int nx = 0; nx <= n; ++nx) {
    for (int nz = 0; nz <= n; ++nz) {
      // Truth (0, 1): X outcomes are fair coins and Z always gives +1.
      const double p = choose(n, nx) * std::pow(0.5, n) * (nz == n ? 1.0 : 0.0);
      if (p == 0) continue;
      const double fx = (2.0 * nx - n) / n, fz = (2.0 * nz - n) / n;
      const double norm2 = fx * fx + fz * fz;
      double ex = fx, ez = fz;
      if (norm2 >= 1) {
        const double scale = std::sqrt(1 - h) / std::sqrt(norm2);
        ex *= scale;
        ez *= scale;
      }
      total += p * 0.5 * (ex * ex + (ez - 1) * (ez - 1));
    }
  }
  return total;
}

Outcome spot_values() {
  Outcome o;
  const auto design = MeasurementDesign::rebit(4);
  const auto z = BlochVector::rebit(0, 1);
  const double cls = risk(z, EstimatorSpec::constrained_ls(), LossKind::HilbertSchmidt, design);
  const double hedged = risk(z, EstimatorSpec::hedged(kHedgeN4), LossKind::HilbertSchmidt, design);
  const double cls_oracle = spot_oracle(0.0);
  const double hedged_oracle = spot_oracle(kHedgeN4);
  o.require(std::abs(cls - cls_oracle) <= kSpotTolerance, "R_CLS(0,1) = %.12f, oracle %.12f, |diff| %.2e",
            cls, cls_oracle, std::abs(cls - cls_oracle));
  o.require(std::abs(hedged - hedged_oracle) <= kSpotTolerance, "R_Hedged(0,1) = %.12f, oracle %.12f, |diff| %.2e",
            hedged, hedged_oracle, std::abs(hedged - hedged_oracle));
  o.note("quoted approximations 0.089398 / 0.085443 differ by %.2e / %.2e", std::abs(cls - 0.089398),
         std::abs(hedged - 0.085443));
  o.note("scaled difference 4 (R_CLS - R_Hedged) = %.10f", 4 * (cls - hedged));
  return o;
}

Outcome axis_sweep(const BlochVector& direction, const char* label) {
  Outcome o;
  const auto radii = linear_grid(0, 1, 0.01);
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t total = 0, below = 0, nonpositive = 0, zoom_below = 0;
  for (int n = 10; n <= 100; n += 10) {
    RiskEngine engine(MeasurementDesign::qubit(n));
    const auto surface = sweep(direction, radii, EstimatorSpec::constrained_ls(), EstimatorSpec::hedged(default_h(n)),
                               LossKind::HilbertSchmidt, engine);
    double lowest = std::numeric_limits<double>::infinity(), lowest_r = 0, first_ok = -1;
    std::size_t n_below = 0;
    for (const auto& row : surface.rows) {
      const double d = row.scaled_diff.value_or(-std::numeric_limits<double>::infinity());
      ++total;
      if (!(d > 0)) ++nonpositive;
      if (!(d > kDominanceMargin)) {
        ++n_below;
        if (row.coordinate >= 0.9) ++zoom_below;
        first_ok = -1;
      } else if (first_ok < 0) {
        first_ok = row.coordinate;
      }
      if (d < lowest) {
        lowest = d;
        lowest_r = row.coordinate;
      }
    }
    below += n_below;
    const double at_one = surface.rows.back().scaled_diff.value_or(std::nan(""));
    if (n_below == 0) {
      o.note("N=%3d %s: min %.4g at r=%g, value at r=1 %.6g", n, label, lowest, lowest_r, at_one);
    } else {
      o.note("N=%3d %s: min %.4g at r=%g, %zu radii at or below %.0e (all r < %g), value at r=1 %.6g", n, label,
             lowest, lowest_r, n_below, kDominanceMargin, first_ok, at_one);
    }
  }
  o.require(nonpositive == 0, "%zu of %zu scaled differences are <= 0", nonpositive, total);
  o.require(zoom_below == 0, "zoom window r in [0.9, 1]: %zu points at or below %.0e", zoom_below, kDominanceMargin);
  o.require(below == 0, "%zu of %zu scaled differences at or below %.0e", below, total, kDominanceMargin);
  o.note("runtime %.1f s", seconds_since(t0));
  return o;
}

Outcome z_axis_dominance() { return axis_sweep(BlochVector::qubit(0, 0, 1), "Z"); }

Outcome diagonal_axis_dominance() {
  const double s = 1 / std::sqrt(3.0);
  return axis_sweep(BlochVector::qubit(s, s, s), "(1,1,1)/sqrt3");
}

Outcome default_hedge_optimality() {
  Outcome o;
  const auto grid = linear_grid(kHedgeGridStep, 0.5 - kHedgeGridStep, kHedgeGridStep);
  for (int n : {2, 4, 10}) {
    RiskEngine engine(MeasurementDesign::rebit(n));
    const auto z = BlochVector::rebit(0, 1);
    const auto rows = hedge_scan(z, grid, LossKind::HilbertSchmidt, engine);
    const auto best = scan_argmin(rows);
    const double h10 = default_h(n);
    const double r10 = risk(z, EstimatorSpec::hedged(h10), LossKind::HilbertSchmidt, engine.design());
    o.require(r10 - best.risk <= kHedgeRiskTolerance,
              "N=%d: argmin h*=%g risk %.10f; default h=%g risk %.10f; gap %.3e (tolerance %.0e)", n, best.h,
              best.risk, h10, r10, r10 - best.risk, kHedgeRiskTolerance);
  }
  return o;
}

Outcome mle_substitution() {
  Outcome o;
  RiskEngine engine(MeasurementDesign::rebit(4));
  const auto surface = sweep(BlochVector::rebit(0, 1), linear_grid(0, 1, 0.1), EstimatorSpec::mle(),
                             EstimatorSpec::hedged_mle(kHedgeN4), LossKind::HilbertSchmidt, engine);
  for (const auto& row : surface.rows) {
    const double d = row.scaled_diff ? *row.scaled_diff / 4 : -1;
    o.require(d > 0, "r=%.1f: R_MLE - R_HedgedMLE = %.6g", row.coordinate, d);
  }
  return o;
}

Outcome relent_divergence() {
  Outcome o;
  const auto design = MeasurementDesign::rebit(4);
  const auto truth = BlochVector::rebit(0, 0.5);
  const double cls = risk(truth, EstimatorSpec::constrained_ls(), LossKind::RelativeEntropy, design);
  const double hedged = risk(truth, EstimatorSpec::hedged(kHedgeN4), LossKind::RelativeEntropy, design);
  o.require(std::isinf(cls) && cls > 0, "R_CLS(0,0.5) under relative entropy = %g", cls);
  o.require(std::isfinite(hedged), "R_Hedged(0,0.5) under relative entropy = %.10g", hedged);
  return o;
}

PriorGrid normalized(std::vector<BlochVector> pts, std::vector<double> w) {
  double s = 0;
  for (double x : w) s += x;
  double acc = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) acc += (w[i] /= s);
  w.back() = 1 - acc;
  return {std::move(pts), std::move(w)};
}

Outcome bayes_witnesses() {
  Outcome o;
  const CandidateGridSpec grid;
  const auto candidates = candidate_grid(2, grid);
  std::uniform_real_distribution<double> u(0, 1);

  // Pure-supported posteriors: the infidelity argmin should sit on the boundary, up to one
  // radial grid step.
  std::mt19937_64 rng1(20260101);
  int boundary = 0;
  std::string radii1;
  for (int t = 0; t < 20; ++t) {
    const int k = 1 + t % 4;
    std::vector<BlochVector> pts;
    std::vector<double> w;
    for (int i = 0; i < k; ++i) {
      const double a = 2 * std::numbers::pi * u(rng1);
      pts.push_back(BlochVector::rebit(std::cos(a), std::sin(a)));
      w.push_back(-std::log(u(rng1)));
    }
    const auto best = bayes_estimate_grid(normalized(pts, w), LossKind::Infidelity, candidates);
    const bool on_boundary = 1.0 - best.norm() < grid.radial_step;
    boundary += on_boundary;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s%.3g", t ? " " : "", best.norm());
    radii1 += buf;
  }
  o.require(boundary == 20, "pure-supported posteriors: %d / 20 boundary argmins", boundary);
  o.note("  argmin radii: %s", radii1.c_str());

  // Posteriors with an interior point of weight >= 0.05: the argmin should be mixed.
  std::mt19937_64 rng2(20260102);
  int interior = 0;
  std::string radii2;
  for (int t = 0; t < 20; ++t) {
    const int k = 2 + t % 3;
    std::vector<BlochVector> pts;
    std::vector<double> w;
    for (int i = 0; i < k; ++i) {
      const double a = 2 * std::numbers::pi * u(rng2);
      const double r = i == 0 ? 0.99 * std::sqrt(u(rng2)) : (u(rng2) < 0.5 ? 1.0 : std::sqrt(u(rng2)));
      pts.push_back(BlochVector::rebit(r * std::cos(a), r * std::sin(a)));
      w.push_back(-std::log(u(rng2)));
    }
    double s = 0;
    for (double x : w) s += x;
    // Lift the interior point to at least 5% of the mass.
    if (w[0] / s < 0.05) w[0] = 0.05 / 0.95 * (s - w[0]);
    const auto best = bayes_estimate_grid(normalized(pts, w), LossKind::Infidelity, candidates);
    interior += purity_certificate(best) == Purity::Mixed;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s%.3g", t ? " " : "", best.norm());
    radii2 += buf;
  }
  o.require(interior == 20, "posteriors with >= 5%% interior mass: %d / 20 mixed argmins", interior);
  o.note("  argmin radii: %s", radii2.c_str());

  // For reference: equal mass on two antipodal pure states.
  const PriorGrid antipodal({BlochVector::rebit(0, 1), BlochVector::rebit(0, -1)}, {0.5, 0.5});
  const auto a = bayes_estimate_grid(antipodal, LossKind::Infidelity, candidates);
  o.note("antipodal pure pair: argmin radius %.3g, posterior infidelity %.6f vs %.6f for any pure state", a.norm(),
         posterior_loss(antipodal, LossKind::Infidelity, a),
         posterior_loss(antipodal, LossKind::Infidelity, BlochVector::rebit(1, 0)));
  return o;
}

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 rng(20260103);

  double worst_norm = 0;
  for (int t = 0; t < 100; ++t) {
    for (int n : {1, 4, 10}) {
      for (int dim : {2, 3}) {
        const auto design = dim == 2 ? MeasurementDesign::rebit(n) : MeasurementDesign::qubit(n);
        const OutcomeDistribution dist(random_state(rng, dim), design);
        double s = 0;
        for (const auto& d : enumerate_datasets(design)) s += dist.probability(d);
        worst_norm = std::max(worst_norm, std::abs(s - 1));
      }
    }
  }
  o.require(worst_norm <= kNormalization, "probability normalization: max |sum - 1| = %.2e", worst_norm);

  double most_negative = 0, worst_identity = 0;
  for (int t = 0; t < 1000; ++t) {
    const int dim = t % 2 ? 3 : 2;
    const auto a = random_state(rng, dim, t % 7 == 0);
    const auto b = random_state(rng, dim, t % 5 == 0);
    for (auto kind : {LossKind::HilbertSchmidt, LossKind::RelativeEntropy, LossKind::Infidelity}) {
      most_negative = std::min(most_negative, loss(kind, a, b));
      worst_identity = std::max(worst_identity, std::abs(loss(kind, a, a)));
    }
  }
  o.require(most_negative >= 0 && worst_identity <= kLossIdentity,
            "losses: min value %.3g, max |L(r, r)| = %.2e", most_negative, worst_identity);

  double worst_projection = 0;
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi), radius(1.0001, std::sqrt(2.0));
  for (int t = 0; t < 100; ++t) {
    const double th = angle(rng), r = radius(rng);
    const std::array<double, 2> fc{r * std::cos(th), r * std::sin(th)};
    const auto c = constrained_ls(FrequencyVector(fc));
    double best = 1e9, bx = 0, bz = 0;
    for (int i = 0; i <= static_cast<int>(std::lround(1 / kProjectionGridStep)); ++i) {
      const double rad = i * kProjectionGridStep;
      const int arcs = std::max(1, static_cast<int>(std::ceil(2 * std::numbers::pi * rad / kProjectionGridStep)));
      for (int k = 0; k < arcs; ++k) {
        const double phi = 2 * std::numbers::pi * k / arcs;
        const double x = rad * std::cos(phi), z = rad * std::sin(phi);
        const double d = (x - fc[0]) * (x - fc[0]) + (z - fc[1]) * (z - fc[1]);
        if (d < best) {
          best = d;
          bx = x;
          bz = z;
        }
      }
    }
    worst_projection = std::max(worst_projection, std::hypot(c[0] - bx, c[1] - bz));
  }
  o.require(worst_projection <= kProjectionMatch, "projection vs grid search: max distance %.2e", worst_projection);

  double worst_gap = std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  for (const auto& design : {MeasurementDesign::rebit(4), MeasurementDesign::rebit(20), MeasurementDesign::qubit(10)}) {
    for (const auto& d : enumerate_datasets(design)) {
      const auto f = frequencies(d, design);
      const double gap = log_likelihood(mle(d, design), d, design) - log_likelihood(constrained_ls(f), d, design);
      worst_gap = std::min(worst_gap, gap);
      ++checked;
    }
  }
  o.require(worst_gap >= -kLikelihoodSlack, "log L(MLE) - log L(CLS) over %zu datasets: min %.3g", checked, worst_gap);

  const std::vector<EstimatorSpec> specs{EstimatorSpec::constrained_ls(), EstimatorSpec::hedged(0.1),
                                         EstimatorSpec::mle(), EstimatorSpec::hedged_mle(0.05)};
  int agree = 0;
  double worst_z = 0;
  for (int t = 0; t < 10; ++t) {
    const auto design = t % 2 ? MeasurementDesign::qubit(6) : MeasurementDesign::rebit(9);
    const auto truth = random_state(rng, design.num_axes());
    const auto& spec = specs[static_cast<std::size_t>(t) % specs.size()];
    const LossKind kind = t % 3 == 0 ? LossKind::Infidelity : LossKind::HilbertSchmidt;
    std::vector<std::binomial_distribution<int>> axes;
    for (int w = 0; w < design.num_axes(); ++w) axes.emplace_back(design.shots(), (1 + truth[w]) / 2);
    std::map<std::size_t, double> cache;
    double sum = 0, sum2 = 0;
    for (int s = 0; s < kMonteCarloSamples; ++s) {
      std::array<int, 3> c{};
      for (int w = 0; w < design.num_axes(); ++w) c[w] = axes[w](rng);
      const Dataset d(std::span<const int>(c.data(), static_cast<std::size_t>(design.num_axes())));
      const auto idx = dataset_index(d, design);
      auto it = cache.find(idx);
      if (it == cache.end()) it = cache.emplace(idx, loss(kind, truth, estimate(spec, d, design))).first;
      sum += it->second;
      sum2 += it->second * it->second;
    }
    const double mean = sum / kMonteCarloSamples;
    const double se = std::sqrt((sum2 / kMonteCarloSamples - mean * mean) / (kMonteCarloSamples - 1));
    const double z = std::abs(mean - risk(truth, spec, kind, design)) / se;
    worst_z = std::max(worst_z, z);
    agree += z <= kMonteCarloSigmas;
  }
  o.require(agree == 10, "enumeration vs Monte Carlo (%d samples): %d / 10 within %.0f SE, worst %.2f SE",
            kMonteCarloSamples, agree, kMonteCarloSigmas, worst_z);
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> all{
      {"disk_dominance", disk_dominance},   {"spot_values", spot_values},
      {"z_axis_dominance", z_axis_dominance},           {"diagonal_axis_dominance", diagonal_axis_dominance},
      {"default_hedge_optimality", default_hedge_optimality},   {"mle_substitution", mle_substitution},
      {"relent_divergence", relent_divergence}, {"bayes_witnesses", bayes_witnesses},
      {"property_suites", property_suites},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  bool found = false, ok = true;
  for (const auto& [name, fn] : criteria()) {
    if (which != "all" && which != name) continue;
    found = true;
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.details.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %s\n", out.pass ? "PASS" : "FAIL", name.c_str());
    for (const auto& line : out.details) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    ok = ok && out.pass;
  }
  if (!found) {
    std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
    return 2;
  }
  return ok ? 0 : 1;
}
