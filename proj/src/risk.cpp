#include "tomorisk/risk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

namespace tomorisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier summation; infinities are tracked outside the compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    if (std::isinf(x)) {
      infinite_ = true;
      return;
    }
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] bool infinite() const noexcept { return infinite_; }
  [[nodiscard]] double value() const noexcept { return infinite_ ? kInf : sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
  bool infinite_ = false;
};

double log_binomial_pmf(int shots, int count, double p_plus) {
  const double p = std::clamp(p_plus, 0.0, 1.0);
  const double q = std::clamp(1.0 - p_plus, 0.0, 1.0);
  double lp = std::lgamma(shots + 1.0) - std::lgamma(count + 1.0) - std::lgamma(shots - count + 1.0);
  if (count > 0) lp += count * std::log(p);
  if (shots - count > 0) lp += (shots - count) * std::log(q);
  return lp;
}

void check_truth(const BlochVector& truth, const MeasurementDesign& design) {
  if (truth.dim() != design.num_axes()) {
    throw InvalidParameter("true state has " + std::to_string(truth.dim()) +
                           " components but the design measures " +
                           std::to_string(design.num_axes()) + " axes");
  }
  if (!truth.is_valid_state()) throw InvalidState("true state " + to_string(truth) + " is outside the ball");
}

// Visits every dataset with nonzero probability in enumeration order as
// visit(index, probability). A rebit is walked as a qubit with a one-point leading axis.
template <typename Visit>
void for_each_dataset(const OutcomeDistribution& dist, const MeasurementDesign& design, Visit&& visit) {
  const int n = design.shots();
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  if (design.num_axes() == 2) {
    std::size_t index = 0;
    for (int i0 = 0; i0 <= n; ++i0) {
      const double p0 = dist.axis_pmf(0, i0);
      if (p0 == 0.0) {
        index += stride;
        continue;
      }
      for (int i1 = 0; i1 <= n; ++i1, ++index) {
        const double p = p0 * dist.axis_pmf(1, i1);
        if (p > 0.0) visit(index, p);
      }
    }
    return;
  }
  std::size_t index = 0;
  for (int i0 = 0; i0 <= n; ++i0) {
    const double p0 = dist.axis_pmf(0, i0);
    if (p0 == 0.0) {
      index += stride * stride;
      continue;
    }
    for (int i1 = 0; i1 <= n; ++i1) {
      const double p01 = p0 * dist.axis_pmf(1, i1);
      if (p01 == 0.0) {
        index += stride;
        continue;
      }
      for (int i2 = 0; i2 <= n; ++i2, ++index) {
        const double p = p01 * dist.axis_pmf(2, i2);
        if (p > 0.0) visit(index, p);
      }
    }
  }
}

// Shared by the cached and uncached paths so that both produce identical sums.
template <typename EstimateAt>
double accumulate_risk(const BlochVector& truth, LossKind kind, const MeasurementDesign& design,
                       EstimateAt&& estimate_at) {
  check_truth(truth, design);
  const OutcomeDistribution dist(truth, design);
  CompensatedSum total;
  for_each_dataset(dist, design, [&](std::size_t index, double p) {
    total.add(p * loss(kind, truth, estimate_at(index)));
  });
  return total.value();
}

std::vector<Dataset> all_datasets(const MeasurementDesign& design) { return enumerate_datasets(design); }

}  // namespace

// ---------------------------------------------------------------------------

OutcomeDistribution::OutcomeDistribution(const BlochVector& r, const MeasurementDesign& design) {
  const int n = design.shots();
  pmf_.resize(static_cast<std::size_t>(design.num_axes()));
  for (int w = 0; w < design.num_axes(); ++w) {
    auto& table = pmf_[static_cast<std::size_t>(w)];
    table.resize(static_cast<std::size_t>(n) + 1);
    const double p_plus = 0.5 * (1.0 + r[w]);
    for (int k = 0; k <= n; ++k) table[static_cast<std::size_t>(k)] = std::exp(log_binomial_pmf(n, k, p_plus));
  }
}

double OutcomeDistribution::probability(const Dataset& d) const noexcept {
  double p = 1.0;
  for (int w = 0; w < d.size(); ++w) p *= axis_pmf(w, d[w]);
  return p;
}

double dataset_probability(const Dataset& d, const BlochVector& r, const MeasurementDesign& design) {
  d.validate(design);
  check_truth(r, design);
  return OutcomeDistribution(r, design).probability(d);
}

std::vector<Dataset> enumerate_datasets(const MeasurementDesign& design) {
  const int n = design.shots();
  std::vector<Dataset> out;
  out.reserve(design.num_datasets());
  if (design.num_axes() == 2) {
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) out.push_back(Dataset{a, b});
  } else {
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b)
        for (int c = 0; c <= n; ++c) out.push_back(Dataset{a, b, c});
  }
  return out;
}

std::size_t dataset_index(const Dataset& d, const MeasurementDesign& design) {
  d.validate(design);
  const std::size_t stride = static_cast<std::size_t>(design.shots()) + 1;
  std::size_t index = 0;
  for (int w = 0; w < d.size(); ++w) index = index * stride + static_cast<std::size_t>(d[w]);
  return index;
}

// ---------------------------------------------------------------------------

EstimateTable::EstimateTable(const EstimatorSpec& spec, const MeasurementDesign& design) : spec_(spec) {
  spec_.validate();
  const auto datasets = all_datasets(design);
  estimates_.reserve(datasets.size());
  for (const auto& d : datasets) estimates_.push_back(estimate(spec_, d, design));
}

RiskEngine::RiskEngine(MeasurementDesign design) : design_(std::move(design)) {}

std::shared_ptr<const EstimateTable> RiskEngine::estimates(const EstimatorSpec& spec) {
  spec.validate();
  const std::string key = spec.name();
  std::lock_guard lock(mutex_);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, std::make_shared<const EstimateTable>(spec, design_)).first;
  }
  return it->second;
}

double RiskEngine::risk(const BlochVector& truth, const EstimatorSpec& spec, LossKind loss) {
  const auto table = estimates(spec);
  return accumulate_risk(truth, loss, design_, [&](std::size_t i) -> const BlochVector& { return (*table)[i]; });
}

RiskPair RiskEngine::risk_pair(const BlochVector& truth, const EstimatorSpec& a, const EstimatorSpec& b,
                               LossKind kind) {
  const auto table_a = estimates(a);
  const auto table_b = estimates(b);
  check_truth(truth, design_);
  const OutcomeDistribution dist(truth, design_);
  CompensatedSum sum_a, sum_b, sum_diff;
  for_each_dataset(dist, design_, [&](std::size_t i, double p) {
    const double la = loss(kind, truth, (*table_a)[i]);
    const double lb = loss(kind, truth, (*table_b)[i]);
    sum_a.add(p * la);
    sum_b.add(p * lb);
    if (std::isfinite(la) && std::isfinite(lb)) sum_diff.add(p * (la - lb));
  });
  RiskPair out;
  out.risk_a = sum_a.value();
  out.risk_b = sum_b.value();
  if (!sum_a.infinite() && !sum_b.infinite()) out.difference = sum_diff.value();
  return out;
}

double risk(const BlochVector& truth, const EstimatorSpec& spec, LossKind loss, const MeasurementDesign& design) {
  spec.validate();
  const auto datasets = all_datasets(design);
  return accumulate_risk(truth, loss, design,
                         [&](std::size_t i) { return estimate(spec, datasets[i], design); });
}

double scaled_risk_difference(const BlochVector& truth, const EstimatorSpec& a, const EstimatorSpec& b,
                              LossKind loss, RiskEngine& engine) {
  const RiskPair pair = engine.risk_pair(truth, a, b, loss);
  if (!pair.difference) {
    throw UndefinedDifference("risk of " + (std::isinf(pair.risk_a) ? a.name() : b.name()) +
                              " diverges at " + to_string(truth));
  }
  return engine.design().shots() * *pair.difference;
}

// ---------------------------------------------------------------------------

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

RiskSurface sweep(const BlochVector& direction, const std::vector<double>& radii, const EstimatorSpec& a,
                  const EstimatorSpec& b, LossKind loss, RiskEngine& engine, int jobs, DifferenceMode mode) {
  if (std::abs(direction.norm() - 1.0) > kStateTolerance) {
    throw InvalidParameter("sweep direction must be a unit vector, has norm " + std::to_string(direction.norm()));
  }
  if (direction.dim() != engine.design().num_axes()) throw InvalidParameter("direction/design dimension mismatch");
  if (radii.empty()) throw InvalidParameter("no radii given");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0 && radii[i] <= 1.0)) throw InvalidParameter("radius outside [0, 1]");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidParameter("radii must be strictly increasing");
  }
  // Build both tables before fanning out.
  (void)engine.estimates(a);
  (void)engine.estimates(b);

  const int shots = engine.design().shots();
  RiskSurface surface;
  surface.axis_label = to_string(direction);
  surface.rows.resize(radii.size());
  parallel_for(radii.size(), jobs, [&](std::size_t i) {
    const BlochVector truth = direction.scaled(radii[i]);
    const RiskPair pair = engine.risk_pair(truth, a, b, loss);
    RiskSurfaceRow& row = surface.rows[i];
    row.coordinate = radii[i];
    row.a = {truth, a, loss, shots, pair.risk_a};
    row.b = {truth, b, loss, shots, pair.risk_b};
    if (pair.difference) {
      if (mode == DifferenceMode::Scaled) {
        row.scaled_diff = shots * *pair.difference;
      } else if (pair.risk_b > 0.0) {
        row.scaled_diff = *pair.difference / pair.risk_b;
      }
    }
  });
  return surface;
}

std::vector<HedgeScanRow> hedge_scan(const BlochVector& truth, const std::vector<double>& h_grid, LossKind loss,
                                     RiskEngine& engine, int jobs) {
  for (double h : h_grid) EstimatorSpec::hedged(h).validate();
  std::vector<HedgeScanRow> rows(h_grid.size());
  // One table per h would be wasteful; estimates are recomputed on the fly instead.
  parallel_for(h_grid.size(), jobs, [&](std::size_t i) {
    rows[i] = {h_grid[i], risk(truth, EstimatorSpec::hedged(h_grid[i]), loss, engine.design())};
  });
  return rows;
}

HedgeScanRow scan_argmin(const std::vector<HedgeScanRow>& rows) {
  if (rows.empty()) throw InvalidParameter("empty hedge scan");
  HedgeScanRow best = rows.front();
  for (const auto& row : rows) {
    if (row.risk < best.risk) best = row;
  }
  return best;
}

std::vector<DiskPoint> risk_disk(const DiskGrid& grid, const EstimatorSpec& a, const EstimatorSpec& b,
                                 LossKind loss, RiskEngine& engine, int jobs) {
  if (!engine.design().is_rebit()) throw InvalidParameter("the disk field needs a rebit design");
  if (!(grid.angular_step_deg > 0.0 && grid.angular_step_deg <= 360.0)) {
    throw InvalidParameter("angular step must lie in (0, 360]");
  }
  const auto radii = linear_grid(0.0, 1.0, grid.radial_step);
  std::vector<double> angles;
  for (std::size_t k = 0;; ++k) {
    const double angle = std::round(k * grid.angular_step_deg * 1e12) / 1e12;
    if (angle >= 360.0 - 1e-9) break;
    angles.push_back(angle);
  }
  (void)engine.estimates(a);
  (void)engine.estimates(b);

  std::vector<DiskPoint> field(angles.size() * radii.size());
  parallel_for(field.size(), jobs, [&](std::size_t i) {
    const double angle = angles[i / radii.size()];
    const double radius = radii[i % radii.size()];
    const double theta = angle * std::numbers::pi / 180.0;
    const BlochVector truth = BlochVector::rebit(radius * std::cos(theta), radius * std::sin(theta));
    const RiskPair pair = engine.risk_pair(truth, a, b, loss);
    field[i] = {angle, radius, pair.risk_a, pair.risk_b, pair.difference};
  });
  return field;
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw InvalidParameter("grid needs step > 0 and stop >= start");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-6)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Snap to 1e-12 so that decimal steps print as the decimals they stand for.
    out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return out;
}

}  // namespace tomorisk
