#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tomorisk/bayes.hpp"
#include "tomorisk/risk.hpp"

namespace py = pybind11;
using namespace tomorisk;

namespace {

// States cross the boundary as plain sequences: (x, z) for rebits, (x, y, z) for qubits.
BlochVector to_state(const std::vector<double>& v) {
  if (v.size() == 2) return BlochVector::rebit(v[0], v[1]);
  if (v.size() == 3) return BlochVector::qubit(v[0], v[1], v[2]);
  throw InvalidState("a state needs 2 (rebit) or 3 (qubit) components");
}

std::vector<double> from_state(const BlochVector& b) {
  const auto c = b.components();
  return {c.begin(), c.end()};
}

MeasurementDesign make_design(const std::string& design, int n) {
  if (design == "rebit") return MeasurementDesign::rebit(n);
  if (design == "qubit") return MeasurementDesign::qubit(n);
  throw InvalidParameter("design must be 'rebit' or 'qubit'");
}

EstimatorSpec make_estimator(const std::string& text, int n, std::optional<double> h) {
  return parse_estimator(text, h.value_or(default_h(n)));
}

Dataset make_dataset(const std::vector<int>& counts) { return Dataset(std::span<const int>(counts)); }

py::object optional_float(const std::optional<double>& v) {
  return v ? py::cast(*v) : py::none();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact risk of single-qubit tomography estimators";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<InvalidState>(m, "InvalidState", base.ptr());
  py::register_exception<InvalidDataset>(m, "InvalidDataset", base.ptr());
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<UndefinedDifference>(m, "UndefinedDifference", base.ptr());
  py::register_exception<ImpossibleData>(m, "ImpossibleData", base.ptr());
  py::register_exception<DegenerateLoss>(m, "DegenerateLoss", base.ptr());
  py::register_exception<SolverFailure>(m, "SolverFailure", base.ptr());

  m.def("default_h", &default_h, py::arg("n"));

  m.def(
      "loss",
      [](const std::string& kind, const std::vector<double>& rho, const std::vector<double>& sigma) {
        return loss(parse_loss(kind), to_state(rho), to_state(sigma));
      },
      py::arg("kind"), py::arg("rho"), py::arg("sigma"));

  m.def(
      "estimate",
      [](const std::vector<int>& counts, const std::string& estimator, int n, std::optional<double> h) {
        const auto design = make_design(counts.size() == 2 ? "rebit" : "qubit", n);
        return from_state(estimate(make_estimator(estimator, n, h), make_dataset(counts), design));
      },
      py::arg("counts"), py::arg("estimator") = "cls", py::arg("n") = 4, py::arg("h") = py::none(),
      "Estimate from per-axis '+1' counts; the design follows len(counts).");

  m.def(
      "risk",
      [](const std::vector<double>& state, const std::string& estimator, const std::string& loss, int n,
         std::optional<double> h) {
        const auto truth = to_state(state);
        const auto design = make_design(truth.dim() == 2 ? "rebit" : "qubit", n);
        RiskEngine engine(design);
        return engine.risk(truth, make_estimator(estimator, n, h), parse_loss(loss));
      },
      py::arg("state"), py::arg("estimator") = "cls", py::arg("loss") = "hs", py::arg("n") = 4,
      py::arg("h") = py::none());

  m.def(
      "scaled_difference",
      [](const std::vector<double>& state, const std::string& a, const std::string& b, const std::string& loss,
         int n, std::optional<double> h) {
        const auto truth = to_state(state);
        RiskEngine engine(make_design(truth.dim() == 2 ? "rebit" : "qubit", n));
        return scaled_risk_difference(truth, make_estimator(a, n, h), make_estimator(b, n, h), parse_loss(loss),
                                      engine);
      },
      py::arg("state"), py::arg("a") = "cls", py::arg("b") = "hedged", py::arg("loss") = "hs", py::arg("n") = 4,
      py::arg("h") = py::none(), "N (R_a - R_b); raises UndefinedDifference if either risk diverges.");

  m.def(
      "sweep",
      [](const std::vector<double>& direction, const std::vector<double>& radii, const std::string& a,
         const std::string& b, const std::string& loss, int n, std::optional<double> h, int jobs) {
        const auto dir = to_state(direction);
        RiskEngine engine(make_design(dir.dim() == 2 ? "rebit" : "qubit", n));
        const auto surface = sweep(dir, radii, make_estimator(a, n, h), make_estimator(b, n, h), parse_loss(loss),
                                   engine, jobs);
        py::list rows;
        for (const auto& row : surface.rows) {
          py::dict d;
          d["r"] = row.coordinate;
          d["risk_a"] = row.a.risk;
          d["risk_b"] = row.b.risk;
          d["scaled_diff"] = optional_float(row.scaled_diff);
          rows.append(d);
        }
        return rows;
      },
      py::arg("direction"), py::arg("radii"), py::arg("a") = "cls", py::arg("b") = "hedged",
      py::arg("loss") = "hs", py::arg("n") = 4, py::arg("h") = py::none(), py::arg("jobs") = 1);

  m.def(
      "hedge_scan",
      [](const std::vector<double>& state, const std::vector<double>& h_grid, const std::string& loss, int n) {
        const auto truth = to_state(state);
        RiskEngine engine(make_design(truth.dim() == 2 ? "rebit" : "qubit", n));
        std::vector<std::pair<double, double>> out;
        for (const auto& row : hedge_scan(truth, h_grid, parse_loss(loss), engine)) out.emplace_back(row.h, row.risk);
        return out;
      },
      py::arg("state"), py::arg("h_grid"), py::arg("loss") = "hs", py::arg("n") = 4,
      "List of (h, risk) pairs for Hedged(h).");

  m.def(
      "bayes_estimate",
      [](const std::vector<std::vector<double>>& points, const std::vector<double>& weights,
         std::optional<std::vector<int>> counts, const std::string& loss, int n, double radial_step) {
        std::vector<BlochVector> pts;
        for (const auto& p : points) pts.push_back(to_state(p));
        PriorGrid post(std::move(pts), weights);
        const int dim = post.points().front().dim();
        if (counts) post = posterior(post, make_dataset(*counts), make_design(dim == 2 ? "rebit" : "qubit", n));
        CandidateGridSpec grid;
        grid.radial_step = radial_step;
        const auto best = bayes_estimate_grid(post, parse_loss(loss), candidate_grid(dim, grid));
        py::dict d;
        d["estimate"] = from_state(best);
        d["purity"] = purity(best);
        d["certificate"] = std::string(purity_name(purity_certificate(best)));
        d["posterior_loss"] = posterior_loss(post, parse_loss(loss), best);
        d["posterior_mean"] = from_state(posterior_mean(post));
        return d;
      },
      py::arg("points"), py::arg("weights"), py::arg("counts") = py::none(), py::arg("loss") = "infid",
      py::arg("n") = 4, py::arg("radial_step") = 0.02,
      "Grid Bayes estimate over a discrete prior, updated by `counts` when given.");
}
