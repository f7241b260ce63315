#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tomorisk/bayes.hpp"
#include "tomorisk/risk.hpp"

namespace tomorisk::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string design = "rebit";
  std::string n = "4";
  std::string estimator_a = "cls";
  std::string estimator_b = "hedged";
  std::vector<std::string> estimators;
  std::string loss = "hs";
  std::optional<double> h;
  std::string axis = "0,0,1";
  std::string radii = "0:1:0.01";
  std::string out;
  std::string format = "csv";
  int jobs = 1;
  bool ratio = false;
  std::string state;
  std::string counts;
  bool all = false;
  double radial_step = 0.01;
  double angle_step = 2.0;
  std::string h_range = "0.001:0.499:0.001";
  std::string prior;
  std::string prior_file;
  std::vector<std::string> losses;
  double candidate_radial_step = 0.02;
  double candidate_angle_step = 2.0;
  int candidate_directions = 600;
  std::string config;
};

// ---------------------------------------------------------------------------
// Parsing helpers

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw InvalidParameter(std::string("bad ") + what + " '" + text + "'");
  }
  return value;
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
  if (trim(text).empty()) throw InvalidParameter(std::string("empty ") + what);
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_number<double>(p, what));
  return out;
}

// "start:stop:step" or a comma list.
std::vector<double> parse_real_grid(const std::string& text, const char* what) {
  if (text.find(':') == std::string::npos) return parse_reals(text, what);
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidParameter(std::string(what) + " must be start:stop:step");
  return linear_grid(parse_number<double>(parts[0], what), parse_number<double>(parts[1], what),
                     parse_number<double>(parts[2], what));
}

std::vector<int> parse_shots(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InvalidParameter("--n range must be start:stop:step");
    const int a = parse_number<int>(parts[0], "--n"), b = parse_number<int>(parts[1], "--n"),
              s = parse_number<int>(parts[2], "--n");
    if (s <= 0 || b < a) throw InvalidParameter("--n range needs step > 0 and stop >= start");
    for (int n = a; n <= b; n += s) out.push_back(n);
  } else {
    for (const auto& p : split(text, ',')) out.push_back(parse_number<int>(p, "--n"));
  }
  return out;
}

MeasurementDesign make_design(const std::string& name, int shots) {
  if (name == "rebit") return MeasurementDesign::rebit(shots);
  if (name == "qubit") return MeasurementDesign::qubit(shots);
  throw InvalidParameter("--design must be rebit or qubit, got '" + name + "'");
}

// A state or direction for `design`; rebits accept (x, z) or (x, 0, z).
BlochVector parse_vector(const std::string& text, const MeasurementDesign& design, const char* what) {
  const auto v = parse_reals(text, what);
  if (design.is_rebit()) {
    if (v.size() == 2) return BlochVector::rebit(v[0], v[1]);
    if (v.size() == 3 && v[1] == 0.0) return BlochVector::rebit(v[0], v[2]);
    throw InvalidParameter(std::string(what) + " for a rebit needs x,z");
  }
  if (v.size() != 3) throw InvalidParameter(std::string(what) + " for a qubit needs x,y,z");
  return BlochVector::qubit(v[0], v[1], v[2]);
}

Dataset parse_counts(const std::string& text, const MeasurementDesign& design) {
  if (trim(text).empty()) throw InvalidParameter("--counts is required");
  std::vector<int> c;
  for (const auto& p : split(text, ',')) c.push_back(parse_number<int>(p, "--counts"));
  if (c.size() > 3) throw InvalidDataset("at most 3 counts");
  Dataset d(c);
  d.validate(design);
  return d;
}

EstimatorSpec estimator_for(const std::string& text, const Options& opt, int shots) {
  return parse_estimator(text, opt.h.value_or(default_h(shots)));
}

// ---------------------------------------------------------------------------
// Output helpers

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string num(const std::optional<double>& x) { return x ? num(*x) : "undefined"; }

Json jnum(double x) { return std::isfinite(x) ? Json(x) : Json(num(x)); }
Json jnum(const std::optional<double>& x) { return x ? jnum(*x) : Json("undefined"); }

Json jvec(const BlochVector& r) {
  Json a = Json::array();
  for (int i = 0; i < r.dim(); ++i) a.push_back(r[i]);
  return a;
}

std::string print12(const BlochVector& r) {
  std::string s;
  for (int i = 0; i < r.dim(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", r[i] == 0.0 ? 0.0 : r[i]);
    if (i) s += ' ';
    s += buf;
  }
  return s;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void comment(std::string line) { rows_.push_back({"#" + line}); }

  [[nodiscard]] std::string csv() const {
    std::string s = join(header_);
    for (const auto& r : rows_) s += r.size() == 1 && r[0].starts_with('#') ? r[0] + "\n" : join(r);
    return s;
  }

 private:
  static std::string join(const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
    return s + "\n";
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void check_format(const Options& opt) {
  if (opt.format != "csv" && opt.format != "json") throw InvalidParameter("--format must be csv or json");
}

// Writes `content` to --out through a temporary file and a rename, or to `out`.
void emit(const Options& opt, const std::string& content, std::ostream& out) {
  if (opt.out.empty()) {
    out << content;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(opt.out);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidParameter("cannot write " + tmp.string());
    f << content;
    f.close();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InvalidParameter("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InvalidParameter("cannot rename to " + target.string());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Subcommands

void cmd_estimate(const Options& opt, std::ostream& out) {
  check_format(opt);
  const auto shots = parse_shots(opt.n);
  if (shots.size() != 1) throw InvalidParameter("estimate takes a single --n");
  const auto design = make_design(opt.design, shots[0]);
  const std::vector<std::string> names =
      opt.estimators.empty() ? std::vector<std::string>{"cls"} : opt.estimators;
  std::vector<EstimatorSpec> specs;
  for (const auto& n : names) specs.push_back(estimator_for(n, opt, shots[0]));

  if (!opt.all) {
    const Dataset d = parse_counts(opt.counts, design);
    if (opt.format == "json") {
      Json arr = Json::array();
      for (const auto& spec : specs) {
        const auto e = estimate(spec, d, design);
        arr.push_back({{"estimator", spec.name()}, {"estimate", jvec(e)}, {"purity", purity(e)},
                       {"certificate", purity_name(purity_certificate(e))}});
      }
      emit(opt, dump(arr), out);
      return;
    }
    std::string s;
    for (const auto& spec : specs) {
      const auto e = estimate(spec, d, design);
      char buf[64];
      std::snprintf(buf, sizeof buf, "purity %.12g %s\n", purity(e), std::string(purity_name(purity_certificate(e))).c_str());
      s += print12(e) + "\n" + buf;
    }
    emit(opt, s, out);
    return;
  }

  // Batch mode: every dataset of the design, for every estimator.
  Table table({"design", "N", "estimator", "n_x", "n_y", "n_z", "f_x", "f_y", "f_z", "est_x", "est_y", "est_z",
               "purity", "certificate"});
  Json arr = Json::array();
  for (const auto& spec : specs) {
    for (const auto& d : enumerate_datasets(design)) {
      const auto f = frequencies(d, design);
      const auto e = estimate(spec, d, design);
      const std::array<int, 3> n = design.is_rebit() ? std::array<int, 3>{d[0], -1, d[1]}
                                                     : std::array<int, 3>{d[0], d[1], d[2]};
      const auto fx = f.xyz();
      const auto ex = e.xyz();
      const std::string cert(purity_name(purity_certificate(e)));
      if (opt.format == "json") {
        arr.push_back({{"design", design.name()}, {"N", design.shots()}, {"estimator", spec.name()},
                       {"counts", std::vector<int>(d.counts().begin(), d.counts().end())}, {"f", jvec(f.as_bloch())}, {"estimate", jvec(e)},
                       {"purity", purity(e)}, {"certificate", cert}});
      } else {
        table.add({std::string(design.name()), std::to_string(design.shots()), spec.name(), std::to_string(n[0]),
                   n[1] < 0 ? "" : std::to_string(n[1]), std::to_string(n[2]), num(fx[0]), num(fx[1]), num(fx[2]),
                   num(ex[0]), num(ex[1]), num(ex[2]), num(purity(e)), cert});
      }
    }
  }
  emit(opt, opt.format == "json" ? dump(arr) : table.csv(), out);
}

void cmd_risk(const Options& opt, bool has_b, std::ostream& out) {
  check_format(opt);
  if (trim(opt.state).empty()) throw InvalidParameter("--state is required");
  const LossKind kind = parse_loss(opt.loss);
  Table table({"design", "N", "state_x", "state_y", "state_z", "estimator_a", "estimator_b", "loss", "risk_a",
               "risk_b", "scaled_diff"});
  Json arr = Json::array();
  for (int shots : parse_shots(opt.n)) {
    const auto design = make_design(opt.design, shots);
    const auto truth = parse_vector(opt.state, design, "--state");
    if (!truth.is_valid_state()) throw InvalidState("--state lies outside the ball");
    const auto a = estimator_for(opt.estimator_a, opt, shots);
    RiskEngine engine(design);
    const auto s = truth.xyz();
    std::string name_b, risk_b, diff;
    Json jb = nullptr, jrb = nullptr, jd = nullptr;
    double risk_a = 0;
    if (has_b) {
      const auto b = estimator_for(opt.estimator_b, opt, shots);
      const auto pair = engine.risk_pair(truth, a, b, kind);
      std::optional<double> d;
      if (pair.difference && !opt.ratio) d = shots * *pair.difference;
      if (pair.difference && opt.ratio && pair.risk_b > 0.0) d = *pair.difference / pair.risk_b;
      risk_a = pair.risk_a;
      name_b = b.name();
      risk_b = num(pair.risk_b);
      diff = num(d);
      jb = name_b;
      jrb = jnum(pair.risk_b);
      jd = jnum(d);
    } else {
      risk_a = engine.risk(truth, a, kind);
    }
    if (opt.format == "json") {
      arr.push_back({{"design", design.name()}, {"N", shots}, {"state", jvec(truth)}, {"estimator_a", a.name()},
                     {"estimator_b", jb}, {"loss", loss_name(kind)}, {"risk_a", jnum(risk_a)}, {"risk_b", jrb},
                     {"scaled_diff", jd}});
    } else {
      table.add({std::string(design.name()), std::to_string(shots), num(s[0]), num(s[1]), num(s[2]), a.name(),
                 name_b, std::string(loss_name(kind)), num(risk_a), risk_b, diff});
    }
  }
  emit(opt, opt.format == "json" ? dump(arr) : table.csv(), out);
}

void cmd_sweep(const Options& opt, std::ostream& out) {
  check_format(opt);
  const LossKind kind = parse_loss(opt.loss);
  const auto radii = parse_real_grid(opt.radii, "--radii");
  if (radii.empty()) throw InvalidParameter("--radii is empty");
  Table table({"design", "N", "axis_x", "axis_y", "axis_z", "radius", "estimator_a", "estimator_b", "loss", "risk_a",
               "risk_b", "scaled_diff"});
  Json arr = Json::array();
  for (int shots : parse_shots(opt.n)) {
    const auto design = make_design(opt.design, shots);
    auto dir = parse_vector(opt.axis, design, "--axis");
    if (dir.norm() == 0.0) throw InvalidParameter("--axis must be nonzero");
    dir = dir.scaled(1.0 / dir.norm());
    const auto a = estimator_for(opt.estimator_a, opt, shots);
    const auto b = estimator_for(opt.estimator_b, opt, shots);
    RiskEngine engine(design);
    const auto surface = sweep(dir, radii, a, b, kind, engine, opt.jobs,
                               opt.ratio ? DifferenceMode::Ratio : DifferenceMode::Scaled);
    const auto u = dir.xyz();
    for (const auto& row : surface.rows) {
      if (opt.format == "json") {
        arr.push_back({{"design", design.name()}, {"N", shots}, {"axis", {u[0], u[1], u[2]}},
                       {"radius", row.coordinate}, {"estimator_a", a.name()}, {"estimator_b", b.name()},
                       {"loss", loss_name(kind)}, {"risk_a", jnum(row.a.risk)}, {"risk_b", jnum(row.b.risk)},
                       {"scaled_diff", jnum(row.scaled_diff)}});
      } else {
        table.add({std::string(design.name()), std::to_string(shots), num(u[0]), num(u[1]), num(u[2]),
                   num(row.coordinate), a.name(), b.name(), std::string(loss_name(kind)), num(row.a.risk),
                   num(row.b.risk), num(row.scaled_diff)});
      }
    }
  }
  emit(opt, opt.format == "json" ? dump(arr) : table.csv(), out);
}

void cmd_disk(const Options& opt, std::ostream& out) {
  check_format(opt);
  const LossKind kind = parse_loss(opt.loss);
  Table table({"design", "N", "angle_deg", "radius", "risk_a", "risk_b", "diff"});
  Json arr = Json::array();
  for (int shots : parse_shots(opt.n)) {
    const auto design = make_design(opt.design, shots);
    const auto a = estimator_for(opt.estimator_a, opt, shots);
    const auto b = estimator_for(opt.estimator_b, opt, shots);
    RiskEngine engine(design);
    const auto field = risk_disk({opt.radial_step, opt.angle_step}, a, b, kind, engine, opt.jobs);
    for (const auto& p : field) {
      if (opt.format == "json") {
        arr.push_back({{"design", design.name()}, {"N", shots}, {"angle_deg", p.angle_deg}, {"radius", p.radius},
                       {"risk_a", jnum(p.risk_a)}, {"risk_b", jnum(p.risk_b)}, {"diff", jnum(p.diff)}});
      } else {
        table.add({std::string(design.name()), std::to_string(shots), num(p.angle_deg), num(p.radius),
                   num(p.risk_a), num(p.risk_b), num(p.diff)});
      }
    }
  }
  emit(opt, opt.format == "json" ? dump(arr) : table.csv(), out);
}

void cmd_hedge_scan(const Options& opt, std::ostream& out) {
  check_format(opt);
  const LossKind kind = parse_loss(opt.loss);
  const auto grid = parse_real_grid(opt.h_range, "--h-range");
  Table table({"design", "N", "h", "risk"});
  Json arr = Json::array();
  for (int shots : parse_shots(opt.n)) {
    const auto design = make_design(opt.design, shots);
    const std::string state = !trim(opt.state).empty() ? opt.state : design.is_rebit() ? "0,1" : "0,0,1";
    const auto truth = parse_vector(state, design, "--state");
    RiskEngine engine(design);
    const auto rows = hedge_scan(truth, grid, kind, engine, opt.jobs);
    const auto best = scan_argmin(rows);
    if (opt.format == "json") {
      Json jr = Json::array();
      for (const auto& r : rows) jr.push_back({{"h", r.h}, {"risk", jnum(r.risk)}});
      arr.push_back({{"design", design.name()}, {"N", shots}, {"state", jvec(truth)}, {"loss", loss_name(kind)},
                     {"rows", jr}, {"argmin_h", best.h}, {"eq10_h", default_h(shots)}});
    } else {
      for (const auto& r : rows) table.add({std::string(design.name()), std::to_string(shots), num(r.h), num(r.risk)});
      table.comment(" argmin_h=" + num(best.h));
      table.comment(" eq10_h=" + num(default_h(shots)));
    }
  }
  emit(opt, opt.format == "json" ? dump(arr) : table.csv(), out);
}

PriorGrid parse_prior(const Json& j) {
  const Json& pts = j.is_array() ? j : j.at("points");
  std::vector<BlochVector> points;
  for (const auto& p : pts) {
    const auto v = p.get<std::vector<double>>();
    if (v.size() != 2 && v.size() != 3) throw InvalidParameter("prior points need 2 or 3 components");
    points.emplace_back(std::span<const double>(v));
  }
  if (j.is_object() && j.contains("weights")) return {std::move(points), j.at("weights").get<std::vector<double>>()};
  return PriorGrid::uniform(std::move(points));
}

void cmd_bayes(const Options& opt, std::ostream& out) {
  Json spec;
  if (!opt.prior.empty()) {
    spec = Json::parse(opt.prior);
  } else if (!opt.prior_file.empty()) {
    std::ifstream f(opt.prior_file);
    if (!f) throw InvalidParameter("cannot read " + opt.prior_file);
    spec = Json::parse(f);
  } else {
    throw InvalidParameter("--prior or --prior-file is required");
  }
  const PriorGrid prior = parse_prior(spec);
  const int dim = prior.points().front().dim();

  Json report;
  PriorGrid post = prior;
  if (!trim(opt.counts).empty()) {
    const auto shots = parse_shots(opt.n);
    if (shots.size() != 1) throw InvalidParameter("bayes takes a single --n");
    const auto design = make_design(opt.design, shots[0]);
    if (design.num_axes() != dim) throw InvalidParameter("prior dimension does not match --design");
    const Dataset d = parse_counts(opt.counts, design);
    post = posterior(prior, d, design);
    report["design"] = design.name();
    report["N"] = shots[0];
    report["counts"] = std::vector<int>(d.counts().begin(), d.counts().end());
  }
  Json weights = Json::array(), points = Json::array();
  for (std::size_t i = 0; i < post.size(); ++i) {
    points.push_back(jvec(post.points()[i]));
    weights.push_back(post.weights()[i]);
  }
  report["posterior"] = {{"points", points}, {"weights", weights}};
  const auto mean = posterior_mean(post);
  report["posterior_mean"] = {{"estimate", jvec(mean)}, {"purity", purity(mean)},
                              {"certificate", purity_name(purity_certificate(mean))}};

  CandidateGridSpec grid;
  grid.radial_step = opt.candidate_radial_step;
  grid.angular_step_deg = opt.candidate_angle_step;
  grid.sphere_directions = opt.candidate_directions;
  const auto candidates = candidate_grid(dim, grid);
  const std::vector<std::string> losses =
      opt.losses.empty() ? std::vector<std::string>{"hs", "relent", "infid"} : opt.losses;
  Json estimates = Json::array();
  for (const auto& name : losses) {
    const LossKind kind = parse_loss(name);
    const auto best = bayes_estimate_grid(post, kind, candidates);
    estimates.push_back({{"loss", loss_name(kind)}, {"estimate", jvec(best)}, {"purity", purity(best)},
                         {"certificate", purity_name(purity_certificate(best))},
                         {"posterior_loss", jnum(posterior_loss(post, kind, best))}});
  }
  report["estimates"] = estimates;
  emit(opt, dump(report), out);
}

// ---------------------------------------------------------------------------
// Config file: "key = value" lines named like the long flags. Values fill in flags that
// were not given on the command line.

void apply_config(std::vector<std::string>& args, const CLI::App& sub) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return;
  std::ifstream f(path);
  if (!f) throw InvalidParameter("cannot read config file " + path);
  std::string line;
  while (std::getline(f, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.starts_with('[')) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidParameter("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.starts_with("--")) key.erase(0, 2);
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    const std::string flag = "--" + key;
    if (sub.get_option_no_throw(flag) == nullptr) throw InvalidParameter("unknown config key '" + key + "'");
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.starts_with(flag + "=");
    if (given) continue;
    args.push_back(flag + "=" + value);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Exact risk of qubit and rebit tomography estimators", "tomorisk"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  auto design_opts = [&](CLI::App* s) {
    s->add_option("--design", opt.design, "rebit or qubit")->capture_default_str();
    s->add_option("--n", opt.n, "shots per axis: N, a list N1,N2 or a range a:b:step")->capture_default_str();
    s->add_option("--h", opt.h, "hedging strength; defaults to 1/N - 1/N^2");
    s->add_option("--out", opt.out, "output file (default stdout)");
    s->add_option("--format", opt.format, "csv or json")->capture_default_str();
    s->add_option("--jobs", opt.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--config", opt.config, "key = value file; flags take precedence");
  };
  auto pair_opts = [&](CLI::App* s) {
    s->add_option("--estimator-a", opt.estimator_a, "li, cls, hedged[(h)], mle, hedged-mle[(h)]")->capture_default_str();
    s->add_option("--estimator-b", opt.estimator_b)->capture_default_str();
    s->add_option("--loss", opt.loss, "hs, relent or infid")->capture_default_str();
  };

  auto* est = app.add_subcommand("estimate", "estimate a state from counts");
  design_opts(est);
  est->add_option("--counts", opt.counts, "comma-separated +1 counts per axis");
  est->add_option("--estimator", opt.estimators, "estimator (repeatable; default cls)");
  est->add_flag("--all", opt.all, "every dataset of the design, as CSV");

  auto* rsk = app.add_subcommand("risk", "exact risk at one true state");
  design_opts(rsk);
  pair_opts(rsk);
  rsk->add_option("--state", opt.state, "true Bloch vector");
  rsk->add_flag("--ratio", opt.ratio, "report (R_A - R_B) / R_B instead of N (R_A - R_B)");

  auto* swp = app.add_subcommand("sweep", "risks along a ray through the origin");
  design_opts(swp);
  pair_opts(swp);
  swp->add_option("--axis", opt.axis, "direction; normalized")->capture_default_str();
  swp->add_option("--radii", opt.radii, "start:stop:step or a list")->capture_default_str();
  swp->add_flag("--ratio", opt.ratio, "report (R_A - R_B) / R_B instead of N (R_A - R_B)");

  auto* dsk = app.add_subcommand("disk", "risk difference over the rebit disk");
  design_opts(dsk);
  pair_opts(dsk);
  dsk->add_option("--radial-step", opt.radial_step)->capture_default_str();
  dsk->add_option("--angle-step", opt.angle_step, "degrees")->capture_default_str();

  auto* hsc = app.add_subcommand("hedge-scan", "risk of the hedged estimator over a grid of h");
  design_opts(hsc);
  hsc->add_option("--loss", opt.loss, "hs, relent or infid")->capture_default_str();
  hsc->add_option("--state", opt.state, "true state (default: +Z)");
  hsc->add_option("--h-range", opt.h_range, "start:stop:step or a list")->capture_default_str();

  auto* bay = app.add_subcommand("bayes", "grid-prior Bayes estimates");
  design_opts(bay);
  bay->add_option("--prior", opt.prior, R"(inline JSON: {"points": [[x,z],...], "weights": [...]})");
  bay->add_option("--prior-file", opt.prior_file);
  bay->add_option("--counts", opt.counts, "data for the update; omit to use the prior as posterior");
  bay->add_option("--loss", opt.losses, "losses to report (repeatable)");
  bay->add_option("--candidate-radial-step", opt.candidate_radial_step)->capture_default_str();
  bay->add_option("--candidate-angle-step", opt.candidate_angle_step)->capture_default_str();
  bay->add_option("--candidate-directions", opt.candidate_directions)->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty()) {
      if (const auto* sub = app.get_subcommand_no_throw(args.front())) apply_config(args, *sub);
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (*est) cmd_estimate(opt, out);
    else if (*rsk) cmd_risk(opt, rsk->count("--estimator-b") > 0, out);
    else if (*swp) cmd_sweep(opt, out);
    else if (*dsk) cmd_disk(opt, out);
    else if (*hsc) cmd_hedge_scan(opt, out);
    else if (*bay) cmd_bayes(opt, out);
    return kOk;
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const ImpossibleData& e) {
    err << "error: " << e.what() << "\n";
    return kImpossibleData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad prior: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace tomorisk::cli
