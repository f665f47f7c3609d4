#include "vacdiff/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "vacdiff/config.hpp"
#include "vacdiff/errors.hpp"
#include "vacdiff/format.hpp"

namespace vacdiff {

namespace {

constexpr double kLargePhase = 0.1;

void check_same_grid(const DiffractionPattern& a, const DiffractionPattern& b) {
  if (a.xs.size() != b.xs.size() || a.ys.size() != b.ys.size() || a.values.rows() != b.values.rows() ||
      a.values.cols() != b.values.cols()) {
    throw GridMismatchError("patterns have different pixel counts");
  }
  const auto close = [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const double scale = std::max(u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff());
    return (u - v).cwiseAbs().maxCoeff() <= 1e-9 * scale;
  };
  if (a.xs.size() > 0 && (!close(a.xs, b.xs) || !close(a.ys, b.ys))) {
    throw GridMismatchError("patterns have different pixel centres");
  }
}

double half_sin_squared(double delta) {
  const double s = std::sin(0.5 * delta);
  return s * s;
}

std::string describe(const Eigen::VectorXd& x) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (i ? " " : "") + format_sci(x[i]);
  return s + "]";
}

}  // namespace

SNRReport snr(const DiffractionPattern& signal, const DiffractionPattern& background,
              double exclusion_radius_m, double dark_counts) {
  check_same_grid(signal, background);
  if (!(exclusion_radius_m >= 0.0)) throw DomainError("exclusion radius must be non-negative");
  if (!(dark_counts >= 0.0)) throw DomainError("dark counts must be non-negative");
  double s = 0.0;
  double b = 0.0;
  for (Eigen::Index j = 0; j < signal.ys.size(); ++j) {
    for (Eigen::Index i = 0; i < signal.xs.size(); ++i) {
      if (std::max(std::abs(signal.xs[i]), std::abs(signal.ys[j])) <= exclusion_radius_m) continue;
      s += signal.values(i, j);
      b += background.values(i, j);
    }
  }
  SNRReport r;
  r.signal_photons = std::max(0.0, s - b);
  r.background_photons = std::max(0.0, b);
  r.dark_counts = dark_counts;
  const double denominator = r.background_photons + r.dark_counts + r.signal_photons;
  r.snr = denominator > 0.0 ? r.signal_photons / std::sqrt(denominator) : 0.0;
  return r;
}

PolarizationRatio polarization_intensity_ratio(double delta_perpendicular, double delta_parallel) {
  const double den = half_sin_squared(delta_parallel);
  if (den == 0.0) throw DomainError("parallel signal term vanishes; ratio undefined");
  PolarizationRatio r;
  r.delta_perpendicular = delta_perpendicular;
  r.delta_parallel = delta_parallel;
  r.ratio = half_sin_squared(delta_perpendicular) / den;
  r.large_phase = std::abs(delta_perpendicular) >= kLargePhase || std::abs(delta_parallel) >= kLargePhase;
  return r;
}

PolarizationRatio polarization_intensity_ratio(EnergyDensity epsilon2,
                                               const Eigen::Vector3d& target_direction,
                                               const Eigen::Vector3d& target_polarization,
                                               const Eigen::Vector3d& probe_direction,
                                               double probe_wavelength_m, double interaction_length_m,
                                               const VacuumModel& model) {
  const CrossedFieldTarget target(epsilon2, target_direction, target_polarization);
  const auto phase = [&](ProbePolarization pol) {
    const double dn = refractive_index_shift(pol, target, probe_direction, model);
    return accumulated_phase_shift(dn, probe_wavelength_m, interaction_length_m);
  };
  return polarization_intensity_ratio(phase(ProbePolarization::Perpendicular),
                                      phase(ProbePolarization::Parallel));
}

double first_zero_position(double nu_m, double wavelength_m, double focal_length_m) {
  if (!(nu_m > 0.0) || !(wavelength_m > 0.0) || !(focal_length_m > 0.0)) {
    throw DomainError("first zero needs positive nu, wavelength and focal length");
  }
  return wavelength_m * focal_length_m / (2.0 * nu_m);
}

FringeFit fringe_contraction_discriminator(const DiffractionPattern& observed, double nu_geometric_m,
                                           const FocalPlaneGrid& grid, double threshold,
                                           const DiffractionPattern* background) {
  if (!(nu_geometric_m > 0.0)) throw DomainError("geometric nu must be positive");
  if (!(threshold >= 0.0)) throw DomainError("threshold must be non-negative");
  if (background) check_same_grid(observed, *background);
  const Eigen::Index n = observed.ys.size();
  if (n < 3 || observed.xs.size() == 0) throw ExtentError("pattern too small for a fringe fit");

  const Eigen::Index column = observed.center_column();
  Eigen::VectorXd profile = observed.values.row(column).transpose().matrix();
  if (background) profile -= background->values.row(column).transpose().matrix();
  Eigen::Index centre = 0;
  observed.ys.cwiseAbs().minCoeff(&centre);

  bool any = false;
  for (Eigen::Index j = centre + 1; j < n; ++j) any = any || (std::isfinite(profile[j]) && profile[j] != 0.0);
  if (!any) throw InsufficientSignalError("no signal away from the axis");

  // Background subtraction leaves a negative interference term on the flank
  // of the focal spot; the fringe search starts once the profile is positive.
  Eigen::Index first = centre + 1;
  while (first < n && !(profile[first] > 0.0)) ++first;
  for (Eigen::Index j = first + 1; j + 1 < n; ++j) {
    const double l = profile[j - 1];
    const double m = profile[j];
    const double r = profile[j + 1];
    if (!(m <= l && m < r)) continue;
    const double curvature = l - 2.0 * m + r;
    const double offset = curvature > 0.0 ? 0.5 * (l - r) / curvature : 0.0;
    const double dy = observed.ys[j + 1] - observed.ys[j];
    FringeFit fit;
    fit.first_zero_y_m = observed.ys[j] + offset * dy;
    if (!(fit.first_zero_y_m > 0.0)) continue;
    fit.nu_effective_m = grid.wavelength_m * grid.focal_length_m / (2.0 * fit.first_zero_y_m);
    fit.contraction_ratio = nu_geometric_m / fit.nu_effective_m;
    fit.long_range_flag = fit.nu_effective_m > nu_geometric_m * (1.0 + threshold);
    return fit;
  }
  throw ExtentError("no fringe minimum inside the grid extent");
}

Objective parse_objective(const std::string& name) {
  if (name == "snr") return Objective::Snr;
  if (name == "signal_photons") return Objective::SignalPhotons;
  if (name == "background_photons") return Objective::BackgroundPhotons;
  throw DomainError("unknown objective '" + name + "'");
}

std::string to_string(Objective objective) {
  switch (objective) {
    case Objective::Snr:
      return "snr";
    case Objective::SignalPhotons:
      return "signal_photons";
    case Objective::BackgroundPhotons:
      return "background_photons";
  }
  return {};
}

const std::vector<std::string>& scan_parameters() {
  static const std::vector<std::string> names = {
      "target.energy_J",       "probe.energy_J",         "target.nu_m",      "target.region_half_width_m",
      "probe.sigma_m",         "optics.focal_length_m",  "run.integration_s", "plasma.pressure_pa",
  };
  return names;
}

Evaluation evaluate(const ExperimentConfig& config) {
  Evaluation e;
  e.result = run_experiment(config);
  e.report = snr(e.result.signal, e.result.background, config.run.exclusion_radius_m, config.run.dark_counts);
  return e;
}

double objective_value(const SNRReport& report, Objective objective) {
  switch (objective) {
    case Objective::Snr:
      return report.snr;
    case Objective::SignalPhotons:
      return report.signal_photons;
    case Objective::BackgroundPhotons:
      return report.background_photons;
  }
  return 0.0;
}

void ScanSpec::validate() const {
  const auto& names = scan_parameters();
  if (std::find(names.begin(), names.end(), parameter) == names.end()) {
    throw DomainError("'" + parameter + "' is not a scan parameter");
  }
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("scan needs lo < hi");
  if (steps < 2) throw DomainError("scan needs at least 2 steps");
}

std::vector<ScanRow> scan(const ScanSpec& spec, const ExperimentConfig& base) {
  spec.validate();
  std::vector<ScanRow> rows(static_cast<std::size_t>(spec.steps));
  for (int i = 0; i < spec.steps; ++i) {
    ScanRow& row = rows[static_cast<std::size_t>(i)];
    row.value = i + 1 == spec.steps ? spec.hi : spec.lo + (spec.hi - spec.lo) * i / (spec.steps - 1);
    try {
      ExperimentConfig config = base;
      set_numeric(config, spec.parameter, row.value);
      row.objective = objective_value(evaluate(config).report, spec.objective);
    } catch (const Error& e) {
      row.objective = std::numeric_limits<double>::quiet_NaN();
      row.status = e.what();
      std::replace(row.status.begin(), row.status.end(), ',', ';');
      std::replace(row.status.begin(), row.status.end(), '\n', ' ');
    }
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const std::string& parameter, const std::vector<ScanRow>& rows) {
  out << "param,value,objective,status\n";
  for (const ScanRow& r : rows) {
    out << parameter << ',' << format_sci(r.value) << ',' << (r.ok() ? format_sci(r.objective) : "nan")
        << ',' << r.status << '\n';
  }
}

MaximizeResult maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                        const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int budget,
                        const MaximizeOptions& options) {
  const Eigen::Index d = lo.size();
  if (d == 0 || hi.size() != d) throw DomainError("bounds must be non-empty and of equal length");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw DomainError("every bound needs lo < hi");
    }
  }
  if (budget < d + 1) throw DomainError("budget must be at least dimension + 1");

  MaximizeResult out;
  constexpr double kFailed = -std::numeric_limits<double>::infinity();
  auto to_box = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return lo + (hi - lo).cwiseProduct(u.cwiseMax(0.0).cwiseMin(1.0));
  };
  auto eval = [&](const Eigen::VectorXd& u) {
    const Eigen::VectorXd x = to_box(u);
    double v = kFailed;
    ++out.evaluations;
    try {
      v = objective(x);
      if (std::isnan(v)) throw NumericError("objective returned NaN");
      out.log.push_back("eval " + std::to_string(out.evaluations) + " x=" + describe(x) + " value=" +
                        format_sci(v));
    } catch (const std::exception& e) {
      v = kFailed;
      ++out.failures;
      out.log.push_back("eval " + std::to_string(out.evaluations) + " x=" + describe(x) + " failed: " +
                        e.what());
    }
    if (v > out.value || out.x.size() == 0) {
      out.value = v;
      out.x = x;
    }
    return v;
  };

  // Seed grid of cell centres, sized to what the simplex leaves.
  const int spare = budget - static_cast<int>(d + 1);
  int per_axis = options.grid_points;
  while (per_axis > 1 && std::pow(per_axis, static_cast<double>(d)) > spare) --per_axis;
  Eigen::VectorXd start = Eigen::VectorXd::Constant(d, 0.5);
  double start_value = kFailed;
  bool start_known = false;
  if (per_axis >= 2) {
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
      Eigen::VectorXd u(d);
      for (Eigen::Index i = 0; i < d; ++i) u[i] = (idx[static_cast<std::size_t>(i)] + 0.5) / per_axis;
      const double v = eval(u);
      if (!start_known || v > start_value) {
        start = u;
        start_value = v;
        start_known = true;
      }
      Eigen::Index k = 0;
      while (k < d && ++idx[static_cast<std::size_t>(k)] == per_axis) idx[static_cast<std::size_t>(k++)] = 0;
      if (k == d) break;
    }
  }

  // Nelder-Mead on the unit cube; vertices sorted best first.
  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  simplex.push_back(start);
  values.push_back(start_known ? start_value : eval(start));
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::VectorXd v = start;
    v[i] += v[i] + options.simplex_scale <= 1.0 ? options.simplex_scale : -options.simplex_scale;
    simplex.push_back(v);
    values.push_back(eval(v));
  }
  auto order = [&] {
    std::vector<std::size_t> p(simplex.size());
    std::iota(p.begin(), p.end(), 0);
    std::stable_sort(p.begin(), p.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<Eigen::VectorXd> s;
    std::vector<double> v;
    for (std::size_t i : p) {
      s.push_back(simplex[i]);
      v.push_back(values[i]);
    }
    simplex = std::move(s);
    values = std::move(v);
  };
  auto clamp = [](const Eigen::VectorXd& u) -> Eigen::VectorXd { return u.cwiseMax(0.0).cwiseMin(1.0); };

  order();
  while (out.evaluations < budget) {
    double spread = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      spread = std::max(spread, (simplex[i] - simplex[0]).cwiseAbs().maxCoeff());
    }
    if (spread < options.x_tolerance) break;

    const std::size_t worst = simplex.size() - 1;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < worst; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(worst);

    const Eigen::VectorXd reflected = clamp(centroid + (centroid - simplex[worst]));
    const double fr = eval(reflected);
    if (fr > values[0]) {
      if (out.evaluations < budget) {
        const Eigen::VectorXd expanded = clamp(centroid + 2.0 * (centroid - simplex[worst]));
        const double fe = eval(expanded);
        if (fe > fr) {
          simplex[worst] = expanded;
          values[worst] = fe;
        } else {
          simplex[worst] = reflected;
          values[worst] = fr;
        }
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
    } else if (fr > values[worst - 1]) {
      simplex[worst] = reflected;
      values[worst] = fr;
    } else if (out.evaluations < budget) {
      const bool outside = fr > values[worst];
      const Eigen::VectorXd contracted =
          outside ? clamp(centroid + 0.5 * (reflected - centroid)) : clamp(centroid + 0.5 * (simplex[worst] - centroid));
      const double fc = eval(contracted);
      if (fc > std::max(fr, values[worst])) {
        simplex[worst] = contracted;
        values[worst] = fc;
      } else {
        for (std::size_t i = 1; i < simplex.size() && out.evaluations < budget; ++i) {
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
          values[i] = eval(simplex[i]);
        }
      }
    }
    order();
  }

  if (out.failures == out.evaluations) {
    std::string joined;
    for (const auto& line : out.log) joined += "\n  " + line;
    throw OptimizationError("every evaluation failed:" + joined);
  }
  return out;
}

OptimizeResult optimize(const std::vector<ParameterBound>& bounds, const ExperimentConfig& base,
                        Objective objective, int budget, const MaximizeOptions& options) {
  const auto& names = scan_parameters();
  const auto d = static_cast<Eigen::Index>(bounds.size());
  Eigen::VectorXd lo(d);
  Eigen::VectorXd hi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const ParameterBound& b = bounds[static_cast<std::size_t>(i)];
    if (std::find(names.begin(), names.end(), b.parameter) == names.end()) {
      throw DomainError("'" + b.parameter + "' is not an optimization parameter");
    }
    lo[i] = b.lo;
    hi[i] = b.hi;
  }
  auto configure = [&](const Eigen::VectorXd& x) {
    ExperimentConfig c = base;
    for (Eigen::Index i = 0; i < d; ++i) set_numeric(c, bounds[static_cast<std::size_t>(i)].parameter, x[i]);
    return c;
  };
  const MaximizeResult m = maximize(
      [&](const Eigen::VectorXd& x) { return objective_value(evaluate(configure(x)).report, objective); }, lo,
      hi, budget, options);
  OptimizeResult r;
  r.config = configure(m.x);
  r.values.assign(m.x.data(), m.x.data() + m.x.size());
  r.objective = m.value;
  r.evaluations = m.evaluations;
  r.log = m.log;
  return r;
}

}  // namespace vacdiff
