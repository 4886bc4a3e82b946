#include "rydmf/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "rydmf/obe.hpp"

namespace rydmf {

cplx susceptibility(cplx rho12, double omega1, const SusceptibilityParams& sp) {
  sp.validate();
  if (!(omega1 > 0.0)) throw Error("susceptibility: omega1 must be positive");
  return sp.prefactor * rho12 / omega1;
}

std::string_view to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::none: return "none";
    case FeatureKind::eit: return "EIT";
    case FeatureKind::eia: return "EIA";
  }
  return "?";
}

FeatureReport classify_feature(const SpectrumTable& spectrum, double lo, double hi,
                               ClassifyOptions opts) {
  if (spectrum.rows.empty()) throw Error("classify_feature: empty spectrum");
  if (lo > hi) std::swap(lo, hi);
  const std::vector<double> x = spectrum.swept_values();
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const double slack = 1e-9 * std::max(std::abs(*xmin_it), std::abs(*xmax_it));
  if (lo < *xmin_it - slack || hi > *xmax_it + slack) {
    throw Error("classify_feature: window lies outside the sweep range");
  }

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= lo - slack && x[i] <= hi + slack && !spectrum.rows[i].point.error) {
      idx.push_back(i);
    }
  }
  if (idx.size() < 5) throw Error("classify_feature: window holds fewer than 5 grid points");
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  const auto im = [&](std::size_t i) { return spectrum.rows[i].point.mean.im_rho12(); };
  const auto se = [&](std::size_t i) { return spectrum.rows[i].point.std_error.im_rho12(); };

  const std::size_t a = idx.front(), b = idx.back();
  double scale = 0.0;
  for (std::size_t i : idx) scale = std::max(scale, std::abs(im(i)));

  FeatureReport rep;
  rep.window_lo = x[a];
  rep.window_hi = x[b];
  rep.location = x[idx[idx.size() / 2]];

  double best = -1.0, best_dev = 0.0, best_se = 0.0;
  for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
    const std::size_t i = idx[k];
    const double w = (x[i] - x[a]) / (x[b] - x[a]);
    const double baseline = (1.0 - w) * im(a) + w * im(b);
    const double dev = im(i) - baseline;
    if (std::abs(dev) > best) {
      best = std::abs(dev);
      best_dev = dev;
      best_se = std::sqrt(se(i) * se(i) + (1.0 - w) * (1.0 - w) * se(a) * se(a) +
                          w * w * se(b) * se(b));
      rep.location = x[i];
    }
  }
  rep.magnitude = best;
  rep.threshold = std::max(opts.significance * best_se, opts.relative_floor * scale);
  if (best > rep.threshold) rep.kind = best_dev > 0.0 ? FeatureKind::eia : FeatureKind::eit;
  return rep;
}

std::vector<std::array<double, 4>> eigenvalue_sweep(const SchemeParams& p, SweepParameter detuning,
                                                    std::span<const double> grid) {
  if (detuning != SweepParameter::delta1 && detuning != SweepParameter::delta2 &&
      detuning != SweepParameter::delta3) {
    throw ConfigError("eigenvalue sweep requires a detuning parameter");
  }
  std::vector<std::array<double, 4>> out;
  out.reserve(grid.size());
  InteractionParams unused;
  for (double v : grid) {
    SchemeParams q = p;
    apply_parameter(detuning, v, q, unused);
    out.push_back(dressed_eigenvalues(q));
  }
  return out;
}

namespace {

template <typename Better>
std::vector<std::size_t> local_extrema(std::span<const double> y, double tol, Better better) {
  std::vector<std::size_t> out;
  const std::size_t n = y.size();
  std::size_t s = 0;
  while (s < n) {
    std::size_t e = s;
    while (e + 1 < n && std::abs(y[e + 1] - y[s]) <= tol) ++e;
    if (s > 0 && e + 1 < n && better(y[s], y[s - 1], tol) && better(y[e], y[e + 1], tol)) {
      out.push_back((s + e) / 2);
    }
    s = e + 1;
  }
  return out;
}

}  // namespace

std::vector<std::size_t> local_maxima(std::span<const double> y, double tol) {
  return local_extrema(y, tol, [](double v, double nb, double t) { return v > nb + t; });
}

std::vector<std::size_t> local_minima(std::span<const double> y, double tol) {
  return local_extrema(y, tol, [](double v, double nb, double t) { return v < nb - t; });
}

std::vector<AvoidedCrossing> avoided_crossings(const SchemeParams& p, SweepParameter detuning,
                                               std::span<const double> grid) {
  if (grid.size() < 50) throw ConfigError("avoided_crossings: needs at least 50 grid points");
  const auto ev = eigenvalue_sweep(p, detuning, grid);

  double scale = 1.0;
  for (const auto& row : ev)
    for (double e : row) scale = std::max(scale, std::abs(e));
  const double tol = 1e-10 * scale;

  std::vector<AvoidedCrossing> out;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> gap(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) gap[i] = ev[i][k + 1] - ev[i][k];
    for (std::size_t i : local_minima(gap, tol)) out.push_back({grid[i], gap[i], k});
  }
  std::sort(out.begin(), out.end(), [](const AvoidedCrossing& a, const AvoidedCrossing& b) {
    return a.location < b.location;
  });
  return out;
}

}  // namespace rydmf
