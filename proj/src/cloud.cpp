#include "rydmf/cloud.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "rydmf/rng.hpp"

namespace rydmf {

std::string_view to_string(CloudShape s) { return s == CloudShape::sphere ? "sphere" : "box"; }

CloudShape parse_cloud_shape(std::string_view name) {
  if (name == "sphere") return CloudShape::sphere;
  if (name == "box") return CloudShape::box;
  throw ConfigError("unknown cloud shape '" + std::string(name) + "'");
}

double CloudGeometry::volume() const {
  if (shape == CloudShape::sphere) return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
  return edges[0] * edges[1] * edges[2];
}

void CloudGeometry::validate() const {
  if (n_atoms < 1) throw ConfigError("cloud: n_atoms must be at least 1");
  if (shape == CloudShape::sphere && !(radius > 0.0)) {
    throw ConfigError("cloud: radius must be positive");
  }
  if (shape == CloudShape::box && !(edges[0] > 0.0 && edges[1] > 0.0 && edges[2] > 0.0)) {
    throw ConfigError("cloud: box edges must be positive");
  }
  if (!(r_min >= 0.0)) throw ConfigError("cloud: r_min must be non-negative");
  // Random sequential addition jams near 38% packing; refuse well before that.
  const double packing = static_cast<double>(n_atoms) * std::numbers::pi / 6.0 * r_min * r_min * r_min;
  if (packing > 0.3 * volume()) {
    throw ConfigError("cloud: r_min is infeasible for n_atoms in this volume");
  }
}

double sphere_radius_for_density(std::size_t n_atoms, double density) {
  if (!(density > 0.0)) throw ConfigError("cloud: density must be positive");
  return std::cbrt(3.0 * static_cast<double>(n_atoms) / (4.0 * std::numbers::pi * density));
}

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

Vec3 draw_point(const CloudGeometry& g, CounterRng& rng) {
  if (g.shape == CloudShape::box) {
    Vec3 p;
    for (int k = 0; k < 3; ++k) p[k] = (rng.uniform() - 0.5) * g.edges[k];
    return p;
  }
  // Rejection from the enclosing cube keeps the draw sequence simple and exact.
  while (true) {
    Vec3 p;
    for (int k = 0; k < 3; ++k) p[k] = (2.0 * rng.uniform() - 1.0) * g.radius;
    if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= g.radius * g.radius) return p;
  }
}

}  // namespace

std::vector<Vec3> sample_positions(const CloudGeometry& g) {
  g.validate();
  CounterRng rng(g.seed);
  std::vector<Vec3> pos;
  pos.reserve(g.n_atoms);
  for (std::size_t i = 0; i < g.n_atoms; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      const Vec3 candidate = draw_point(g, rng);
      placed = true;
      for (const Vec3& q : pos) {
        if (distance(candidate, q) < g.r_min) {
          placed = false;
          break;
        }
      }
      if (placed) pos.push_back(candidate);
    }
    if (!placed) {
      throw SamplingError("cloud: could not place atom " + std::to_string(i) + " after " +
                          std::to_string(kPlacementAttempts) +
                          " attempts; configuration too dense for r_min");
    }
  }
  return pos;
}

Eigen::MatrixXd pair_potentials(std::span<const Vec3> positions, double c6) {
  const auto n = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = distance(positions[i], positions[j]);
      if (!(r > 0.0)) {
        throw Error("pair_potentials: atoms " + std::to_string(i) + " and " + std::to_string(j) +
                    " coincide");
      }
      const double r2 = r * r;
      v(i, j) = v(j, i) = c6 / (r2 * r2 * r2);
    }
  }
  return v;
}

Cloud Cloud::sample(const CloudGeometry& g, double c6) {
  return from_positions(sample_positions(g), c6);
}

Cloud Cloud::from_positions(std::vector<Vec3> positions, double c6) {
  Cloud c;
  c.potentials = pair_potentials(positions, c6);
  c.positions = std::move(positions);
  return c;
}

void write_positions_csv(std::ostream& os, std::span<const Vec3> positions) {
  os << "x_um,y_um,z_um\n";
  char buf[128];
  for (const Vec3& p : positions) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", p[0], p[1], p[2]);
    os << buf;
  }
}

}  // namespace rydmf
