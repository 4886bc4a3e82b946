#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "rydmf/core.hpp"

namespace rydmf {

using Vec3 = std::array<double, 3>;  // micrometers

enum class CloudShape { sphere, box };

std::string_view to_string(CloudShape s);
CloudShape parse_cloud_shape(std::string_view name);

struct CloudGeometry {
  std::size_t n_atoms = 1;
  CloudShape shape = CloudShape::sphere;
  double radius = 1.0;               // sphere, um
  Vec3 edges = {1.0, 1.0, 1.0};      // box, um
  double r_min = 0.5;                // um
  std::uint64_t seed = 0;

  void validate() const;
  double volume() const;
};

// Radius of a uniform sphere holding n atoms at the given density (um^-3).
double sphere_radius_for_density(std::size_t n_atoms, double density);

// Maximum draws per atom before rejection sampling gives up.
inline constexpr int kPlacementAttempts = 100000;

std::vector<Vec3> sample_positions(const CloudGeometry& g);

// V_ij = c6 / |r_i - r_j|^6 with zero diagonal (rad/s for c6 in rad/s um^6).
Eigen::MatrixXd pair_potentials(std::span<const Vec3> positions, double c6);

struct Cloud {
  std::vector<Vec3> positions;
  Eigen::MatrixXd potentials;

  std::size_t size() const { return positions.size(); }
  static Cloud sample(const CloudGeometry& g, double c6);
  static Cloud from_positions(std::vector<Vec3> positions, double c6);
};

double distance(const Vec3& a, const Vec3& b);

// x,y,z columns in um with a header row.
void write_positions_csv(std::ostream& os, std::span<const Vec3> positions);

}  // namespace rydmf
