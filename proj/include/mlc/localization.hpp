#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "mlc/data.hpp"
#include "mlc/matrix.hpp"
#include "mlc/rng.hpp"

namespace mlc::localization {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Closed-triangle test (boundary counts as inside).
bool point_in_triangle(Point p, Point a, Point b, Point c);

/// Room of grid_w x grid_w unit tiles with a light source on the bottom edge
/// and sensors around the other three edges. Tile (i, j), 0-based, has
/// center (i + 0.5, j + 0.5) and flat index i + j * grid_w.
struct Scenario {
    std::size_t grid_w = 0;
    std::vector<Point> sensors;
    Point light_a;
    Point light_b;
    double eps_fn = 0.15;  // p(x=0 | c=1)
    double eps_fp = 0.01;  // p(x=1 | c=0)
    /// zones[d] = flat indices of tiles whose center lies in sensor d's triangle.
    std::vector<std::vector<std::size_t>> zones;

    std::size_t tiles() const noexcept { return grid_w * grid_w; }
    std::size_t n_sensors() const noexcept { return sensors.size(); }
};

struct Scene {
    std::size_t grid_w = 0;
    LabelVector tiles;  // flat, i fastest

    std::uint8_t at(std::size_t i, std::size_t j) const { return tiles[i + j * grid_w]; }
};

/// Tiles over {0, 0.5, 1}; 0.5 marks shadow tiles no sensor decided.
struct MapEstimate {
    std::size_t grid_w = 0;
    std::vector<double> tiles;

    /// Shadow tiles (0.5) map to 0.
    LabelVector to_bits() const;
};

/// Light segment from (0.25 W, 0) to (0.75 W, 0); n_sensors spaced evenly
/// along the left, top and right edges (walked as one path, corners never hit).
Scenario build_scenario(std::size_t grid_w, std::size_t n_sensors, double eps_fn = 0.15,
                        double eps_fp = 0.01);

/// Scenario with explicit sensor positions (light segment as above).
Scenario make_scenario(std::size_t grid_w, std::vector<Point> sensors, double eps_fn = 0.15,
                       double eps_fp = 0.01);

std::size_t tile_count(const Scene& scene, const Scenario& scenario, std::size_t sensor);

/// p(x_d = 1 | c_d).
double sensor_prob(std::size_t c, const Scenario& scenario);

/// Blocking objects before the dynamic noise: a round(W/8) x 2 rectangle at a
/// random anchor (clipped) plus a 2x2 square in the corner farthest from it.
Scene generate_clean_scene(const Scenario& scenario, Rng& rng);
/// Toggles floor(L/100) distinct uniformly chosen tiles.
void flip_noise(Scene& scene, Rng& rng);
Scene generate_scene(const Scenario& scenario, std::uint64_t seed);

/// D x m Bernoulli draws with success sensor_prob(c_d).
BitMatrix sample_observations(const Scene& scene, const Scenario& scenario, std::size_t m,
                              std::uint64_t seed);

MapEstimate map_estimate(const BitMatrix& observations, const Scenario& scenario);

/// One generated instance: observations are drawn from the clean scene,
/// the reported labels include the dynamic noise.
struct Instance {
    Scene truth;
    BitMatrix observations;  // D x m
};

Instance generate_instance(const Scenario& scenario, std::size_t m_obs, std::uint64_t seed);
std::vector<Instance> generate_instances(const Scenario& scenario, std::size_t n_instances,
                                         std::size_t m_obs, std::uint64_t seed);

/// Features are the per-sensor observation means, labels the flattened grid.
Dataset instances_to_dataset(const Scenario& scenario, const std::vector<Instance>& instances);

Dataset generate_localization_dataset(std::size_t grid_w, std::size_t n_sensors,
                                      std::size_t n_instances, std::size_t m_obs,
                                      std::uint64_t seed);

void to_json(nlohmann::json& j, const Scenario& scenario);

}  // namespace mlc::localization
