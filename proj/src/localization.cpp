#include "mlc/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlc/errors.hpp"

namespace mlc::localization {

namespace {

constexpr double kEdgeTolerance = 1e-9;

Point tile_center(std::size_t i, std::size_t j) {
    return {static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5};
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

bool point_in_triangle(Point p, Point a, Point b, Point c) {
    // Barycentric coordinates of p; all three nonnegative means inside.
    const double det = (b.y - c.y) * (a.x - c.x) + (c.x - b.x) * (a.y - c.y);
    if (det == 0.0) return false;
    const double l1 = ((b.y - c.y) * (p.x - c.x) + (c.x - b.x) * (p.y - c.y)) / det;
    const double l2 = ((c.y - a.y) * (p.x - c.x) + (a.x - c.x) * (p.y - c.y)) / det;
    const double l3 = 1.0 - l1 - l2;
    return l1 >= -kEdgeTolerance && l2 >= -kEdgeTolerance && l3 >= -kEdgeTolerance;
}

LabelVector MapEstimate::to_bits() const {
    LabelVector out(tiles.size());
    for (std::size_t i = 0; i < tiles.size(); ++i) out[i] = tiles[i] == 1.0;
    return out;
}

Scenario make_scenario(std::size_t grid_w, std::vector<Point> sensors, double eps_fn,
                       double eps_fp) {
    if (grid_w < 4) throw ConfigError("grid width must be at least 4");
    if (sensors.empty()) throw ConfigError("at least one sensor is required");
    if (!(eps_fn > 0.0 && eps_fn < 0.5)) throw ConfigError("eps_fn must lie in (0, 0.5)");
    if (!(eps_fp > 0.0 && eps_fp < 0.5)) throw ConfigError("eps_fp must lie in (0, 0.5)");

    Scenario s;
    s.grid_w = grid_w;
    s.eps_fn = eps_fn;
    s.eps_fp = eps_fp;
    const double w = static_cast<double>(grid_w);
    s.light_a = {0.25 * w, 0.0};
    s.light_b = {0.75 * w, 0.0};
    s.sensors = std::move(sensors);
    for (const auto& p : s.sensors)
        if (p.y == 0.0 && p.x >= s.light_a.x && p.x <= s.light_b.x)
            throw ConfigError("sensor lies on the light segment");

    s.zones.resize(s.sensors.size());
    for (std::size_t d = 0; d < s.sensors.size(); ++d)
        for (std::size_t j = 0; j < grid_w; ++j)
            for (std::size_t i = 0; i < grid_w; ++i)
                if (point_in_triangle(tile_center(i, j), s.sensors[d], s.light_a, s.light_b))
                    s.zones[d].push_back(i + j * grid_w);
    return s;
}

Scenario build_scenario(std::size_t grid_w, std::size_t n_sensors, double eps_fn,
                        double eps_fp) {
    if (n_sensors < 1) throw ConfigError("at least one sensor is required");
    // Walk up the left edge, across the top, down the right edge.
    const double w = static_cast<double>(grid_w);
    const double spacing = 3.0 * w / static_cast<double>(n_sensors);
    std::vector<Point> sensors;
    for (std::size_t k = 0; k < n_sensors; ++k) {
        const double along = (static_cast<double>(k) + 0.5) * spacing;
        if (along < w) sensors.push_back({0.0, along});
        else if (along < 2.0 * w) sensors.push_back({along - w, w});
        else sensors.push_back({w, 3.0 * w - along});
    }
    return make_scenario(grid_w, std::move(sensors), eps_fn, eps_fp);
}

std::size_t tile_count(const Scene& scene, const Scenario& scenario, std::size_t sensor) {
    if (sensor >= scenario.n_sensors()) throw InputError("sensor index out of range");
    if (scene.tiles.size() != scenario.tiles()) throw InputError("scene does not match scenario");
    std::size_t c = 0;
    for (std::size_t t : scenario.zones[sensor]) c += scene.tiles[t];
    return c;
}

double sensor_prob(std::size_t c, const Scenario& scenario) {
    if (c == 0) return scenario.eps_fp;
    if (c == 1) return 1.0 - scenario.eps_fn;
    return 1.0 - scenario.eps_fn * std::exp(-0.1 * static_cast<double>(c - 1));
}

Scene generate_clean_scene(const Scenario& scenario, Rng& rng) {
    const std::size_t w = scenario.grid_w;
    Scene scene{w, LabelVector(w * w, 0)};

    const auto rect_w = static_cast<std::size_t>(
        std::max(1.0, std::floor(static_cast<double>(w) / 8.0 + 0.5)));
    const auto i0 = static_cast<std::size_t>(rng.index(w));
    const auto j0 = static_cast<std::size_t>(rng.index(w));
    const std::size_t i1 = std::min(i0 + rect_w, w) - 1;
    const std::size_t j1 = std::min(j0 + 2, w) - 1;
    for (std::size_t j = j0; j <= j1; ++j)
        for (std::size_t i = i0; i <= i1; ++i) scene.tiles[i + j * w] = 1;

    const Point rect_center{(static_cast<double>(i0 + i1) + 1.0) / 2.0,
                            (static_cast<double>(j0 + j1) + 1.0) / 2.0};
    // Lower-left tile of each corner square.
    const std::size_t far = w - 2;
    const std::size_t corners[4][2] = {{0, 0}, {far, 0}, {0, far}, {far, far}};
    std::size_t best = 0;
    double best_dist = -1.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const Point center{static_cast<double>(corners[k][0]) + 1.0,
                           static_cast<double>(corners[k][1]) + 1.0};
        const double dist = distance(center, rect_center);
        if (dist > best_dist) {
            best_dist = dist;
            best = k;
        }
    }
    for (std::size_t dj = 0; dj < 2; ++dj)
        for (std::size_t di = 0; di < 2; ++di)
            scene.tiles[(corners[best][0] + di) + (corners[best][1] + dj) * w] = 1;
    return scene;
}

void flip_noise(Scene& scene, Rng& rng) {
    const std::size_t n = scene.tiles.size();
    const std::size_t flips = n / 100;
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: the first `flips` slots become a uniform sample.
    for (std::size_t k = 0; k < flips; ++k) {
        const auto pick = k + static_cast<std::size_t>(rng.index(n - k));
        std::swap(pool[k], pool[pick]);
        scene.tiles[pool[k]] ^= 1;
    }
}

Scene generate_scene(const Scenario& scenario, std::uint64_t seed) {
    Rng rng(seed);
    Scene scene = generate_clean_scene(scenario, rng);
    flip_noise(scene, rng);
    return scene;
}

BitMatrix sample_observations(const Scene& scene, const Scenario& scenario, std::size_t m,
                              std::uint64_t seed) {
    if (m < 1) throw ConfigError("at least one observation per sensor is required");
    Rng rng(seed);
    BitMatrix obs(scenario.n_sensors(), m);
    for (std::size_t d = 0; d < scenario.n_sensors(); ++d) {
        const double p = sensor_prob(tile_count(scene, scenario, d), scenario);
        for (std::size_t k = 0; k < m; ++k) obs(d, k) = rng.bernoulli(p);
    }
    return obs;
}

MapEstimate map_estimate(const BitMatrix& observations, const Scenario& scenario) {
    if (observations.rows() != scenario.n_sensors() || observations.cols() == 0)
        throw InputError("observation matrix must be D x M with M >= 1");
    MapEstimate est{scenario.grid_w, std::vector<double>(scenario.tiles(), 0.5)};
    std::vector<bool> fired(scenario.n_sensors());
    for (std::size_t d = 0; d < scenario.n_sensors(); ++d) {
        auto row = observations.row(d);
        const double theta = static_cast<double>(std::accumulate(row.begin(), row.end(), 0u)) /
                             static_cast<double>(row.size());
        fired[d] = theta > 0.5;
        if (!fired[d])
            for (std::size_t t : scenario.zones[d]) est.tiles[t] = 0.0;
    }
    for (std::size_t d = 0; d < scenario.n_sensors(); ++d)
        if (fired[d])
            for (std::size_t t : scenario.zones[d])
                if (est.tiles[t] == 0.5) est.tiles[t] = 1.0;
    return est;
}

Instance generate_instance(const Scenario& scenario, std::size_t m_obs, std::uint64_t seed) {
    Rng rng(seed);
    Instance inst;
    inst.truth = generate_clean_scene(scenario, rng);
    inst.observations = sample_observations(inst.truth, scenario, m_obs, rng.next());
    flip_noise(inst.truth, rng);
    return inst;
}

std::vector<Instance> generate_instances(const Scenario& scenario, std::size_t n_instances,
                                         std::size_t m_obs, std::uint64_t seed) {
    std::vector<Instance> out;
    out.reserve(n_instances);
    for (std::size_t n = 0; n < n_instances; ++n)
        out.push_back(generate_instance(scenario, m_obs, derive_seed(seed, n)));
    return out;
}

Dataset instances_to_dataset(const Scenario& scenario, const std::vector<Instance>& instances) {
    if (instances.empty()) throw ConfigError("at least one instance is required");
    RealMatrix features(instances.size(), scenario.n_sensors());
    BitMatrix labels(instances.size(), scenario.tiles());
    for (std::size_t n = 0; n < instances.size(); ++n) {
        const auto& obs = instances[n].observations;
        for (std::size_t d = 0; d < obs.rows(); ++d) {
            auto row = obs.row(d);
            features(n, d) = static_cast<double>(std::accumulate(row.begin(), row.end(), 0u)) /
                             static_cast<double>(row.size());
        }
        std::copy(instances[n].truth.tiles.begin(), instances[n].truth.tiles.end(),
                  labels.row(n).begin());
    }
    return Dataset::from_matrices(std::move(features), std::move(labels));
}

Dataset generate_localization_dataset(std::size_t grid_w, std::size_t n_sensors,
                                      std::size_t n_instances, std::size_t m_obs,
                                      std::uint64_t seed) {
    const Scenario scenario = build_scenario(grid_w, n_sensors);
    return instances_to_dataset(scenario, generate_instances(scenario, n_instances, m_obs, seed));
}

void to_json(nlohmann::json& j, const Scenario& s) {
    auto point = [](Point p) { return nlohmann::json::array({p.x, p.y}); };
    nlohmann::json sensors = nlohmann::json::array();
    for (const auto& p : s.sensors) sensors.push_back(point(p));
    j = nlohmann::json{{"grid_w", s.grid_w},
                       {"sensors", sensors},
                       {"light", {point(s.light_a), point(s.light_b)}},
                       {"eps_fn", s.eps_fn},
                       {"eps_fp", s.eps_fp}};
}

}  // namespace mlc::localization
