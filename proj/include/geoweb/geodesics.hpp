#pragma once

#include "geoweb/tensor.hpp"
#include "geoweb/web.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace geoweb {

/// Coordinate Christoffels Gamma^c_ab (value parts) at a point.
using ChristoffelField = std::function<Tensor<double>(std::span<const double>)>;

enum class ConnectionChoice { canonical, pointed };

/// Christoffel field of the canonical (gauge t = 0) or pointed affine connection of a web.
ChristoffelField web_connection_field(const WebChart& web, ConnectionChoice choice = ConnectionChoice::canonical);

ChristoffelField flat_field(int dim);

struct TrajectoryPoint {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> v;
};

struct Trajectory {
    std::vector<TrajectoryPoint> states;
    double step = 0.0;
    int order = 4; ///< classical Runge-Kutta
    bool halted = false;
    std::string diagnostic;

    const TrajectoryPoint& back() const { return states.back(); }
    double path_length() const;
};

/// Fixed-step RK4 on x'' = -Gamma(x)(x', x') over [0, duration].
/// Halts (halted = true) if a degenerate web point is met after the start.
Trajectory integrate_geodesic(const ChristoffelField& field, std::span<const double> x0, std::span<const double> v0,
                              double duration, double step);

/// max_t |f_i(x(t)) - f_i(x0)| / (|grad f_i(x0)| * path length). foliation is 1-based.
double leaf_drift(const WebChart& web, int foliation, const Trajectory& traj);

/// Tangent launch vector for a leaf: `direction` (or a coordinate axis far from
/// the normal) with its df_i-component removed, scaled to `speed`.
std::vector<double> leaf_tangent(const WebChart& web, int foliation, std::span<const double> x0,
                                 std::optional<std::vector<double>> direction, double speed);

/// CSV dump: t, x1..xn, f1..fd.
void write_trajectory_csv(std::ostream& out, const WebChart& web, const Trajectory& traj);

} // namespace geoweb
