#include "geoweb/geodesics.hpp"

#include "geoweb/connection.hpp"
#include "geoweb/error.hpp"
#include "geoweb/report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geoweb {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

double norm(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// State y = (x, v); returns y' = (v, -Gamma(x)(v, v)).
std::vector<double> rhs(const ChristoffelField& field, std::span<const double> y, int n)
{
    const auto x = y.subspan(0, at(n));
    const auto v = y.subspan(at(n), at(n));
    const Tensor<double> g = field(x);
    std::vector<double> dy(at(2 * n));
    for (int c = 0; c < n; ++c) {
        dy[at(c)] = v[at(c)];
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) acc += g(c, a, b) * v[at(a)] * v[at(b)];
        dy[at(n + c)] = -acc;
    }
    return dy;
}

} // namespace

ChristoffelField web_connection_field(const WebChart& web, ConnectionChoice choice)
{
    return [web, choice](std::span<const double> x) {
        const ConnectionField conn =
            choice == ConnectionChoice::pointed ? pointed_affine_connection(web, x, 2) : canonical_connection(web, x, 2);
        return conn.coord_values();
    };
}

ChristoffelField flat_field(int dim)
{
    return [dim](std::span<const double>) { return Tensor<double>(dim, 3, 0.0); };
}

double Trajectory::path_length() const
{
    double len = 0.0;
    for (std::size_t i = 1; i < states.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < states[i].x.size(); ++c) {
            const double d = states[i].x[c] - states[i - 1].x[c];
            s += d * d;
        }
        len += std::sqrt(s);
    }
    return len;
}

Trajectory integrate_geodesic(const ChristoffelField& field, std::span<const double> x0, std::span<const double> v0,
                              double duration, double step)
{
    if (!(step > 0.0)) throw StepTooLarge("step must be positive");
    if (x0.size() != v0.size()) throw MixedContext("position and velocity differ in dimension");
    const int n = static_cast<int>(x0.size());

    Trajectory traj;
    traj.step = step;
    traj.states.push_back({0.0, {x0.begin(), x0.end()}, {v0.begin(), v0.end()}});

    std::vector<double> y(x0.begin(), x0.end());
    y.insert(y.end(), v0.begin(), v0.end());
    (void)field(x0); // degenerate start throws here

    const auto steps = static_cast<long>(std::ceil(duration / step - 1e-9));
    std::vector<double> tmp(y.size());
    for (long s = 0; s < steps; ++s) {
        const double h = std::min(step, duration - static_cast<double>(s) * step);
        std::vector<double> k1, k2, k3, k4;
        try {
            k1 = rhs(field, y, n);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            k2 = rhs(field, tmp, n);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            k3 = rhs(field, tmp, n);
            for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
            k4 = rhs(field, tmp, n);
        } catch (const Error& e) {
            if (!dynamic_cast<const DegenerateWebPoint*>(&e) && !dynamic_cast<const DomainError*>(&e)) throw;
            traj.halted = true;
            traj.diagnostic = std::string("halted at t = ") + format_real(traj.back().t) + ": " + e.what();
            return traj;
        }

        const double speed2 = [&] {
            double s2 = 0.0;
            for (int c = 0; c < n; ++c) s2 += y[at(n + c)] * y[at(n + c)];
            return s2;
        }();
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);

        double next2 = 0.0;
        for (int c = 0; c < n; ++c) next2 += y[at(n + c)] * y[at(n + c)];
        const bool finite = std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
        if (!finite || (speed2 > 0.0 && std::abs(next2 - speed2) > 0.5 * speed2))
            throw StepTooLarge("speed changed by more than 50% within one step at t = " + format_real(traj.back().t));

        TrajectoryPoint p;
        p.t = traj.back().t + h;
        p.x.assign(y.begin(), y.begin() + n);
        p.v.assign(y.begin() + n, y.end());
        traj.states.push_back(std::move(p));
    }
    return traj;
}

double leaf_drift(const WebChart& web, int foliation, const Trajectory& traj)
{
    const Expression& f = web.function(foliation - 1);
    const auto& x0 = traj.states.front().x;
    const Jet f0 = eval_field(f, x0, 1);
    const double denom = norm(f0.gradient()) * traj.path_length();
    if (!(denom > 0.0)) return 0.0;
    double worst = 0.0;
    for (const auto& s : traj.states) worst = std::max(worst, std::abs(eval_field(f, s.x, 0).value() - f0.value()));
    return worst / denom;
}

std::vector<double> leaf_tangent(const WebChart& web, int foliation, std::span<const double> x0,
                                 std::optional<std::vector<double>> direction, double speed)
{
    const int n = web.dim();
    const auto grad = eval_field(web.function(foliation - 1), x0, 1).gradient();
    const double g2 = std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
    if (!(g2 > 0.0)) throw ZeroForm("web function has vanishing gradient at the launch point");

    std::vector<double> v;
    if (direction) {
        if (static_cast<int>(direction->size()) != n) throw MixedContext("direction has wrong dimension");
        v = *direction;
    } else {
        int axis = 0;
        for (int c = 1; c < n; ++c)
            if (std::abs(grad[at(c)]) < std::abs(grad[at(axis)])) axis = c;
        v.assign(at(n), 0.0);
        v[at(axis)] = 1.0;
    }
    const double along = std::inner_product(v.begin(), v.end(), grad.begin(), 0.0) / g2;
    for (int c = 0; c < n; ++c) v[at(c)] -= along * grad[at(c)];
    const double len = norm(v);
    if (!(len > 1e-12)) throw ZeroForm("launch direction is normal to the leaf");
    for (double& x : v) x *= speed / len;
    return v;
}

void write_trajectory_csv(std::ostream& out, const WebChart& web, const Trajectory& traj)
{
    out << "t";
    for (int c = 1; c <= web.dim(); ++c) out << ",x" << c;
    for (int i = 1; i <= web.size(); ++i) out << ",f" << i;
    out << '\n';
    for (const auto& s : traj.states) {
        out << format_real(s.t);
        for (double x : s.x) out << ',' << format_real(x);
        for (int i = 0; i < web.size(); ++i) {
            out << ',';
            try {
                out << format_real(eval_field(web.function(i), s.x, 0).value());
            } catch (const DomainError&) {
                out << "nan";
            }
        }
        out << '\n';
    }
}

} // namespace geoweb
