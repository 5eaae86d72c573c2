#include "geoweb/connection.hpp"

#include "geoweb/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geoweb {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

} // namespace

Tensor<double> ConnectionField::coord_values() const
{
    Tensor<double> out(dim(), 3);
    for (std::size_t p = 0; p < out.size(); ++p) out.data()[p] = coord_gamma.data()[p].value();
    return out;
}

GaugeForm GaugeForm::constant(std::span<const double> values, int order)
{
    GaugeForm g;
    const int n = static_cast<int>(values.size());
    for (double v : values) g.rho.push_back(Jet::constant(n, order, v));
    return g;
}

Jet skew_invariant(std::span<const Jet> a, const JetMatrix& frame, int i, int j)
{
    const Jet& ai = a[at(i)];
    const Jet& aj = a[at(j)];
    const double gap = std::abs(ai.value() - aj.value());
    if (!(gap > kCoincidenceFloor * std::max(std::abs(ai.value()), std::abs(aj.value()))))
        throw CoincidentInvariants("basis invariants a_" + std::to_string(i + 1) + " and a_" + std::to_string(j + 1) +
                                   " coincide");

    const int k = ai.order() - 1;
    const auto di = frame.col(i);
    const auto dj = frame.col(j);
    // d log(a_j / a_i) = da_j / a_j - da_i / a_i
    const Jet ai0 = ai.truncated(k);
    const Jet aj0 = aj.truncated(k);
    const Jet dj_log = directional_derivative(aj, dj) / aj0 - directional_derivative(ai, dj) / ai0;
    const Jet di_log = directional_derivative(aj, di) / aj0 - directional_derivative(ai, di) / ai0;
    return (ai0 * dj_log - aj0 * di_log) / (ai0 - aj0);
}

JetMatrix skew_invariants(std::span<const Jet> a, const JetMatrix& frame)
{
    const int n = static_cast<int>(a.size());
    const Jet zero(a[0].dim(), a[0].order() - 1);
    JetMatrix s(n, n, zero);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            s(i, j) = skew_invariant(a, frame, i, j);
            s(j, i) = -s(i, j);
        }
    }
    return s;
}

ThetaSystem theta_system(const NormalizedCoframe& cof, const BasisInvariant& extra, std::span<const Jet> t)
{
    const int n = cof.dim();
    const int k = cof.order - 2;
    ThetaSystem th;
    if (t.empty()) {
        th.t.assign(at(n), Jet(n, k));
    } else {
        if (static_cast<int>(t.size()) != n) throw MixedContext("gauge t needs n components");
        for (const auto& ti : t) th.t.push_back(ti.truncated(k));
    }

    th.s = skew_invariants(extra.a, cof.frame);
    th.theta = JetMatrix(n, n, Jet(n, k));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) th.theta(i, j) = th.t[at(j)] + th.s(i, j);

    for (int i = 0; i < n; ++i) {
        const Jet& ai = extra.a[at(i)];
        const Jet ai_i = directional_derivative(ai, cof.frame.col(i));
        th.theta_next.push_back(th.t[at(i)] + ai_i / ai.truncated(k));
    }
    return th;
}

ConnectionField canonical_christoffels(const NormalizedCoframe& cof, const ThetaSystem& theta)
{
    const int n = cof.dim();
    const int k2 = cof.order - 2;
    const Tensor<Jet>& c = cof.structure;

    ConnectionField conn;
    conn.point = cof.point;
    conn.frame = cof.frame;
    conn.frame_gamma = Tensor<Jet>(n, 3, Jet(n, k2));
    auto& g = conn.frame_gamma;
    for (int k = 0; k < n; ++k) {
        // Gamma^k_kk is fixed by the (d_k, d_k) entry of the geodesic condition for omega_k.
        g(k, k, k) = -theta.theta(k, k);
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            g(k, i, k) = (c(k, k, i) - theta.theta(k, i)) * 0.5;
            g(k, k, i) = g(k, i, k) + c(k, i, k);
            for (int j = 0; j < n; ++j)
                if (j != k) g(k, i, j) = c(k, j, i) * 0.5;
        }
    }

    // Coordinate Christoffels: Gamma^c_ab = E^c_k (d_a W^k_b + W^i_a W^j_b Gamma^k_ji)
    const Jet zero(n, k2);
    JetMatrix w(n, n, zero);
    JetMatrix e(n, n, zero);
    for (int i = 0; i < n; ++i) {
        for (int a = 0; a < n; ++a) {
            w(i, a) = cof.omega(i, a).truncated(k2);
            e(a, i) = cof.frame(a, i).truncated(k2);
        }
    }
    conn.coord_gamma = Tensor<Jet>(n, 3, zero);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            std::vector<Jet> inner(at(n), zero);
            for (int k = 0; k < n; ++k) {
                Jet acc = cof.omega(k, b).partial(a);
                for (int i = 0; i < n; ++i) {
                    if (w(i, a).is_constant() && w(i, a).value() == 0.0) continue;
                    for (int j = 0; j < n; ++j) acc += w(i, a) * w(j, b) * g(k, j, i);
                }
                inner[at(k)] = std::move(acc);
            }
            for (int cc = 0; cc < n; ++cc) {
                Jet gamma = zero;
                for (int k = 0; k < n; ++k) gamma += e(cc, k) * inner[at(k)];
                conn.coord_gamma(cc, a, b) = std::move(gamma);
            }
        }
    }
    return conn;
}

std::vector<Jet> eval_gauge(std::span<const Expression> t, std::span<const double> point, int order)
{
    std::vector<Jet> out;
    for (const auto& ti : t) out.push_back(eval_field(ti, point, order));
    return out;
}

ConnectionField canonical_connection(const WebChart& web, std::span<const double> point, int order,
                                     std::span<const Expression> t_gauge)
{
    const NormalizedCoframe cof = normalize_coframe(web, point, order);
    const BasisInvariant extra = basis_invariants(cof, web, web.dim() + 2);
    const auto t = eval_gauge(t_gauge, point, order - 2);
    return canonical_christoffels(cof, theta_system(cof, extra, t));
}

ConnectionField pointed_affine_connection(const WebChart& web, std::span<const double> point, int order)
{
    return canonical_connection(web.pointed_in_normal_slot(), point, order);
}

ConnectionField flat_connection(int dim, std::span<const double> point, int order)
{
    ConnectionField conn;
    conn.point.assign(point.begin(), point.end());
    conn.frame = JetMatrix::identity(dim, dim, order);
    conn.frame_gamma = Tensor<Jet>(dim, 3, Jet(dim, order));
    conn.coord_gamma = Tensor<Jet>(dim, 3, Jet(dim, order));
    return conn;
}

ConnectionField projective_gauge_change(const ConnectionField& conn, const GaugeForm& rho)
{
    const int n = conn.dim();
    if (static_cast<int>(rho.rho.size()) != n) throw MixedContext("gauge form has wrong number of components");
    int order = conn.order();
    for (const auto& r : rho.rho) order = std::min(order, r.order());

    std::vector<Jet> r;
    for (const auto& ri : rho.rho) r.push_back(ri.truncated(order));
    // frame components <rho, d_i>
    std::vector<Jet> rf(at(n), Jet(n, order));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c) rf[at(i)] += r[at(c)] * conn.frame(c, i).truncated(order);

    ConnectionField out;
    out.point = conn.point;
    out.frame = conn.frame;
    out.coord_gamma = Tensor<Jet>(n, 3);
    out.frame_gamma = Tensor<Jet>(n, 3);
    for (int c = 0; c < n; ++c) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                Jet gc = conn.coord_gamma(c, a, b).truncated(order);
                Jet gf = conn.frame_gamma(c, a, b).truncated(order);
                if (c == a) {
                    gc += r[at(b)];
                    gf += rf[at(b)];
                }
                if (c == b) {
                    gc += r[at(a)];
                    gf += rf[at(a)];
                }
                out.coord_gamma(c, a, b) = std::move(gc);
                out.frame_gamma(c, a, b) = std::move(gf);
            }
        }
    }
    return out;
}

ProjectiveEquivalence projective_equivalence_check(const ConnectionField& a, const ConnectionField& b)
{
    const int n = a.dim();
    if (b.dim() != n) throw MixedContext("connections of different dimension");
    if (a.point != b.point) throw MixedContext("connections evaluated at different points");
    const int order = std::min(a.order(), b.order());

    Tensor<Jet> diff(n, 3);
    for (std::size_t p = 0; p < diff.size(); ++p)
        diff.data()[p] = b.coord_gamma.data()[p].truncated(order) - a.coord_gamma.data()[p].truncated(order);

    ProjectiveEquivalence eq;
    for (int m = 0; m < n; ++m) {
        Jet trace(n, order);
        for (int k = 0; k < n; ++k) trace += diff(k, k, m);
        eq.rho.rho.push_back(trace / static_cast<double>(n + 1));
    }
    for (int c = 0; c < n; ++c) {
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                double r = diff(c, x, y).value();
                if (c == x) r -= eq.rho.rho[at(y)].value();
                if (c == y) r -= eq.rho.rho[at(x)].value();
                eq.residual = std::max(eq.residual, std::abs(r));
            }
        }
    }
    eq.equivalent = eq.residual <= kEquivalenceTolerance;
    return eq;
}

} // namespace geoweb
