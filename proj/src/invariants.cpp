#include "geoweb/invariants.hpp"

#include "geoweb/error.hpp"
#include "geoweb/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace geoweb {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// Gaussian elimination with partial pivoting on a small dense system.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n)
{
    double largest = 0.0;
    for (double v : a) largest = std::max(largest, std::abs(v));
    const double floor = kPivotFloor * largest;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[at(r * n + col)]) > std::abs(a[at(pivot * n + col)])) pivot = r;
        if (!(std::abs(a[at(pivot * n + col)]) > floor)) throw SingularSystem("least-squares normal matrix is singular");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a[at(col * n + c)], a[at(pivot * n + c)]);
            std::swap(b[at(col)], b[at(pivot)]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a[at(r * n + col)] / a[at(col * n + col)];
            for (int c = col; c < n; ++c) a[at(r * n + c)] -= f * a[at(col * n + c)];
            b[at(r)] -= f * b[at(col)];
        }
    }
    std::vector<double> x(at(n));
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[at(r)];
        for (int c = r + 1; c < n; ++c) acc -= a[at(r * n + c)] * x[at(c)];
        x[at(r)] = acc / a[at(r * n + r)];
    }
    return x;
}

} // namespace

Verdict threshold_verdict(double value, double scale, double pass, double fail)
{
    if (value <= pass * scale) return Verdict::positive;
    if (value >= fail * scale) return Verdict::negative;
    return Verdict::inconclusive;
}

Verdict combine(Verdict a, Verdict b)
{
    if (a == Verdict::negative || b == Verdict::negative) return Verdict::negative;
    if (a == Verdict::positive && b == Verdict::positive) return Verdict::positive;
    return Verdict::inconclusive;
}

SymResidual sym_covariant_differential(const ConnectionField& conn, std::span<const Jet> omega)
{
    const int n = conn.dim();
    if (static_cast<int>(omega.size()) != n) throw MixedContext("1-form has wrong number of components");
    SymResidual out;
    out.dim = n;
    out.entries.assign(at(n * n), 0.0);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            double v = 0.5 * (omega[at(b)].gradient()[at(a)] + omega[at(a)].gradient()[at(b)]);
            for (int c = 0; c < n; ++c) v -= 0.5 * (conn.coord_gamma(c, a, b).value() + conn.coord_gamma(c, b, a).value()) * omega[at(c)].value();
            out.entries[at(a * n + b)] = v;
            out.entries[at(b * n + a)] = v;
            out.norm = std::max(out.norm, std::abs(v));
        }
    }
    return out;
}

GeodesicFit totally_geodesic_residual(const ConnectionField& conn, std::span<const Jet> omega)
{
    const int n = conn.dim();
    const SymResidual s = sym_covariant_differential(conn, omega);

    std::vector<double> w(at(n));
    double wmax = 0.0;
    double scale = 0.0;
    for (int a = 0; a < n; ++a) {
        w[at(a)] = omega[at(a)].value();
        wmax = std::max(wmax, std::abs(w[at(a)]));
        for (double g : omega[at(a)].gradient()) scale = std::max(scale, std::abs(g));
    }
    scale = std::max(scale, wmax);
    if (!(wmax > 1e-12 * scale)) throw ZeroForm("1-form vanishes at the point");

    // rows (a <= b): sum_m theta_m (delta_ma w_b + delta_mb w_a) / 2 = S_ab
    std::vector<double> normal(at(n * n), 0.0);
    std::vector<double> rhs(at(n), 0.0);
    std::vector<double> row(at(n));
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            std::fill(row.begin(), row.end(), 0.0);
            row[at(a)] += 0.5 * w[at(b)];
            row[at(b)] += 0.5 * w[at(a)];
            for (int p = 0; p < n; ++p) {
                rhs[at(p)] += row[at(p)] * s(a, b);
                for (int q = 0; q < n; ++q) normal[at(p * n + q)] += row[at(p)] * row[at(q)];
            }
        }
    }

    GeodesicFit fit;
    fit.theta = solve_dense(normal, rhs, n);
    fit.scale = scale;
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            const double model = 0.5 * (fit.theta[at(a)] * w[at(b)] + fit.theta[at(b)] * w[at(a)]);
            fit.residual = std::max(fit.residual, std::abs(s(a, b) - model));
        }
    }
    fit.verdict = threshold_verdict(fit.residual, scale, kPassThreshold, kFailThreshold);
    return fit;
}

double affine_function_residual(const ConnectionField& conn, const Expression& f)
{
    return sym_covariant_differential(conn, differential(f, conn.point, 2)).norm;
}

GeodesicityRow geodesicity_at(const WebChart& web, std::span<const double> point, std::size_t index)
{
    const int n = web.dim();
    GeodesicityRow row;
    row.index = index;
    row.point.assign(point.begin(), point.end());
    try {
        const NormalizedCoframe cof = normalize_coframe(web, point, 2);
        double smax = 0.0;
        for (int k = n + 2; k <= web.size(); ++k) {
            const BasisInvariant inv = basis_invariants(cof, web, k);
            const JetMatrix s = skew_invariants(inv.a, cof.frame);
            ExtraFoliation extra;
            extra.foliation = k;
            extra.projective_class = inv.projective_class();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    extra.s.push_back(s(i, j).value());
                    smax = std::max(smax, std::abs(s(i, j).value()));
                }
            row.extras.push_back(std::move(extra));
        }
        row.scale = std::max(1.0, smax);
        for (std::size_t k = 0; k < row.extras.size(); ++k)
            for (std::size_t l = k + 1; l < row.extras.size(); ++l)
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        const auto pos = at(i * n + j);
                        row.discrepancy = std::max(row.discrepancy, std::abs(row.extras[k].s[pos] - row.extras[l].s[pos]));
                    }
    } catch (const DegenerateWebPoint& e) {
        row.excluded = true;
        row.diagnostic = e.what();
        row.extras.clear();
    }
    return row;
}

GeodesicityReport geodesicity_test(const WebChart& web, std::span<const std::vector<double>> points)
{
    GeodesicityReport report;
    report.vacuous = web.size() == web.dim() + 2;
    report.rows.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) { report.rows[i] = geodesicity_at(web, points[i], i); });

    Verdict verdict = Verdict::positive;
    for (const auto& row : report.rows) {
        if (row.excluded) {
            ++report.excluded;
            continue;
        }
        report.max_discrepancy = std::max(report.max_discrepancy, row.discrepancy);
        verdict = combine(verdict, threshold_verdict(row.discrepancy, row.scale, kPassThreshold, kFailThreshold));
    }
    const double total = static_cast<double>(report.rows.size());
    if (report.rows.empty() || static_cast<double>(report.excluded) > kMaxExcludedFraction * total)
        verdict = Verdict::inconclusive;
    report.verdict = verdict;
    return report;
}

} // namespace geoweb
