#pragma once

#include "geoweb/connection.hpp"
#include "geoweb/expr.hpp"
#include "geoweb/jet.hpp"
#include "geoweb/web.hpp"

#include <span>
#include <string>
#include <vector>

namespace geoweb {

/// Below this (times scale) a residual counts as zero.
inline constexpr double kPassThreshold = 1e-8;
/// At or above this (times scale) a residual is a genuine obstruction.
inline constexpr double kFailThreshold = 1e-3;
/// Fraction of degenerate sample points above which a verdict is inconclusive.
inline constexpr double kMaxExcludedFraction = 0.2;

enum class Verdict { positive, negative, inconclusive };

/// Symmetric n x n matrix at a point.
struct SymResidual {
    int dim = 0;
    std::vector<double> entries; ///< row-major
    double norm = 0.0;           ///< max |entry|

    double operator()(int a, int b) const { return entries[static_cast<std::size_t>(a * dim + b)]; }
};

/// (d^s omega)_ab = (d_a omega_b + d_b omega_a)/2 - Gamma^c_ab omega_c. omega needs order >= 1.
SymResidual sym_covariant_differential(const ConnectionField& conn, std::span<const Jet> omega);

struct GeodesicFit {
    std::vector<double> theta; ///< least-squares theta with d^s omega ~ theta . omega
    double residual = 0.0;     ///< max-norm of the unexplained part
    double scale = 0.0;        ///< max(|omega_a|, |d_a omega_b|)
    Verdict verdict = Verdict::inconclusive;
};

/// Fits d^s omega = theta . omega with the symmetric product (theta (x) omega + omega (x) theta)/2.
/// Throws ZeroForm when omega vanishes at the point.
GeodesicFit totally_geodesic_residual(const ConnectionField& conn, std::span<const Jet> omega);

/// Max-norm of d^s df.
double affine_function_residual(const ConnectionField& conn, const Expression& f);

/// Projective class and skew invariants of one extra foliation at a point.
struct ExtraFoliation {
    int foliation = 0; ///< 1-based
    std::vector<double> projective_class;
    std::vector<double> s; ///< n x n row-major
};

struct GeodesicityRow {
    std::size_t index = 0;
    std::vector<double> point;
    bool excluded = false;
    std::string diagnostic;
    double discrepancy = 0.0; ///< max_{i<j, k<l} |s^(k)_ij - s^(l)_ij|
    double scale = 1.0;
    std::vector<ExtraFoliation> extras;
};

struct GeodesicityReport {
    std::vector<GeodesicityRow> rows;
    double max_discrepancy = 0.0;
    std::size_t excluded = 0;
    bool vacuous = false; ///< d = n+2
    Verdict verdict = Verdict::inconclusive;
};

GeodesicityRow geodesicity_at(const WebChart& web, std::span<const double> point, std::size_t index = 0);
GeodesicityReport geodesicity_test(const WebChart& web, std::span<const std::vector<double>> points);

/// Shared verdict rule: positive iff every value <= pass*scale, negative if any >= fail*scale.
Verdict threshold_verdict(double value, double scale, double pass, double fail);
Verdict combine(Verdict a, Verdict b);

} // namespace geoweb
