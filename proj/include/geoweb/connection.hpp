#pragma once

#include "geoweb/expr.hpp"
#include "geoweb/jet.hpp"
#include "geoweb/tensor.hpp"
#include "geoweb/web.hpp"

#include <span>
#include <vector>

namespace geoweb {

/// Relative floor below which a_i and a_j are treated as coincident.
inline constexpr double kCoincidenceFloor = 1e-10;
/// Residual bound of projective_equivalence_check.
inline constexpr double kEquivalenceTolerance = 1e-9;

/// Connection forms of a web frame. theta(k, i) is the omega_i-component of
/// theta_k; theta(i, j) = t_j + s_ij.
struct ThetaSystem {
    std::vector<Jet> t;          ///< theta_{n+1} = sum_i t_i omega_i
    JetMatrix s;                 ///< antisymmetric, s(i, i) = 0
    JetMatrix theta;
    std::vector<Jet> theta_next; ///< components of theta_{n+2}
};

/// Torsion-free connection at a point, in both the web frame and coordinates.
///
/// frame_gamma(k, i, j) = Gamma^k_ij with nabla_{d_i} d_j = Gamma^k_ji d_k.
/// coord_gamma(c, a, b) = Gamma^c_ab with nabla_{e_a} e_b = Gamma^c_ab e_c.
struct ConnectionField {
    std::vector<double> point;
    JetMatrix frame; ///< frame(c, j): c-th coordinate component of d_j
    Tensor<Jet> frame_gamma;
    Tensor<Jet> coord_gamma;

    int dim() const noexcept { return coord_gamma.dim(); }
    int order() const { return coord_gamma(0, 0, 0).order(); }
    /// Value parts of the coordinate Christoffels.
    Tensor<double> coord_values() const;
};

/// Coordinate 1-form (covector jets), used as a projective gauge.
struct GaugeForm {
    std::vector<Jet> rho;

    static GaugeForm constant(std::span<const double> values, int order);
};

struct ProjectiveEquivalence {
    bool equivalent = false;
    GaugeForm rho;
    double residual = 0.0;
};

/// s_ij = (a_i d_j - a_j d_i) log(a_j / a_i) / (a_i - a_j), one order below a.
Jet skew_invariant(std::span<const Jet> a, const JetMatrix& frame, int i, int j);
/// Full antisymmetric matrix of skew invariants.
JetMatrix skew_invariants(std::span<const Jet> a, const JetMatrix& frame);

/// t defaults to zero. t entries need order >= cof.order - 2.
ThetaSystem theta_system(const NormalizedCoframe& cof, const BasisInvariant& extra, std::span<const Jet> t = {});

ConnectionField canonical_christoffels(const NormalizedCoframe& cof, const ThetaSystem& theta);

/// Evaluates gauge expressions t_i(x) at the point.
std::vector<Jet> eval_gauge(std::span<const Expression> t, std::span<const double> point, int order);

/// Canonical connection of the (n+2)-subweb made of the first n+2 foliations.
/// An empty t_gauge means t = 0.
ConnectionField canonical_connection(const WebChart& web, std::span<const double> point, int order = kMaxJetOrder,
                                     std::span<const Expression> t_gauge = {});

/// The unique connection making the web geodesic and the pointed function affine.
ConnectionField pointed_affine_connection(const WebChart& web, std::span<const double> point, int order = kMaxJetOrder);

ConnectionField flat_connection(int dim, std::span<const double> point, int order);

/// Gamma'^c_ab = Gamma^c_ab + delta^c_a rho_b + delta^c_b rho_a (and the matching frame shift).
ConnectionField projective_gauge_change(const ConnectionField& conn, const GaugeForm& rho);

/// rho_b = (Gamma_B - Gamma_A)^m_mb / (n+1); equivalent iff the remainder is <= kEquivalenceTolerance.
ProjectiveEquivalence projective_equivalence_check(const ConnectionField& a, const ConnectionField& b);

} // namespace geoweb
