#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace geoweb {

inline constexpr int kMaxJetOrder = 4;

/// Relative pivot floor shared by every linear solve in the library.
inline constexpr double kPivotFloor = 1e-12;

namespace detail {

/// Graded-lexicographic enumeration of the multi-indices |alpha| <= order
/// in `dim` variables, plus the tables jet arithmetic needs. Layouts are
/// interned and live for the whole program; the layout of order k-1 is a
/// prefix of the layout of order k.
struct JetLayout {
    struct Product {
        int lhs;
        int rhs;
        int out;
    };

    int dim = 0;
    int order = 0;
    std::vector<std::vector<int>> indices; // position -> multi-index
    std::vector<int> degree_start;         // first position of each total degree, size order+2
    std::vector<Product> products;         // all pairs with |a|+|b| <= order
    std::vector<int> lookup;               // base-(order+1) code -> position, -1 if none

    int position(std::span<const int> alpha) const;

    static const JetLayout& get(int dim, int order);
};

} // namespace detail

/// Truncated multivariate Taylor expansion at an (implicit) base point.
/// Coefficient at alpha is (d^alpha f)/alpha!; storage is dense in
/// graded-lexicographic order.
class Jet {
public:
    /// Empty jet (no layout). Only assignable; arithmetic on it throws MixedContext.
    Jet() = default;
    Jet(int dim, int order);

    static Jet constant(int dim, int order, double value);
    /// Coordinate function x_var (0-based) expanded at x_var = at.
    static Jet variable(int dim, int order, int var, double at);

    bool empty() const noexcept { return layout_ == nullptr; }
    const detail::JetLayout& layout() const { return *layout_; }
    int dim() const noexcept { return layout_ ? layout_->dim : 0; }
    int order() const noexcept { return layout_ ? layout_->order : 0; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    double value() const { return coeffs_.at(0); }
    double& operator[](std::size_t pos) { return coeffs_[pos]; }
    double operator[](std::size_t pos) const { return coeffs_[pos]; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::span<const int> multi_index(std::size_t pos) const { return layout_->indices[pos]; }

    /// Taylor coefficient at alpha (0 when |alpha| exceeds the order).
    double coeff(std::span<const int> alpha) const;
    /// Partial derivative d^alpha f at the base point.
    double derivative(std::span<const int> alpha) const;

    /// Gradient of the value part: n first-order partials.
    std::vector<double> gradient() const;

    Jet truncated(int order) const;
    /// Jet of d f / d x_var, one order lower.
    Jet partial(int var) const;

    bool is_constant() const noexcept;
    double max_abs() const noexcept;

    Jet operator-() const;
    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(const Jet& rhs);
    Jet& operator/=(const Jet& rhs);
    Jet& operator+=(double rhs);
    Jet& operator-=(double rhs);
    Jet& operator*=(double rhs);
    Jet& operator/=(double rhs);

    /// g(u) for u = *this, given the univariate Taylor coefficients
    /// g^(m)(u0)/m!, m = 0..order, at the value part u0.
    Jet compose(std::span<const double> series) const;

private:
    void require_compatible(const Jet& other, const char* op) const;

    const detail::JetLayout* layout_ = nullptr;
    std::vector<double> coeffs_;
};

Jet operator+(Jet lhs, const Jet& rhs);
Jet operator-(Jet lhs, const Jet& rhs);
Jet operator*(const Jet& lhs, const Jet& rhs);
Jet operator/(const Jet& lhs, const Jet& rhs);
Jet operator+(Jet lhs, double rhs);
Jet operator-(Jet lhs, double rhs);
Jet operator*(Jet lhs, double rhs);
Jet operator/(Jet lhs, double rhs);
Jet operator+(double lhs, Jet rhs);
Jet operator-(double lhs, const Jet& rhs);
Jet operator*(double lhs, Jet rhs);
Jet operator/(double lhs, const Jet& rhs);

Jet reciprocal(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sqrt(const Jet& u);
Jet atan(const Jet& u);
Jet pow(const Jet& base, int exponent);
/// Integral exponents go through pow(Jet, int); otherwise the base must be positive.
Jet pow(const Jet& base, double exponent);
/// Constant integral exponent jets use repeated multiplication, otherwise exp(e log b).
Jet pow(const Jet& base, const Jet& exponent);

/// sum_c v[c] * df/dx_c, one order lower than f.
Jet directional_derivative(const Jet& f, std::span<const Jet> v);

/// Row-major matrix of jets.
class JetMatrix {
public:
    JetMatrix() = default;
    JetMatrix(int rows, int cols, const Jet& fill) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), fill) {}

    static JetMatrix identity(int n, int dim, int order);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    Jet& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
    const Jet& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

    std::vector<Jet> row(int r) const;
    std::vector<Jet> col(int c) const;
    JetMatrix truncated(int order) const;
    double max_abs_value() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Jet> data_;
};

JetMatrix operator*(const JetMatrix& lhs, const JetMatrix& rhs);

/// Solves a x = b by Gaussian elimination in jet arithmetic with partial
/// pivoting on value parts. Throws SingularSystem when a pivot falls below
/// kPivotFloor * max|A value|.
std::vector<Jet> jet_linear_solve(const JetMatrix& a, std::span<const Jet> b);
JetMatrix jet_linear_solve(const JetMatrix& a, const JetMatrix& b);
JetMatrix inverse(const JetMatrix& a);

} // namespace geoweb
