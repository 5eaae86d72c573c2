#include "geoweb/jet.hpp"

#include "geoweb/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

namespace geoweb {

namespace detail {

namespace {

constexpr int kMaxJetDim = 8;

void enumerate_degree(int dim, int remaining, int pos, std::vector<int>& alpha, std::vector<std::vector<int>>& out)
{
    if (pos == dim - 1) {
        alpha[static_cast<std::size_t>(pos)] = remaining;
        out.push_back(alpha);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        alpha[static_cast<std::size_t>(pos)] = v;
        enumerate_degree(dim, remaining - v, pos + 1, alpha, out);
    }
}

int encode(std::span<const int> alpha, int base)
{
    int code = 0;
    for (std::size_t c = alpha.size(); c-- > 0;) code = code * base + alpha[c];
    return code;
}

std::unique_ptr<JetLayout> build_layout(int dim, int order)
{
    auto layout = std::make_unique<JetLayout>();
    layout->dim = dim;
    layout->order = order;

    std::vector<int> alpha(static_cast<std::size_t>(dim), 0);
    for (int g = 0; g <= order; ++g) {
        layout->degree_start.push_back(static_cast<int>(layout->indices.size()));
        enumerate_degree(dim, g, 0, alpha, layout->indices);
    }
    layout->degree_start.push_back(static_cast<int>(layout->indices.size()));

    const int base = order + 1;
    std::size_t codes = 1;
    for (int c = 0; c < dim; ++c) codes *= static_cast<std::size_t>(base);
    layout->lookup.assign(codes, -1);
    for (std::size_t p = 0; p < layout->indices.size(); ++p)
        layout->lookup[static_cast<std::size_t>(encode(layout->indices[p], base))] = static_cast<int>(p);

    std::vector<int> sum(static_cast<std::size_t>(dim));
    const auto count = static_cast<int>(layout->indices.size());
    for (int g = 0; g <= order; ++g) {
        for (int i = layout->degree_start[static_cast<std::size_t>(g)]; i < layout->degree_start[static_cast<std::size_t>(g) + 1]; ++i) {
            const int rhs_end = layout->degree_start[static_cast<std::size_t>(order - g) + 1];
            for (int j = 0; j < std::min(rhs_end, count); ++j) {
                const auto& a = layout->indices[static_cast<std::size_t>(i)];
                const auto& b = layout->indices[static_cast<std::size_t>(j)];
                for (std::size_t c = 0; c < sum.size(); ++c) sum[c] = a[c] + b[c];
                layout->products.push_back({i, j, layout->position(sum)});
            }
        }
    }
    return layout;
}

} // namespace

int JetLayout::position(std::span<const int> alpha) const
{
    int total = 0;
    for (int a : alpha) {
        if (a < 0) return -1;
        total += a;
    }
    if (total > order || static_cast<int>(alpha.size()) != dim) return -1;
    return lookup[static_cast<std::size_t>(encode(alpha, order + 1))];
}

const JetLayout& JetLayout::get(int dim, int order)
{
    if (dim < 1 || dim > kMaxJetDim)
        throw MixedContext("jet dimension " + std::to_string(dim) + " outside 1.." + std::to_string(kMaxJetDim));
    if (order < 0 || order > kMaxJetOrder)
        throw MixedContext("jet order " + std::to_string(order) + " outside 0.." + std::to_string(kMaxJetOrder));

    thread_local const JetLayout* local[kMaxJetDim + 1][kMaxJetOrder + 1] = {};
    const JetLayout*& fast = local[dim][order];
    if (fast) return *fast;

    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, order}];
    if (!slot) slot = build_layout(dim, order);
    fast = slot.get();
    return *slot;
}

} // namespace detail

namespace {

double factorial(int m)
{
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

} // namespace

Jet::Jet(int dim, int order) : layout_(&detail::JetLayout::get(dim, order)), coeffs_(layout_->indices.size(), 0.0) {}

Jet Jet::constant(int dim, int order, double value)
{
    Jet j(dim, order);
    j.coeffs_[0] = value;
    return j;
}

Jet Jet::variable(int dim, int order, int var, double at)
{
    if (var < 0 || var >= dim) throw MixedContext("variable index out of range");
    Jet j = constant(dim, order, at);
    if (order >= 1) j.coeffs_[static_cast<std::size_t>(1 + var)] = 1.0;
    return j;
}

double Jet::coeff(std::span<const int> alpha) const
{
    if (empty()) throw MixedContext("coefficient of an empty jet");
    const int pos = layout_->position(alpha);
    return pos < 0 ? 0.0 : coeffs_[static_cast<std::size_t>(pos)];
}

double Jet::derivative(std::span<const int> alpha) const
{
    double scale = 1.0;
    for (int a : alpha) scale *= factorial(a);
    return coeff(alpha) * scale;
}

std::vector<double> Jet::gradient() const
{
    if (order() < 1) throw OrderExhausted("gradient of an order-0 jet");
    return {coeffs_.begin() + 1, coeffs_.begin() + 1 + dim()};
}

Jet Jet::truncated(int order) const
{
    if (empty()) throw MixedContext("truncating an empty jet");
    if (order > this->order()) throw MixedContext("cannot raise jet order by truncation");
    Jet out(dim(), order);
    std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
    return out;
}

Jet Jet::partial(int var) const
{
    if (empty()) throw MixedContext("partial of an empty jet");
    if (order() == 0) throw OrderExhausted("partial derivative of an order-0 jet");
    if (var < 0 || var >= dim()) throw MixedContext("partial: variable index out of range");
    Jet out(dim(), order() - 1);
    std::vector<int> beta;
    for (std::size_t p = 0; p < out.coeffs_.size(); ++p) {
        beta = layout_->indices[p];
        const int factor = ++beta[static_cast<std::size_t>(var)];
        out.coeffs_[p] = factor * coeffs_[static_cast<std::size_t>(layout_->position(beta))];
    }
    return out;
}

bool Jet::is_constant() const noexcept
{
    return std::all_of(coeffs_.begin() + (coeffs_.empty() ? 0 : 1), coeffs_.end(), [](double c) { return c == 0.0; });
}

double Jet::max_abs() const noexcept
{
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

void Jet::require_compatible(const Jet& other, const char* op) const
{
    if (empty() || other.empty() || layout_ != other.layout_) {
        throw MixedContext(std::string("jet ") + op + ": operands (dim " + std::to_string(dim()) + ", order " +
                           std::to_string(order()) + ") and (dim " + std::to_string(other.dim()) + ", order " +
                           std::to_string(other.order()) + ") differ");
    }
}

Jet Jet::operator-() const
{
    Jet out = *this;
    for (double& c : out.coeffs_) c = -c;
    return out;
}

Jet& Jet::operator+=(const Jet& rhs)
{
    require_compatible(rhs, "add");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs)
{
    require_compatible(rhs, "sub");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& rhs)
{
    *this = *this * rhs;
    return *this;
}

Jet& Jet::operator/=(const Jet& rhs)
{
    *this = *this / rhs;
    return *this;
}

Jet& Jet::operator+=(double rhs)
{
    if (empty()) throw MixedContext("arithmetic on an empty jet");
    coeffs_[0] += rhs;
    return *this;
}

Jet& Jet::operator-=(double rhs) { return *this += -rhs; }

Jet& Jet::operator*=(double rhs)
{
    if (empty()) throw MixedContext("arithmetic on an empty jet");
    for (double& c : coeffs_) c *= rhs;
    return *this;
}

Jet& Jet::operator/=(double rhs)
{
    if (rhs == 0.0) throw DomainError("jet division by zero");
    return *this *= 1.0 / rhs;
}

Jet Jet::compose(std::span<const double> series) const
{
    if (empty()) throw MixedContext("compose on an empty jet");
    Jet delta = *this;
    delta.coeffs_[0] = 0.0;
    const int k = order();
    auto term = [&](int m) { return m < static_cast<int>(series.size()) ? series[static_cast<std::size_t>(m)] : 0.0; };
    Jet acc = constant(dim(), k, term(k));
    for (int m = k - 1; m >= 0; --m) {
        acc = acc * delta;
        acc.coeffs_[0] += term(m);
    }
    return acc;
}

Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }

Jet operator*(const Jet& lhs, const Jet& rhs)
{
    if (lhs.empty() || rhs.empty() || lhs.dim() != rhs.dim() || lhs.order() != rhs.order())
        throw MixedContext("jet mul: operands differ in dim/order");
    Jet out(lhs.dim(), lhs.order());
    for (const auto& p : lhs.layout().products)
        out[static_cast<std::size_t>(p.out)] += lhs[static_cast<std::size_t>(p.lhs)] * rhs[static_cast<std::size_t>(p.rhs)];
    return out;
}

Jet operator/(const Jet& lhs, const Jet& rhs) { return lhs * reciprocal(rhs); }
Jet operator+(Jet lhs, double rhs) { return lhs += rhs; }
Jet operator-(Jet lhs, double rhs) { return lhs -= rhs; }
Jet operator*(Jet lhs, double rhs) { return lhs *= rhs; }
Jet operator/(Jet lhs, double rhs) { return lhs /= rhs; }
Jet operator+(double lhs, Jet rhs) { return rhs += lhs; }
Jet operator-(double lhs, const Jet& rhs) { return -rhs + lhs; }
Jet operator*(double lhs, Jet rhs) { return rhs *= lhs; }
Jet operator/(double lhs, const Jet& rhs) { return reciprocal(rhs) * lhs; }

Jet reciprocal(const Jet& u)
{
    const double u0 = u.value();
    if (u0 == 0.0) throw DomainError("division by a jet with zero value");
    std::vector<double> s(static_cast<std::size_t>(u.order() + 1));
    double p = 1.0 / u0;
    for (std::size_t m = 0; m < s.size(); ++m) {
        s[m] = (m % 2 == 0 ? 1.0 : -1.0) * p;
        p /= u0;
    }
    return u.compose(s);
}

Jet exp(const Jet& u)
{
    const double e = std::exp(u.value());
    std::vector<double> s(static_cast<std::size_t>(u.order() + 1));
    for (std::size_t m = 0; m < s.size(); ++m) s[m] = e / factorial(static_cast<int>(m));
    return u.compose(s);
}

Jet log(const Jet& u)
{
    const double u0 = u.value();
    if (!(u0 > 0.0)) throw DomainError("log of a non-positive value " + std::to_string(u0));
    std::vector<double> s(static_cast<std::size_t>(u.order() + 1));
    s[0] = std::log(u0);
    double p = 1.0;
    for (std::size_t m = 1; m < s.size(); ++m) {
        p /= u0;
        s[m] = (m % 2 == 1 ? 1.0 : -1.0) * p / static_cast<double>(m);
    }
    return u.compose(s);
}

namespace {

Jet trig(const Jet& u, int shift)
{
    const double sv = std::sin(u.value());
    const double cv = std::cos(u.value());
    const double cycle[4] = {sv, cv, -sv, -cv};
    std::vector<double> s(static_cast<std::size_t>(u.order() + 1));
    for (std::size_t m = 0; m < s.size(); ++m)
        s[m] = cycle[(m + static_cast<std::size_t>(shift)) % 4] / factorial(static_cast<int>(m));
    return u.compose(s);
}

} // namespace

Jet sin(const Jet& u) { return trig(u, 0); }
Jet cos(const Jet& u) { return trig(u, 1); }

Jet sqrt(const Jet& u)
{
    if (!(u.value() > 0.0)) throw DomainError("sqrt of a non-positive value " + std::to_string(u.value()));
    return pow(u, 0.5);
}

Jet atan(const Jet& u)
{
    // atan' (u0 + s) = 1 / (d0 + d1 s + s^2); expand by series division, then integrate.
    const double u0 = u.value();
    const double d0 = 1.0 + u0 * u0;
    const double d1 = 2.0 * u0;
    const auto n = static_cast<std::size_t>(u.order() + 1);
    std::vector<double> q(n, 0.0);
    q[0] = 1.0 / d0;
    for (std::size_t m = 1; m < n; ++m) q[m] = -(d1 * q[m - 1] + (m >= 2 ? q[m - 2] : 0.0)) / d0;
    std::vector<double> s(n);
    s[0] = std::atan(u0);
    for (std::size_t m = 1; m < n; ++m) s[m] = q[m - 1] / static_cast<double>(m);
    return u.compose(s);
}

Jet pow(const Jet& base, int exponent)
{
    if (exponent < 0) return reciprocal(pow(base, -exponent));
    Jet result = Jet::constant(base.dim(), base.order(), 1.0);
    Jet square = base;
    for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
        if (e & 1u) result = result * square;
        if (e > 1) square = square * square;
    }
    return result;
}

Jet pow(const Jet& base, double exponent)
{
    if (std::nearbyint(exponent) == exponent && std::abs(exponent) <= 1 << 30)
        return pow(base, static_cast<int>(exponent));
    const double u0 = base.value();
    if (!(u0 > 0.0)) throw DomainError("non-integer power of a non-positive value " + std::to_string(u0));
    std::vector<double> s(static_cast<std::size_t>(base.order() + 1));
    double binom = 1.0;
    for (std::size_t m = 0; m < s.size(); ++m) {
        s[m] = binom * std::pow(u0, exponent - static_cast<double>(m));
        binom *= (exponent - static_cast<double>(m)) / static_cast<double>(m + 1);
    }
    return base.compose(s);
}

Jet pow(const Jet& base, const Jet& exponent)
{
    if (exponent.is_constant()) return pow(base, exponent.value());
    return exp(exponent * log(base));
}

Jet directional_derivative(const Jet& f, std::span<const Jet> v)
{
    if (f.empty()) throw MixedContext("directional derivative of an empty jet");
    if (f.order() == 0) throw OrderExhausted("directional derivative of an order-0 jet");
    if (static_cast<int>(v.size()) != f.dim()) throw MixedContext("direction has wrong number of components");
    const int k = f.order() - 1;
    Jet out(f.dim(), k);
    for (int c = 0; c < f.dim(); ++c) {
        const Jet& vc = v[static_cast<std::size_t>(c)];
        if (vc.dim() != f.dim() || vc.order() < k) throw MixedContext("direction jets too shallow or of wrong dim");
        out += vc.truncated(k) * f.partial(c);
    }
    return out;
}

JetMatrix JetMatrix::identity(int n, int dim, int order)
{
    JetMatrix m(n, n, Jet(dim, order));
    for (int i = 0; i < n; ++i) m(i, i) = Jet::constant(dim, order, 1.0);
    return m;
}

std::vector<Jet> JetMatrix::row(int r) const
{
    return {data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_};
}

std::vector<Jet> JetMatrix::col(int c) const
{
    std::vector<Jet> out;
    out.reserve(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
    return out;
}

JetMatrix JetMatrix::truncated(int order) const
{
    JetMatrix out = *this;
    for (auto& j : out.data_) j = j.truncated(order);
    return out;
}

double JetMatrix::max_abs_value() const
{
    double m = 0.0;
    for (const auto& j : data_) m = std::max(m, std::abs(j.value()));
    return m;
}

JetMatrix operator*(const JetMatrix& lhs, const JetMatrix& rhs)
{
    if (lhs.cols() != rhs.rows()) throw MixedContext("matrix shapes do not chain");
    const Jet& proto = lhs(0, 0);
    JetMatrix out(lhs.rows(), rhs.cols(), Jet(proto.dim(), proto.order()));
    for (int i = 0; i < lhs.rows(); ++i)
        for (int j = 0; j < rhs.cols(); ++j)
            for (int k = 0; k < lhs.cols(); ++k) out(i, j) += lhs(i, k) * rhs(k, j);
    return out;
}

JetMatrix jet_linear_solve(const JetMatrix& a, const JetMatrix& b)
{
    const int n = a.rows();
    if (a.cols() != n || b.rows() != n) throw MixedContext("linear solve: shape mismatch");
    JetMatrix m = a;
    JetMatrix x = b;
    const double floor = kPivotFloor * a.max_abs_value();

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m(r, col).value()) > std::abs(m(pivot, col).value())) pivot = r;
        if (!(std::abs(m(pivot, col).value()) > floor))
            throw SingularSystem("pivot " + std::to_string(m(pivot, col).value()) + " below conditioning floor in column " +
                                 std::to_string(col));
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(m(col, c), m(pivot, c));
            for (int c = 0; c < x.cols(); ++c) std::swap(x(col, c), x(pivot, c));
        }
        const Jet inv_pivot = reciprocal(m(col, col));
        for (int r = col + 1; r < n; ++r) {
            const Jet factor = m(r, col) * inv_pivot;
            for (int c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
            for (int c = 0; c < x.cols(); ++c) x(r, c) -= factor * x(col, c);
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        const Jet inv_pivot = reciprocal(m(row, row));
        for (int c = 0; c < x.cols(); ++c) {
            Jet acc = x(row, c);
            for (int k = row + 1; k < n; ++k) acc -= m(row, k) * x(k, c);
            x(row, c) = acc * inv_pivot;
        }
    }
    return x;
}

std::vector<Jet> jet_linear_solve(const JetMatrix& a, std::span<const Jet> b)
{
    JetMatrix rhs(static_cast<int>(b.size()), 1, b.empty() ? Jet() : b[0]);
    for (std::size_t i = 0; i < b.size(); ++i) rhs(static_cast<int>(i), 0) = b[i];
    return jet_linear_solve(a, rhs).col(0);
}

JetMatrix inverse(const JetMatrix& a)
{
    const Jet& proto = a(0, 0);
    return jet_linear_solve(a, JetMatrix::identity(a.rows(), proto.dim(), proto.order()));
}

} // namespace geoweb
