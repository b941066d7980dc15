#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A taylor_jet holds the Taylor coefficients of a scalar function of n variables
// around a base point, up to total degree K. Coefficients live in a dense vector
// indexed by a graded multi-index table: all monomials of degree 0 first, then
// degree 1, and so on. Because of the grading, the table for order K-1 is a
// prefix of the table for order K, so truncation is a resize.
//
// Products are multi-index convolutions truncated at K. Composition with an
// analytic univariate function f uses f(c + h) = sum_k f^(k)(c)/k! h^k, which is
// exact because h (zero constant term) is nilpotent of index K+1.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace finsler {

inline constexpr int max_jet_order = 8;
inline constexpr int max_jet_variables = 8;

using multi_index = std::vector<int>;

class multi_index_table {
public:
    struct product_term {
        std::uint32_t lhs;
        std::uint32_t rhs;
        std::uint32_t out;
    };

    struct derivative_term {
        std::uint32_t src;
        std::uint32_t dst;
        double factor;
    };

    // Shared, immutable table for (nvars, order). Thread-safe.
    static std::shared_ptr<const multi_index_table> get(int nvars, int order);

    int nvars() const noexcept { return nvars_; }
    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return size_by_order_[order_]; }
    // Number of monomials of degree <= k (k <= order()).
    std::size_t size_up_to(int k) const noexcept { return size_by_order_[k]; }

    int degree(std::size_t idx) const noexcept { return degrees_[idx]; }
    std::span<const std::uint8_t> exponents(std::size_t idx) const noexcept
    {
        return {exponents_.data() + idx * nvars_, static_cast<std::size_t>(nvars_)};
    }

    // -1 when alpha is not a valid multi-index of this table.
    std::ptrdiff_t index_of(std::span<const int> alpha) const noexcept;

    // Terms with out < size_up_to(k) are exactly the first product_count(k) entries.
    std::span<const product_term> products(int k) const noexcept
    {
        return {products_.data(), product_count_[k]};
    }

    // d/dx_var maps a coefficient at src (degree >= 1) to dst (degree - 1).
    std::span<const derivative_term> derivative(int var) const noexcept { return derivatives_[var]; }

    // Table of order() - 1 (null at order 0).
    const std::shared_ptr<const multi_index_table>& lower() const noexcept { return lower_; }

    multi_index_table(int nvars, int order);

private:
    int nvars_;
    int order_;
    std::vector<std::size_t> size_by_order_;
    std::vector<std::uint8_t> exponents_;
    std::vector<int> degrees_;
    std::vector<std::int32_t> lookup_; // dense over (order+1)^nvars encodings
    std::vector<product_term> products_;
    std::vector<std::size_t> product_count_;
    std::vector<std::vector<derivative_term>> derivatives_;
    std::shared_ptr<const multi_index_table> lower_;

    friend class table_registry;

    std::size_t encode(std::span<const int> alpha) const noexcept;
};

class taylor_jet {
public:
    taylor_jet() = default;

    static taylor_jet constant(int nvars, int order, double value);
    // The coordinate function x_var expanded at x_var = value.
    static taylor_jet variable(int nvars, int order, int var, double value);

    int nvars() const noexcept { return table_ ? table_->nvars() : 0; }
    int order() const noexcept { return table_ ? table_->order() : 0; }
    bool empty() const noexcept { return table_ == nullptr; }

    double value() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_[0]; }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double coefficient(std::span<const int> alpha) const;

    // alpha! * coeff[alpha], the mixed partial of the expanded function.
    double partial(std::span<const int> alpha) const;
    // First partial along one variable (degree-1 coefficient).
    double first_partial(int var) const;

    // Exact derivative as a jet of order K-1.
    taylor_jet derivative(int var) const;
    taylor_jet truncated(int order) const;

    taylor_jet& operator+=(const taylor_jet& rhs);
    taylor_jet& operator-=(const taylor_jet& rhs);
    taylor_jet& operator*=(const taylor_jet& rhs);
    taylor_jet& operator/=(const taylor_jet& rhs);
    taylor_jet& operator+=(double rhs);
    taylor_jet& operator-=(double rhs);
    taylor_jet& operator*=(double rhs);
    taylor_jet& operator/=(double rhs);

    taylor_jet operator-() const;

    friend taylor_jet operator+(taylor_jet lhs, const taylor_jet& rhs) { return lhs += rhs; }
    friend taylor_jet operator-(taylor_jet lhs, const taylor_jet& rhs) { return lhs -= rhs; }
    friend taylor_jet operator*(const taylor_jet& lhs, const taylor_jet& rhs);
    friend taylor_jet operator/(const taylor_jet& lhs, const taylor_jet& rhs);
    friend taylor_jet operator+(taylor_jet lhs, double rhs) { return lhs += rhs; }
    friend taylor_jet operator+(double lhs, taylor_jet rhs) { return rhs += lhs; }
    friend taylor_jet operator-(taylor_jet lhs, double rhs) { return lhs -= rhs; }
    friend taylor_jet operator-(double lhs, const taylor_jet& rhs) { return -rhs + lhs; }
    friend taylor_jet operator*(taylor_jet lhs, double rhs) { return lhs *= rhs; }
    friend taylor_jet operator*(double lhs, taylor_jet rhs) { return rhs *= lhs; }
    friend taylor_jet operator/(taylor_jet lhs, double rhs) { return lhs /= rhs; }
    friend taylor_jet operator/(double lhs, const taylor_jet& rhs);

    // f(c + h) given the Taylor coefficients f^(k)(c)/k!, k = 0..order().
    taylor_jet compose(std::span<const double> taylor_coeffs) const;

private:
    explicit taylor_jet(std::shared_ptr<const multi_index_table> table);

    std::shared_ptr<const multi_index_table> table_;
    std::vector<double> coeffs_;

    void check_compatible(const taylor_jet& rhs) const;
    void truncate_to(int order);
};

taylor_jet reciprocal(const taylor_jet& a);
taylor_jet sqrt(const taylor_jet& a);
taylor_jet exp(const taylor_jet& a);
taylor_jet log(const taylor_jet& a);
taylor_jet sin(const taylor_jet& a);
taylor_jet cos(const taylor_jet& a);
taylor_jet pow(const taylor_jet& a, int n);
taylor_jet pow(const taylor_jet& a, double p);

inline double value_of(double v) noexcept { return v; }
inline double value_of(const taylor_jet& j) noexcept { return j.value(); }

// Scalar field over the 2m chart coordinates (x^1..x^m, y^1..y^m), written in jet arithmetic.
using jet_function = std::function<taylor_jet(std::span<const taylor_jet>)>;

struct phase_point;

// Taylor expansion of f at p up to total degree `order`.
taylor_jet jet_lift(const jet_function& f, const phase_point& p, int order);

} // namespace finsler
