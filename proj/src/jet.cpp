#include "finsler/jet.hpp"

#include "finsler/error.hpp"
#include "finsler/phase_point.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace finsler {

namespace {

// All compositions of `degree` into n parts, first exponent descending.
void enumerate_degree(int n, int degree, std::vector<int>& current, int pos, std::vector<std::vector<int>>& out)
{
    if (pos == n - 1) {
        current[pos] = degree;
        out.push_back(current);
        return;
    }
    for (int e = degree; e >= 0; --e) {
        current[pos] = e;
        enumerate_degree(n, degree - e, current, pos + 1, out);
    }
}

} // namespace

multi_index_table::multi_index_table(int nvars, int order) : nvars_(nvars), order_(order)
{
    std::vector<std::vector<int>> all;
    std::vector<int> current(nvars, 0);
    size_by_order_.reserve(order + 1);
    for (int d = 0; d <= order; ++d) {
        enumerate_degree(nvars, d, current, 0, all);
        size_by_order_.push_back(all.size());
    }

    std::size_t lookup_size = 1;
    for (int i = 0; i < nvars; ++i) {
        lookup_size *= static_cast<std::size_t>(order + 1);
    }
    lookup_.assign(lookup_size, -1);
    exponents_.reserve(all.size() * nvars);
    degrees_.reserve(all.size());
    for (std::size_t idx = 0; idx < all.size(); ++idx) {
        int deg = 0;
        for (int e : all[idx]) {
            exponents_.push_back(static_cast<std::uint8_t>(e));
            deg += e;
        }
        degrees_.push_back(deg);
        lookup_[encode(all[idx])] = static_cast<std::int32_t>(idx);
    }

    // Product terms sorted by output degree, so products(k) is a prefix.
    std::vector<std::vector<product_term>> by_degree(order + 1);
    std::vector<int> sum(nvars);
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = 0; j < all.size(); ++j) {
            if (degrees_[i] + degrees_[j] > order) {
                continue;
            }
            for (int v = 0; v < nvars; ++v) {
                sum[v] = all[i][v] + all[j][v];
            }
            const auto out = lookup_[encode(sum)];
            by_degree[degrees_[i] + degrees_[j]].push_back(
                {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(out)});
        }
    }
    for (int d = 0; d <= order; ++d) {
        products_.insert(products_.end(), by_degree[d].begin(), by_degree[d].end());
        product_count_.push_back(products_.size());
    }

    derivatives_.resize(nvars);
    for (int v = 0; v < nvars; ++v) {
        for (std::size_t idx = 0; idx < all.size(); ++idx) {
            const int e = all[idx][v];
            if (e == 0) {
                continue;
            }
            auto lowered = all[idx];
            --lowered[v];
            derivatives_[v].push_back({static_cast<std::uint32_t>(idx),
                                       static_cast<std::uint32_t>(lookup_[encode(lowered)]), static_cast<double>(e)});
        }
    }
}

std::size_t multi_index_table::encode(std::span<const int> alpha) const noexcept
{
    std::size_t code = 0;
    for (int e : alpha) {
        code = code * static_cast<std::size_t>(order_ + 1) + static_cast<std::size_t>(e);
    }
    return code;
}

std::ptrdiff_t multi_index_table::index_of(std::span<const int> alpha) const noexcept
{
    if (static_cast<int>(alpha.size()) != nvars_) {
        return -1;
    }
    int deg = 0;
    for (int e : alpha) {
        if (e < 0) {
            return -1;
        }
        deg += e;
    }
    if (deg > order_) {
        return -1;
    }
    return lookup_[encode(alpha)];
}

std::shared_ptr<const multi_index_table> multi_index_table::get(int nvars, int order)
{
    if (nvars < 1 || nvars > max_jet_variables) {
        throw error("jet variable count out of range: " + std::to_string(nvars));
    }
    if (order < 0 || order > max_jet_order) {
        throw order_exceeded_error("jet order out of range: " + std::to_string(order));
    }

    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const multi_index_table>> cache;

    std::lock_guard lock(mutex);
    std::shared_ptr<const multi_index_table> lower;
    for (int k = 0; k <= order; ++k) {
        auto& slot = cache[{nvars, k}];
        if (!slot) {
            auto table = std::make_shared<multi_index_table>(nvars, k);
            table->lower_ = lower;
            slot = std::move(table);
        }
        lower = slot;
    }
    return lower;
}

// ---------------------------------------------------------------------------

taylor_jet::taylor_jet(std::shared_ptr<const multi_index_table> table)
    : table_(std::move(table)), coeffs_(table_->size(), 0.0)
{
}

taylor_jet taylor_jet::constant(int nvars, int order, double value)
{
    taylor_jet j(multi_index_table::get(nvars, order));
    j.coeffs_[0] = value;
    return j;
}

taylor_jet taylor_jet::variable(int nvars, int order, int var, double value)
{
    if (var < 0 || var >= nvars) {
        throw error("jet variable index out of range");
    }
    taylor_jet j(multi_index_table::get(nvars, order));
    j.coeffs_[0] = value;
    if (order >= 1) {
        // Degree-1 monomials are ordered x_0, x_1, ... by the descending enumeration.
        j.coeffs_[1 + static_cast<std::size_t>(var)] = 1.0;
    }
    return j;
}

double taylor_jet::coefficient(std::span<const int> alpha) const
{
    const auto idx = table_->index_of(alpha);
    if (idx < 0) {
        throw order_exceeded_error("multi-index exceeds jet order");
    }
    return coeffs_[static_cast<std::size_t>(idx)];
}

double taylor_jet::partial(std::span<const int> alpha) const
{
    double factorial = 1.0;
    for (int e : alpha) {
        for (int k = 2; k <= e; ++k) {
            factorial *= k;
        }
    }
    return factorial * coefficient(alpha);
}

double taylor_jet::first_partial(int var) const
{
    if (order() < 1) {
        throw order_exceeded_error("first partial of an order-0 jet");
    }
    return coeffs_[1 + static_cast<std::size_t>(var)];
}

taylor_jet taylor_jet::derivative(int var) const
{
    if (order() < 1) {
        throw order_exceeded_error("derivative of an order-0 jet");
    }
    taylor_jet out(table_->lower());
    for (const auto& t : table_->derivative(var)) {
        out.coeffs_[t.dst] += t.factor * coeffs_[t.src];
    }
    return out;
}

void taylor_jet::truncate_to(int order)
{
    while (table_->order() > order) {
        table_ = table_->lower();
    }
    coeffs_.resize(table_->size());
}

taylor_jet taylor_jet::truncated(int order) const
{
    if (order > this->order()) {
        throw order_exceeded_error("cannot raise jet order by truncation");
    }
    taylor_jet out = *this;
    out.truncate_to(order);
    return out;
}

void taylor_jet::check_compatible(const taylor_jet& rhs) const
{
    if (!table_ || !rhs.table_ || table_->nvars() != rhs.table_->nvars()) {
        throw error("jet operands have different variable counts");
    }
}

taylor_jet& taylor_jet::operator+=(const taylor_jet& rhs)
{
    check_compatible(rhs);
    if (rhs.order() < order()) {
        truncate_to(rhs.order());
    }
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += rhs.coeffs_[i];
    }
    return *this;
}

taylor_jet& taylor_jet::operator-=(const taylor_jet& rhs)
{
    check_compatible(rhs);
    if (rhs.order() < order()) {
        truncate_to(rhs.order());
    }
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= rhs.coeffs_[i];
    }
    return *this;
}

taylor_jet operator*(const taylor_jet& lhs, const taylor_jet& rhs)
{
    lhs.check_compatible(rhs);
    const auto& table = lhs.order() <= rhs.order() ? lhs.table_ : rhs.table_;
    taylor_jet out(table);
    const double* a = lhs.coeffs_.data();
    const double* b = rhs.coeffs_.data();
    double* c = out.coeffs_.data();
    for (const auto& t : table->products(table->order())) {
        c[t.out] += a[t.lhs] * b[t.rhs];
    }
    return out;
}

taylor_jet& taylor_jet::operator*=(const taylor_jet& rhs)
{
    *this = *this * rhs;
    return *this;
}

taylor_jet operator/(const taylor_jet& lhs, const taylor_jet& rhs)
{
    return lhs * reciprocal(rhs);
}

taylor_jet operator/(double lhs, const taylor_jet& rhs)
{
    return reciprocal(rhs) * lhs;
}

taylor_jet& taylor_jet::operator/=(const taylor_jet& rhs)
{
    *this = *this * reciprocal(rhs);
    return *this;
}

taylor_jet& taylor_jet::operator+=(double rhs)
{
    coeffs_[0] += rhs;
    return *this;
}

taylor_jet& taylor_jet::operator-=(double rhs)
{
    coeffs_[0] -= rhs;
    return *this;
}

taylor_jet& taylor_jet::operator*=(double rhs)
{
    for (auto& c : coeffs_) {
        c *= rhs;
    }
    return *this;
}

taylor_jet& taylor_jet::operator/=(double rhs)
{
    if (rhs == 0.0) {
        throw singular_evaluation_error("jet divided by zero scalar");
    }
    return *this *= 1.0 / rhs;
}

taylor_jet taylor_jet::operator-() const
{
    taylor_jet out = *this;
    for (auto& c : out.coeffs_) {
        c = -c;
    }
    return out;
}

taylor_jet taylor_jet::compose(std::span<const double> taylor_coeffs) const
{
    const int k_max = order();
    taylor_jet h = *this;
    h.coeffs_[0] = 0.0;
    taylor_jet out(table_);
    out.coeffs_[0] = taylor_coeffs[k_max];
    for (int k = k_max - 1; k >= 0; --k) {
        out = out * h;
        out.coeffs_[0] += taylor_coeffs[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Univariate functions: Taylor coefficients f^(k)(c)/k! at c = a.value().

taylor_jet reciprocal(const taylor_jet& a)
{
    const double c = a.value();
    if (c == 0.0) {
        throw singular_evaluation_error("division by a jet with zero constant term");
    }
    std::vector<double> t(a.order() + 1);
    double term = 1.0 / c;
    for (auto& v : t) {
        v = term;
        term *= -1.0 / c;
    }
    return a.compose(t);
}

namespace {

// Coefficients of (c + h)^p: binom(p, k) c^(p - k).
std::vector<double> real_power_coeffs(double c, double p, int order)
{
    std::vector<double> t(order + 1);
    double binom = 1.0;
    for (int k = 0; k <= order; ++k) {
        t[k] = binom * std::pow(c, p - k);
        binom *= (p - k) / (k + 1);
    }
    return t;
}

} // namespace

taylor_jet sqrt(const taylor_jet& a)
{
    if (!(a.value() > 0.0)) {
        throw domain_error("square root of a jet with non-positive constant term");
    }
    return a.compose(real_power_coeffs(a.value(), 0.5, a.order()));
}

taylor_jet pow(const taylor_jet& a, double p)
{
    if (!(a.value() > 0.0)) {
        throw domain_error("real power of a jet with non-positive constant term");
    }
    return a.compose(real_power_coeffs(a.value(), p, a.order()));
}

taylor_jet pow(const taylor_jet& a, int n)
{
    if (n < 0) {
        return reciprocal(pow(a, -n));
    }
    auto result = taylor_jet::constant(a.nvars(), a.order(), 1.0);
    auto base = a;
    while (n > 0) {
        if (n & 1) {
            result *= base;
        }
        n >>= 1;
        if (n > 0) {
            base *= base;
        }
    }
    return result;
}

taylor_jet exp(const taylor_jet& a)
{
    std::vector<double> t(a.order() + 1);
    double term = std::exp(a.value());
    for (int k = 0; k <= a.order(); ++k) {
        t[k] = term;
        term /= (k + 1);
    }
    return a.compose(t);
}

taylor_jet log(const taylor_jet& a)
{
    const double c = a.value();
    if (!(c > 0.0)) {
        throw domain_error("logarithm of a jet with non-positive constant term");
    }
    std::vector<double> t(a.order() + 1);
    t[0] = std::log(c);
    double power = 1.0;
    for (int k = 1; k <= a.order(); ++k) {
        power /= c;
        t[k] = ((k % 2 == 1) ? 1.0 : -1.0) * power / k;
    }
    return a.compose(t);
}

namespace {

std::vector<double> trig_coeffs(double c, int order, bool is_sin)
{
    // Derivatives cycle sin, cos, -sin, -cos.
    const double s = std::sin(c);
    const double co = std::cos(c);
    const double cycle_sin[4] = {s, co, -s, -co};
    const double cycle_cos[4] = {co, -s, -co, s};
    std::vector<double> t(order + 1);
    double factorial = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) {
            factorial *= k;
        }
        t[k] = (is_sin ? cycle_sin[k % 4] : cycle_cos[k % 4]) / factorial;
    }
    return t;
}

} // namespace

taylor_jet sin(const taylor_jet& a)
{
    return a.compose(trig_coeffs(a.value(), a.order(), true));
}

taylor_jet cos(const taylor_jet& a)
{
    return a.compose(trig_coeffs(a.value(), a.order(), false));
}

taylor_jet jet_lift(const jet_function& f, const phase_point& p, int order)
{
    const auto coords = p.coordinates();
    const int n = static_cast<int>(coords.size());
    std::vector<taylor_jet> vars;
    vars.reserve(n);
    for (int v = 0; v < n; ++v) {
        vars.push_back(taylor_jet::variable(n, order, v, coords[v]));
    }
    auto out = f(vars);
    if (out.order() != order) {
        // Constant-returning evaluators may have been built at another order.
        if (out.order() > order) {
            out = out.truncated(order);
        }
    }
    return out;
}

} // namespace finsler
