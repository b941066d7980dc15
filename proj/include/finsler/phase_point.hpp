#pragma once

#include <vector>

namespace finsler {

// A point (x, y) of the slit tangent bundle in the fixed chart: x are base
// coordinates, y fiber coordinates. Validity (y != 0, x inside the chart) is
// checked against a finsler_spec, see validate_point().
struct phase_point {
    std::vector<double> x;
    std::vector<double> y;

    int dim() const noexcept { return static_cast<int>(x.size()); }

    // The 2m chart coordinates, x first.
    std::vector<double> coordinates() const
    {
        std::vector<double> c(x);
        c.insert(c.end(), y.begin(), y.end());
        return c;
    }

    static phase_point from_coordinates(const std::vector<double>& c)
    {
        const auto m = c.size() / 2;
        return {std::vector<double>(c.begin(), c.begin() + static_cast<long>(m)),
                std::vector<double>(c.begin() + static_cast<long>(m), c.end())};
    }
};

} // namespace finsler
