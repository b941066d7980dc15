#include "finsler/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace finsler {

namespace {

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// std::uniform_real_distribution and std::normal_distribution are not
// specified bit-for-bit across standard libraries; mt19937_64 is.
class point_stream {
public:
    point_stream(std::uint64_t seed, int index) : engine_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index)))) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal()
    {
        // Box-Muller; 1 - u keeps the logarithm finite.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::vector<double> direction(int m)
    {
        std::vector<double> v(m);
        double norm = 0.0;
        while (norm < 1e-12) {
            norm = 0.0;
            for (auto& e : v) {
                e = normal();
                norm += e * e;
            }
            norm = std::sqrt(norm);
        }
        for (auto& e : v) {
            e /= norm;
        }
        return v;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace

phase_point sample_point(const finsler_spec& spec, std::uint64_t seed, int index)
{
    point_stream rng(seed, index);
    const int m = spec.dim;
    phase_point p;
    p.x = rng.direction(m);
    const double radius = sample_chart_fraction * spec.chart_radius * std::pow(rng.uniform(), 1.0 / m);
    for (auto& e : p.x) {
        e *= radius;
    }
    p.y = rng.direction(m);
    const double speed = sample_min_speed + (sample_max_speed - sample_min_speed) * rng.uniform();
    for (auto& e : p.y) {
        e *= speed;
    }
    return p;
}

std::vector<phase_point> sample_points(const finsler_spec& spec, std::uint64_t seed, int count)
{
    std::vector<phase_point> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        out.push_back(sample_point(spec, seed, i));
    }
    return out;
}

} // namespace finsler
