#ifndef EXRENEW_RNG_HPP
#define EXRENEW_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace exrenew {

// Splittable random streams.  Every sampling routine takes an explicit
// stream; a stream is derived deterministically from (seed, id...) so that
// parallel work units keyed by replicate index reproduce the same numbers
// regardless of how they are scheduled across threads.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RngStream {
  public:
    // Derive an independent stream from a master seed and one or two ids
    // (e.g. replicate index, sequence index).  The ids are mixed into the
    // splitmix64 chain before the xoshiro state is filled, so distinct
    // (seed, id) tuples give unrelated streams.
    static RngStream from(std::uint64_t seed, std::uint64_t id0 = 0, std::uint64_t id1 = 0) {
        std::uint64_t chain = seed;
        std::uint64_t mixed = splitmix64(chain);
        chain ^= id0 + 0x9e3779b97f4a7c15ULL;
        mixed ^= splitmix64(chain);
        chain ^= id1 + 0xd1b54a32d192ed03ULL;
        mixed ^= splitmix64(chain);
        RngStream r;
        std::uint64_t s = mixed;
        for (auto& word : r.state_) word = splitmix64(s);
        return r;
    }

    // xoshiro256++
    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1): the open interval avoids log(0) in inversions.
    double uniform_open01() {
        double u;
        do { u = uniform01(); } while (u <= 0.0);
        return u;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double exponential(double rate) { return -std::log(uniform_open01()) / rate; }

    // Marsaglia polar method; uses a cached second deviate.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Marsaglia-Tsang for shape >= 1, with the standard power boost below 1.
    double gamma(double shape, double rate) {
        if (!(shape > 0.0) || !(rate > 0.0))
            throw std::invalid_argument("gamma sample: shape and rate must be positive");
        if (shape < 1.0) {
            const double u = uniform_open01();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_open01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    // Integer-shape gamma as a sum of exponentials (cheap for the shapes we
    // use, and avoids the rejection loop's draw-count variability).
    double erlang(int shape, double rate) {
        double s = 0.0;
        for (int i = 0; i < shape; ++i) s += exponential(rate);
        return s;
    }

    // Lomax: survival (scale/(scale+t))^shape, sampled by inversion.
    double lomax(double scale, double shape) {
        const double u = uniform_open01();
        return scale * (std::pow(u, -1.0 / shape) - 1.0);
    }

    // Pareto with support [scale, inf), survival (scale/x)^shape.
    double pareto(double scale, double shape) {
        const double u = uniform_open01();
        return scale * std::pow(u, -1.0 / shape);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace exrenew

#endif
