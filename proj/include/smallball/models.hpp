#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "smallball/matrix.hpp"
#include "smallball/rng.hpp"

namespace smallball::models {

// One-dimensional atom distribution for weighted sums. The laws with a
// computable spread parameter are the symmetric two-point law and the
// uniform interval; arbitrary laws can be plugged in through `custom`.
struct AtomLaw {
    enum class Kind { two_point, uniform_interval, custom };

    Kind kind = Kind::two_point;
    double a = 1.0;            // two_point: atoms at +-a
    double lo = 0.0, hi = 1.0; // uniform_interval: [lo, hi]
    std::function<double(rng::Engine&)> sampler;                 // custom
    std::function<std::complex<double>(double)> charfun1d;       // custom

    static AtomLaw two_point(double a);
    static AtomLaw uniform_interval(double lo, double hi);
    static AtomLaw custom(std::function<double(rng::Engine&)> sampler,
                          std::function<std::complex<double>(double)> charfun1d);

    std::complex<double> charfun(double s) const;
    double sample(rng::Engine& eng) const;
};

// Largest b in (0,1) with sup_x P(|delta - x| <= 1) <= 1 - b. Throws
// std::domain_error when no such b exists (the law fits inside a unit
// window) and std::invalid_argument for custom laws.
double spread_parameter(const AtomLaw& law);

// A random vector paired with its characteristic function. Three shapes:
//   standard_gaussian(n)   : N(0, I_n)
//   smoothed(base, t)      : base + t * G with G independent standard Gaussian
//   weighted_sum(A, atoms) : sum_k delta_k a_k, rows a_k of A, i.i.d. atoms
// Models are immutable; sampling is deterministic per (seed, chunk).
class VectorModel {
public:
    enum class Kind { standard_gaussian, smoothed, weighted_sum };

    static VectorModel standard_gaussian(int n);
    static VectorModel smoothed(VectorModel base, double t);
    static VectorModel weighted_sum(Matrix a, AtomLaw atoms);

    Kind kind() const { return kind_; }
    int dim() const { return n_; }
    double smoothing() const { return smooth_t_; }
    const VectorModel& base() const { return *base_; }
    const Matrix& matrix() const { return a_; }
    const AtomLaw& atoms() const { return atoms_; }

    // E exp(i<xi, X>). |phi(xi)| <= 1, phi(0) = 1; real for symmetric models.
    std::complex<double> charfun(std::span<const double> xi) const;

    // Draws one sample into out (size dim()), consuming a fixed number of
    // engine draws.
    void draw(rng::Engine& eng, std::span<double> out) const;

    // count i.i.d. samples, row-major count x dim().
    std::vector<double> sample(std::uint64_t count, std::uint64_t seed) const;

    // Streams samples in chunk order: fn(sample) once per draw.
    void for_each_sample(std::uint64_t count, std::uint64_t seed,
                         const std::function<void(std::span<const double>)>& fn) const;

private:
    VectorModel() = default;
    Kind kind_ = Kind::standard_gaussian;
    int n_ = 1;
    double smooth_t_ = 0.0;
    std::shared_ptr<const VectorModel> base_;
    Matrix a_;
    AtomLaw atoms_;
};

} // namespace smallball::models
