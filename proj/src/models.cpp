#include "smallball/models.hpp"

#include <cmath>
#include <stdexcept>

namespace smallball::models {

namespace {

// sin(x)/x with the small-argument series.
double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

} // namespace

AtomLaw AtomLaw::two_point(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("two_point: a must be > 0");
    AtomLaw law;
    law.kind = Kind::two_point;
    law.a = a;
    return law;
}

AtomLaw AtomLaw::uniform_interval(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("uniform_interval: need lo < hi");
    AtomLaw law;
    law.kind = Kind::uniform_interval;
    law.lo = lo;
    law.hi = hi;
    return law;
}

AtomLaw AtomLaw::custom(std::function<double(rng::Engine&)> sampler,
                        std::function<std::complex<double>(double)> charfun1d) {
    if (!sampler || !charfun1d)
        throw std::invalid_argument("custom atom law needs both a sampler and a charfun");
    AtomLaw law;
    law.kind = Kind::custom;
    law.sampler = std::move(sampler);
    law.charfun1d = std::move(charfun1d);
    return law;
}

std::complex<double> AtomLaw::charfun(double s) const {
    switch (kind) {
    case Kind::two_point:
        return {std::cos(a * s), 0.0};
    case Kind::uniform_interval: {
        // E e^{i s U} = e^{i s (lo+hi)/2} sinc(s (hi-lo)/2)
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        const double mag = sinc(s * half);
        return {mag * std::cos(s * mid), mag * std::sin(s * mid)};
    }
    case Kind::custom:
        return charfun1d(s);
    }
    return {1.0, 0.0};
}

double AtomLaw::sample(rng::Engine& eng) const {
    switch (kind) {
    case Kind::two_point:
        return eng.next_uniform() < 0.5 ? -a : a;
    case Kind::uniform_interval:
        return lo + (hi - lo) * eng.next_uniform();
    case Kind::custom:
        return sampler(eng);
    }
    return 0.0;
}

double spread_parameter(const AtomLaw& law) {
    double window_mass = 1.0; // sup_x P(|delta - x| <= 1)
    switch (law.kind) {
    case AtomLaw::Kind::two_point:
        // A window of length 2 covers both atoms iff a <= 1.
        window_mass = law.a <= 1.0 ? 1.0 : 0.5;
        break;
    case AtomLaw::Kind::uniform_interval:
        window_mass = std::min(1.0, 2.0 / (law.hi - law.lo));
        break;
    case AtomLaw::Kind::custom:
        throw std::invalid_argument("spread_parameter: not computable for custom laws");
    }
    if (window_mass >= 1.0)
        throw std::domain_error(
            "spread_parameter: sup_x P(|delta - x| <= 1) = 1, no valid b exists");
    return 1.0 - window_mass;
}

VectorModel VectorModel::standard_gaussian(int n) {
    if (n < 1) throw std::invalid_argument("standard_gaussian: n must be >= 1");
    VectorModel m;
    m.kind_ = Kind::standard_gaussian;
    m.n_ = n;
    return m;
}

VectorModel VectorModel::smoothed(VectorModel base, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("smoothed: t must be > 0");
    VectorModel m;
    m.kind_ = Kind::smoothed;
    m.n_ = base.dim();
    m.smooth_t_ = t;
    m.base_ = std::make_shared<const VectorModel>(std::move(base));
    return m;
}

VectorModel VectorModel::weighted_sum(Matrix a, AtomLaw atoms) {
    if (a.rows() == 0 || a.cols() == 0)
        throw std::invalid_argument("weighted_sum: empty coefficient matrix");
    VectorModel m;
    m.kind_ = Kind::weighted_sum;
    m.n_ = static_cast<int>(a.cols());
    m.a_ = std::move(a);
    m.atoms_ = std::move(atoms);
    return m;
}

std::complex<double> VectorModel::charfun(std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != n_)
        throw std::invalid_argument("charfun: dimension mismatch");
    switch (kind_) {
    case Kind::standard_gaussian: {
        double q = 0.0;
        for (double v : xi) q += v * v;
        return {std::exp(-0.5 * q), 0.0};
    }
    case Kind::smoothed: {
        double q = 0.0;
        for (double v : xi) q += v * v;
        return base_->charfun(xi) * std::exp(-0.5 * smooth_t_ * smooth_t_ * q);
    }
    case Kind::weighted_sum: {
        std::complex<double> prod{1.0, 0.0};
        for (std::size_t k = 0; k < a_.rows(); ++k) {
            double dot = 0.0;
            const auto row = a_.row(k);
            for (std::size_t j = 0; j < row.size(); ++j) dot += row[j] * xi[j];
            prod *= atoms_.charfun(dot);
        }
        return prod;
    }
    }
    return {1.0, 0.0};
}

void VectorModel::draw(rng::Engine& eng, std::span<double> out) const {
    switch (kind_) {
    case Kind::standard_gaussian:
        for (int i = 0; i < n_; i += 2) {
            double g0, g1;
            eng.next_gaussian_pair(g0, g1);
            out[static_cast<std::size_t>(i)] = g0;
            if (i + 1 < n_) out[static_cast<std::size_t>(i) + 1] = g1;
        }
        break;
    case Kind::smoothed: {
        base_->draw(eng, out);
        for (int i = 0; i < n_; i += 2) {
            double g0, g1;
            eng.next_gaussian_pair(g0, g1);
            out[static_cast<std::size_t>(i)] += smooth_t_ * g0;
            if (i + 1 < n_) out[static_cast<std::size_t>(i) + 1] += smooth_t_ * g1;
        }
        break;
    }
    case Kind::weighted_sum: {
        for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(j)] = 0.0;
        for (std::size_t k = 0; k < a_.rows(); ++k) {
            const double delta = atoms_.sample(eng);
            const auto row = a_.row(k);
            for (std::size_t j = 0; j < row.size(); ++j) out[j] += delta * row[j];
        }
        break;
    }
    }
}

std::vector<double> VectorModel::sample(std::uint64_t count, std::uint64_t seed) const {
    if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
    std::vector<double> out(count * static_cast<std::uint64_t>(n_));
    std::uint64_t idx = 0;
    rng::for_each_sample(seed, count, [&](rng::Engine& eng) {
        draw(eng, {out.data() + idx, static_cast<std::size_t>(n_)});
        idx += static_cast<std::uint64_t>(n_);
    });
    return out;
}

void VectorModel::for_each_sample(
    std::uint64_t count, std::uint64_t seed,
    const std::function<void(std::span<const double>)>& fn) const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    rng::for_each_sample(seed, count, [&](rng::Engine& eng) {
        draw(eng, x);
        fn(x);
    });
}

} // namespace smallball::models
