#include "allpay/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "allpay/error.hpp"

namespace allpay {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& what) {
    throw InvalidParameter(what);
}

bool finite(double x) { return std::isfinite(x); }

// Index of the segment [x[i], x[i+1]) containing v, clamped to valid range.
template <typename Getter>
std::size_t locate(std::size_t count, double v, Getter&& at) {
    std::size_t lo = 0;
    std::size_t hi = count - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (at(mid) <= v) lo = mid;
        else hi = mid;
    }
    return lo;
}

} // namespace

std::string kind_name(const DistributionSpec& spec) {
    return std::visit(Overloaded{
                          [](const UniformSpec&) { return std::string("uniform"); },
                          [](const ExponentialSpec&) { return std::string("exponential"); },
                          [](const PowerSpec&) { return std::string("power"); },
                          [](const MixtureSpec&) { return std::string("mixture"); },
                          [](const TabulatedSpec&) { return std::string("tabulated"); },
                      },
                      spec);
}

Distribution::Distribution(DistributionSpec spec) : spec_(std::move(spec)) {
    std::visit(
        Overloaded{
            [&](const UniformSpec& u) {
                if (!finite(u.a) || !finite(u.b) || !(u.a < u.b))
                    invalid("uniform: require finite a < b");
                lo_ = u.a;
                hi_ = u.b;
            },
            [&](const ExponentialSpec& e) {
                if (!finite(e.rate) || !(e.rate > 0.0)) invalid("exponential: require rate > 0");
                lo_ = 0.0;
                hi_ = kInfinity;
            },
            [&](const PowerSpec& p) {
                if (!finite(p.alpha) || !(p.alpha > 0.0)) invalid("power: require alpha > 0");
                lo_ = 0.0;
                hi_ = 1.0;
            },
            [&](const MixtureSpec& m) {
                if (m.segments.empty()) invalid("mixture: require at least one segment");
                double total = 0.0;
                for (std::size_t i = 0; i < m.segments.size(); ++i) {
                    const auto& s = m.segments[i];
                    if (!finite(s.lo) || !finite(s.hi) || !(s.lo < s.hi))
                        invalid("mixture: each segment needs finite lo < hi");
                    if (!finite(s.weight) || !(s.weight > 0.0))
                        invalid("mixture: segment weights must be positive");
                    if (i > 0) {
                        double prev = m.segments[i - 1].hi;
                        if (s.lo < prev - 1e-12 * std::max(1.0, std::abs(prev)))
                            invalid("mixture: segments must be disjoint and sorted");
                        if (s.lo > prev + 1e-12 * std::max(1.0, std::abs(prev)))
                            invalid("mixture: segments must be contiguous (density must be positive on the support)");
                    }
                    total += s.weight;
                }
                if (std::abs(total - 1.0) > 1e-9) invalid("mixture: weights must sum to 1");
                lo_ = m.segments.front().lo;
                hi_ = m.segments.back().hi;
                double acc = 0.0;
                for (const auto& s : m.segments) {
                    cum_.push_back(acc);
                    dens_.push_back(s.weight / total / (s.hi - s.lo));
                    acc += s.weight / total;
                }
                for (std::size_t i = 1; i < m.segments.size(); ++i)
                    breakpoints_.push_back(m.segments[i].lo);
            },
            [&](const TabulatedSpec& t) {
                if (t.points.size() < 2) invalid("tabulated: require at least two points");
                for (std::size_t i = 0; i < t.points.size(); ++i) {
                    auto [v, q] = t.points[i];
                    if (!finite(v) || !finite(q)) invalid("tabulated: points must be finite");
                    if (i > 0) {
                        if (!(v > t.points[i - 1][0])) invalid("tabulated: values must be strictly increasing");
                        if (!(q > t.points[i - 1][1])) invalid("tabulated: cdf must be strictly increasing");
                    }
                }
                if (t.points.front()[1] != 0.0) invalid("tabulated: cdf must start at 0");
                if (t.points.back()[1] != 1.0) invalid("tabulated: cdf must end at 1");
                lo_ = t.points.front()[0];
                hi_ = t.points.back()[0];
                for (std::size_t i = 1; i + 1 < t.points.size(); ++i)
                    breakpoints_.push_back(t.points[i][0]);
            },
        },
        spec_);
}

double Distribution::effective_hi() const {
    return bounded() ? hi_ : quantile(kTailQuantile);
}

double Distribution::cdf(double v) const {
    if (!(v > lo_)) return 0.0;
    if (!(v < hi_)) return 1.0;
    return std::visit(
        Overloaded{
            [&](const UniformSpec& u) { return (v - u.a) / (u.b - u.a); },
            [&](const ExponentialSpec& e) { return -std::expm1(-e.rate * v); },
            [&](const PowerSpec& p) { return std::pow(v, p.alpha); },
            [&](const MixtureSpec& m) {
                std::size_t i = locate(m.segments.size() + 1, v, [&](std::size_t k) {
                    return k < m.segments.size() ? m.segments[k].lo : hi_;
                });
                return std::min(1.0, cum_[i] + dens_[i] * (v - m.segments[i].lo));
            },
            [&](const TabulatedSpec& t) {
                std::size_t i = locate(t.points.size(), v, [&](std::size_t k) { return t.points[k][0]; });
                auto [v0, q0] = t.points[i];
                auto [v1, q1] = t.points[i + 1];
                return q0 + (q1 - q0) * (v - v0) / (v1 - v0);
            },
        },
        spec_);
}

double Distribution::survival(double v) const {
    if (const auto* e = std::get_if<ExponentialSpec>(&spec_)) {
        if (!(v > lo_)) return 1.0;
        return std::exp(-e->rate * v);
    }
    return 1.0 - cdf(v);
}

double Distribution::pdf(double v) const {
    if (v < lo_ || v > hi_) return 0.0;
    return std::visit(
        Overloaded{
            [&](const UniformSpec& u) { return 1.0 / (u.b - u.a); },
            [&](const ExponentialSpec& e) { return e.rate * std::exp(-e.rate * v); },
            [&](const PowerSpec& p) { return p.alpha * std::pow(v, p.alpha - 1.0); },
            [&](const MixtureSpec& m) {
                // Right-continuous: a boundary point takes the right segment.
                std::size_t i = locate(m.segments.size() + 1, v, [&](std::size_t k) {
                    return k < m.segments.size() ? m.segments[k].lo : hi_;
                });
                return dens_[i];
            },
            [&](const TabulatedSpec& t) {
                std::size_t i = locate(t.points.size(), v, [&](std::size_t k) { return t.points[k][0]; });
                auto [v0, q0] = t.points[i];
                auto [v1, q1] = t.points[i + 1];
                return (q1 - q0) / (v1 - v0);
            },
        },
        spec_);
}

double Distribution::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidParameter("quantile: q must lie in [0, 1]");
    if (!(q > 0.0)) return lo_;
    if (!(q < 1.0)) return hi_;
    return std::visit(
        Overloaded{
            [&](const UniformSpec& u) { return u.a + q * (u.b - u.a); },
            [&](const ExponentialSpec& e) { return -std::log1p(-q) / e.rate; },
            [&](const PowerSpec& p) { return std::pow(q, 1.0 / p.alpha); },
            [&](const MixtureSpec& m) {
                std::size_t i = locate(cum_.size() + 1, q, [&](std::size_t k) {
                    return k < cum_.size() ? cum_[k] : 1.0;
                });
                double v = m.segments[i].lo + (q - cum_[i]) / dens_[i];
                return std::clamp(v, m.segments[i].lo, m.segments[i].hi);
            },
            [&](const TabulatedSpec& t) {
                std::size_t i = locate(t.points.size(), q, [&](std::size_t k) { return t.points[k][1]; });
                auto [v0, q0] = t.points[i];
                auto [v1, q1] = t.points[i + 1];
                return v0 + (v1 - v0) * (q - q0) / (q1 - q0);
            },
        },
        spec_);
}

Distribution build(const DistributionSpec& spec) {
    return Distribution(spec);
}

} // namespace allpay
