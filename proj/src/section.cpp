#include "pathwise/section.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <utility>

#include "pathwise/summation.hpp"

namespace pathwise {

namespace {

double payoff(double u, double start, double end) {
    return std::max(0.0, u - end) - std::max(0.0, u - start);
}

}  // namespace

LocalTimeSection LocalTimeSection::from_stopped(std::span<const double> x) {
    LocalTimeSection s;
    if (x.empty()) return s;
    s.start_ = x.front();
    s.end_ = x.back();

    std::vector<std::pair<double, double>> legs;  // (start value, increment)
    legs.reserve(x.size());
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        const double d = x[j + 1] - x[j];
        if (d != 0.0) legs.emplace_back(x[j], d);
    }
    std::sort(legs.begin(), legs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    s.breakpoints_.reserve(legs.size() + 2);
    for (const auto& leg : legs) s.breakpoints_.push_back(leg.first);
    s.breakpoints_.push_back(s.start_);
    s.breakpoints_.push_back(s.end_);
    std::sort(s.breakpoints_.begin(), s.breakpoints_.end());
    s.breakpoints_.erase(std::unique(s.breakpoints_.begin(), s.breakpoints_.end()),
                         s.breakpoints_.end());

    const std::size_t r = s.breakpoints_.size();
    s.point_.resize(r);
    s.right_.resize(r);
    s.level_.resize(r);
    CompensatedSum level;
    std::size_t leg = 0;
    double below = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        const double b = s.breakpoints_[k];
        while (leg < legs.size() && legs[leg].first == b) {
            level += legs[leg].second;
            ++leg;
        }
        const double pay = payoff(b, s.start_, s.end_);
        s.level_[k] = level.value();
        s.point_[k] = pay + below;
        s.right_[k] = pay + s.level_[k];
        below = s.level_[k];
    }
    return s;
}

double LocalTimeSection::value_on_piece(double u, std::size_t piece) const {
    return payoff(u, start_, end_) + level_[piece];
}

double LocalTimeSection::operator()(double u) const {
    if (breakpoints_.empty() || u <= breakpoints_.front()) return 0.0;
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), u);
    const auto piece = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return value_on_piece(u, piece);
}

double LocalTimeSection::integral() const {
    return integral(-std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity());
}

double LocalTimeSection::integral(double a, double b) const {
    CompensatedSum sum;
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
        const double lo = std::max(a, breakpoints_[k]);
        const double hi = std::min(b, breakpoints_[k + 1]);
        if (!(hi > lo)) continue;
        sum += 0.5 * (value_on_piece(lo, k) + value_on_piece(hi, k)) * (hi - lo);
    }
    return sum.value();
}

double LocalTimeSection::integrate_against(const std::function<double(double)>& phi, double a,
                                           double b) const {
    using Quadrature = boost::math::quadrature::gauss<double, 10>;
    CompensatedSum sum;
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
        const double lo = std::max(a, breakpoints_[k]);
        const double hi = std::min(b, breakpoints_[k + 1]);
        if (!(hi > lo)) continue;
        sum += Quadrature::integrate(
            [&](double u) { return value_on_piece(u, k) * phi(u); }, lo, hi);
    }
    return sum.value();
}

std::vector<double> LocalTimeSection::extremal_sequence() const {
    std::vector<double> seq;
    seq.reserve(2 * breakpoints_.size());
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
        seq.push_back(point_[k]);
        seq.push_back(right_[k]);
    }
    return seq;
}

}  // namespace pathwise
