#include "microshell/batch_means.hpp"

#include <algorithm>
#include <cmath>

#include "microshell/error.hpp"

namespace microshell {

BatchMeans::BatchMeans(std::size_t dimension, std::uint64_t total)
    : dimension_(dimension),
      sum_(dimension, 0.0),
      batch_sum_(dimension, 0.0),
      batch_mean_sum_(dimension, 0.0),
      batch_mean_sq_(dimension, 0.0)
{
    if (total == 0) throw Error(ErrorKind::InvalidInput, "batch means needs at least one point");
    batches_ = static_cast<std::uint64_t>(std::floor(std::sqrt(static_cast<double>(total))));
    while (batches_ * batches_ > total) --batches_;
    while ((batches_ + 1) * (batches_ + 1) <= total) ++batches_;
    batch_size_ = total / batches_;
}

void BatchMeans::add(std::span<const double> x)
{
    if (x.size() != dimension_)
        throw Error(ErrorKind::LengthMismatch, "batch means: wrong point dimension");
    for (std::size_t k = 0; k < dimension_; ++k) sum_[k] += x[k];
    ++count_;

    if (completed_ >= batches_) return;
    for (std::size_t k = 0; k < dimension_; ++k) batch_sum_[k] += x[k];
    if (count_ % batch_size_ == 0) {
        for (std::size_t k = 0; k < dimension_; ++k) {
            const double m = batch_sum_[k] / static_cast<double>(batch_size_);
            batch_mean_sum_[k] += m;
            batch_mean_sq_[k] += m * m;
            batch_sum_[k] = 0.0;
        }
        ++completed_;
    }
}

std::vector<double> BatchMeans::mean() const
{
    std::vector<double> m(dimension_, 0.0);
    if (count_ == 0) return m;
    for (std::size_t k = 0; k < dimension_; ++k) m[k] = sum_[k] / static_cast<double>(count_);
    return m;
}

std::vector<double> BatchMeans::std_error() const
{
    std::vector<double> se(dimension_, 0.0);
    if (completed_ < 2) return se;
    const double b = static_cast<double>(completed_);
    for (std::size_t k = 0; k < dimension_; ++k) {
        const double m = batch_mean_sum_[k] / b;
        const double var = std::max(0.0, (batch_mean_sq_[k] - b * m * m) / (b - 1.0));
        se[k] = std::sqrt(var / b);
    }
    return se;
}

}  // namespace microshell
