#ifndef MICROSHELL_BATCH_MEANS_HPP
#define MICROSHELL_BATCH_MEANS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace microshell {

/// Streaming vector mean with batch-means standard errors.
///
/// The stream length must be known up front: it is split into
/// floor(sqrt(total)) batches of equal size. Leftover points (total not a
/// multiple of the batch size) enter the mean but not the error estimate.
/// Valid for both independent draws and autocorrelated chains as long as a
/// batch is much longer than the correlation time.
class BatchMeans {
public:
    BatchMeans(std::size_t dimension, std::uint64_t total);

    void add(std::span<const double> x);

    std::uint64_t count() const noexcept { return count_; }
    std::uint64_t batches() const noexcept { return batches_; }
    std::vector<double> mean() const;
    /// Zero when fewer than two batches are complete.
    std::vector<double> std_error() const;

private:
    std::size_t dimension_;
    std::uint64_t batches_;
    std::uint64_t batch_size_;
    std::uint64_t count_ = 0;
    std::uint64_t completed_ = 0;
    std::vector<double> sum_;
    std::vector<double> batch_sum_;
    std::vector<double> batch_mean_sum_;
    std::vector<double> batch_mean_sq_;
};

}  // namespace microshell

#endif
