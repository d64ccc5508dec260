#pragma once

#include "fcov/covops.hpp"
#include "fcov/fspace.hpp"
#include "fcov/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fcov {

enum class BlockMethod { nonoverlapping, moving };

std::string to_string(BlockMethod method);
BlockMethod parse_block_method(const std::string& name);

/**
 * @brief Resampling scheme for a series of length n.
 *
 * Nonoverlapping: the first k*p observations form k = floor(n/p) disjoint
 * blocks, and a resample concatenates k blocks drawn uniformly with
 * replacement. The trailing n - k*p observations never enter a resample.
 *
 * Moving: all n-p+1 overlapping blocks are candidates; ceil(n/p) of them are
 * drawn and the concatenation is truncated to n rows.
 */
struct BlockPlan {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t k = 0;
  BlockMethod method = BlockMethod::nonoverlapping;
  std::uint64_t seed = 0;

  static BlockPlan make(std::size_t n, std::size_t p, BlockMethod method = BlockMethod::nonoverlapping,
                        std::uint64_t seed = 0);

  /// Number of rows in one resample: k*p (nonoverlapping) or n (moving).
  std::size_t resample_length() const noexcept;
};

/// Replicate statistics from B bootstrap draws.
struct ReplicateSet {
  std::vector<double> values;
  BlockPlan plan;

  std::size_t B() const noexcept { return values.size(); }
};

/// Plug-in block length rule built on the Bartlett kernel.
struct BandwidthConfig {
  /// Pilot bandwidth h0 = ceil(n^pilot_exponent).
  double pilot_exponent = 0.2;
  /// Characteristic exponent of the Bartlett kernel.
  double q = 1.0;
  /// Multiplicative constant on the plug-in ratio.
  double constant = 1.0;

  void validate() const;
};

/// Which operator the cross replicates are centered at.
enum class Centering { sample, zero };

std::string to_string(Centering centering);
Centering parse_centering(const std::string& name);

// ---- Resampling ------------------------------------------------------------

/// The k = floor(n/p) consecutive blocks of length p; trailing rows are dropped.
std::vector<FunctionalSeries> make_blocks(const FunctionalSeries& series, std::size_t p);

/// Concatenation of blocks.size() blocks drawn uniformly with replacement.
FunctionalSeries resample(std::span<const FunctionalSeries> blocks, Rng& rng);

FunctionalSeries moving_block_resample(const FunctionalSeries& series, std::size_t p, Rng& rng);

/// Block indices (nonoverlapping) or block start rows (moving) for one draw.
std::vector<std::size_t> draw_blocks(const BlockPlan& plan, Rng& rng);

/// Row indices of the resampled series for a given set of drawn blocks.
std::vector<std::size_t> rows_from_blocks(const BlockPlan& plan, std::span<const std::size_t> blocks);

/// Row indices for one draw.
std::vector<std::size_t> resample_indices(const BlockPlan& plan, Rng& rng);

/// Generator for replicate b; depends only on (plan.seed, b).
Rng replicate_rng(const BlockPlan& plan, std::size_t b);

// ---- Gram-matrix engine ----------------------------------------------------

/**
 * Gram matrix <X_a - Xbar, X_b - Xbar> of the centered observations under the
 * grid inner product. All bootstrap replicate statistics below are exact
 * functions of Gram matrices, so one replicate costs O(n^2) instead of
 * O(n m^2).
 */
Matrix centered_gram(const FunctionalSeries& series);

/**
 * N * ||V*_{XY} - target||_HS^2 for the resample given by row indices, where
 * N = indices.size() and target is the sample cross-covariance (sample) or 0.
 * gx, gy are centered Grams; hadamard = gx .* gy.
 */
double cross_replicate_from_gram(const Matrix& gx, const Matrix& gy, const Matrix& hadamard,
                                 std::span<const std::size_t> indices, Centering centering);

/// HS norms of the bootstrap CUSUM bridge at j = 0..N-1 for the resample given by row indices.
std::vector<double> boot_bridge_norms_from_gram(const Matrix& gram, std::span<const std::size_t> indices);

ReplicateSet cross_replicates_from_gram(const Matrix& gx, const Matrix& gy, const BlockPlan& plan, std::size_t B,
                                        Centering centering, unsigned threads = 1);

struct CusumReplicates {
  ReplicateSet cs;
  ReplicateSet ci;
};

CusumReplicates cusum_replicates_from_gram(const Matrix& gram, const BlockPlan& plan, std::size_t B,
                                           unsigned threads = 1);

// ---- Bootstrap statistics --------------------------------------------------

/// Replicates of pk * ||V*_n - V_n||_HS^2 (one-sample statistic).
ReplicateSet boot_cov_replicates(const FunctionalSeries& series, const BlockPlan& plan, std::size_t B,
                                 unsigned threads = 1);

/// Replicates of pk * ||V*_{XY} - target||_HS^2 for the paired series (X_i, Y_i).
ReplicateSet boot_cross_replicates(const FunctionalSeries& x, const FunctionalSeries& y, const BlockPlan& plan,
                                   std::size_t B, Centering centering = Centering::sample, unsigned threads = 1);

/// Bootstrap partial-sum process W*(j/N), j = 0..N, for the resample given by row indices.
std::vector<HSOperator> boot_partial_sum_path(const FunctionalSeries& series, std::span<const std::size_t> indices);

/// Bridge W*(j/N) - (j/N) W*(1) for j = 0..N-1, computed in operator form.
OperatorPath boot_cusum_path(const FunctionalSeries& series, std::span<const std::size_t> indices);
OperatorPath boot_cusum_path(const FunctionalSeries& series, const BlockPlan& plan, Rng& rng);

// ---- Block length ----------------------------------------------------------

/// Data-adaptive block length in [1, floor(n/2)] from the tensor series (X_i - Xbar) (x) (X_i - Xbar).
std::size_t adaptive_block_length(const FunctionalSeries& series, const BandwidthConfig& cfg = {});

/// Same rule from a centered Gram matrix (e.g. gx + gy for a paired series in H (+) G).
std::size_t adaptive_block_length_from_gram(const Matrix& gram, const BandwidthConfig& cfg = {});

}  // namespace fcov
