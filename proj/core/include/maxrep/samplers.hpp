#pragma once

#include "maxrep/models.hpp"
#include "maxrep/random_stream.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace maxrep {

// Circulant eigenvalues at or above this value are accepted (and clamped to
// zero when negative).
inline constexpr double kSpectralTolerance = -1e-9;
// Largest n for which the dense square-root fallback is attempted.
inline constexpr std::size_t kDenseFallbackLimit = 2048;

/// Circulant embedding size: 2(n - 1) rounded up to a power of two.
std::size_t embedding_length(std::size_t n);

/// Minimum eigenvalue of the circulant embedding of (r_0, ..., r_{n-1}).
/// The embedding's first row is r_j for j <= m/2 and r_{m-j} beyond. Requires n >= 2.
double spectral_check(const CovarianceSpec& cov, std::size_t n);

/// Minimum eigenvalue of the n x n Toeplitz covariance matrix.
double dense_min_eigenvalue(const CovarianceSpec& cov, std::size_t n);

struct Path {
  std::vector<double> values;
  ProcessSpec process;
  std::uint64_t replication_id = 0;
};

// Draws stationary Gaussian paths of fixed length with covariance `cov`.
// Construction does all precomputation (spectrum or matrix square root);
// `fill` is const and safe to call concurrently.
class GaussianSampler {
public:
  enum class Method { iid, ar1, moving_average, circulant, dense };

  GaussianSampler(const CovarianceSpec& cov, std::size_t n);
  ~GaussianSampler();
  GaussianSampler(const GaussianSampler&);
  GaussianSampler& operator=(const GaussianSampler&);
  GaussianSampler(GaussianSampler&&) noexcept;
  GaussianSampler& operator=(GaussianSampler&&) noexcept;

  Method method() const noexcept;
  std::size_t length() const noexcept { return n_; }

  void fill(std::span<double> out, CounterRng& rng) const;

private:
  struct Plan;
  std::size_t n_;
  std::shared_ptr<const Plan> plan_;
};

// Samples any ProcessSpec. The stream key's tag selects base path versus
// replacing copy; lanes 0..d-1 carry the independent Gaussian coordinates.
class ProcessSampler {
public:
  ProcessSampler(ProcessSpec process, std::size_t n);

  const ProcessSpec& process() const noexcept { return process_; }
  std::size_t length() const noexcept { return n_; }

  /// Writes one path of length n into `out` (`out.size()` must equal n).
  void fill(std::span<double> out, const StreamKey& key) const;

  Path sample(const StreamKey& key) const;

private:
  ProcessSpec process_;
  std::size_t n_;
  std::unique_ptr<GaussianSampler> gaussian_;
};

Path sample_gaussian_path(const CovarianceSpec& cov, std::size_t n, const StreamKey& key);
Path sample_chi_path(std::size_t d, const CovarianceSpec& cov, std::size_t n, const StreamKey& key);
Path sample_order_stat_path(std::size_t d, std::size_t r, const CovarianceSpec& cov, std::size_t n,
                            const StreamKey& key);
Path sample_generic_iid_path(const Marginal& marginal, std::size_t n, const StreamKey& key);

/// One draw from a generic iid marginal.
double draw(const Marginal& marginal, CounterRng& rng);

} // namespace maxrep
