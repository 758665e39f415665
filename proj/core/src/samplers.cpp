#include "maxrep/samplers.hpp"

#include "maxrep/errors.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <random>

namespace maxrep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// FFTW planning is not thread-safe; execution on new arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
public:
  explicit FftPlan(std::size_t m) : size_(m) {
    std::vector<std::complex<double>> scratch(m);
    std::lock_guard lock(fftw_planner_mutex());
    auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
    plan_ = fftw_plan_dft_1d(static_cast<int>(m), data, data, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~FftPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void forward_in_place(std::span<std::complex<double>> data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_, p, p);
  }

  std::size_t size() const { return size_; }

private:
  std::size_t size_;
  fftw_plan plan_;
};

// Eigenvalues of the circulant with first row c_j = r_j (j <= m/2), r_{m-j} otherwise.
std::vector<double> circulant_spectrum(const CovarianceSpec& cov, std::size_t m,
                                       const FftPlan& fft) {
  std::vector<std::complex<double>> row(m);
  for (std::size_t j = 0; j < m; ++j) {
    row[j] = cov.lag(j <= m / 2 ? j : m - j);
  }
  fft.forward_in_place(row);
  std::vector<double> eig(m);
  std::transform(row.begin(), row.end(), eig.begin(), [](auto z) { return z.real(); });
  return eig;
}

Eigen::MatrixXd toeplitz(const CovarianceSpec& cov, std::size_t n) {
  Eigen::MatrixXd c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c(i, j) = cov.lag(i > j ? i - j : j - i);
    }
  }
  return c;
}

void fill_normals(std::span<double> out, CounterRng& rng) {
  std::normal_distribution<double> normal;
  for (auto& v : out) {
    v = normal(rng);
  }
}

} // namespace

std::size_t embedding_length(std::size_t n) {
  const std::size_t target = n < 2 ? 1 : 2 * (n - 1);
  std::size_t m = 1;
  while (m < target) {
    m <<= 1;
  }
  return std::max<std::size_t>(m, 2);
}

double spectral_check(const CovarianceSpec& cov, std::size_t n) {
  if (n < 2) {
    throw InvalidParameter("spectral check needs n >= 2");
  }
  const std::size_t m = embedding_length(n);
  FftPlan fft(m);
  const auto eig = circulant_spectrum(cov, m, fft);
  return *std::min_element(eig.begin(), eig.end());
}

double dense_min_eigenvalue(const CovarianceSpec& cov, std::size_t n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(toeplitz(cov, n), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

struct GaussianSampler::Plan {
  Method method = Method::iid;
  double rho = 0.0;
  std::vector<double> ma_weights; // normalized to unit variance
  std::vector<double> spectrum_sqrt; // sqrt(lambda_j / m)
  std::unique_ptr<FftPlan> fft;
  Eigen::MatrixXd root;
};

GaussianSampler::GaussianSampler(const CovarianceSpec& cov, std::size_t n) : n_(n) {
  if (n == 0) {
    throw InvalidParameter("path length must be positive");
  }
  auto plan = std::make_shared<Plan>();
  if (cov.get_if<IidCovariance>() || n == 1) {
    plan->method = Method::iid;
  } else if (const auto* ar = cov.get_if<Ar1Covariance>()) {
    plan->method = Method::ar1;
    plan->rho = ar->rho;
  } else if (const auto* ma = cov.get_if<MovingAverageCovariance>()) {
    plan->method = Method::moving_average;
    double norm = 0.0;
    for (double w : ma->weights) {
      norm += w * w;
    }
    norm = std::sqrt(norm);
    for (double w : ma->weights) {
      plan->ma_weights.push_back(w / norm);
    }
  } else {
    const std::size_t m = embedding_length(n);
    auto fft = std::make_unique<FftPlan>(m);
    auto eig = circulant_spectrum(cov, m, *fft);
    if (*std::min_element(eig.begin(), eig.end()) >= kSpectralTolerance) {
      plan->method = Method::circulant;
      plan->spectrum_sqrt.resize(m);
      for (std::size_t j = 0; j < m; ++j) {
        plan->spectrum_sqrt[j] = std::sqrt(std::max(eig[j], 0.0) / static_cast<double>(m));
      }
      plan->fft = std::move(fft);
    } else if (n <= kDenseFallbackLimit) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(toeplitz(cov, n));
      if (solver.eigenvalues().minCoeff() < kSpectralTolerance) {
        throw NonPSDCovariance("covariance " + cov.describe() +
                               " is not positive semidefinite at length " + std::to_string(n));
      }
      plan->method = Method::dense;
      const Eigen::VectorXd scale = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      plan->root = solver.eigenvectors() * scale.asDiagonal();
    } else {
      throw NonPSDCovariance("circulant embedding of " + cov.describe() + " fails at length " +
                             std::to_string(n) + " and n exceeds the dense fallback limit");
    }
  }
  plan_ = std::move(plan);
}

GaussianSampler::~GaussianSampler() = default;
GaussianSampler::GaussianSampler(const GaussianSampler&) = default;
GaussianSampler& GaussianSampler::operator=(const GaussianSampler&) = default;
GaussianSampler::GaussianSampler(GaussianSampler&&) noexcept = default;
GaussianSampler& GaussianSampler::operator=(GaussianSampler&&) noexcept = default;

GaussianSampler::Method GaussianSampler::method() const noexcept { return plan_->method; }

void GaussianSampler::fill(std::span<double> out, CounterRng& rng) const {
  const Plan& plan = *plan_;
  std::normal_distribution<double> normal;
  switch (plan.method) {
  case Method::iid:
    fill_normals(out, rng);
    return;
  case Method::ar1: {
    const double innovation = std::sqrt(1.0 - plan.rho * plan.rho);
    double x = normal(rng);
    out[0] = x;
    for (std::size_t t = 1; t < out.size(); ++t) {
      x = plan.rho * x + innovation * normal(rng);
      out[t] = x;
    }
    return;
  }
  case Method::moving_average: {
    const auto& w = plan.ma_weights;
    thread_local std::vector<double> z;
    z.resize(out.size() + w.size() - 1);
    fill_normals(z, rng);
    // out[t] = sum_i w_i z[t + m - i]
    const std::size_t m = w.size() - 1;
    for (std::size_t t = 0; t < out.size(); ++t) {
      double acc = 0.0;
      for (std::size_t i = 0; i <= m; ++i) {
        acc += w[i] * z[t + m - i];
      }
      out[t] = acc;
    }
    return;
  }
  case Method::circulant: {
    const std::size_t m = plan.spectrum_sqrt.size();
    thread_local std::vector<std::complex<double>> buffer;
    buffer.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      buffer[j] = plan.spectrum_sqrt[j] * std::complex<double>(re, im);
    }
    plan.fft->forward_in_place(buffer);
    for (std::size_t t = 0; t < out.size(); ++t) {
      out[t] = buffer[t].real();
    }
    return;
  }
  case Method::dense: {
    Eigen::VectorXd z(static_cast<Eigen::Index>(out.size()));
    for (auto& v : z) {
      v = normal(rng);
    }
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) = plan.root * z;
    return;
  }
  }
}

ProcessSampler::ProcessSampler(ProcessSpec process, std::size_t n)
    : process_(std::move(process)), n_(n) {
  if (n == 0) {
    throw InvalidParameter("path length must be positive");
  }
  validate(process_);
  std::visit(overloaded{
                 [&](const GaussianProcess& g) { gaussian_ = std::make_unique<GaussianSampler>(g.cov, n); },
                 [&](const ChiProcess& c) { gaussian_ = std::make_unique<GaussianSampler>(c.cov, n); },
                 [&](const OrderStatProcess& o) {
                   gaussian_ = std::make_unique<GaussianSampler>(o.cov, n);
                 },
                 [](const GenericIidProcess&) {},
             },
             process_);
}

void ProcessSampler::fill(std::span<double> out, const StreamKey& key) const {
  std::visit(
      overloaded{
          [&](const GaussianProcess&) {
            CounterRng rng(key.with(key.tag, 0));
            gaussian_->fill(out, rng);
          },
          [&](const ChiProcess& c) {
            thread_local std::vector<double> lane;
            lane.resize(n_);
            std::fill(out.begin(), out.end(), 0.0);
            for (std::size_t j = 0; j < c.d; ++j) {
              CounterRng rng(key.with(key.tag, static_cast<std::uint16_t>(j)));
              gaussian_->fill(lane, rng);
              for (std::size_t t = 0; t < n_; ++t) {
                out[t] += lane[t] * lane[t];
              }
            }
            for (auto& v : out) {
              v = std::sqrt(v);
            }
          },
          [&](const OrderStatProcess& o) {
            thread_local std::vector<double> lanes;
            thread_local std::vector<double> column;
            lanes.resize(o.d * n_);
            column.resize(o.d);
            for (std::size_t j = 0; j < o.d; ++j) {
              CounterRng rng(key.with(key.tag, static_cast<std::uint16_t>(j)));
              gaussian_->fill(std::span<double>(lanes).subspan(j * n_, n_), rng);
            }
            for (std::size_t t = 0; t < n_; ++t) {
              for (std::size_t j = 0; j < o.d; ++j) {
                column[j] = lanes[j * n_ + t];
              }
              const auto nth = column.begin() + static_cast<std::ptrdiff_t>(o.r - 1);
              std::nth_element(column.begin(), nth, column.end(), std::greater<>());
              out[t] = *nth;
            }
          },
          [&](const GenericIidProcess& g) {
            CounterRng rng(key.with(key.tag, 0));
            for (auto& v : out) {
              v = draw(g.marginal, rng);
            }
          },
      },
      process_);
}

Path ProcessSampler::sample(const StreamKey& key) const {
  Path path{std::vector<double>(n_), process_, key.replication};
  fill(path.values, key);
  return path;
}

double draw(const Marginal& marginal, CounterRng& rng) {
  const double u = rng.uniform();
  return std::visit(overloaded{
                        [u](const ExponentialMarginal&) { return -std::log1p(-u); },
                        [u](const UniformMarginal&) { return u; },
                        [u](const UnitFrechetMarginal&) { return -1.0 / std::log(u); },
                        [u](const ParetoMarginal& p) { return std::pow(1.0 - u, -1.0 / p.alpha); },
                        [u](const DiscreteMarginal& d) {
                          double cumulative = 0.0;
                          for (std::size_t i = 0; i + 1 < d.values.size(); ++i) {
                            cumulative += d.probs[i];
                            if (u < cumulative) {
                              return d.values[i];
                            }
                          }
                          return d.values.back();
                        },
                    },
                    marginal);
}

Path sample_gaussian_path(const CovarianceSpec& cov, std::size_t n, const StreamKey& key) {
  return ProcessSampler(GaussianProcess{cov}, n).sample(key);
}

Path sample_chi_path(std::size_t d, const CovarianceSpec& cov, std::size_t n, const StreamKey& key) {
  return ProcessSampler(ChiProcess{d, cov}, n).sample(key);
}

Path sample_order_stat_path(std::size_t d, std::size_t r, const CovarianceSpec& cov, std::size_t n,
                            const StreamKey& key) {
  return ProcessSampler(OrderStatProcess{d, r, cov}, n).sample(key);
}

Path sample_generic_iid_path(const Marginal& marginal, std::size_t n, const StreamKey& key) {
  return ProcessSampler(GenericIidProcess{marginal}, n).sample(key);
}

} // namespace maxrep
