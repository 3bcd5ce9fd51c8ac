#include "stokes/spectral.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>

#include <fftw3.h>

#include "stokes/errors.hpp"

namespace stokes {

SpectralGrid::SpectralGrid(int n_modes, int n_collocation, int dno_order)
    : n_modes_(n_modes), n_collocation_(n_collocation > 0 ? n_collocation : 4 * n_modes), dno_order_(dno_order) {
  if (n_modes_ < 1) throw MisuseError("SpectralGrid: n_modes must be positive");
  if (n_collocation_ < 3 * n_modes_) throw MisuseError("SpectralGrid: n_collocation must be at least 3 n_modes");
  if (dno_order_ < 0) throw MisuseError("SpectralGrid: dno_order must be non-negative");
}

namespace {

// FFTW's planner is not re-entrant; plans are created and destroyed under this
// lock and then executed only by the thread that owns them.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class Real>
struct FftwApi;

template <>
struct FftwApi<double> {
  using plan = fftw_plan;
  using complex = fftw_complex;
  static void* malloc(std::size_t n) { return fftw_malloc(n); }
  static void free(void* p) { fftw_free(p); }
  static plan r2c(int n, double* in, complex* out) { return fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE); }
  static plan c2r(int n, complex* in, double* out) { return fftw_plan_dft_c2r_1d(n, in, out, FFTW_ESTIMATE); }
  static void execute(plan p) { fftw_execute(p); }
  static void destroy(plan p) { fftw_destroy_plan(p); }
};

template <>
struct FftwApi<long double> {
  using plan = fftwl_plan;
  using complex = fftwl_complex;
  static void* malloc(std::size_t n) { return fftwl_malloc(n); }
  static void free(void* p) { fftwl_free(p); }
  static plan r2c(int n, long double* in, complex* out) { return fftwl_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE); }
  static plan c2r(int n, complex* in, long double* out) { return fftwl_plan_dft_c2r_1d(n, in, out, FFTW_ESTIMATE); }
  static void execute(plan p) { fftwl_execute(p); }
  static void destroy(plan p) { fftwl_destroy_plan(p); }
};

template <class Real>
class RealFft {
  using Api = FftwApi<Real>;

public:
  explicit RealFft(int n) : n_(n) {
    real_ = static_cast<Real*>(Api::malloc(sizeof(Real) * n));
    cplx_ = static_cast<typename Api::complex*>(Api::malloc(sizeof(typename Api::complex) * (n / 2 + 1)));
    std::lock_guard lock(planner_mutex());
    forward_ = Api::r2c(n, real_, cplx_);
    backward_ = Api::c2r(n, cplx_, real_);
  }
  ~RealFft() {
    {
      std::lock_guard lock(planner_mutex());
      Api::destroy(forward_);
      Api::destroy(backward_);
    }
    Api::free(real_);
    Api::free(cplx_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  SamplesT<Real> synthesize(const SpectrumT<Real>& s) {
    const int half = n_ / 2 + 1;
    for (int k = 0; k < half; ++k) {
      const auto c = k < s.size() ? s[k] : std::complex<Real>(0);
      cplx_[k][0] = c.real();
      cplx_[k][1] = k == 0 ? Real(0) : c.imag();
    }
    Api::execute(backward_);
    return Eigen::Map<SamplesT<Real>>(real_, n_);
  }

  SpectrumT<Real> analyze(const SamplesT<Real>& f, int n_modes) {
    std::copy(f.data(), f.data() + n_, real_);
    Api::execute(forward_);
    SpectrumT<Real> s(n_modes + 1);
    const Real scale = Real(1) / Real(n_);
    for (int k = 0; k <= n_modes; ++k) s[k] = std::complex<Real>(cplx_[k][0], cplx_[k][1]) * scale;
    s[0] = s[0].real();
    return s;
  }

private:
  int n_;
  Real* real_ = nullptr;
  typename Api::complex* cplx_ = nullptr;
  typename Api::plan forward_{};
  typename Api::plan backward_{};
};

template <class Real>
RealFft<Real>& fft_for(int n) {
  thread_local std::unordered_map<int, std::unique_ptr<RealFft<Real>>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft<Real>>(n);
  return *slot;
}

}  // namespace

template <class Real>
SamplesT<Real> to_physical(const SpectrumT<Real>& s, int n) {
  if (2 * (s.size() - 1) >= n) throw MisuseError("to_physical: too few collocation points for the band");
  return fft_for<Real>(n).synthesize(s);
}

template <class Real>
SpectrumT<Real> to_spectral(const SamplesT<Real>& f, int n_modes) {
  const int n = static_cast<int>(f.size());
  if (2 * n_modes >= n) throw MisuseError("to_spectral: too few samples for the requested band");
  return fft_for<Real>(n).analyze(f, n_modes);
}

template SamplesT<double> to_physical(const SpectrumT<double>&, int);
template SamplesT<long double> to_physical(const SpectrumT<long double>&, int);
template SpectrumT<double> to_spectral(const SamplesT<double>&, int);
template SpectrumT<long double> to_spectral(const SamplesT<long double>&, int);

Spectrum multiply(const Spectrum& a, const Spectrum& b, int n) {
  const Samples pa = to_physical(a, n), pb = to_physical(b, n);
  return to_spectral<double>(pa.cwiseProduct(pb), static_cast<int>(a.size()) - 1);
}

double flat_dno_symbol(const Depth& depth, double k) {
  if (depth.is_infinite()) return std::abs(k);
  return k * std::tanh(depth.value() * k);
}

double mean_product(const Spectrum& f, const Spectrum& g) {
  const Eigen::Index n = std::min(f.size(), g.size());
  double sum = f[0].real() * g[0].real();
  for (Eigen::Index k = 1; k < n; ++k) sum += 2 * (f[k] * std::conj(g[k])).real();
  return sum;
}

double l2_norm(const Spectrum& f) { return std::sqrt(std::max(0.0, mean_product(f, f))); }

}  // namespace stokes
