#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ptbec {

/// In-place complex DFT of fixed length over an internally owned buffer.
/// Transforms are unnormalized; backward(forward(x)) == n x.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();

  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  std::span<std::complex<double>> buffer() noexcept;
  std::size_t size() const noexcept { return n_; }

  void forward();
  void backward();

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  std::complex<double>* data_ = nullptr;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace ptbec
