// Thin wrapper over FFTW for in-place complex transforms.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace unilab::fft {

using cplx = std::complex<double>;

// X[k] = sum_n x[n] exp(-2 pi i k n / N), in place.
void forward(std::span<cplx> data);

// x[n] = sum_k X[k] exp(+2 pi i k n / N), in place, unnormalised.
void backward(std::span<cplx> data);

std::size_t next_pow2(std::size_t n);

}  // namespace unilab::fft
