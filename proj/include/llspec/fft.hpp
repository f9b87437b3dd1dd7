#pragma once

#include <complex>
#include <vector>

namespace llspec::fft {

using cvec = std::vector<std::complex<double>>;

// In-place DFT, a_j <- sum_n a_n exp(-2*pi*i*j*n/N). Unnormalized.
void forward(cvec& a);
// In-place inverse DFT without the 1/N factor, a_n <- sum_j a_j exp(+2*pi*i*j*n/N).
void backward(cvec& a);

}  // namespace llspec::fft
