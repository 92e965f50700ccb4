// Thin FFTW front end with a process-wide plan cache.
//
// Plans are created once per transform shape (guarded by a mutex) and
// executed through fftw_execute_dft, which is safe to call concurrently
// on distinct buffers. All transforms are in-place complex-to-complex.
#pragma once

#include <complex>

namespace cgoscat::fftw {

using Complex = std::complex<double>;

// Unnormalized 3D DFT of an n*n*n cube, row-major, in place.
void forward3d(int n, Complex* data);
void backward3d(int n, Complex* data);

// Unnormalized 2D DFT of an n0*n1 array, row-major, in place.
void forward2d(int n0, int n1, Complex* data);
void backward2d(int n0, int n1, Complex* data);

// Unnormalized 1D DFT of length n, in place.
void forward1d(int n, Complex* data);
void backward1d(int n, Complex* data);

}  // namespace cgoscat::fftw
