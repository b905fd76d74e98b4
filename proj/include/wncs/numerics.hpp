#pragma once

// Dense linear-algebra routines needed by the stability analysis:
// spectral norms, eigenvalues, and L2 (H-infinity) gains of LTI systems.

#include "wncs/matrix.hpp"

#include <complex>
#include <vector>

namespace wncs {

// Largest singular value via power iteration on M^T M, relative tolerance
// 1e-10, randomized restart if the iterate degenerates.
double spectral_norm(const Matrix& m);

// All eigenvalues of a real square matrix: Householder reduction to upper
// Hessenberg form, then Francis double-shift QR. Throws NumericsError if the
// iteration fails to deflate within the cap.
std::vector<Complex> eigenvalues(const Matrix& m);

// max Re(lambda) over the spectrum.
double spectral_abscissa(const Matrix& m);
bool is_hurwitz(const Matrix& m);

// State-space system x' = Ax + Bw, y = Cx + Dw.
struct StateSpace {
    Matrix a, b, c, d;
};

// sigma_max of the transfer response C (s I - A)^{-1} B + D at s = i*omega.
double sigma_max_response(const StateSpace& sys, double omega);

// L2-induced gain (H-infinity norm) of a Hurwitz system via bisection on the
// bounded-real Hamiltonian test; result is the certified upper endpoint of
// the final bracket. rel_tol is on the bracket width.
double l2_gain(const StateSpace& sys, double rel_tol = 1e-6);

// Cross-check: dense log-spaced frequency sweep plus local refinement.
// Lower-bounds the true gain; used to validate the bisection bracket.
double l2_gain_sweep(const StateSpace& sys, int points = 400);

} // namespace wncs
