#pragma once

namespace qdiv::tol {

// Max-abs entrywise deviation from Hermiticity accepted by HermitianOperator.
inline constexpr double hermitian = 1e-12;
// Most negative eigenvalue accepted for a positive operator.
inline constexpr double psd = 1e-10;
// |Tr - 1| for the normalized flag; also the slack on Tr <= 1.
inline constexpr double normalized = 1e-10;
// Eigenvalues with |lambda| below this are zero for spectral projections.
inline constexpr double projector_zero = 1e-12;
// Support rank cutoff, relative to the largest eigenvalue.
inline constexpr double support_relative = 1e-10;
// supp rho in supp sigma iff ||(1 - pi_sigma) rho (1 - pi_sigma)||_inf <= this.
inline constexpr double support_inclusion = 1e-9;
// Trace preservation of Kraus families and completeness of instruments.
inline constexpr double completeness = 1e-10;
// Projector idempotency.
inline constexpr double idempotent = 1e-10;

// Looser limits applied when reading operator files.
inline constexpr double file_hermitian = 1e-9;
inline constexpr double file_psd = 1e-8;
inline constexpr double file_trace = 1e-8;

}  // namespace qdiv::tol
